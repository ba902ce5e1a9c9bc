#include <cmath>

#include "gew/error.hpp"
#include "gew/special.hpp"

namespace gew {

namespace {

constexpr double two_over_sqrt_pi = 1.12837916709551257390;
constexpr double exp_limit = 700.0;

// Power series / Laplace continued fraction / Taylor-corrected continued
// fraction, after Poppe and Wijers.
cplx w_first_quadrant(double x, double y, double& qrho_out, cplx& e2)
{
    const double xs = x / 6.3, ys = y / 4.4;
    double qrho = xs * xs + ys * ys;
    qrho_out = qrho;
    const double xquad = x * x - y * y;
    const double yquad = 2.0 * x * y;
    if (qrho < 0.085264) {
        qrho = (1.0 - 0.85 * ys) * std::sqrt(qrho);
        const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
        int j = 2 * n + 1;
        double xsum = 1.0 / j, ysum = 0.0;
        for (int i = n; i >= 1; --i) {
            j -= 2;
            const double xaux = (xsum * xquad - ysum * yquad) / i;
            ysum = (xsum * yquad + ysum * xquad) / i;
            xsum = xaux + 1.0 / j;
        }
        const double u1 = -two_over_sqrt_pi * (xsum * y + ysum * x) + 1.0;
        const double v1 = two_over_sqrt_pi * (xsum * x - ysum * y);
        const double daux = std::exp(-xquad);
        const double u2 = daux * std::cos(yquad);
        const double v2 = -daux * std::sin(yquad);
        e2 = {u2, v2};
        return {u1 * u2 - v1 * v2, u1 * v2 + v1 * u2};
    }
    double h = 0.0, h2 = 0.0, lambda = 0.0;
    int kapn = 0, nu = 0;
    if (qrho > 1.0) {
        qrho = std::sqrt(qrho);
        nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
    } else {
        qrho = (1.0 - ys) * std::sqrt(1.0 - qrho);
        h = 1.88 * qrho;
        h2 = 2.0 * h;
        kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
        nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
    }
    const bool taylor = h > 0.0;
    if (taylor) lambda = std::pow(h2, kapn);
    double rx = 0.0, ry = 0.0, sx = 0.0, sy = 0.0;
    for (int n = nu; n >= 0; --n) {
        const double np1 = n + 1.0;
        const double tx = y + h + np1 * rx;
        const double ty = x - np1 * ry;
        const double c = 0.5 / (tx * tx + ty * ty);
        rx = c * tx;
        ry = c * ty;
        if (taylor && n <= kapn) {
            const double t = lambda + sx;
            sx = rx * t - ry * sy;
            sy = ry * t + rx * sy;
            lambda /= h2;
        }
    }
    double u = two_over_sqrt_pi * (taylor ? sx : rx);
    const double v = two_over_sqrt_pi * (taylor ? sy : ry);
    if (y == 0.0) u = std::exp(-x * x);
    return {u, v};
}

cplx erf_series(cplx z)
{
    const cplx z2 = z * z;
    cplx term = z, sum = z;
    for (int n = 1; n < 80; ++n) {
        term *= -z2 / static_cast<double>(n);
        const cplx add = term / static_cast<double>(2 * n + 1);
        sum += add;
        if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    }
    return two_over_sqrt_pi * sum;
}

// exp(-z^2) with the overflow guard.
cplx guarded_gauss(cplx z)
{
    const cplx e = -z * z;
    if (e.real() > exp_limit) throw OverflowGuard("exp(-z^2) overflows for z = (" + std::to_string(z.real()) +
                                                  ", " + std::to_string(z.imag()) + ")");
    return std::exp(e);
}

}  // namespace

cplx faddeeva_w(cplx z)
{
    const double xi = z.real(), yi = z.imag();
    const double x = std::abs(xi), y = std::abs(yi);
    double qrho = 0.0;
    cplx e2;
    cplx w = w_first_quadrant(x, y, qrho, e2);
    double u = w.real(), v = w.imag();
    if (yi < 0.0) {
        // w(z) = 2 exp(-z^2) - w(-z)
        const double xquad = -(x * x - y * y);
        if (xquad > exp_limit) throw OverflowGuard("w(z) overflows in the lower half plane");
        double u2, v2;
        if (qrho < 0.085264) {
            u2 = 2.0 * e2.real();
            v2 = 2.0 * e2.imag();
        } else {
            const double w1 = 2.0 * std::exp(xquad);
            u2 = w1 * std::cos(2.0 * x * y);
            v2 = -w1 * std::sin(2.0 * x * y);
        }
        u = u2 - u;
        v = v2 - v;
        if (xi > 0.0) v = -v;
    } else if (xi < 0.0) {
        v = -v;
    }
    return {u, v};
}

cplx erfcx_complex(cplx z) { return faddeeva_w(jj * z); }

cplx erf_complex(cplx z)
{
    if (std::abs(z) < 2.0) return erf_series(z);
    if (z.real() < 0.0) return -erf_complex(-z);
    return 1.0 - guarded_gauss(z) * faddeeva_w(jj * z);
}

cplx erfc_complex(cplx z)
{
    if (z.real() < 0.0) return 2.0 - erfc_complex(-z);
    if (std::abs(z) < 0.5) return 1.0 - erf_series(z);
    return guarded_gauss(z) * faddeeva_w(jj * z);
}

cplx erf_diff(cplx a, cplx b)
{
    if (a.real() < 0.0 && b.real() < 0.0) return erf_diff(-b, -a);
    if (a.real() >= 0.0 && b.real() >= 0.0 && std::min(std::abs(a), std::abs(b)) > 1.0) {
        // erfc(a) - erfc(b); factors are evaluated in scaled form so that
        // the exponentials can underflow quietly.
        auto part = [](cplx t) {
            const cplx e = -t * t;
            if (e.real() < -745.0) return cplx{0.0};
            if (e.real() > exp_limit) throw OverflowGuard("erf difference overflows");
            return std::exp(e) * faddeeva_w(jj * t);
        };
        return part(a) - part(b);
    }
    return erf_complex(b) - erf_complex(a);
}

cplx expm1_complex(cplx z)
{
    const double a = z.real(), b = z.imag();
    const double s = std::sin(0.5 * b);
    return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

double bessel_j(int n, double x)
{
    if (n < 0) return (n % 2 ? -1.0 : 1.0) * bessel_j(-n, x);
    return std::cyl_bessel_j(static_cast<double>(n), x);
}

double bessel_y(int n, double x)
{
    if (x <= 0.0) throw DomainError("bessel_y requires x > 0");
    if (n < 0) return (n % 2 ? -1.0 : 1.0) * bessel_y(-n, x);
    return std::cyl_neumann(static_cast<double>(n), x);
}

cplx hankel2(int n, double x) { return {bessel_j(n, x), -bessel_y(n, x)}; }

double bessel_j_prime(int n, double x) { return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x)); }

cplx hankel2_prime(int n, double x) { return 0.5 * (hankel2(n - 1, x) - hankel2(n + 1, x)); }

}  // namespace gew
