#include <cmath>

#include <Eigen/LU>

#include "gew/error.hpp"
#include "gew/green.hpp"
#include "gew/oracle.hpp"
#include "gew/special.hpp"

namespace gew {

double MoMConfig::resolve_cell(double k0) const
{
    const double lambda = 2.0 * pi / k0;
    const double h = cell > 0.0 ? cell : lambda / 20.0;
    if (h > lambda / 10.0 * (1 + 1e-12)) throw ConfigError("oracle cell exceeds lambda/10");
    return h;
}

namespace {

// Contrast averaged over the cell, so boundary cells carry their covered
// fraction instead of a staircase 0 or 1.
double cell_contrast(const Scene& s, double xc, double zc, double h, int samples)
{
    if (samples <= 1) return contrast_at(xc, zc, s);
    double acc = 0.0;
    for (int a = 0; a < samples; ++a)
        for (int b = 0; b < samples; ++b)
            acc += contrast_at(xc + h * ((a + 0.5) / samples - 0.5), zc + h * ((b + 0.5) / samples - 0.5), s);
    return acc / (samples * samples);
}

}  // namespace

cplx mom_self_term(double k0, double a)
{
    const double ka = k0 * a;
    return -jj * (0.5 * pi) * ka * hankel2(1, ka) - 1.0;
}

FieldGrid MoMSolution::centre_grid(const Scene* scene) const
{
    FieldGrid g = FieldGrid::make(x0, x0 + cell * (nx - 1), nx, z0, z0 + cell * (nz - 1), nz);
    for (std::size_t u = 0; u < active.size(); ++u)
        g.values[static_cast<std::size_t>(active[u])] =
            scene ? contrast_at(cx(u), cz(u), *scene) * scattered[u] : scattered[u];
    return g;
}

MoMSolution mom_solve(const Scene& s, const MoMConfig& cfg)
{
    s.validate();
    MoMSolution sol;
    sol.k0 = s.k0;
    const double h = cfg.resolve_cell(s.k0);
    sol.cell = h;
    // cells symmetric about the scene centre
    sol.nx = 2 * static_cast<int>(std::ceil(s.half_width() / h)) + 1;
    sol.nz = 2 * static_cast<int>(std::ceil(s.half_height() / h)) + 1;
    sol.x0 = s.cx - h * (sol.nx - 1) / 2.0;
    sol.z0 = s.cz - h * (sol.nz - 1) / 2.0;
    for (int j = 0; j < sol.nz; ++j)
        for (int i = 0; i < sol.nx; ++i) {
            const double c = cell_contrast(s, sol.x0 + h * i, sol.z0 + h * j, h, cfg.coverage_samples);
            if (c != 0.0) {
                sol.active.push_back(j * sol.nx + i);
                sol.chi.push_back(c);
            }
        }
    const std::size_t n = sol.active.size();
    if (n > cfg.max_unknowns)
        throw SizeCap("moment method needs " + std::to_string(n) + " cells, cap is " +
                      std::to_string(cfg.max_unknowns));
    const double area = h * h, k2 = s.k0 * s.k0;
    const cplx self = mom_self_term(s.k0, h / std::sqrt(pi));
    const Eigen::Index N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd A(N, N);
    Eigen::VectorXcd b(N);
    for (std::size_t r = 0; r < n; ++r) {
        const double xr = sol.cx(r), zr = sol.cz(r);
        b(static_cast<Eigen::Index>(r)) = incident_field(xr, zr, s);
        for (std::size_t c = 0; c < n; ++c) {
            cplx v;
            if (r == c)
                v = 1.0 - sol.chi[c] * self;
            else
                v = -sol.chi[c] * k2 * area * green_exact(std::hypot(xr - sol.cx(c), zr - sol.cz(c)), s.k0);
            A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    if (!(lu.rcond() > 1e-14)) throw SingularMatrix("moment-method matrix is singular");
    const Eigen::VectorXcd E = lu.solve(b);
    sol.total.assign(E.data(), E.data() + N);
    sol.scattered.resize(n);
    for (std::size_t u = 0; u < n; ++u) sol.scattered[u] = sol.total[u] - b(static_cast<Eigen::Index>(u));
    return sol;
}

cvec mom_scattered_at(const MoMSolution& sol, const std::vector<std::pair<double, double>>& points)
{
    const double h = sol.cell, k2 = sol.k0 * sol.k0;
    // near cells are split into sub x sub pieces
    constexpr int sub = 6;
    const double hs = h / sub;
    const cplx sub_self = mom_self_term(sol.k0, hs / std::sqrt(pi));
    cvec out(points.size(), 0.0);
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto [x, z] = points[p];
        cplx acc = 0.0;
        for (std::size_t u = 0; u < sol.active.size(); ++u) {
            const cplx src = sol.chi[u] * sol.total[u];
            const double dx = x - sol.cx(u), dz = z - sol.cz(u);
            const double R = std::hypot(dx, dz);
            if (R > 2.0 * h) {
                acc += src * k2 * h * h * green_exact(R, sol.k0);
                continue;
            }
            for (int a = 0; a < sub; ++a)
                for (int b = 0; b < sub; ++b) {
                    const double ox = (a + 0.5) * hs - 0.5 * h, oz = (b + 0.5) * hs - 0.5 * h;
                    const double r = std::hypot(dx - ox, dz - oz);
                    acc += src * (r < 1e-3 * hs ? sub_self : k2 * hs * hs * green_exact(r, sol.k0));
                }
        }
        out[p] = acc;
    }
    return out;
}

cplx cylinder_series_scattered(const Scene& s, double x, double z, int n_max)
{
    const auto* c = std::get_if<Circle>(&s.shape);
    if (!c) throw ConfigError("cylinder series needs a circular scene");
    const double a = c->radius, k0 = s.k0, k1 = k0 * std::sqrt(s.eps_r);
    const double r = std::hypot(x - s.cx, z - s.cz), phi = std::atan2(z - s.cz, x - s.cx);
    if (n_max <= 0) n_max = static_cast<int>(std::ceil(k1 * a + 4.0 * std::cbrt(k1 * a) + 10.0));
    // incident E0 e^{j k0 r cos(phi - theta)} = E0 sum j^n J_n(k0 r) e^{j n (phi - theta)}, shifted to the centre
    const cplx shift = incident_field(s.cx, s.cz, s);
    cplx total = 0.0;
    for (int n = -n_max; n <= n_max; ++n) {
        const int an = std::abs(n);
        const double sign = (n < 0 && an % 2 == 1) ? -1.0 : 1.0;  // Z_{-n} = (-1)^n Z_n
        const cplx jn = std::pow(jj, n);
        const double J0a = bessel_j(an, k0 * a), J0pa = bessel_j_prime(an, k0 * a);
        const double J1a = bessel_j(an, k1 * a), J1pa = bessel_j_prime(an, k1 * a);
        const cplx Ha = hankel2(an, k0 * a), Hpa = hankel2_prime(an, k0 * a);
        const cplx an_coef = jn * (k1 * J1pa * J0a - k0 * J1a * J0pa) / (k0 * J1a * Hpa - k1 * J1pa * Ha);
        const cplx ang = std::polar(1.0, n * (phi - s.theta));
        if (r >= a) {
            total += an_coef * sign * hankel2(an, k0 * r) * ang;
        } else {
            // scattered = total inside minus incident
            const cplx bn = (jn * J0a + an_coef * Ha) / J1a;
            total += sign * (bn * bessel_j(an, k1 * r) - jn * bessel_j(an, k0 * r)) * ang;
        }
    }
    return shift * total;
}

FieldComparison compare_fields(const FieldGrid& a, const FieldGrid& b, Mask mask, const Scene& s)
{
    if (!a.same_points(b) || a.values.size() != b.values.size()) throw GridMismatch("field grids differ");
    FieldComparison out;
    out.abs_error = a;
    double num = 0.0, den = 0.0;
    for (int iz = 0; iz < a.nz; ++iz)
        for (int ix = 0; ix < a.nx; ++ix) {
            const double e = std::abs(a.at(ix, iz) - b.at(ix, iz));
            out.abs_error.at(ix, iz) = e;
            const bool in = contrast_at(a.x(ix), a.z(iz), s) != 0.0;
            if ((mask == Mask::inside && !in) || (mask == Mask::outside && in)) continue;
            num += e * e;
            den += std::norm(b.at(ix, iz));
            out.max_abs = std::max(out.max_abs, e);
            ++out.points;
        }
    out.rel_l2 = den > 0.0 ? std::sqrt(num / den) : (num > 0.0 ? INFINITY : 0.0);
    return out;
}

}  // namespace gew
