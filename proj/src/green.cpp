#include <cmath>
#include <string>

#include "gew/error.hpp"
#include "gew/green.hpp"
#include "gew/quadrature.hpp"
#include "gew/special.hpp"

namespace gew {

void EwaldConfig::validate() const
{
    if (!(split > 0.0)) throw ConfigError("ewald.split must be positive");
    if (!(k0 > 0.0)) throw ConfigError("k0 must be positive");
    if (!(quad_tol > 0.0 && quad_tol < 1.0)) throw ConfigError("ewald.quad_tol must lie in (0,1)");
    if (!(trunc_tol > 0.0 && trunc_tol < 1.0)) throw ConfigError("ewald.trunc_tol must lie in (0,1)");
}

cplx green_exact(double R, double k0)
{
    if (!(R > 0.0)) throw DomainError("green_exact: R must be positive, got " + std::to_string(R));
    const double x = k0 * R;
    return cplx(-bessel_y(0, x), -bessel_j(0, x)) / 4.0;
}

cplx xi_path(double w, double split)
{
    if (w <= 0.5 * split) return cplx(w, w);
    if (w <= split) return cplx(w, split - w);
    return w;
}

cplx xi_path_derivative(double w, double split)
{
    if (w < 0.5 * split) return cplx(1.0, 1.0);
    if (w < split) return cplx(1.0, -1.0);
    return 1.0;
}

cplx zeta_path(double w, double split)
{
    if (w <= 2.0 / split) return w / cplx(1.0, split * w - 1.0);
    return cplx(0.5 * w, -0.5 * w);
}

cplx zeta_path_derivative(double w, double split)
{
    if (w < 2.0 / split) {
        const cplx d = cplx(1.0, split * w - 1.0);
        return cplx(1.0, -1.0) / (d * d);
    }
    return cplx(0.5, -0.5);
}

double optimal_split(double k0, double delta)
{
    if (!(k0 > 0.0) || !(delta > 0.0)) throw DomainError("optimal_split: k0 and delta must be positive");
    return std::pow(2.0, -0.25) * std::sqrt(k0 / delta);
}

double spatial_cutoff(double R, const EwaldConfig& cfg)
{
    const double E = cfg.split;
    if (R <= 0.0) return 100.0 * E;
    const double t = std::log(1.0 / cfg.trunc_tol) + cfg.k0 * cfg.k0 / (4.0 * E * E);
    return std::max(std::sqrt(t) / R, 2.0 * E);
}

cplx green_spatial(double dx, double dz, const EwaldConfig& cfg)
{
    cfg.validate();
    const double R2 = dx * dx + dz * dz;
    const double k2 = cfg.k0 * cfg.k0;
    // s = ln(xi); the 1/xi of the integrand cancels against the Jacobian.
    auto f = [&](double s) -> cplx {
        const double xi2 = std::exp(2.0 * s);
        return std::exp(-R2 * xi2 + k2 / (4.0 * xi2));
    };
    const double a = std::log(cfg.split), b = std::log(spatial_cutoff(std::sqrt(R2), cfg));
    std::vector<double> bp{a};
    for (int i = 1; i < 8; ++i) bp.push_back(a + (b - a) * i / 8.0);
    bp.push_back(b);
    const quad::Result r = quad::integrate(f, bp, {cfg.quad_tol, 1e-12 * cfg.quad_tol, 4000});
    return r.value / (2.0 * pi);
}

double spectral_closure_point(double R, double split)
{
    return std::max(200.0 / split, 2.0 * std::sqrt(2.0) * R);
}

ClosureRay spectral_closure_ray(double w_c, double k0)
{
    const cplx origin(0.5 * w_c, -0.5 * w_c);
    const cplx dir = std::polar(1.0, -3.0 * pi / 8.0);
    // Re(zeta^2) = -(c1 r tau + c2 tau^2) along the ray
    const double r = std::abs(origin);
    const double c1 = -2.0 * std::cos(5.0 * pi / 8.0), c2 = -std::cos(3.0 * pi / 4.0);
    const double target = 40.0 * 4.0 / (k0 * k0);
    const double tau = (-c1 * r + std::sqrt(c1 * c1 * r * r + 4.0 * c2 * target)) / (2.0 * c2);
    return {origin, dir, tau};
}

cplx green_spectral(double dx, double dz, const EwaldConfig& cfg)
{
    cfg.validate();
    const double R2 = dx * dx + dz * dz;
    if (!(R2 > 0.0)) throw DomainError("green_spectral: singular at R = 0");
    const double k2 = cfg.k0 * cfg.k0;
    const double E = cfg.split;
    // zeta = 1/xi maps (0, split] onto [1/split, inf) along zeta_path.
    auto integrand = [&](cplx z) { return std::exp(-R2 / (z * z) + k2 * z * z / 4.0) / z; };
    const quad::Options opt{cfg.quad_tol, 1e-12 * cfg.quad_tol, 20000};

    const double w_c = spectral_closure_point(std::sqrt(R2), E);
    auto on_path = [&](double w) { return integrand(zeta_path(w, E)) * zeta_path_derivative(w, E); };
    // the curved segment sweeps a phase of about R^2 E^2 / 2
    const int n_curved = 1 + static_cast<int>(R2 * E * E / (8.0 * pi));
    std::vector<double> bp;
    for (int i = 0; i <= n_curved; ++i) bp.push_back((1.0 + static_cast<double>(i) / n_curved) / E);
    // one breakpoint per ~4 oscillations of the combined phase
    // k0^2 w^2/8 - 2 R^2/w^2
    double w = 2.0 / E;
    while (w < w_c) {
        const double step = 8.0 * pi / (k2 * w / 4.0 + 4.0 * R2 / (w * w * w));
        w = std::min(w_c, w + std::min(step, 0.25 * w_c));
        bp.push_back(w);
    }
    cplx total = quad::integrate(on_path, bp, opt).value;

    const ClosureRay ray = spectral_closure_ray(w_c, cfg.k0);
    auto on_ray = [&](double tau) { return integrand(ray.at(tau)) * ray.direction; };
    std::vector<double> rbp;
    for (int i = 0; i <= 16; ++i) rbp.push_back(ray.tau_max * i / 16.0);
    total += quad::integrate(on_ray, rbp, opt).value;
    return total / (2.0 * pi);
}

}  // namespace gew
