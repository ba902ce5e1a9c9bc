#include <cmath>
#include <string>

#include "gew/error.hpp"
#include "gew/kernels.hpp"
#include "gew/special.hpp"

namespace gew {

void ZGrid::validate() const
{
    if (!(delta > 0.0)) throw ConfigError("zgrid.delta must be positive");
    if (n_k < 1) throw ConfigError("zgrid needs at least one triangle (n_k >= 1)");
    const double span = z_max - z_min;
    if (std::abs(span - n_k * delta) > 1e-9 * std::max(1.0, std::abs(span)))
        throw ConfigError("zgrid: z_max - z_min must equal n_k * delta");
}

ZGrid ZGrid::make(double z_min, double delta, int n_k)
{
    ZGrid g{z_min, z_min + n_k * delta, delta, n_k};
    g.validate();
    return g;
}

cplx f_spatial(int q, int p, cplx xi, const FrameParams& fp)
{
    const double X = fp.X;
    const cplx x2 = X * X * xi * xi;
    const cplx c = pi * x2 / (2.0 * x2 + pi);
    const cplx s = cplx(fp.alpha * q, fp.beta * p);
    const double bp = fp.beta * p;
    return std::exp(-c * s * s - 0.5 * pi * bp * bp) / std::sqrt(4.0 * x2 + 2.0 * pi);
}

cplx f_spectral(int q, int p, cplx zeta, const FrameParams& fp)
{
    const double K = fp.K();
    const cplx den = K * K * zeta * zeta + 8.0 * pi;
    const cplx s = cplx(fp.beta * p, fp.alpha * q);
    const double bp = fp.beta * p;
    return std::sqrt(pi / den) * std::exp(4.0 * pi * pi / den * s * s - 0.5 * pi * bp * bp);
}

namespace {

cplx g_core(int d, cplx xi, double delta)
{
    const cplx s = delta * xi;
    const cplx a = static_cast<double>(d) * s, b = static_cast<double>(d + 1) * s;
    const cplx erf_part = (d + 1 == 0) ? cplx(0.0) : static_cast<double>(d + 1) * (std::sqrt(pi) / (2.0 * xi)) * erf_diff(a, b);
    // exp(-b^2) - exp(-a^2), factored on the side whose expm1 cannot overflow
    const cplx t = static_cast<double>(2 * d + 1) * s * s;  // b^2 - a^2
    const cplx e = t.real() >= 0.0 ? std::exp(-a * a) * expm1_complex(-t) : -std::exp(-b * b) * expm1_complex(t);
    return erf_part + e / (2.0 * delta * xi * xi);
}

void check_index(int k, int l, const ZGrid& zg)
{
    if (k < 0 || k > zg.n_k || l < 0 || l > zg.n_k)
        throw IndexError("triangle index out of range: k=" + std::to_string(k) + " l=" + std::to_string(l) +
                         " n_k=" + std::to_string(zg.n_k));
}

}  // namespace

cplx g_z_spatial(int d, cplx xi, const ZGrid& zg) { return g_core(d, xi, zg.delta); }

cplx g_z_spectral(int d, cplx zeta, const ZGrid& zg) { return g_core(d, 1.0 / zeta, zg.delta); }

cplx h_z_spatial(int k, int l, cplx xi, const ZGrid& zg)
{
    check_index(k, l, zg);
    cplx h = 0.0;
    if (k < zg.n_k) h += g_z_spatial(k - l, xi, zg);
    if (k > 0) h += g_z_spatial(l - k, xi, zg);
    return h;
}

cplx h_z_spectral(int k, int l, cplx zeta, const ZGrid& zg)
{
    check_index(k, l, zg);
    cplx h = 0.0;
    if (k < zg.n_k) h += g_z_spectral(k - l, zeta, zg);
    if (k > 0) h += g_z_spectral(l - k, zeta, zg);
    return h;
}

}  // namespace gew
