#include <cmath>
#include <string>

#include "gew/error.hpp"
#include "gew/frame.hpp"
#include "gew/simd/kernels.hpp"

namespace gew {

namespace {
const double window_norm = std::pow(2.0, 0.25);
}

void FrameParams::validate() const
{
    if (!(X > 0.0)) throw ConfigError("frame.X must be positive");
    if (M < 0 || N < 0) throw ConfigError("frame.M and frame.N must be non-negative");
    if (!(alpha > 0.0) || !(beta > 0.0)) throw ConfigError("frame.alpha and frame.beta must be positive");
    if (!(alpha * beta < 1.0))
        throw ConfigError("frame constraint violated: alpha*beta = " + std::to_string(alpha * beta) +
                          " must be < 1 (oversampled Gabor frame)");
}

std::optional<std::pair<int, int>> rational_oversampling(const FrameParams& p, int max_den)
{
    const double ab = p.alpha * p.beta;
    for (int den = 1; den <= max_den; ++den) {
        const double num = std::round(ab * den);
        if (num >= 1.0 && std::abs(num / den - ab) <= 1e-12 * std::max(1.0, ab))
            return std::make_pair(static_cast<int>(num), den);
    }
    return std::nullopt;
}

double window_value(double x, const FrameParams& p)
{
    const double t = x / p.X;
    return window_norm * std::exp(-pi * t * t);
}

cplx frame_element(double x, int m, int n, const FrameParams& p)
{
    const double g = window_value(x - p.alpha * m * p.X, p);
    const double ph = p.beta * p.K() * n * x;
    return {g * std::cos(ph), g * std::sin(ph)};
}

cplx spectral_frame_element(double kx, int n, int m, const FrameParams& p)
{
    const double K = p.K();
    const double t = (kx - n * p.beta * K) / K;
    const double g = window_norm * p.X * std::exp(-pi * t * t);
    const double ph = -m * p.alpha * p.X * kx;
    return {g * std::cos(ph), g * std::sin(ph)};
}

XGrid XGrid::uniform(double a, double b, double h)
{
    const int n = static_cast<int>(std::floor((b - a) / h + 1e-9)) + 1;
    return {a, h, n};
}

XGrid XGrid::standard(const FrameParams& p)
{
    const double h = p.X / 16.0;
    const double half = (p.M + 2) * p.alpha * p.X + 4.0 * p.X;
    const int k = static_cast<int>(std::ceil(half / h));
    return {-k * h, h, 2 * k + 1};
}

cplx SampledWindow::at(double x) const
{
    const double t = (x - x0) / h;
    if (t < 0.0 || t > static_cast<double>(values.size() - 1)) return 0.0;
    const auto i = static_cast<std::size_t>(std::floor(t));
    if (i + 1 >= values.size()) return values.back();
    const double f = t - static_cast<double>(i);
    return (1.0 - f) * values[i] + f * values[i + 1];
}

cplx DualWindow::value(double x, const FrameParams& p) const
{
    cplx s = 0.0;
    for (int u = -Nu; u <= Nu; ++u)
        for (int v = -Nv; v <= Nv; ++v) s += coeff(u, v) * frame_element(x, u, v, p);
    return s;
}

DualWindow spectral_dual_coeffs(const DualWindow& dw, const FrameParams& p)
{
    // FT of sum_uv a_uv g_uv = sum_uv a_uv e^{2 pi j ab uv} ghat_vu, stored
    // with the spectral index first.
    DualWindow out;
    out.Nu = dw.Nv;
    out.Nv = dw.Nu;
    out.a.resize(dw.a.size());
    out.residual = dw.residual;
    out.condition = dw.condition;
    out.criterion = dw.criterion;
    const double ab = p.alpha * p.beta;
    for (int u = -dw.Nu; u <= dw.Nu; ++u)
        for (int v = -dw.Nv; v <= dw.Nv; ++v) {
            const double ph = 2.0 * pi * ab * u * v;
            out.a[static_cast<std::size_t>((v + out.Nu) * out.num_v() + (u + out.Nv))] =
                dw.coeff(u, v) * cplx(std::cos(ph), std::sin(ph));
        }
    return out;
}

cvec spectral_to_spatial(const cvec& spectral, const FrameParams& p)
{
    if (static_cast<int>(spectral.size()) != p.size()) throw DimensionMismatch("spectral coefficient size");
    cvec out(spectral.size());
    const double ab = p.alpha * p.beta;
    for (int m = -p.M; m <= p.M; ++m)
        for (int n = -p.N; n <= p.N; ++n) {
            const double ph = -2.0 * pi * ab * m * n;
            out[p.index(m, n)] = spectral[p.index(m, n)] * cplx(std::cos(ph), std::sin(ph));
        }
    return out;
}

GaborBasis::GaborBasis(const FrameParams& p, const XGrid& grid, const DualWindow& dw) : p_(p), grid_(grid)
{
    if (grid.h > p.X / 8.0) throw GridTooCoarse("analysis grid spacing exceeds X/8");
    build_synthesis();
    const int nx = grid.n;
    analysis_.resize(nx, p.size());
    // eta_mn(x) = sum_uv a_uv g(x - a(m+u)X) e^{j bK v (x - a m X)} e^{j bK n x}
    const double bK = p.beta * p.K();
    for (int m = -p.M; m <= p.M; ++m) {
        cvec eta(static_cast<std::size_t>(nx), 0.0);
        for (int i = 0; i < nx; ++i) {
            const double x = grid.x(i);
            cplx s = 0.0;
            for (int u = -dw.Nu; u <= dw.Nu; ++u) {
                const double g = window_value(x - p.alpha * (m + u) * p.X, p);
                if (g == 0.0) continue;
                for (int v = -dw.Nv; v <= dw.Nv; ++v) {
                    const double ph = bK * v * (x - p.alpha * m * p.X);
                    s += dw.coeff(u, v) * g * cplx(std::cos(ph), std::sin(ph));
                }
            }
            eta[static_cast<std::size_t>(i)] = s;
        }
        for (int n = -p.N; n <= p.N; ++n) {
            auto col = analysis_.col(p.index(m, n));
            for (int i = 0; i < nx; ++i) {
                const double ph = bK * n * grid.x(i);
                col(i) = std::conj(eta[static_cast<std::size_t>(i)] * cplx(std::cos(ph), std::sin(ph))) * grid.h;
            }
        }
    }
}

GaborBasis::GaborBasis(const FrameParams& p, const XGrid& grid, const SampledWindow& eta) : p_(p), grid_(grid)
{
    if (grid.h > p.X / 8.0) throw GridTooCoarse("analysis grid spacing exceeds X/8");
    if (std::abs(grid.h - eta.h) > 1e-12 * eta.h) throw GridMismatch("sampled dual window spacing differs from grid");
    const double shift = (grid.x0 - eta.x0) / eta.h;
    if (std::abs(shift - std::round(shift)) > 1e-6) throw GridMismatch("sampled dual window not aligned with grid");
    build_synthesis();
    const int nx = grid.n;
    analysis_.resize(nx, p.size());
    const double aX = p.alpha * p.X;
    for (int m = -p.M; m <= p.M; ++m) {
        const double s = aX * m / eta.h;
        const bool aligned = std::abs(s - std::round(s)) < 1e-9;
        const long off = std::lround(shift) - (aligned ? std::lround(s) : 0);
        for (int n = -p.N; n <= p.N; ++n) {
            auto col = analysis_.col(p.index(m, n));
            for (int i = 0; i < nx; ++i) {
                const double x = grid.x(i);
                cplx e;
                if (aligned) {
                    const long k = off + i;
                    e = (k >= 0 && k < static_cast<long>(eta.values.size())) ? eta.values[static_cast<std::size_t>(k)]
                                                                               : cplx(0.0);
                } else {
                    e = eta.at(x - aX * m);
                }
                const double ph = p.beta * p.K() * n * x;
                col(i) = std::conj(e * cplx(std::cos(ph), std::sin(ph))) * grid.h;
            }
        }
    }
}

void GaborBasis::build_synthesis()
{
    synthesis_.resize(grid_.n, p_.size());
    for (int m = -p_.M; m <= p_.M; ++m)
        for (int n = -p_.N; n <= p_.N; ++n) {
            auto col = synthesis_.col(p_.index(m, n));
            for (int i = 0; i < grid_.n; ++i) col(i) = frame_element(grid_.x(i), m, n, p_);
        }
}

cvec GaborBasis::analyze(const cvec& f) const
{
    if (static_cast<int>(f.size()) != grid_.n) throw DimensionMismatch("signal length differs from grid");
    cvec c(static_cast<std::size_t>(p_.size()));
    for (int k = 0; k < p_.size(); ++k)
        c[static_cast<std::size_t>(k)] = simd::dotu(analysis_.col(k).data(), f.data(), f.size());
    return c;
}

cvec GaborBasis::synthesize(const cvec& c) const
{
    if (static_cast<int>(c.size()) != p_.size()) throw DimensionMismatch("coefficient count differs from frame");
    cvec f(static_cast<std::size_t>(grid_.n), 0.0);
    for (int k = 0; k < p_.size(); ++k) {
        const cplx ck = c[static_cast<std::size_t>(k)];
        if (ck != 0.0) simd::axpy(ck, synthesis_.col(k).data(), f.data(), f.size());
    }
    return f;
}

cvec analyze(const cvec& f, const XGrid& grid, const DualWindow& dw, const FrameParams& p)
{
    return GaborBasis(p, grid, dw).analyze(f);
}

cvec synthesize(const cvec& c, const XGrid& grid, const FrameParams& p)
{
    if (static_cast<int>(c.size()) != p.size()) throw DimensionMismatch("coefficient count differs from frame");
    cvec f(static_cast<std::size_t>(grid.n), 0.0);
    for (int m = -p.M; m <= p.M; ++m)
        for (int n = -p.N; n <= p.N; ++n) {
            const cplx ck = c[p.index(m, n)];
            if (ck == 0.0) continue;
            for (int i = 0; i < grid.n; ++i) f[static_cast<std::size_t>(i)] += ck * frame_element(grid.x(i), m, n, p);
        }
    return f;
}

}  // namespace gew
