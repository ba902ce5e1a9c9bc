#include <algorithm>
#include <cmath>
#include <string>

#include "gew/error.hpp"
#include "gew/quadrature.hpp"
#include "gew/tables.hpp"

namespace gew {

const char* to_string(TableKind k) { return k == TableKind::spatial ? "spatial" : "spectral"; }

namespace {

KernelTable empty_table(TableKind kind, const FrameParams& fp, const ZGrid& zg, const EwaldConfig& cfg, int Nu, int Nv)
{
    fp.validate();
    zg.validate();
    cfg.validate();
    KernelTable t;
    t.kind = kind;
    t.fp = fp;
    t.zg = zg;
    t.cfg = cfg;
    t.Nu = Nu;
    t.Nv = Nv;
    t.Q = 2 * fp.M + 2 * Nu;
    t.P = 2 * fp.N + 2 * Nv;
    t.data.assign(static_cast<std::size_t>(2 * t.Q + 1) * (2 * t.P + 1) * (2 * zg.n_k + 1), 0.0);
    return t;
}

// Kernel value f(q,p,.) at one node for every row of a chunk.
using FillF = std::function<void(cplx node, const std::vector<std::pair<int, int>>& rows, cplx weight, cplx* F)>;
using FillG = std::function<void(cplx node, cplx* G)>;

struct PathPiece {
    std::vector<double> breakpoints;
    std::function<cplx(double)> node;    // integration variable -> xi or zeta
    std::function<cplx(double)> weight;  // Jacobian and scalar factors
};

void integrate_table(KernelTable& t, const std::vector<PathPiece>& pieces, const FillF& fill_f, const FillG& fill_g,
                     int chunk_rows)
{
    const int nd = 2 * t.n_k() + 1;
    // Only the half q > 0 or (q = 0, p >= 0) is integrated; the integrand is
    // even under (q,p) -> (-q,-p).
    std::vector<std::pair<int, int>> all;
    for (int q = 0; q <= t.Q; ++q)
        for (int p = q == 0 ? 0 : -t.P; p <= t.P; ++p) all.emplace_back(q, p);
    auto segments = [&](const std::vector<std::pair<int, int>>& rows) {
        std::vector<quad::SeparableSegment> segs;
        for (const auto& pc : pieces)
            segs.push_back({pc.breakpoints, [&pc, &rows, &fill_f, &fill_g](double s, cplx* F, cplx* G) {
                                const cplx node = pc.node(s);
                                fill_f(node, rows, pc.weight(s), F);
                                fill_g(node, G);
                            }});
        return segs;
    };
    quad::SeparableOptions opt;
    opt.rel_tol = t.cfg.quad_tol;
    opt.floor_rel = t.cfg.trunc_tol;
    opt.max_depth = 30;
    // g loses about 1e-13 to cancellation for large |d|
    opt.noise_rel = 1e-12;
    // The (0,0) row carries the largest entries; its coarse magnitude sets
    // the absolute floor shared by every chunk.
    {
        const std::vector<std::pair<int, int>> centre{{0, 0}};
        quad::SeparableOptions coarse = opt;
        coarse.rel_tol = 1e-4;
        const quad::SeparableResult r = quad::integrate_separable(segments(centre), 1, nd, coarse);
        opt.abs_floor = t.cfg.trunc_tol * r.value.cwiseAbs().maxCoeff();
        t.evaluations += r.evaluations;
    }
    for (std::size_t c0 = 0; c0 < all.size(); c0 += static_cast<std::size_t>(chunk_rows)) {
        const std::vector<std::pair<int, int>> rows(all.begin() + static_cast<std::ptrdiff_t>(c0),
                                                    all.begin() + static_cast<std::ptrdiff_t>(std::min(all.size(), c0 + chunk_rows)));
        const std::vector<quad::SeparableSegment> segs = segments(rows);
        quad::SeparableResult r;
        try {
            r = quad::integrate_separable(segs, static_cast<int>(rows.size()), nd, opt);
        } catch (const QuadratureFailure& e) {
            const quad::SeparableFailure f = quad::last_separable_failure();
            const auto [q, p] = rows[static_cast<std::size_t>(std::max(0, f.i))];
            throw QuadratureFailure(std::string(to_string(t.kind)) + " table entry (q,p,d)=(" + std::to_string(q) +
                                    "," + std::to_string(p) + "," + std::to_string(f.j - t.n_k()) + "): " + e.what());
        }
        t.evaluations += r.evaluations;
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (int j = 0; j < nd; ++j) {
                const cplx v = r.value(static_cast<Eigen::Index>(i), j);
                t.data[t.index(rows[i].first, rows[i].second, j - t.n_k())] = v;
                t.data[t.index(-rows[i].first, -rows[i].second, j - t.n_k())] = v;
            }
    }
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v;
    for (int i = 0; i <= n; ++i) v.push_back(a + (b - a) * i / n);
    v.back() = b;
    return v;
}

}  // namespace

KernelTable build_spatial_table(const FrameParams& fp, const ZGrid& zg, const EwaldConfig& cfg, int Nu, int Nv,
                                const TableOptions& opt)
{
    KernelTable t = empty_table(TableKind::spatial, fp, zg, cfg, Nu, Nv);
    const double E = cfg.split, T = opt.tail_factor * E, k2 = cfg.k0 * cfg.k0;
    std::vector<PathPiece> pieces;
    // xi = e^s on [E, T]; the 1/xi of the integrand cancels the Jacobian
    pieces.push_back({linspace(std::log(E), std::log(T), 16), [](double s) { return cplx(std::exp(s)); },
                      [k2](double s) { return cplx(std::exp(k2 * std::exp(-2.0 * s) / 4.0)); }});
    // t = 1/xi on (0, 1/T]
    pieces.push_back({linspace(0.0, 1.0 / T, 4), [](double u) { return cplx(1.0 / u); },
                      [k2](double u) { return cplx(std::exp(k2 * u * u / 4.0) / u); }});
    auto fill_f = [&](cplx xi, const std::vector<std::pair<int, int>>& rows, cplx w, cplx* F) {
        for (std::size_t i = 0; i < rows.size(); ++i) F[i] = w * f_spatial(rows[i].first, rows[i].second, xi, fp);
    };
    auto fill_g = [&](cplx xi, cplx* G) {
        for (int d = -zg.n_k; d <= zg.n_k; ++d) G[d + zg.n_k] = g_z_spatial(d, xi, zg);
    };
    integrate_table(t, pieces, fill_f, fill_g, opt.chunk_rows);
    return t;
}

KernelTable build_spectral_table(const FrameParams& fp, const ZGrid& zg, const EwaldConfig& cfg, int Nu, int Nv,
                                 const TableOptions& opt)
{
    KernelTable t = empty_table(TableKind::spectral, fp, zg, cfg, Nu, Nv);
    const double E = cfg.split, k2 = cfg.k0 * cfg.k0;
    const double w_c = opt.cap_factor / E;
    // widest z offset seen by g~, which sets its oscillation rate
    const double R = (zg.n_k + 1) * zg.delta;
    const double R2 = R * R;

    std::vector<PathPiece> pieces;
    const int n_curved = 2 + static_cast<int>(R2 * E * E / (4.0 * pi));
    pieces.push_back({linspace(1.0 / E, 2.0 / E, n_curved), [E](double w) { return zeta_path(w, E); },
                      [E, k2](double w) {
                          const cplx z = zeta_path(w, E);
                          return std::exp(k2 * z * z / 4.0) * zeta_path_derivative(w, E);
                      }});
    std::vector<double> bp{2.0 / E};
    for (double w = 2.0 / E; w < w_c;) {
        w = std::min(w_c, w + 4.0 * pi / (k2 * w / 4.0 + 4.0 * R2 / (w * w * w)));
        bp.push_back(w);
    }
    pieces.push_back({bp, [](double w) { return cplx(0.5 * w, -0.5 * w); },
                      [k2](double w) { return std::exp(cplx(0.0, -k2 * w * w / 8.0)) * cplx(0.5, -0.5); }});
    const ClosureRay ray = spectral_closure_ray(w_c, cfg.k0);
    pieces.push_back({linspace(0.0, ray.tau_max, 16), [ray](double tau) { return ray.at(tau); },
                      [ray, k2](double tau) {
                          const cplx z = ray.at(tau);
                          return std::exp(k2 * z * z / 4.0) * ray.direction;
                      }});
    auto fill_f = [&](cplx z, const std::vector<std::pair<int, int>>& rows, cplx w, cplx* F) {
        for (std::size_t i = 0; i < rows.size(); ++i) F[i] = w * f_spectral(rows[i].first, rows[i].second, z, fp);
    };
    auto fill_g = [&](cplx z, cplx* G) {
        for (int d = -zg.n_k; d <= zg.n_k; ++d) G[d + zg.n_k] = g_z_spectral(d, z, zg);
    };
    integrate_table(t, pieces, fill_f, fill_g, opt.chunk_rows);
    return t;
}

KernelTable build_table(TableKind kind, const FrameParams& fp, const ZGrid& zg, const EwaldConfig& cfg, int Nu,
                        int Nv, const TableOptions& opt)
{
    return kind == TableKind::spatial ? build_spatial_table(fp, zg, cfg, Nu, Nv, opt)
                                      : build_spectral_table(fp, zg, cfg, Nu, Nv, opt);
}

double truncation_point(TableKind kind, int q, int p, int d, const FrameParams& fp, const ZGrid& zg,
                        const EwaldConfig& cfg)
{
    const double E = cfg.split, X = fp.X, D = zg.delta, tol = cfg.trunc_tol;
    if (kind == TableKind::spectral) {
        const double b = fp.beta;
        const double c = std::sqrt(2.0 * pi) * D * std::sqrt(2.0) / (4.0 * fp.K()) * std::exp(-0.5 * pi * b * b * p * p);
        return std::clamp(c / tol, 2.0 / E, 200.0 / E);
    }
    const double gq = std::exp(-0.5 * pi * fp.alpha * fp.alpha * q * q);
    auto envelope = [&](double xi) {
        if (d == 0) return std::sqrt(pi) * gq / (4.0 * X * xi * xi * xi);
        if (d == -1) return gq / (4.0 * X * D * std::pow(xi, 4));
        if (d > 0) return std::exp(-d * d * D * D * xi * xi) * gq / (4.0 * d * X * D * std::pow(xi, 4));
        const double e = (d + 1) * D * xi;
        return std::exp(-e * e) * gq / (8.0 * X * D * std::pow(xi, 4) * e * e);
    };
    double lo = E, hi = 100.0 * E;
    if (envelope(lo) <= tol) return lo;
    if (envelope(hi) > tol) return hi;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        const double m = 0.5 * (lo + hi);
        (envelope(m) > tol ? lo : hi) = m;
    }
    return hi;
}

}  // namespace gew
