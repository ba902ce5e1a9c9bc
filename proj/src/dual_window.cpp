#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "gew/error.hpp"
#include "gew/frame.hpp"

namespace gew {

namespace {

// W_j(y) = sum_m g(y - m a) g(y - j L - m a)
double walnut_weight(double y, int j, double a, double L, const FrameParams& p)
{
    const double c = y - 0.5 * j * L;  // products peak where both shifts meet
    const int m0 = static_cast<int>(std::lround(c / a));
    const int span = static_cast<int>(std::ceil(7.0 * p.X / a)) + 1;
    double s = 0.0;
    for (int m = m0 - span; m <= m0 + span; ++m) s += window_value(y - m * a, p) * window_value(y - j * L - m * a, p);
    return s;
}

int walnut_reach(double L, const FrameParams& p)
{
    // g(t)g(t - jL) <= 2^{1/2} exp(-pi (jL)^2 / (2 X^2)); stop below 1e-18
    return static_cast<int>(std::ceil(std::sqrt(2.0 * 41.5 / pi) * p.X / L)) + 1;
}

}  // namespace

SampledWindow zak_dual_window(const FrameParams& p, const ZakOptions& opt)
{
    const auto rat = rational_oversampling(p);
    if (!rat) throw DomainError("zak_dual_window requires rational alpha*beta");
    const int num = rat->first, den = rat->second;
    if (num > den) throw SingularFrame("alpha*beta > 1: Gabor system is not a frame");
    const double a = p.alpha * p.X;
    const double L = p.X / p.beta;
    int c = 2;
    while (a / (num * c) > opt.max_spacing_over_X * p.X) c += 2;
    const double h = a / (num * c);
    const int P = den * c;  // samples per modulation period L
    const int nth = opt.n_theta;
    const int reach = walnut_reach(L, p);
    const int Jmax = reach / num + 2;

    // samples y_k = r h + k L, k = K num + i, K in [-nth/2, nth/2)
    const int kmin = -(nth / 2) * num;
    const int nk = nth * num;
    SampledWindow out;
    out.h = h;
    out.x0 = static_cast<double>(kmin) * P * h;
    out.values.assign(static_cast<std::size_t>(nk) * P, 0.0);

    Eigen::MatrixXcd S(num, num), Gh(num, nth);
    Eigen::MatrixXcd Eh(num, nth);
    double lam_min = INFINITY, lam_max = 0.0;
    int worst_r = 0;
    double worst_th = 0.0;
    for (int r = 0; r < P; ++r) {
        // blocks B_J[i][i'] = L W_{J num + i - i'}(y_i)
        std::vector<Eigen::MatrixXd> blocks;
        for (int J = -Jmax; J <= Jmax; ++J) {
            Eigen::MatrixXd B(num, num);
            for (int i = 0; i < num; ++i)
                for (int ip = 0; ip < num; ++ip)
                    B(i, ip) = L * walnut_weight(r * h + i * L, J * num + i - ip, a, L, p);
            blocks.push_back(B);
        }
        // Zak-domain window samples
        for (int t = 0; t < nth; ++t) {
            const double th = 2.0 * pi * t / nth;
            for (int i = 0; i < num; ++i) {
                cplx s = 0.0;
                for (int K = -nth / 2; K < nth / 2; ++K) {
                    const double g = window_value(r * h + (K * num + i) * L, p);
                    if (g == 0.0) continue;
                    s += g * cplx(std::cos(K * th), -std::sin(K * th));
                }
                Gh(i, t) = s;
            }
        }
        for (int t = 0; t < nth; ++t) {
            const double th = 2.0 * pi * t / nth;
            S.setZero();
            for (int J = -Jmax; J <= Jmax; ++J)
                S += blocks[static_cast<std::size_t>(J + Jmax)].cast<cplx>() *
                     cplx(std::cos(J * th), -std::sin(J * th));
            const Eigen::MatrixXcd Sh = 0.5 * (S + S.adjoint());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Sh);
            const auto& lam = es.eigenvalues();
            lam_max = std::max(lam_max, lam.cwiseAbs().maxCoeff());
            if (lam.minCoeff() < lam_min) {
                lam_min = lam.minCoeff();
                worst_r = r;
                worst_th = th;
            }
            Eigen::VectorXcd inv_l(num);
            for (int i = 0; i < num; ++i) inv_l(i) = lam(i) > 0.0 ? 1.0 / lam(i) : 0.0;
            Eh.col(t) = es.eigenvectors() * inv_l.asDiagonal() * es.eigenvectors().adjoint() * Gh.col(t);
        }
        for (int K = -nth / 2; K < nth / 2; ++K)
            for (int i = 0; i < num; ++i) {
                cplx s = 0.0;
                for (int t = 0; t < nth; ++t) {
                    const double th = 2.0 * pi * t / nth;
                    s += Eh(i, t) * cplx(std::cos(K * th), std::sin(K * th));
                }
                const int k = K * num + i;
                out.values[static_cast<std::size_t>((k - kmin) * P + r)] = s / static_cast<double>(nth);
            }
    }
    if (lam_min < opt.singular_tol * lam_max)
        throw SingularFrame("Zak-domain frame operator singular (lambda_min/lambda_max = " +
                            std::to_string(lam_min / lam_max) + ") at residue " + std::to_string(worst_r) +
                            ", theta = " + std::to_string(worst_th));
    return out;
}

SampledWindow walnut_dual_window(const FrameParams& p, double max_spacing, double half_width)
{
    const double a = p.alpha * p.X;
    const double L = p.X / p.beta;
    const int P = static_cast<int>(std::ceil(L / max_spacing));
    const double h = L / P;
    const int Kmax = static_cast<int>(std::ceil(half_width / L));
    const int nk = 2 * Kmax + 1;
    const int reach = walnut_reach(L, p);
    SampledWindow out;
    out.h = h;
    out.x0 = -static_cast<double>(Kmax) * P * h;
    out.values.assign(static_cast<std::size_t>(nk) * P, 0.0);
    Eigen::MatrixXd S(nk, nk);
    Eigen::VectorXd g(nk);
    for (int r = 0; r < P; ++r) {
        S.setZero();
        for (int k = 0; k < nk; ++k) {
            const double y = r * h + (k - Kmax) * L;
            g(k) = window_value(y, p);
            for (int j = -reach; j <= reach; ++j) {
                const int kk = k - j;
                if (kk < 0 || kk >= nk) continue;
                S(k, kk) = L * walnut_weight(y, j, a, L, p);
            }
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        if (sv(nk - 1) < 1e-12 * sv(0)) throw SingularFrame("frame operator singular on residue " + std::to_string(r));
        const Eigen::VectorXd eta = svd.solve(g);
        for (int k = 0; k < nk; ++k) out.values[static_cast<std::size_t>(k * P + r)] = eta(k);
    }
    return out;
}

SampledWindow canonical_dual_window(const FrameParams& p)
{
    if (rational_oversampling(p, 16)) return zak_dual_window(p);
    return walnut_dual_window(p, p.X / 32.0, 40.0 * p.X);
}

namespace {

struct LsqOutcome {
    Eigen::VectorXcd x;
    double condition;
    bool truncated;
};

LsqOutcome solve_lsq(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const FitOptions& opt)
{
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    const double cond = smin > 0.0 ? (smax / smin) * (smax / smin) : INFINITY;
    bool truncated = false;
    if (cond > opt.condition_cap) {
        if (opt.strict)
            throw IllConditionedFit("dual-window fit normal-equation condition " + std::to_string(cond) +
                                    " exceeds " + std::to_string(opt.condition_cap));
        svd.setThreshold(1.0 / std::sqrt(opt.condition_cap));
        truncated = true;
    }
    return {svd.solve(b), cond, truncated};
}

Eigen::MatrixXcd basis_matrix(const SampledWindow& eta, int Nu, int Nv, const FrameParams& p)
{
    const int nv = 2 * Nv + 1;
    Eigen::MatrixXcd A(static_cast<Eigen::Index>(eta.values.size()), (2 * Nu + 1) * nv);
    for (std::size_t i = 0; i < eta.values.size(); ++i)
        for (int u = -Nu; u <= Nu; ++u)
            for (int v = -Nv; v <= Nv; ++v)
                A(static_cast<Eigen::Index>(i), (u + Nu) * nv + (v + Nv)) = frame_element(eta.x(i), u, v, p);
    return A;
}

}  // namespace

DualWindow fit_dual_coeffs(const SampledWindow& eta, int Nu, int Nv, const FrameParams& p, const FitOptions& opt)
{
    if (Nu < 0 || Nv < 0) throw DomainError("fit bounds must be non-negative");
    const Eigen::MatrixXcd A = basis_matrix(eta, Nu, Nv, p);
    const Eigen::Map<const Eigen::VectorXcd> b(eta.values.data(), static_cast<Eigen::Index>(eta.values.size()));
    const LsqOutcome sol = solve_lsq(A, b, opt);
    DualWindow dw;
    dw.Nu = Nu;
    dw.Nv = Nv;
    dw.a.assign(sol.x.data(), sol.x.data() + sol.x.size());
    dw.condition = sol.condition;
    dw.ill_conditioned = sol.truncated;
    dw.residual = (A * sol.x - b).norm() / b.norm();
    dw.criterion = "l2";
    return dw;
}

DualWindow fit_dual_biorthogonal(const SampledWindow& eta, int Nu, int Nv, const FrameParams& p,
                                 double anchor_weight, const FitOptions& opt)
{
    if (Nu < 0 || Nv < 0) throw DomainError("fit bounds must be non-negative");
    const double a = p.alpha * p.X;
    const double L = p.X / p.beta;
    const int nv = 2 * Nv + 1;
    const int nb = (2 * Nu + 1) * nv;
    const int nxr = 64;
    const int kw = walnut_reach(L, p);
    const int span = static_cast<int>(std::ceil(8.0 * p.X / a)) + Nu + 2;
    const int wr_rows = (2 * kw + 1) * nxr;

    Eigen::MatrixXcd Awr(wr_rows, nb);
    Eigen::VectorXcd bwr = Eigen::VectorXcd::Zero(wr_rows);
    int row = 0;
    // sum_m g(x - m a) gamma(x - kL - m a) = delta_k0 / L, scaled by L
    for (int k = -kw; k <= kw; ++k)
        for (int ix = 0; ix < nxr; ++ix, ++row) {
            const double x = a * ix / nxr;
            for (int u = -Nu; u <= Nu; ++u)
                for (int v = -Nv; v <= Nv; ++v) {
                    cplx s = 0.0;
                    for (int m = -span; m <= span; ++m) {
                        const double g = window_value(x - m * a, p);
                        if (g < 1e-300) continue;
                        s += g * frame_element(x - k * L - m * a, u, v, p);
                    }
                    Awr(row, (u + Nu) * nv + (v + Nv)) = L * s;
                }
            if (k == 0) bwr(row) = 1.0;
        }

    Eigen::MatrixXcd A = Awr;
    Eigen::VectorXcd b = bwr;
    const Eigen::MatrixXcd Afit = basis_matrix(eta, Nu, Nv, p);
    const Eigen::Map<const Eigen::VectorXcd> eta_v(eta.values.data(), static_cast<Eigen::Index>(eta.values.size()));
    if (anchor_weight > 0.0) {
        const double w = anchor_weight * std::sqrt(static_cast<double>(wr_rows)) / eta_v.norm();
        A.resize(wr_rows + Afit.rows(), nb);
        A << Awr, w * Afit;
        b.resize(wr_rows + Afit.rows());
        b << bwr, w * eta_v;
    }
    const LsqOutcome sol = solve_lsq(A, b, opt);
    DualWindow dw;
    dw.Nu = Nu;
    dw.Nv = Nv;
    dw.a.assign(sol.x.data(), sol.x.data() + sol.x.size());
    dw.condition = sol.condition;
    dw.ill_conditioned = sol.truncated;
    dw.residual = (Afit * sol.x - eta_v).norm() / eta_v.norm();
    dw.criterion = "biorthogonal";
    return dw;
}

}  // namespace gew
