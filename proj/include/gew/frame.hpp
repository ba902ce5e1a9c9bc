#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gew/types.hpp"

namespace gew {

struct FrameParams {
    double X = 0.5;
    double alpha = 0.816496580927726;
    double beta = 0.816496580927726;
    int M = 6;
    int N = 3;

    double K() const { return 2.0 * pi / X; }
    int num_m() const { return 2 * M + 1; }
    int num_n() const { return 2 * N + 1; }
    int size() const { return num_m() * num_n(); }
    int index(int m, int n) const { return (m + M) * num_n() + (n + N); }
    // Throws ConfigError naming the violated constraint.
    void validate() const;
};

// alpha*beta as num/den with den <= max_den, if it is rational to 1e-12.
std::optional<std::pair<int, int>> rational_oversampling(const FrameParams& p, int max_den = 64);

double window_value(double x, const FrameParams& p);
cplx frame_element(double x, int m, int n, const FrameParams& p);
cplx spectral_frame_element(double kx, int n, int m, const FrameParams& p);

struct XGrid {
    double x0 = 0.0;
    double h = 0.0;
    int n = 0;
    double x(int i) const { return x0 + h * i; }
    double x_end() const { return x(n - 1); }
    // Spacing X/16 over [-(M+2)aX - 4X, (M+2)aX + 4X].
    static XGrid standard(const FrameParams& p);
    static XGrid uniform(double a, double b, double h);
};

struct SampledWindow {
    double x0 = 0.0;
    double h = 0.0;
    cvec values;
    double x(std::size_t i) const { return x0 + h * static_cast<double>(i); }
    // Linear interpolation, zero outside the sampled range.
    cplx at(double x) const;
};

struct ZakOptions {
    double max_spacing_over_X = 1.0 / 32.0;
    int n_theta = 64;
    double singular_tol = 1e-12;
};

// Canonical (minimum-norm) dual window for rational alpha*beta.
SampledWindow zak_dual_window(const FrameParams& p, const ZakOptions& opt = {});
// Canonical dual window from per-residue dense solves of the frame operator;
// works for any alpha*beta. half_width bounds the sampled support.
SampledWindow walnut_dual_window(const FrameParams& p, double max_spacing, double half_width);
// Zak route when alpha*beta is rational, Walnut route otherwise.
SampledWindow canonical_dual_window(const FrameParams& p);

struct DualWindow {
    int Nu = 0;
    int Nv = 0;
    cvec a;  // index (u+Nu)*(2Nv+1) + (v+Nv)
    double residual = 0.0;
    double condition = 1.0;  // normal-equation condition number
    bool ill_conditioned = false;
    std::string criterion = "l2";

    int num_v() const { return 2 * Nv + 1; }
    cplx coeff(int u, int v) const { return a[static_cast<std::size_t>((u + Nu) * num_v() + (v + Nv))]; }
    cplx value(double x, const FrameParams& p) const;
};

struct FitOptions {
    double condition_cap = 1e12;
    bool strict = false;  // throw IllConditionedFit instead of truncating
};

// Least-squares fit of the modulated-Gaussian sum to a sampled window.
DualWindow fit_dual_coeffs(const SampledWindow& eta, int Nu, int Nv, const FrameParams& p,
                           const FitOptions& opt = {});

// Fit that enforces the biorthogonality (Wexler-Raz) identities of a dual
// window directly; anchor_weight > 0 adds the L2 misfit to eta as a regulariser.
DualWindow fit_dual_biorthogonal(const SampledWindow& eta, int Nu, int Nv, const FrameParams& p,
                                 double anchor_weight = 0.0, const FitOptions& opt = {});

// Coefficients of the Fourier-transformed dual with respect to the spectral
// frame elements.
DualWindow spectral_dual_coeffs(const DualWindow& dw, const FrameParams& p);

// Spectral-frame coefficients (stored in (m,n) layout) to spatial-frame ones.
cvec spectral_to_spatial(const cvec& spectral, const FrameParams& p);

// Sampled analysis/synthesis operators on a fixed grid.
class GaborBasis {
public:
    GaborBasis(const FrameParams& p, const XGrid& grid, const DualWindow& dw);
    GaborBasis(const FrameParams& p, const XGrid& grid, const SampledWindow& eta);

    cvec analyze(const cvec& f) const;
    cvec synthesize(const cvec& c) const;
    // column (m,n) of the analysis matrix holds conj(eta_mn(x_i)) * h;
    // column (m,n) of the synthesis matrix holds g_mn(x_i)
    const Eigen::MatrixXcd& analysis_columns() const { return analysis_; }
    const Eigen::MatrixXcd& synthesis_columns() const { return synthesis_; }
    const XGrid& grid() const { return grid_; }
    const FrameParams& params() const { return p_; }

private:
    void build_synthesis();
    FrameParams p_;
    XGrid grid_;
    Eigen::MatrixXcd analysis_;   // n x size
    Eigen::MatrixXcd synthesis_;  // n x size
};

cvec analyze(const cvec& f, const XGrid& grid, const DualWindow& dw, const FrameParams& p);
cvec synthesize(const cvec& c, const XGrid& grid, const FrameParams& p);

}  // namespace gew
