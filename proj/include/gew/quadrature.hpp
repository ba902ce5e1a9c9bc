#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gew/types.hpp"

namespace gew::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_subdivisions = 4000;
};

struct Result {
    cplx value;
    double error = 0.0;
    int evaluations = 0;
};

// Kronrod 21-point nodes on [-1,1] (index 0..10 are the non-negative half,
// node 10 is the origin) with Kronrod and embedded Gauss weights.
struct GK21 {
    static const double x[11];
    static const double wk[11];
    static const double wg[5];  // Gauss weights for x[1], x[3], ..., x[9]
};

// Globally adaptive Gauss-Kronrod on [a,b] starting from the given
// breakpoints (which must include a and b). Throws QuadratureFailure.
Result integrate(const std::function<cplx(double)>& f, const std::vector<double>& breakpoints,
                 const Options& opt = {});
Result integrate(const std::function<cplx(double)>& f, double a, double b, const Options& opt = {});

// Separable vector integrand: I[i][j] = integral of F_i(t) G_j(t) dt. The
// callback fills F (length nf) and G (length ng) at node t; any scalar weight
// or Jacobian must be folded into F.
struct SeparableSegment {
    std::vector<double> breakpoints;
    std::function<void(double t, cplx* F, cplx* G)> eval;
};

struct SeparableOptions {
    double rel_tol = 1e-10;
    // entries below floor_rel * max|I| are resolved only to that absolute level
    double floor_rel = 1e-14;
    // entries are never resolved below this absolute level
    double abs_floor = 0.0;
    // entries also converge once |Kronrod - Gauss| <= noise_rel * sum |F||G| w
    double noise_rel = 64 * 2.2e-16;
    int max_depth = 24;
};

struct SeparableResult {
    Eigen::MatrixXcd value;  // nf x ng
    long evaluations = 0;
    long panels = 0;
};

// Throws QuadratureFailure carrying the (i,j) of the worst entry in what().
SeparableResult integrate_separable(const std::vector<SeparableSegment>& segments, int nf, int ng,
                                    const SeparableOptions& opt = {});

struct SeparableFailure {
    int i = -1, j = -1;
};
// Index of the entry that exhausted the depth budget in the last failing call
// on this thread.
SeparableFailure last_separable_failure();

}  // namespace gew::quad
