#pragma once

#include <string>

#include "gew/operator.hpp"

namespace gew {

enum class SolverMethod { automatic, direct, iterative };

SolverMethod parse_method(const std::string& s);
const char* to_string(SolverMethod m);

struct SolverOptions {
    SolverMethod method = SolverMethod::automatic;
    // relative residual target against |J_inc|; 0 picks 1e-8 (direct) or
    // 1e-6 (iterative)
    double tol = 0.0;
    std::size_t dense_cap = 8000;
    int max_iterations = 2000;
    int restart = 60;
};

struct Solution {
    CoeffTensor J;
    CoeffTensor J_inc;
    double residual_norm = 0.0;
    int iterations = 0;
    double wall_time = 0.0;
    double condition_estimate = 0.0;  // 1-norm estimate, direct method only
    SolverMethod method = SolverMethod::direct;
};

// Solves J - C G J = J_inc. NonConvergence, SizeCap.
Solution solve(const DiscreteOperator& op, const CoeffTensor& J_inc, const SolverOptions& opt = {});

// Restarted GMRES for x - C G x = b with green_apply as the operator; x
// holds the initial guess.
// Returns iterations; throws NonConvergence.
int gmres(const DiscreteOperator& op, const CoeffTensor& b, CoeffTensor& x, double tol, int max_iterations,
          int restart, double* achieved = nullptr);

// Values on a regular grid, z-outer: value(ix, iz) = values[iz*nx + ix].
struct FieldGrid {
    double x_min = 0.0, x_max = 0.0, z_min = 0.0, z_max = 0.0;
    int nx = 0, nz = 0;
    cvec values;

    static FieldGrid make(double x_min, double x_max, int nx, double z_min, double z_max, int nz);
    double x(int i) const { return nx == 1 ? x_min : x_min + (x_max - x_min) * i / (nx - 1); }
    double z(int i) const { return nz == 1 ? z_min : z_min + (z_max - z_min) * i / (nz - 1); }
    cplx& at(int ix, int iz) { return values[static_cast<std::size_t>(iz) * nx + ix]; }
    cplx at(int ix, int iz) const { return values[static_cast<std::size_t>(iz) * nx + ix]; }
    bool same_points(const FieldGrid& o) const;
};

enum class FieldKind { chi_scattered, chi_total };

// Sum of coefficients g_mn(x) Lambda_k(z) over the grid points; chi_scattered
// uses J - J_inc, chi_total uses J.
FieldGrid synthesize_field(const Solution& sol, FieldGrid grid, const FrameParams& fp, const ZGrid& zg,
                           FieldKind which = FieldKind::chi_scattered);
FieldGrid synthesize_coeffs(const CoeffTensor& c, FieldGrid grid, const FrameParams& fp, const ZGrid& zg);

}  // namespace gew
