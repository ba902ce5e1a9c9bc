#pragma once

#include <vector>

#include "gew/scene.hpp"
#include "gew/solver.hpp"

namespace gew {

// Pulse-basis, point-matched volume moment method on square cells.
struct MoMConfig {
    double cell = 0.0;  // 0 selects lambda/20
    std::size_t max_unknowns = 40000;
    // per-axis samples for the covered fraction of boundary cells; 1 keeps
    // the plain centre test
    int coverage_samples = 16;
    // Throws ConfigError when cell > lambda/10.
    double resolve_cell(double k0) const;
};

struct MoMSolution {
    double cell = 0.0;
    // lattice of cell centres: x = x0 + i*cell, z = z0 + j*cell
    double x0 = 0.0, z0 = 0.0;
    int nx = 0, nz = 0;
    std::vector<int> active;    // lattice index j*nx + i of every unknown
    std::vector<double> chi;    // contrast of each unknown
    cvec total;                 // E at each unknown
    cvec scattered;             // E - E^i at each unknown
    double k0 = 0.0;

    double cx(std::size_t u) const { return x0 + cell * (active[u] % nx); }
    double cz(std::size_t u) const { return z0 + cell * (active[u] / nx); }
    // Lattice of all cell centres as a field grid holding E^s, or chi E^s with
    // the pointwise contrast of the scene when scene is given; zero at cells
    // outside the object.
    FieldGrid centre_grid(const Scene* scene = nullptr) const;
};

// k0^2 times the integral of the Green function over a disc of radius a
// centred on the observation point.
cplx mom_self_term(double k0, double a);

MoMSolution mom_solve(const Scene& s, const MoMConfig& cfg = {});
// E^s at arbitrary points (inside or outside the object).
cvec mom_scattered_at(const MoMSolution& sol, const std::vector<std::pair<double, double>>& points);

// Scattered field of a dielectric circular cylinder of the scene's radius,
// centred at (s.cx, s.cz), from its cylindrical-harmonic series.
cplx cylinder_series_scattered(const Scene& s, double x, double z, int n_max = 0);

enum class Mask { inside, outside, full };

struct FieldComparison {
    FieldGrid abs_error;
    double rel_l2 = 0.0;
    double max_abs = 0.0;
    std::size_t points = 0;
};

// Relative to b. GridMismatch when the grids differ.
FieldComparison compare_fields(const FieldGrid& a, const FieldGrid& b, Mask mask, const Scene& s);

}  // namespace gew
