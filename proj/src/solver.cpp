#include <chrono>
#include <cmath>

#include <Eigen/LU>

#include "gew/error.hpp"
#include "gew/simd/kernels.hpp"
#include "gew/solver.hpp"

namespace gew {

SolverMethod parse_method(const std::string& s)
{
    if (s == "auto") return SolverMethod::automatic;
    if (s == "direct") return SolverMethod::direct;
    if (s == "iterative") return SolverMethod::iterative;
    throw ConfigError("solver.method must be auto, direct or iterative (got '" + s + "')");
}

const char* to_string(SolverMethod m)
{
    switch (m) {
    case SolverMethod::automatic: return "auto";
    case SolverMethod::direct: return "direct";
    case SolverMethod::iterative: return "iterative";
    }
    return "?";
}

namespace {

using Vec = Eigen::VectorXcd;

Eigen::Map<const Vec> as_vec(const CoeffTensor& c) { return {c.data.data(), static_cast<Eigen::Index>(c.size())}; }
Eigen::Map<Vec> as_vec(CoeffTensor& c) { return {c.data.data(), static_cast<Eigen::Index>(c.size())}; }

CoeffTensor apply_system(const DiscreteOperator& op, const CoeffTensor& x)
{
    return x - contrast_multiply(green_apply(x, op), op);
}

double relative_residual(const DiscreteOperator& op, const CoeffTensor& J, const CoeffTensor& J_inc)
{
    const double b = J_inc.norm();
    const double r = forward(J, J_inc, op).norm();
    return b == 0.0 ? r : r / b;
}

}  // namespace

int gmres(const DiscreteOperator& op, const CoeffTensor& b, CoeffTensor& x, double tol, int max_iterations,
          int restart, double* achieved)
{
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        std::fill(x.data.begin(), x.data.end(), cplx(0.0));
        if (achieved) *achieved = 0.0;
        return 0;
    }
    const Eigen::Index n = static_cast<Eigen::Index>(b.size());
    const int m = std::max(1, restart);
    Eigen::MatrixXcd V(n, m + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
    Vec cs(m), sn(m), g(m + 1);
    CoeffTensor work = b;
    int total = 0;
    double rel = 1.0;
    while (true) {
        const CoeffTensor r = b - apply_system(op, x);
        double beta = r.norm();
        rel = beta / bnorm;
        if (rel <= tol) break;
        if (total >= max_iterations) break;
        V.col(0) = as_vec(r) / beta;
        g.setZero();
        g(0) = beta;
        H.setZero();
        int j = 0;
        for (; j < m && total < max_iterations; ++j, ++total) {
            as_vec(work) = V.col(j);
            const CoeffTensor w = apply_system(op, work);
            Vec v = as_vec(w);
            // modified Gram-Schmidt, repeated once for stability
            for (int pass = 0; pass < 2; ++pass)
                for (int i = 0; i <= j; ++i) {
                    const cplx h = V.col(i).dot(v);
                    H(i, j) += h;
                    v -= h * V.col(i);
                }
            H(j + 1, j) = v.norm();
            if (std::abs(H(j + 1, j)) > 0.0) V.col(j + 1) = v / H(j + 1, j);
            for (int i = 0; i < j; ++i) {
                const cplx t = std::conj(cs(i)) * H(i, j) + std::conj(sn(i)) * H(i + 1, j);
                H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
                H(i, j) = t;
            }
            const double den = std::hypot(std::abs(H(j, j)), std::abs(H(j + 1, j)));
            cs(j) = den == 0.0 ? cplx(1.0) : H(j, j) / den;
            sn(j) = den == 0.0 ? cplx(0.0) : H(j + 1, j) / den;
            H(j, j) = den;
            H(j + 1, j) = 0.0;
            g(j + 1) = -sn(j) * g(j);
            g(j) = std::conj(cs(j)) * g(j);
            if (std::abs(g(j + 1)) / bnorm <= tol) {
                ++j;
                ++total;
                break;
            }
        }
        const Vec y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
        as_vec(x) += V.leftCols(j) * y;
    }
    if (achieved) *achieved = rel;
    if (rel > tol)
        throw NonConvergence("GMRES stopped after " + std::to_string(total) + " iterations at relative residual " +
                             std::to_string(rel));
    return total;
}

Solution solve(const DiscreteOperator& op, const CoeffTensor& J_inc, const SolverOptions& opt)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (J_inc.M != op.fp().M || J_inc.N != op.fp().N || J_inc.n_k != op.zg().n_k)
        throw DimensionMismatch("incident coefficients do not match the operator");
    SolverMethod method = opt.method;
    if (method == SolverMethod::automatic)
        method = op.unknowns() <= opt.dense_cap ? SolverMethod::direct : SolverMethod::iterative;
    const double tol = opt.tol > 0.0 ? opt.tol : (method == SolverMethod::direct ? 1e-8 : 1e-6);

    Solution sol;
    sol.J_inc = J_inc;
    sol.method = method;
    if (method == SolverMethod::direct) {
        Eigen::MatrixXcd A = assemble_dense(op, opt.dense_cap);
        Eigen::PartialPivLU<Eigen::Ref<Eigen::MatrixXcd>> lu(A);
        sol.condition_estimate = 1.0 / lu.rcond();
        sol.J = J_inc;
        as_vec(sol.J) = lu.solve(as_vec(J_inc));
        sol.iterations = 0;
        sol.residual_norm = relative_residual(op, sol.J, J_inc);
        if (!std::isfinite(sol.residual_norm))
            throw NonConvergence("direct solve produced a non-finite solution");
        if (sol.residual_norm > tol)
            throw NonConvergence("direct solve residual " + std::to_string(sol.residual_norm) + " exceeds tolerance " +
                                 std::to_string(tol));
    } else {
        // start from J_inc, the zero-scattering guess
        sol.J = J_inc;
        sol.iterations = gmres(op, J_inc, sol.J, tol, opt.max_iterations, opt.restart);
        sol.residual_norm = relative_residual(op, sol.J, J_inc);
    }
    sol.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

FieldGrid FieldGrid::make(double x_min, double x_max, int nx, double z_min, double z_max, int nz)
{
    if (nx < 1 || nz < 1) throw ConfigError("field grid needs nx, nz >= 1");
    FieldGrid g{x_min, x_max, z_min, z_max, nx, nz, {}};
    g.values.assign(static_cast<std::size_t>(nx) * nz, 0.0);
    return g;
}

bool FieldGrid::same_points(const FieldGrid& o) const
{
    return nx == o.nx && nz == o.nz && x_min == o.x_min && x_max == o.x_max && z_min == o.z_min && z_max == o.z_max;
}

FieldGrid synthesize_coeffs(const CoeffTensor& c, FieldGrid grid, const FrameParams& fp, const ZGrid& zg)
{
    const int S = fp.size();
    grid.values.assign(static_cast<std::size_t>(grid.nx) * grid.nz, 0.0);
    // frame elements at every x of the grid, row-major (x, mn)
    cvec basis(static_cast<std::size_t>(grid.nx) * S);
    for (int ix = 0; ix < grid.nx; ++ix)
        for (int m = -fp.M; m <= fp.M; ++m)
            for (int n = -fp.N; n <= fp.N; ++n)
                basis[static_cast<std::size_t>(ix) * S + fp.index(m, n)] = frame_element(grid.x(ix), m, n, fp);
    cvec row(static_cast<std::size_t>(S));
    for (int iz = 0; iz < grid.nz; ++iz) {
        const double t = (grid.z(iz) - zg.z_min) / zg.delta;
        if (t < -1e-12 || t > zg.n_k + 1e-12) continue;
        const int k = std::clamp(static_cast<int>(std::floor(t)), 0, zg.n_k);
        const double frac = std::clamp(t - k, 0.0, 1.0);
        for (int i = 0; i < S; ++i) {
            row[static_cast<std::size_t>(i)] = (1.0 - frac) * c.slice(k)[i];
            if (frac > 0.0 && k < zg.n_k) row[static_cast<std::size_t>(i)] += frac * c.slice(k + 1)[i];
        }
        for (int ix = 0; ix < grid.nx; ++ix)
            grid.at(ix, iz) = simd::dotu(basis.data() + static_cast<std::size_t>(ix) * S, row.data(), row.size());
    }
    return grid;
}

FieldGrid synthesize_field(const Solution& sol, FieldGrid grid, const FrameParams& fp, const ZGrid& zg,
                           FieldKind which)
{
    return synthesize_coeffs(which == FieldKind::chi_total ? sol.J : sol.J - sol.J_inc, std::move(grid), fp, zg);
}

}  // namespace gew
