#pragma once

#include <memory>
#include <string>

#include "gew/config.hpp"
#include "gew/operator.hpp"
#include "gew/solver.hpp"

namespace gew {

// Dual-window coefficients per cfg.dual. Throws ConfigError when the fit
// residual exceeds fit_tol.
DualWindow fit_dual(const RunConfig& cfg);

struct TablePair {
    std::shared_ptr<const KernelTable> spatial, spectral;
    bool cache_hit = false;  // both tables came from the cache
    long evaluations = 0;    // quadrature evaluations spent building
};

// Loads or builds both tables, honouring cfg.cache.
TablePair prepare_tables(const RunConfig& cfg, const DualWindow& dual);

struct Prepared {
    DualWindow dual;
    TablePair tables;
    std::unique_ptr<DiscreteOperator> op;
    CoeffTensor J_inc;
    double setup_time = 0.0;
};

// Everything up to the linear solve: scene checks, dual fit, tables,
// operator, incident contrast source.
Prepared prepare(const RunConfig& cfg);

struct RunResult {
    Solution solution;
    FieldGrid field;  // chi E^s on the output grid
    bool cache_hit = false;
    double setup_time = 0.0;
    double solve_time = 0.0;
    std::size_t unknowns = 0;
};

RunResult run(const RunConfig& cfg);

// Writes field.csv / field.pgm(.json) / metrics.json under cfg.output.out_dir.
void write_artifacts(const RunConfig& cfg, const RunResult& r);
std::string metrics_json(const RunResult& r);

// {"error": kind, "message": ...} for failure reports.
std::string error_json(const std::string& kind, const std::string& message, int exit_code);

}  // namespace gew
