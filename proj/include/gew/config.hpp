#pragma once

#include <string>
#include <vector>

#include "gew/frame.hpp"
#include "gew/green.hpp"
#include "gew/kernels.hpp"
#include "gew/scene.hpp"
#include "gew/solver.hpp"

namespace gew {

struct OutputConfig {
    double x_min = 0.0, x_max = 0.0, z_min = 0.0, z_max = 0.0;  // equal bounds: use the discretization's extent
    int nx = 121, nz = 57;
    bool csv = true;
    bool pgm = true;
    std::string out_dir = "out";
};

struct CacheConfig {
    bool enabled = true;
    std::string path = ".gew-cache";
};

struct DualConfig {
    int Nu = 2, Nv = 3;
    double fit_tol = 0.05;
    std::string criterion = "biorthogonal";  // or "l2"
};

struct RunConfig {
    Scene scene;
    FrameParams frame;
    ZGrid zgrid;
    DualConfig dual;
    EwaldConfig ewald;  // split already resolved
    bool split_auto = true;
    SolverOptions solver;
    OutputConfig output;
    CacheConfig cache;
    std::string source;  // file the config came from
};

// Parses the JSON config text. Missing fields take defaults; unknown fields and
// bad values raise ConfigError naming the field (and line, for syntax errors).
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);

// Output grid with defaults resolved.
FieldGrid output_grid(const RunConfig& cfg);

}  // namespace gew
