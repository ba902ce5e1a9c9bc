#pragma once

#include <string>
#include <variant>

#include "gew/frame.hpp"
#include "gew/kernels.hpp"
#include "gew/operator.hpp"

namespace gew {

struct Circle {
    double radius = 1.0;
};
// width along x, height along z
struct Rectangle {
    double width = 1.0;
    double height = 1.0;
};
// n_blocks blocks side by side along x, centre-to-centre distance `spacing`
struct Grating {
    int n_blocks = 1;
    double block_w = 1.0;
    double block_h = 1.0;
    double spacing = 2.0;
};

using Shape = std::variant<Circle, Rectangle, Grating>;

struct Scene {
    Shape shape = Circle{};
    double eps_r = 2.0;
    double k0 = 1.0;
    double theta = 0.0;  // radians
    double E0 = 1.0;
    double cx = 0.0, cz = 0.0;

    double chi() const { return eps_r - 1.0; }
    // Throws ConfigError.
    void validate() const;
    // Half extents of the bounding box around (cx, cz).
    double half_width() const;
    double half_height() const;
};

std::string shape_name(const Shape& s);

double contrast_at(double x, double z, const Scene& s);
cplx incident_field(double x, double z, const Scene& s);

// The object must lie inside the z-grid and within margin_x of the outermost
// window centre M*alpha*X. Throws ConfigError.
void check_fits(const Scene& s, const FrameParams& fp, const ZGrid& zg, double margin_x);

// J_inc[m,n,k] = analysis of chi(x, z_k) E^i(x, z_k).
CoeffTensor project_source(const Scene& s, const GaborBasis& basis, const ZGrid& zg);

}  // namespace gew
