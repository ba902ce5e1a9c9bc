#include <cmath>

#include "gew/error.hpp"
#include "gew/scene.hpp"

namespace gew {

namespace {

template <class... F>
struct overloaded : F... {
    using F::operator()...;
};

bool inside(double x, double z, const Shape& shape)
{
    return std::visit(overloaded{[&](const Circle& c) { return x * x + z * z <= c.radius * c.radius; },
                                 [&](const Rectangle& r) {
                                     return std::abs(x) <= 0.5 * r.width && std::abs(z) <= 0.5 * r.height;
                                 },
                                 [&](const Grating& g) {
                                     if (std::abs(z) > 0.5 * g.block_h) return false;
                                     // nearest block centre
                                     const double first = -0.5 * (g.n_blocks - 1) * g.spacing;
                                     const double j = std::round((x - first) / g.spacing);
                                     if (j < 0 || j > g.n_blocks - 1) return false;
                                     return std::abs(x - (first + j * g.spacing)) <= 0.5 * g.block_w;
                                 }},
                      shape);
}

}  // namespace

std::string shape_name(const Shape& s)
{
    return std::visit(overloaded{[](const Circle&) { return std::string("circle"); },
                                 [](const Rectangle&) { return std::string("rectangle"); },
                                 [](const Grating&) { return std::string("grating"); }},
                      s);
}

void Scene::validate() const
{
    if (!(eps_r >= 1.0)) throw ConfigError("scene.eps_r must be >= 1");
    if (!(k0 > 0.0)) throw ConfigError("scene.k0 must be positive");
    if (!std::isfinite(theta)) throw ConfigError("scene.theta must be finite");
    std::visit(overloaded{[](const Circle& c) {
                              if (!(c.radius > 0.0)) throw ConfigError("scene.radius must be positive");
                          },
                          [](const Rectangle& r) {
                              if (!(r.width > 0.0 && r.height > 0.0))
                                  throw ConfigError("scene.width and scene.height must be positive");
                          },
                          [](const Grating& g) {
                              if (g.n_blocks < 1) throw ConfigError("scene.n_blocks must be >= 1");
                              if (!(g.block_w > 0.0 && g.block_h > 0.0))
                                  throw ConfigError("scene.block_w and scene.block_h must be positive");
                              if (g.n_blocks > 1 && !(g.spacing > g.block_w))
                                  throw ConfigError("scene.spacing must exceed block_w");
                          }},
               shape);
}

double Scene::half_width() const
{
    return std::visit(overloaded{[](const Circle& c) { return c.radius; },
                                 [](const Rectangle& r) { return 0.5 * r.width; },
                                 [](const Grating& g) { return 0.5 * ((g.n_blocks - 1) * g.spacing + g.block_w); }},
                      shape);
}

double Scene::half_height() const
{
    return std::visit(overloaded{[](const Circle& c) { return c.radius; },
                                 [](const Rectangle& r) { return 0.5 * r.height; },
                                 [](const Grating& g) { return 0.5 * g.block_h; }},
                      shape);
}

double contrast_at(double x, double z, const Scene& s)
{
    return inside(x - s.cx, z - s.cz, s.shape) ? s.chi() : 0.0;
}

cplx incident_field(double x, double z, const Scene& s)
{
    return s.E0 * std::polar(1.0, s.k0 * (x * std::cos(s.theta) + z * std::sin(s.theta)));
}

void check_fits(const Scene& s, const FrameParams& fp, const ZGrid& zg, double margin_x)
{
    if (s.cz - s.half_height() < zg.z_min - 1e-12 || s.cz + s.half_height() > zg.z_max + 1e-12)
        throw ConfigError("scene does not fit inside [zgrid.z_min, zgrid.z_max]");
    const double reach = fp.M * fp.alpha * fp.X + margin_x;
    if (std::abs(s.cx) + s.half_width() > reach + 1e-12)
        throw ConfigError("scene extends beyond the frame coverage |x| <= " + std::to_string(reach) +
                          "; increase frame.M");
}

CoeffTensor project_source(const Scene& s, const GaborBasis& basis, const ZGrid& zg)
{
    const FrameParams& fp = basis.params();
    const XGrid& g = basis.grid();
    CoeffTensor J = CoeffTensor::zeros(fp, zg);
    cvec f(static_cast<std::size_t>(g.n));
    for (int k = 0; k <= zg.n_k; ++k) {
        const double z = zg.z(k);
        bool any = false;
        for (int i = 0; i < g.n; ++i) {
            const double c = contrast_at(g.x(i), z, s);
            f[static_cast<std::size_t>(i)] = c == 0.0 ? cplx(0.0) : c * incident_field(g.x(i), z, s);
            any = any || c != 0.0;
        }
        if (!any) continue;
        const cvec c = basis.analyze(f);
        std::copy(c.begin(), c.end(), J.slice(k));
    }
    return J;
}

}  // namespace gew
