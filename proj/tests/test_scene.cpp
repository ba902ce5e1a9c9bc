#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gew/error.hpp"
#include "gew/scene.hpp"
#include "test_util.hpp"

using namespace gew;

namespace {

FrameParams frame()
{
    FrameParams fp;
    fp.alpha = fp.beta = std::sqrt(2.0 / 3.0);
    return fp;
}

const FrameParams fp = frame();
const ZGrid zg = ZGrid::make(-1.4, 0.05, 56);

Scene circle()
{
    Scene s;
    s.shape = Circle{1.35};
    s.eps_r = 2.0;
    s.k0 = 1.45;
    return s;
}

Scene rectangle()
{
    Scene s;
    s.shape = Rectangle{5.0, 2.0};
    s.eps_r = 2.0;
    s.k0 = 0.8388;
    s.theta = pi / 2;
    return s;
}

Scene grating()
{
    Scene s;
    s.shape = Grating{5, 1.0, 1.4, 2.0};
    s.eps_r = 2.0;
    s.k0 = 1.5;
    s.theta = pi / 4;
    return s;
}

const GaborBasis& basis()
{
    static const GaborBasis b(fp, XGrid::standard(fp), fit_dual_biorthogonal(zak_dual_window(fp), 2, 3, fp));
    return b;
}

}  // namespace

TEST_CASE("contrast values")
{
    const Scene c = circle();
    CHECK(contrast_at(0, 0, c) == 1.0);
    CHECK(contrast_at(2, 0, c) == 0.0);
    CHECK(contrast_at(1.35, 0, c) == 1.0);
    CHECK(contrast_at(0.96, 0.96, c) == 0.0);
    const Scene r = rectangle();
    CHECK(contrast_at(0, 0, r) == 1.0);
    CHECK(contrast_at(2.4, 0.9, r) == 1.0);
    CHECK(contrast_at(0, 1.1, r) == 0.0);
    CHECK(contrast_at(2.6, 0, r) == 0.0);
    Scene shifted = c;
    shifted.cx = 0.5;
    shifted.cz = -0.2;
    CHECK(contrast_at(1.8, -0.2, shifted) == 1.0);
    CHECK(contrast_at(-0.9, -0.2, shifted) == 0.0);
    // values are exactly 0 or eps_r - 1
    Scene dense = c;
    dense.eps_r = 3.7;
    for (double x = -2; x <= 2; x += 0.013)
        for (double z = -2; z <= 2; z += 0.017) {
            const double v = contrast_at(x, z, dense);
            CHECK((v == 0.0 || v == dense.eps_r - 1.0));
        }
}

TEST_CASE("grating has one support interval per block")
{
    const Scene g = grating();
    for (double z : {-0.69, -0.3, 0.0, 0.5, 0.7}) {
        int intervals = 0;
        double prev = 0.0;
        for (double x = -6.0; x <= 6.0; x += 0.001) {
            const double v = contrast_at(x, z, g);
            if (v != 0.0 && prev == 0.0) ++intervals;
            prev = v;
        }
        CHECK(intervals == 5);
    }
    for (int j = 0; j < 5; ++j) {
        CHECK(contrast_at(-4.0 + 2.0 * j, 0.0, g) == 1.0);
        CHECK(contrast_at(-3.0 + 2.0 * j, 0.0, g) == 0.0);
    }
    CHECK(contrast_at(0.0, 0.71, g) == 0.0);
}

TEST_CASE("incident plane wave")
{
    Scene s = circle();
    s.E0 = 2.5;
    CHECK(incident_field(0, 0, s) == cplx(2.5));
    for (double x : {-1.0, 0.3, 2.0})
        for (double z : {-1.0, 0.4}) {
            CHECK(std::abs(incident_field(x, z, s)) == doctest::Approx(2.5).epsilon(1e-15));
            CHECK(incident_field(x, z, s) == incident_field(x, 0.0, s));
        }
    s.theta = pi / 2;
    CHECK(std::abs(incident_field(0.7, 0.2, s) - incident_field(-3.0, 0.2, s)) < 1e-14);
    CHECK(std::abs(incident_field(0.0, 0.2, s) - 2.5 * std::polar(1.0, 1.45 * 0.2)) < 1e-14);
}

TEST_CASE("scene validation and coverage")
{
    Scene s = circle();
    s.eps_r = 0.5;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = circle();
    s.shape = Circle{-1.0};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.shape = Grating{3, 1.0, 1.0, 0.5};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    CHECK_NOTHROW(check_fits(circle(), fp, zg, 0.5 * fp.X));
    CHECK_NOTHROW(check_fits(rectangle(), fp, zg, 0.5 * fp.X));
    Scene tall = circle();
    tall.shape = Circle{1.5};
    CHECK_THROWS_AS(check_fits(tall, fp, zg, 0.5 * fp.X), ConfigError);
    Scene wide = rectangle();
    wide.shape = Rectangle{7.0, 1.0};
    CHECK_THROWS_AS(check_fits(wide, fp, zg, 0.5 * fp.X), ConfigError);
    FrameParams g = fp;
    g.M = 11;
    g.N = 7;
    CHECK_NOTHROW(check_fits(grating(), g, ZGrid::make(-0.825, 0.05, 33), 0.5 * g.X));
    CHECK(shape_name(grating().shape) == "grating");
}

TEST_CASE("projected source: zero contrast and linearity")
{
    Scene vacuum = circle();
    vacuum.eps_r = 1.0;
    for (cplx v : project_source(vacuum, basis(), zg).data) CHECK(v == cplx(0.0));

    const Scene s = circle();
    Scene doubled = s;
    doubled.E0 = 2.0;
    const CoeffTensor a = project_source(s, basis(), zg), b = project_source(doubled, basis(), zg);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b.data[i] == 2.0 * a.data[i]);
    Scene stronger = s;
    stronger.eps_r = 4.0;
    const CoeffTensor c = project_source(stronger, basis(), zg);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(c.data[i] - 3.0 * a.data[i]) <= 1e-15 * (1 + std::abs(c.data[i])));
    // slices above and below the circle are empty
    for (int k : {0, 56})
        for (int i = 0; i < fp.size(); ++i) CHECK(a.slice(k)[i] == cplx(0.0));
}

TEST_CASE("projected source reproduces the sampled contrast source")
{
    const XGrid& g = basis().grid();
    for (const Scene& s : {circle(), rectangle()}) {
        const CoeffTensor J = project_source(s, basis(), zg);
        double num = 0.0, den = 0.0;
        for (int k = 0; k <= zg.n_k; ++k) {
            const cvec f = basis().synthesize(cvec(J.slice(k), J.slice(k) + fp.size()));
            for (int i = 0; i < g.n; ++i) {
                const cplx ref = contrast_at(g.x(i), zg.z(k), s) * incident_field(g.x(i), zg.z(k), s);
                num += std::norm(f[static_cast<std::size_t>(i)] - ref);
                den += std::norm(ref);
            }
        }
        const double rel = std::sqrt(num / den);
        MESSAGE(shape_name(s.shape), " relative L2 of the reconstruction ", rel);
        CHECK(rel <= 2e-2);
    }
}
