#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "gew/error.hpp"
#include "gew/green.hpp"
#include "green_oracle.hpp"
#include "test_util.hpp"

using namespace gew;

namespace {

EwaldConfig config(double k0, double delta = 0.05)
{
    EwaldConfig c;
    c.k0 = k0;
    c.split = optimal_split(k0, delta);
    return c;
}

}  // namespace

TEST_CASE("green_exact against the series oracle")
{
    // golden from the oracle at 30 digits
    const cplx g = green_exact(1.0, 1.45);
    CHECK(g.real() == doctest::Approx(-0.0902518493234036436941624015141).epsilon(1e-13));
    CHECK(g.imag() == doctest::Approx(-0.134885320099599599288598186617).epsilon(1e-13));
    for (double x : {1e-3, 0.05, 0.5, 1.0, 3.7, 9.0, 12.5, 16.0, 25.0, 40.0})
        CHECK(testutil::rel_err(green_exact(x / 1.45, 1.45), oracle::hankel_green(x / 1.45, 1.45)) < 1e-12);
}

TEST_CASE("green_exact near the origin and far away")
{
    // 4j G = H0^(2) = J0 - j Y0, so Im(4j G) = -Y0 -> +inf
    const cplx h = 4.0 * jj * green_exact(1e-6, 1.0);
    CHECK(h.imag() > 8.0);
    const double x = 50.0;
    CHECK(std::abs(green_exact(x, 1.0)) == doctest::Approx(0.25 * std::sqrt(2.0 / (pi * x))).epsilon(0.01));
    CHECK_THROWS_AS(green_exact(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(green_exact(-1.0, 1.0), DomainError);
}

TEST_CASE("contour paths")
{
    const double E = 3.3;
    CHECK(xi_path(E / 4, E) == cplx(E / 4, E / 4));
    CHECK(xi_path(E, E) == cplx(E, 0.0));
    CHECK(xi_path(2 * E, E) == cplx(2 * E, 0.0));
    CHECK(std::abs(zeta_path(1 / E, E) - 1 / E) < 1e-15);
    CHECK(std::abs(zeta_path(2 / E, E) - cplx(1, -1) / E) < 1e-15);
    // both branches at the junctions
    auto left = [](double w) { return std::nextafter(w, 0.0); };
    auto right = [](double w) { return std::nextafter(w, 1e300); };
    for (double w : {E / 2, E}) CHECK(std::abs(xi_path(left(w), E) - xi_path(right(w), E)) < 1e-14);
    CHECK(std::abs(zeta_path(left(2 / E), E) - zeta_path(right(2 / E), E)) < 1e-14);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double w = 1 / E + 60.0 / E * u(rng);
        CHECK(std::abs(zeta_path(w, E) * xi_path(1.0 / w, E) - 1.0) < 1e-14);
        const double v = 3.0 * E * u(rng);
        CHECK(std::real(xi_path(v, E) * xi_path(v, E)) >= 0.0);
        // derivatives against central differences
        const double h = 1e-6;
        if (std::abs(v - E / 2) > 2 * h && std::abs(v - E) > 2 * h && v > 2 * h) {
            const cplx fd = (xi_path(v + h, E) - xi_path(v - h, E)) / (2 * h);
            CHECK(std::abs(fd - xi_path_derivative(v, E)) < 1e-8);
        }
        if (std::abs(w - 2 / E) > 2 * h && w - 1 / E > 2 * h) {
            const cplx fd = (zeta_path(w + h, E) - zeta_path(w - h, E)) / (2 * h);
            CHECK(std::abs(fd - zeta_path_derivative(w, E)) < 1e-7);
        }
    }
}

TEST_CASE("optimal split")
{
    CHECK(optimal_split(1.45, 0.05) == doctest::Approx(4.52836).epsilon(1e-5));
    CHECK(optimal_split(1.5, 0.05) == doctest::Approx(std::pow(2.0, -0.25) * std::sqrt(30.0)).epsilon(1e-14));
    for (double k0 : {0.8388, 1.45, 1.5}) {
        const double E = optimal_split(k0, 0.05);
        const double lhs = 0.05 * 0.05 * E * E, rhs = k0 * k0 / (2 * E * E);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    }
}

TEST_CASE("split identity over the working range")
{
    for (double k0 : {0.8388, 1.45, 1.5}) {
        const EwaldConfig c = config(k0);
        for (int i = 0; i < 30; ++i) {
            const double R = 1e-3 * std::pow(3e4, i / 29.0) / k0;
            const cplx total = green_spatial(R, 0.0, c) + green_spectral(R, 0.0, c);
            CHECK(testutil::rel_err(total, oracle::hankel_green(R, k0)) <= 1e-8);
        }
    }
}

TEST_CASE("the total does not depend on the split point")
{
    const EwaldConfig c = config(1.45);
    for (double kR : {0.05, 0.5, 1.0, 5.0, 20.0}) {
        const double R = kR / 1.45;
        const cplx ref = green_spatial(R, 0, c) + green_spectral(R, 0, c);
        for (double f : {0.5, 0.8, 1.3, 2.0}) {
            EwaldConfig c2 = c;
            c2.split *= f;
            CHECK(testutil::rel_err(green_spatial(R, 0, c2) + green_spectral(R, 0, c2), ref) <= 1e-8);
        }
    }
}

TEST_CASE("both parts are radial")
{
    const EwaldConfig c = config(1.45);
    CHECK(testutil::rel_err(green_spatial(0.3, 0.4, c), green_spatial(0.5, 0.0, c)) < 1e-12);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 2 * pi);
    for (int i = 0; i < 10; ++i) {
        const double R = 0.05 + 0.4 * i, t = u(rng);
        CHECK(testutil::rel_err(green_spatial(R * std::cos(t), R * std::sin(t), c), green_spatial(0.0, R, c)) < 1e-12);
        CHECK(testutil::rel_err(green_spectral(R * std::cos(t), R * std::sin(t), c), green_spectral(0.0, R, c)) <
              1e-12);
    }
}

TEST_CASE("behaviour at R = 0")
{
    const EwaldConfig c = config(1.45);
    const cplx s = green_spatial(0.0, 0.0, c);
    CHECK(std::isfinite(s.real()));
    CHECK(std::isfinite(s.imag()));
    CHECK_THROWS_AS(green_spectral(0.0, 0.0, c), DomainError);
}

TEST_CASE("configuration checks")
{
    EwaldConfig c = config(1.0);
    c.quad_tol = 0.0;
    CHECK_THROWS_AS(green_spatial(1.0, 0.0, c), ConfigError);
    c = config(1.0);
    c.split = -1.0;
    CHECK_THROWS_AS(green_spectral(1.0, 0.0, c), ConfigError);
    CHECK_THROWS_AS(optimal_split(0.0, 0.05), DomainError);
}
