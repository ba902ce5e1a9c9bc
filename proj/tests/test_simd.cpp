#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gew/simd/kernels.hpp"
#include "test_util.hpp"

using namespace gew;

TEST_CASE("scalar and avx2 complex kernels agree")
{
    if (!simd::cpu_has_avx2()) return;
    for (std::size_t n : {0u, 1u, 2u, 3u, 7u, 64u, 1001u}) {
        const cvec a = testutil::random_cvec(n, 1 + n), b = testutil::random_cvec(n, 100 + n);
        const double scale = 1.0 + std::sqrt(static_cast<double>(n));
        CHECK(std::abs(simd::scalar::dotu(a.data(), b.data(), n) - simd::avx2::dotu(a.data(), b.data(), n)) <=
              1e-13 * scale);
        CHECK(std::abs(simd::scalar::dotc(a.data(), b.data(), n) - simd::avx2::dotc(a.data(), b.data(), n)) <=
              1e-13 * scale);
        cvec y1 = b, y2 = b;
        const cplx alpha{0.3, -1.7};
        simd::scalar::axpy(alpha, a.data(), y1.data(), n);
        simd::avx2::axpy(alpha, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-14 * (1 + std::abs(y1[i])));
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = a[i].real();
        y1 = b;
        y2 = b;
        simd::scalar::axpy_real(alpha, r.data(), y1.data(), n);
        simd::avx2::axpy_real(alpha, r.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-14 * (1 + std::abs(y1[i])));
    }
}

TEST_CASE("scalar kernels match the naive definitions")
{
    const std::size_t n = 37;
    const cvec a = testutil::random_cvec(n, 5), b = testutil::random_cvec(n, 6);
    cplx u = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        u += a[i] * b[i];
        c += std::conj(a[i]) * b[i];
    }
    CHECK(std::abs(simd::scalar::dotu(a.data(), b.data(), n) - u) < 1e-12);
    CHECK(std::abs(simd::scalar::dotc(a.data(), b.data(), n) - c) < 1e-12);
}

TEST_CASE("dispatch can be forced")
{
    const auto before = simd::active_backend();
    CHECK(simd::set_backend(simd::Backend::scalar));
    CHECK(simd::active_backend() == simd::Backend::scalar);
    simd::set_backend(before);
}
