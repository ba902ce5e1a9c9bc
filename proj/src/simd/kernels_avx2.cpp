#include <immintrin.h>

#include "gew/simd/kernels.hpp"

namespace gew::simd::avx2 {

namespace {

inline cplx hsum_pairs(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    alignas(16) double out[2];
    _mm_store_pd(out, s);
    return {out[0], out[1]};
}

// Accumulates a*b into (acc_r, acc_i) with the re/im combination deferred.
inline void mac(__m256d a, __m256d b, __m256d& acc_r, __m256d& acc_i)
{
    acc_r = _mm256_fmadd_pd(a, _mm256_movedup_pd(b), acc_r);
    acc_i = _mm256_fmadd_pd(_mm256_permute_pd(a, 0x5), _mm256_permute_pd(b, 0xF), acc_i);
}

}  // namespace

cplx dotu(const cplx* a, const cplx* b, std::size_t n)
{
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d r0 = _mm256_setzero_pd(), i0 = _mm256_setzero_pd();
    __m256d r1 = _mm256_setzero_pd(), i1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        mac(_mm256_loadu_pd(pa + 2 * k), _mm256_loadu_pd(pb + 2 * k), r0, i0);
        mac(_mm256_loadu_pd(pa + 2 * k + 4), _mm256_loadu_pd(pb + 2 * k + 4), r1, i1);
    }
    for (; k + 2 <= n; k += 2)
        mac(_mm256_loadu_pd(pa + 2 * k), _mm256_loadu_pd(pb + 2 * k), r0, i0);
    const __m256d acc = _mm256_addsub_pd(_mm256_add_pd(r0, r1), _mm256_add_pd(i0, i1));
    cplx s = hsum_pairs(acc);
    for (; k < n; ++k) s += a[k] * b[k];
    return s;
}

cplx dotc(const cplx* a, const cplx* b, std::size_t n)
{
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    __m256d r0 = _mm256_setzero_pd(), i0 = _mm256_setzero_pd();
    __m256d r1 = _mm256_setzero_pd(), i1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        mac(_mm256_xor_pd(_mm256_loadu_pd(pa + 2 * k), conj_mask), _mm256_loadu_pd(pb + 2 * k), r0, i0);
        mac(_mm256_xor_pd(_mm256_loadu_pd(pa + 2 * k + 4), conj_mask), _mm256_loadu_pd(pb + 2 * k + 4), r1,
            i1);
    }
    for (; k + 2 <= n; k += 2)
        mac(_mm256_xor_pd(_mm256_loadu_pd(pa + 2 * k), conj_mask), _mm256_loadu_pd(pb + 2 * k), r0, i0);
    const __m256d acc = _mm256_addsub_pd(_mm256_add_pd(r0, r1), _mm256_add_pd(i0, i1));
    cplx s = hsum_pairs(acc);
    for (; k < n; ++k) s += std::conj(a[k]) * b[k];
    return s;
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n)
{
    const double* px = reinterpret_cast<const double*>(x);
    double* py = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d xv = _mm256_loadu_pd(px + 2 * k);
        const __m256d yv = _mm256_loadu_pd(py + 2 * k);
        // alpha*x = ar*(xr,xi) + ai*(-xi,xr)
        const __m256d t = _mm256_mul_pd(ai, _mm256_permute_pd(xv, 0x5));
        const __m256d prod = _mm256_fmaddsub_pd(ar, xv, t);
        _mm256_storeu_pd(py + 2 * k, _mm256_add_pd(yv, prod));
    }
    for (; k < n; ++k) y[k] += alpha * x[k];
}

void axpy_real(cplx alpha, const double* x, cplx* y, std::size_t n)
{
    double* py = reinterpret_cast<double*>(y);
    const __m256d av = _mm256_set_pd(alpha.imag(), alpha.real(), alpha.imag(), alpha.real());
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d xv = _mm256_set_pd(x[k + 1], x[k + 1], x[k], x[k]);
        const __m256d yv = _mm256_loadu_pd(py + 2 * k);
        _mm256_storeu_pd(py + 2 * k, _mm256_fmadd_pd(av, xv, yv));
    }
    for (; k < n; ++k) y[k] += alpha * x[k];
}

}  // namespace gew::simd::avx2
