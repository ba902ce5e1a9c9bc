#pragma once

#include <cstddef>

#include "gew/types.hpp"

// Complex vector primitives used by the frame, table and operator loops.
// Each primitive has a portable scalar version and an AVX2/FMA version; the
// dispatch table picks one at runtime.

namespace gew::simd {

enum class Backend { scalar, avx2 };

// sum_i a[i]*b[i]
cplx dotu(const cplx* a, const cplx* b, std::size_t n);
// sum_i conj(a[i])*b[i]
cplx dotc(const cplx* a, const cplx* b, std::size_t n);
// y[i] += alpha*x[i]
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
// y[i] += alpha*x[i] for real x
void axpy_real(cplx alpha, const double* x, cplx* y, std::size_t n);

Backend active_backend();
// Forces a backend; returns false if the CPU cannot run it.
bool set_backend(Backend b);
bool cpu_has_avx2();
const char* backend_name(Backend b);

namespace scalar {
cplx dotu(const cplx* a, const cplx* b, std::size_t n);
cplx dotc(const cplx* a, const cplx* b, std::size_t n);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
void axpy_real(cplx alpha, const double* x, cplx* y, std::size_t n);
}  // namespace scalar

namespace avx2 {
cplx dotu(const cplx* a, const cplx* b, std::size_t n);
cplx dotc(const cplx* a, const cplx* b, std::size_t n);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
void axpy_real(cplx alpha, const double* x, cplx* y, std::size_t n);
}  // namespace avx2

}  // namespace gew::simd
