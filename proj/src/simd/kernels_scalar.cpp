#include "gew/simd/kernels.hpp"

namespace gew::simd::scalar {

cplx dotu(const cplx* a, const cplx* b, std::size_t n)
{
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    return {re, im};
}

cplx dotc(const cplx* a, const cplx* b, std::size_t n)
{
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n)
{
    const double sr = alpha.real(), si = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = {y[i].real() + sr * xr - si * xi, y[i].imag() + sr * xi + si * xr};
    }
}

void axpy_real(cplx alpha, const double* x, cplx* y, std::size_t n)
{
    const double sr = alpha.real(), si = alpha.imag();
    for (std::size_t i = 0; i < n; ++i)
        y[i] = {y[i].real() + sr * x[i], y[i].imag() + si * x[i]};
}

}  // namespace gew::simd::scalar
