#include <atomic>
#include <cstdlib>
#include <cstring>

#include "gew/simd/kernels.hpp"

namespace gew::simd {

namespace {

struct Table {
    cplx (*dotu)(const cplx*, const cplx*, std::size_t);
    cplx (*dotc)(const cplx*, const cplx*, std::size_t);
    void (*axpy)(cplx, const cplx*, cplx*, std::size_t);
    void (*axpy_real)(cplx, const double*, cplx*, std::size_t);
    Backend backend;
};

constexpr Table scalar_table{scalar::dotu, scalar::dotc, scalar::axpy, scalar::axpy_real, Backend::scalar};
constexpr Table avx2_table{avx2::dotu, avx2::dotc, avx2::axpy, avx2::axpy_real, Backend::avx2};

const Table* pick_default()
{
    const char* env = std::getenv("GEW_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_table;
    return cpu_has_avx2() ? &avx2_table : &scalar_table;
}

std::atomic<const Table*>& current()
{
    static std::atomic<const Table*> t{pick_default()};
    return t;
}

}  // namespace

bool cpu_has_avx2()
{
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

Backend active_backend() { return current().load()->backend; }

bool set_backend(Backend b)
{
    if (b == Backend::avx2 && !cpu_has_avx2()) return false;
    current().store(b == Backend::avx2 ? &avx2_table : &scalar_table);
    return true;
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

cplx dotu(const cplx* a, const cplx* b, std::size_t n) { return current().load()->dotu(a, b, n); }
cplx dotc(const cplx* a, const cplx* b, std::size_t n) { return current().load()->dotc(a, b, n); }
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) { current().load()->axpy(alpha, x, y, n); }
void axpy_real(cplx alpha, const double* x, cplx* y, std::size_t n)
{
    current().load()->axpy_real(alpha, x, y, n);
}

}  // namespace gew::simd
