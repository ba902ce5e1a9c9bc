#pragma once

#include "gew/types.hpp"

namespace gew {

// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
cplx faddeeva_w(cplx z);

// Error function family for complex arguments. erf/erfc throw OverflowGuard
// when exp(-z^2) would overflow; erfcx never does.
cplx erf_complex(cplx z);
cplx erfc_complex(cplx z);
cplx erfcx_complex(cplx z);

// erf(b) - erf(a), arranged to avoid cancellation when both arguments lie far
// out in the same half plane.
cplx erf_diff(cplx a, cplx b);

// exp(z) - 1 without cancellation for small |z|.
cplx expm1_complex(cplx z);

// Cylinder functions of integer order and real argument.
double bessel_j(int n, double x);
double bessel_y(int n, double x);
cplx hankel2(int n, double x);
// d/dx of the above.
double bessel_j_prime(int n, double x);
cplx hankel2_prime(int n, double x);

}  // namespace gew
