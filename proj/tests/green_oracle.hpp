#pragma once

#include <cmath>
#include <numbers>

#include "gew/types.hpp"

namespace oracle {

// Independent Bessel oracle: ascending series in long double for small
// arguments, Hankel asymptotic expansion for large ones.
struct J0Y0 {
    long double j0, y0;
};

inline J0Y0 bessel_series(long double x)
{
    const long double q = x * x / 4.0L;
    long double term = 1.0L, j0 = 1.0L, harmonic = 0.0L, ysum = 0.0L;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<long double>(k) * k);
        harmonic += 1.0L / k;
        j0 += term;
        ysum -= term * harmonic;
    }
    const long double gamma = 0.577215664901532860606512090082402431L;
    const long double y0 = 2.0L / std::numbers::pi_v<long double> * ((std::log(x / 2.0L) + gamma) * j0 + ysum);
    return {j0, y0};
}

inline J0Y0 bessel_asymptotic(long double x)
{
    // P and Q series for order 0
    long double P = 0.0L, Q = 0.0L, t = 1.0L;
    for (int k = 0; k < 12; ++k) {
        // t = prod_{i<2k} (2i+1)^2 / ((2k)! (8x)^(2k))
        P += (k % 2 == 0 ? 1.0L : -1.0L) * t;
        long double t1 = t * (4.0L * k + 1.0L) * (4.0L * k + 1.0L) / ((2.0L * k + 1.0L) * 8.0L * x);
        Q -= (k % 2 == 0 ? 1.0L : -1.0L) * t1;
        t = t1 * (4.0L * k + 3.0L) * (4.0L * k + 3.0L) / ((2.0L * k + 2.0L) * 8.0L * x);
    }
    const long double chi = x - std::numbers::pi_v<long double> / 4.0L;
    const long double amp = std::sqrt(2.0L / (std::numbers::pi_v<long double> * x));
    return {amp * (P * std::cos(chi) - Q * std::sin(chi)), amp * (P * std::sin(chi) + Q * std::cos(chi))};
}

inline gew::cplx hankel_green(double R, double k0)
{
    const long double x = static_cast<long double>(k0) * R;
    const J0Y0 b = x < 14.0L ? bessel_series(x) : bessel_asymptotic(x);
    return gew::cplx(static_cast<double>(-b.y0 / 4.0L), static_cast<double>(-b.j0 / 4.0L));
}

}  // namespace oracle
