#pragma once

#include <complex>
#include <numbers>
#include <vector>

namespace gew {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx jj{0.0, 1.0};

}  // namespace gew
