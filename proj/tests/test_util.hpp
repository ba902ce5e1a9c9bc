#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "gew/types.hpp"

namespace testutil {

inline double rel_l2(const gew::cvec& a, const gew::cvec& b)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

inline double rel_err(gew::cplx a, gew::cplx b) { return std::abs(a - b) / std::abs(b); }

inline gew::cvec random_cvec(std::size_t n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    gew::cvec v(n);
    for (auto& x : v) x = {d(rng), d(rng)};
    return v;
}

}  // namespace testutil
