#pragma once

#include "gew/frame.hpp"
#include "gew/types.hpp"

namespace gew {

struct ZGrid {
    double z_min = 0.0;
    double z_max = 1.0;
    double delta = 0.05;
    int n_k = 20;

    double z(int l) const { return z_min + delta * l; }
    int num_k() const { return n_k + 1; }
    // Throws ConfigError.
    void validate() const;
    static ZGrid make(double z_min, double delta, int n_k);
};

// Closed forms of the reduced coupling integrals. q is the spatial and p the
// spectral index combination; d = k - l.
cplx f_spatial(int q, int p, cplx xi, const FrameParams& fp);
cplx f_spectral(int q, int p, cplx zeta, const FrameParams& fp);

// Integral of the falling half of a triangle against exp(-(z_l - z')^2 xi^2).
cplx g_z_spatial(int d, cplx xi, const ZGrid& zg);
// Same with xi = 1/zeta.
cplx g_z_spectral(int d, cplx zeta, const ZGrid& zg);

// Full triangle Lambda_k; only one half survives at k = 0 and k = n_k.
// IndexError for k or l outside [0, n_k].
cplx h_z_spatial(int k, int l, cplx xi, const ZGrid& zg);
cplx h_z_spectral(int k, int l, cplx zeta, const ZGrid& zg);

}  // namespace gew
