#pragma once

#include "gew/types.hpp"

namespace gew {

struct EwaldConfig {
    double split = 1.0;
    double k0 = 1.0;
    double quad_tol = 1e-10;
    double trunc_tol = 1e-14;
    // Throws ConfigError.
    void validate() const;
};

// (1/4j) H0^(2)(k0 R); DomainError for R <= 0.
cplx green_exact(double R, double k0);

// Integration contours. xi_path runs from 0 to infinity through the first
// quadrant; zeta_path is its image under w -> 1/w, xi -> 1/xi.
cplx xi_path(double w, double split);
cplx xi_path_derivative(double w, double split);
cplx zeta_path(double w, double split);
cplx zeta_path_derivative(double w, double split);

// Real-axis part, xi in [split, inf).
cplx green_spatial(double dx, double dz, const EwaldConfig& cfg);
// Contour part, xi in (0, split]; DomainError at R = 0.
cplx green_spectral(double dx, double dz, const EwaldConfig& cfg);

// 2^(-1/4) sqrt(k0/delta).
double optimal_split(double k0, double delta);

// Upper end of the real-axis xi range used by green_spatial.
double spatial_cutoff(double R, const EwaldConfig& cfg);

// Far end of the straight spectral contour segment; beyond it the contour is
// closed along a steepest-descent ray.
double spectral_closure_point(double R, double split);

// Integrates f(zeta) dzeta from zeta0 to infinity along
// zeta0 + tau exp(-3j pi/8), where exp(k0^2 zeta^2/4) decays; tau is cut
// where that factor drops below e^-40.
struct ClosureRay {
    cplx origin;
    cplx direction;
    double tau_max;
    cplx at(double tau) const { return origin + tau * direction; }
};
ClosureRay spectral_closure_ray(double w_c, double k0);

}  // namespace gew
