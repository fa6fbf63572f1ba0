#ifndef CK_TRAJECTORY_HPP
#define CK_TRAJECTORY_HPP

#include "ck/dynamics.hpp"
#include "ck/invariants.hpp"

namespace ck {

// Parameters of the conic-like orbit equation
//   rho(theta) = (1/p) (1 + e cos(beta (theta - theta0))),   rho = -Theta(r).
struct ConicParams {
    double p = 0.0;      // beta^2 p_theta^2 / gamma
    double e = 0.0;      // (beta/gamma) sqrt(I1^2 + I2^2)
    double theta0 = 0.0; // orientation, fixed to [0, 2 pi / beta)
};

ConicParams conic_params(const SurfaceSpec& s, const ConservedSet& c);

double rho_of_theta(const ConicParams& cp, double beta, double theta);

// Inverse of rho = -Theta(r): r = arccot(L^2 sqrt(K) rho) / sqrt(K), strictly
// monotone from r_north (rho -> +inf) to r_south (rho -> -inf).
double r_from_rho(const SurfaceSpec& s, double rho);

// Max over samples of |(-Theta(r(t))) - rho(theta(t))| with conic parameters
// taken from the first sample.
double compare_orbit(const SurfaceSpec& s, const Trajectory& traj);

} // namespace ck

#endif
