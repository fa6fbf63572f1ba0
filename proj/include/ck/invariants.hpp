#ifndef CK_INVARIANTS_HPP
#define CK_INVARIANTS_HPP

#include "ck/dynamics.hpp"
#include "ck/geometry.hpp"

namespace ck {

// The four first integrals. I1, I2 generalize the Laplace-Runge-Lenz vector:
//   I1 =  sin(b th) p_r p_th - b cos(b th) Theta p_th^2 - (g/b) cos(b th)
//   I2 = -cos(b th) p_r p_th - b sin(b th) Theta p_th^2 - (g/b) sin(b th)
struct ConservedSet {
    double H = 0.0;
    double p_theta = 0.0;
    double I1 = 0.0;
    double I2 = 0.0;

    double magnitude() const; // sqrt(I1^2 + I2^2)
};

ConservedSet conserved(const SurfaceSpec& s, const PhaseState& x);

// | I1^2 + I2^2 - (2 p_th^2 H - K p_th^4 / beta^2 + gamma^2 / beta^2) |.
double dependency_residual(const SurfaceSpec& s, const PhaseState& x);

enum class Integral { H, PTheta, I1, I2 };

double integral_value(const SurfaceSpec& s, const PhaseState& x, Integral which);

// |{F, H}| by central differences in (r, theta, p_r, p_theta). Vanishes for
// the first integrals up to discretization error.
double poisson_bracket_residual(const SurfaceSpec& s, const PhaseState& x,
                                Integral which, double step = 1e-5);

struct DriftReport {
    double dH = 0.0;
    double dPtheta = 0.0;
    double dI1 = 0.0;
    double dI2 = 0.0;

    double max_drift() const;
};

// Max deviation of each integral from its value at the first sample.
DriftReport drift_along_flow(const SurfaceSpec& s, const Trajectory& traj);

} // namespace ck

#endif
