#ifndef CK_DYNAMICS_HPP
#define CK_DYNAMICS_HPP

#include <vector>

#include "ck/geometry.hpp"
#include "ck/ode.hpp"

namespace ck {

// Canonical state on the physical phase space, mass m = 1. theta is stored
// unreduced so winding is measurable.
struct PhaseState {
    double r = 0.0;
    double theta = 0.0;
    double p_r = 0.0;
    double p_theta = 0.0;
};

enum class Termination { TimeLimit, CollisionApproach, NumericalFailure };

struct TrajectorySample {
    double t;
    PhaseState x;
};

struct Trajectory {
    std::vector<TrajectorySample> samples; // strictly increasing t
    Termination termination = Termination::TimeLimit;
    ode::DenseOutput dense; // queryable interpolant over the integrated span

    const PhaseState& initial() const { return samples.front().x; }
    const PhaseState& final() const { return samples.back().x; }
    double t_final() const { return samples.back().t; }
    PhaseState at(double t) const;
};

double hamiltonian(const SurfaceSpec& s, const PhaseState& x);

// Time derivative of the state under the canonical equations.
PhaseState eom(const SurfaceSpec& s, const PhaseState& x);

struct IntegrateOptions {
    double tol = 1e-10;
    double collision_margin = -1.0; // < 0 => 1e-3 * r_south
};

// Adaptive propagation of the canonical equations from x0 to t_end, stopping
// early with CollisionApproach when r drops below r_north + collision_margin.
Trajectory integrate(const SurfaceSpec& s, const PhaseState& x0, double t_end,
                     double tol = 1e-10, double collision_margin = -1.0);

// Points at which p_r crosses zero along the trajectory, located on the dense
// interpolant.
std::vector<TrajectorySample> radial_turning_points(const SurfaceSpec& s,
                                                    const PhaseState& x0, double t_end,
                                                    double tol = 1e-10);

} // namespace ck

#endif
