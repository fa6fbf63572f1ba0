#ifndef CK_BLOWUP_HPP
#define CK_BLOWUP_HPP

#include <array>

#include "ck/dynamics.hpp"
#include "ck/geometry.hpp"
#include "ck/numerics.hpp"
#include "ck/ode.hpp"

namespace ck {

// Blown-up state: v = p_r / sqrt|Theta|, u = p_theta / (f sqrt|Theta|).
// Evolution runs in the rescaled time tau with dtau = (sqrt|Theta| / f) dt.
struct McGeheeState {
    double r = 0.0;
    double theta = 0.0;
    double v = 0.0;
    double u = 0.0;
};

// Which pole's chart the regularized field is written in. North: Theta < 0
// (r below the equator); South: Theta > 0.
enum class Chart { North, South };

McGeheeState to_mcgehee(const SurfaceSpec& s, const PhaseState& x);
PhaseState from_mcgehee(const SurfaceSpec& s, const McGeheeState& y);

// tau-derivative of (r, v, theta, u). The coefficient 1/(f Theta) is evaluated
// in the closed form -|beta|/cos(sqrt(K) r), which is analytic through r = 0,
// so the field extends smoothly onto the collision manifold.
McGeheeState regularized_eom(const SurfaceSpec& s, const McGeheeState& y,
                             Chart chart = Chart::North);

// RHS over the augmented array [r, v, theta, u, t_phys] with t' = f/sqrt|Theta|.
ode::Rhs regularized_rhs(const SurfaceSpec& s, Chart chart);

// | sgn(Theta) (u^2+v^2)/2 + gamma - h/Theta | at the given state.
double energy_relation_residual(const SurfaceSpec& s, const McGeheeState& y, double h);

// The collision manifold N = {r = r_north, u^2 + v^2 = 2 gamma}, a torus in
// (theta mod 2pi, chi) with u = R cos(chi), v = R sin(chi), R = sqrt(2 gamma).
struct CollisionManifold {
    double gamma_c = 1.0;
    double radius = 0.0; // sqrt(2 gamma)
};

CollisionManifold collision_manifold(const SurfaceSpec& s);
McGeheeState manifold_point(const SurfaceSpec& s, double theta, double chi);
double chi_of(const McGeheeState& y); // atan2(v, u)

// Flow on N in closed form: chi advances at slope |beta|/2 in theta.
double flow_on_manifold(const SurfaceSpec& s, double chi0, double theta_start,
                        double theta_end);

enum class RegularizedTermination { TauLimit, ChartExit, NumericalFailure };

struct RegularizedSample {
    double tau;
    McGeheeState y;
    double t_phys; // physical time recovered by quadrature
};

struct RegularizedTrajectory {
    std::vector<RegularizedSample> samples;
    RegularizedTermination termination = RegularizedTermination::TauLimit;
    ode::DenseOutput dense; // over [r, v, theta, u, t]

    const RegularizedSample& final() const { return samples.back(); }
};

struct RegularizedOptions {
    double tol = 1e-10;
    Chart chart = Chart::North;
    double chart_exit_margin = -1.0; // < 0 => 1e-3 * r_south
};

RegularizedTrajectory integrate_regularized(const SurfaceSpec& s, const McGeheeState& y0,
                                            double tau_end, double tol = 1e-10,
                                            RegularizedOptions opts = {});

// Equilibrium circles S+/- on N and the Eq.-(20) spectrum at them.
struct Equilibrium {
    double r = 0.0;
    double v = 0.0; // +-sqrt(2 gamma)
    double u = 0.0;
    std::array<double, 4> eigenvalues{}; // sorted ascending
};

// first: S+ (v > 0), second: S- (v < 0)
std::pair<Equilibrium, Equilibrium> equilibria_and_eigenvalues(const SurfaceSpec& s);

// Central-difference Jacobian of the 4-component regularized field at y,
// ordered (r, v, theta, u).
num::Mat4 regularized_jacobian_fd(const SurfaceSpec& s, const McGeheeState& y,
                                  double step = 1e-6, Chart chart = Chart::North);

} // namespace ck

#endif
