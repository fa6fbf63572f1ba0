#ifndef CK_BLOCK_HPP
#define CK_BLOCK_HPP

#include <optional>
#include <string>

#include "ck/blowup.hpp"
#include "ck/geometry.hpp"

namespace ck {

// Isolating block B(h, delta) = { 1/|Theta(r)| <= delta } around the north
// pole at energy h. The boundary b is the circle u^2 + v^2 = 2 gamma + 2 h
// delta at r = r_delta; entries have v < 0, exits v > 0.
struct BlockSpec {
    double h = 0.0;
    double delta = 0.0;
    double r_delta = 0.0;
    double k1 = 0.0; // |Theta| f            at r_delta
    double k2 = 0.0; // beta Theta |Theta| f^2 at r_delta
    double boundary_radius_sq = 0.0; // 2 gamma + 2 h delta

    double u_max() const;
};

// delta admissibility cap used when h = 0 (gamma/|h| is unbounded there).
inline constexpr double kZeroEnergyDeltaCap = 1e3;

BlockSpec make_block(const SurfaceSpec& s, double h, double delta);

// Lemma-4 convexity bracket (h delta + gamma) f'(r_delta)^2 - gamma beta^2/2;
// the block is admissible only while this is positive.
double block_convexity_margin(const SurfaceSpec& s, double h, double delta);

// An admissible delta for which the boundary phase k2 u^2 + gamma/beta stays
// positive for |u| <= grid_fraction * u_max, so the principal-branch zeta
// formula is valid on that whole annulus.
double choose_block_delta(const SurfaceSpec& s, double h, double grid_fraction = 0.95);

// Principal-branch angle from the boundary values of the Runge-Lenz integrals;
// beta*zeta lies in (0, pi), zeta(0) = pi/(2 beta).
double zeta(const BlockSpec& bs, const SurfaceSpec& s, double u);

// Theta-shift of the map across the block. Undefined at u = 0; the one-sided
// limits are +-2 pi / |beta|.
double gamma_exit(const BlockSpec& bs, const SurfaceSpec& s, double u);
double gamma_exit_limit(const SurfaceSpec& s, int sign);

struct BoundaryPoint {
    double theta = 0.0;
    double u = 0.0;
    double v = 0.0;
};

// Analytic across-the-block map: (theta, u) on the entry circle to the exit
// point (theta + Gamma(u), u, +sqrt(R^2 - u^2)).
BoundaryPoint map_across_block(const BlockSpec& bs, const SurfaceSpec& s, double theta,
                               double u);

struct TransitResult {
    double theta_out = 0.0;
    double u_out = 0.0;
    double v_out = 0.0;
    double tau_transit = 0.0;
};

// The same map realized by integrating the regularized field from entry to
// the event-detected exit crossing.
TransitResult numeric_transit(const BlockSpec& bs, const SurfaceSpec& s, double theta,
                              double u, double tol = 1e-11, double tau_cap = -1.0);

// Gamma(0+-) from numeric transits at a shrinking |u| sequence, linearly
// extrapolated to u = 0.
double gamma_limit_extrapolated(const BlockSpec& bs, const SurfaceSpec& s, int sign,
                                double tol = 1e-11);

struct RegularizabilityVerdict {
    std::optional<int> north_m; // |beta| = 2/m within tolerance
    bool south = true;          // always regularizable
    std::optional<int> orbifold_n;
};

RegularizabilityVerdict classify_regularizability(const SurfaceSpec& s, int m_max = 64);

// `beta=... north=... south=... orbifold=...`
std::string format_verdict_line(const SurfaceSpec& s, const RegularizabilityVerdict& v);

struct SouthBlockReport {
    double r_delta = 0.0;            // boundary radius of the south block
    double boundary_radius_sq = 0.0; // 2 h delta - 2 gamma
    double r_star = 0.0;             // gamma Theta(r_star) = h; unreachable beyond
    int n_transits = 0;
    bool all_exited = false;
    double max_tau = 0.0;
    double max_u_mismatch = 0.0; // |u_out - u_in|
    double max_v_mismatch = 0.0; // |v_out + v_in|
};

// Empirical a+ = a- = {} for the south block: every sampled entry exits in
// finite tau, with u preserved and v flipped.
SouthBlockReport south_pole_block_check(const SurfaceSpec& s, double h, double delta,
                                        int n_samples = 17, double tol = 1e-10);

// Turning radius: gamma Theta(r_star) = h, the largest r any energy-h motion
// can reach.
double barrier_radius(const SurfaceSpec& s, double h);

} // namespace ck

#endif
