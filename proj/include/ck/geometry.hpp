#ifndef CK_GEOMETRY_HPP
#define CK_GEOMETRY_HPP

#include <optional>

namespace ck {

// A spherical surface of revolution with constant positive Gaussian curvature,
// profile f(r) = L sin(sqrt(K) r) on [0, pi/sqrt(K)], and the generalized
// gravitational potential V = gamma_c * Theta(r) with Theta' = 1/f^2.
struct SurfaceSpec {
    double K = 1.0;       // Gaussian curvature, > 0
    double L = 1.0;       // profile amplitude, > 0
    double gamma_c = 1.0; // potential coupling, > 0
    double beta = 1.0;    // L * sqrt(K); pole slope |f'(r_N)|
    double sqrt_K = 1.0;
    double r_north = 0.0;
    double r_south = 0.0; // pi / sqrt(K)
    bool embeddable = true; // beta <= 1: profile admits a unit-speed embedding

    double r_equator() const { return 0.5 * r_south; }
    double pole_margin() const { return 1e-3 * (r_south - r_north); }
};

SurfaceSpec make_surface(double K, double L, double gamma_c);

// Convenience: the K = 1 member of the family with the given beta (L = beta).
SurfaceSpec surface_from_beta(double beta, double gamma_c = 1.0);

struct Profile {
    double f;     // metric coefficient
    double fp;    // f'
    double Theta; // antiderivative of 1/f^2, fixed as -cot(sqrt(K) r)/(L^2 sqrt(K))
    double V;     // gamma_c * Theta
};

// Unchecked closed forms, defined wherever the trig expressions are.
double profile_f(const SurfaceSpec& s, double r);
double profile_fp(const SurfaceSpec& s, double r);
double profile_theta(const SurfaceSpec& s, double r);
// 1/(f*Theta) = -|beta| / cos(sqrt(K) r); analytic through both poles.
double inv_f_theta(const SurfaceSpec& s, double r);

// Checked evaluation on the open interval (r_north, r_south).
Profile profile(const SurfaceSpec& s, double r);

// (1/f^2) d/dr (f^2 dV/dr) by nested central differences on V. Zero for the
// generalized gravitational potential up to discretization error.
double laplace_beltrami_residual(const SurfaceSpec& s, double r, double step = 1e-4);

// n such that beta ~ 1/n (cone angle 2*pi/n at both poles), if any n <= m_max.
std::optional<int> classify_orbifold(const SurfaceSpec& s, int m_max = 64);

// Relative tolerance for matching beta against 1/n and 2/m.
inline constexpr double kRationalityTol = 1e-9;

// Height component g(r) of the unit-speed profile curve, by quadrature of
// sqrt(1 - f'^2). Requires beta <= 1.
double embedding_profile(const SurfaceSpec& s, double r);

} // namespace ck

#endif
