#include "ck/trajectory.hpp"

#include <cmath>
#include <numbers>

#include "ck/errors.hpp"

namespace ck {

ConicParams conic_params(const SurfaceSpec& s, const ConservedSet& c) {
    if (c.p_theta == 0.0)
        throw ValidationError("conic_params: radial orbit (p_theta = 0) has no conic form");
    ConicParams cp;
    double b = s.beta, g = s.gamma_c;
    cp.p = b * b * c.p_theta * c.p_theta / g;
    cp.e = (b / g) * c.magnitude();
    double period = 2.0 * std::numbers::pi / b;
    double t0 = (cp.e > 0.0) ? std::atan2(c.I2, c.I1) / b : 0.0;
    t0 = std::fmod(t0, period);
    if (t0 < 0.0) t0 += period;
    cp.theta0 = t0;
    return cp;
}

double rho_of_theta(const ConicParams& cp, double beta, double theta) {
    return (1.0 + cp.e * std::cos(beta * (theta - cp.theta0))) / cp.p;
}

double r_from_rho(const SurfaceSpec& s, double rho) {
    // arccot on (0, pi) via atan2
    double x = s.L * s.L * s.sqrt_K * rho;
    return std::atan2(1.0, x) / s.sqrt_K;
}

double compare_orbit(const SurfaceSpec& s, const Trajectory& traj) {
    if (traj.samples.size() < 2)
        throw ValidationError("compare_orbit: trajectory needs at least 2 samples");
    ConicParams cp = conic_params(s, conserved(s, traj.samples.front().x));
    double worst = 0.0;
    for (const auto& sample : traj.samples) {
        double rho_numeric = -profile_theta(s, sample.x.r);
        double rho_analytic = rho_of_theta(cp, s.beta, sample.x.theta);
        worst = std::max(worst, std::abs(rho_numeric - rho_analytic));
    }
    return worst;
}

} // namespace ck
