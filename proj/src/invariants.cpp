#include "ck/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "ck/errors.hpp"

namespace ck {

double ConservedSet::magnitude() const { return std::hypot(I1, I2); }

ConservedSet conserved(const SurfaceSpec& s, const PhaseState& x) {
    Profile p = profile(s, x.r);
    double b = s.beta, g = s.gamma_c;
    double sb = std::sin(b * x.theta), cb = std::cos(b * x.theta);
    ConservedSet c;
    c.H = 0.5 * x.p_r * x.p_r + 0.5 * x.p_theta * x.p_theta / (p.f * p.f) + p.V;
    c.p_theta = x.p_theta;
    double pp = x.p_r * x.p_theta;
    double tp2 = p.Theta * x.p_theta * x.p_theta;
    c.I1 = sb * pp - b * cb * tp2 - (g / b) * cb;
    c.I2 = -cb * pp - b * sb * tp2 - (g / b) * sb;
    return c;
}

double dependency_residual(const SurfaceSpec& s, const PhaseState& x) {
    ConservedSet c = conserved(s, x);
    double b2 = s.beta * s.beta;
    double pt2 = c.p_theta * c.p_theta;
    double lhs = c.I1 * c.I1 + c.I2 * c.I2;
    double rhs = 2.0 * pt2 * c.H - s.K * pt2 * pt2 / b2 + s.gamma_c * s.gamma_c / b2;
    return std::abs(lhs - rhs);
}

double integral_value(const SurfaceSpec& s, const PhaseState& x, Integral which) {
    ConservedSet c = conserved(s, x);
    switch (which) {
        case Integral::H: return c.H;
        case Integral::PTheta: return c.p_theta;
        case Integral::I1: return c.I1;
        case Integral::I2: return c.I2;
    }
    return 0.0;
}

namespace {

// central-difference gradient in (r, theta, p_r, p_theta)
std::array<double, 4> fd_gradient(const SurfaceSpec& s, const PhaseState& x,
                                  Integral which, double step) {
    auto shifted = [&](int i, double d) {
        PhaseState y = x;
        switch (i) {
            case 0: y.r += d; break;
            case 1: y.theta += d; break;
            case 2: y.p_r += d; break;
            default: y.p_theta += d; break;
        }
        return y;
    };
    std::array<double, 4> mags{std::abs(x.r), std::abs(x.theta), std::abs(x.p_r),
                               std::abs(x.p_theta)};
    std::array<double, 4> grad;
    for (int i = 0; i < 4; ++i) {
        double h = step * std::max(1.0, mags[i]);
        grad[i] = (integral_value(s, shifted(i, h), which) -
                   integral_value(s, shifted(i, -h), which)) /
                  (2.0 * h);
    }
    return grad;
}

} // namespace

double poisson_bracket_residual(const SurfaceSpec& s, const PhaseState& x,
                                Integral which, double step) {
    if (!(step > 0.0)) throw ValidationError("poisson_bracket_residual: step must be positive");
    if (x.r - 2.0 * step * std::max(1.0, std::abs(x.r)) <= s.r_north ||
        x.r + 2.0 * step * std::max(1.0, std::abs(x.r)) >= s.r_south)
        throw NumericalError("poisson_bracket_residual: differencing stencil reaches a pole");
    auto gF = fd_gradient(s, x, which, step);
    auto gH = fd_gradient(s, x, Integral::H, step);
    // {F,H} = F_r H_pr - F_pr H_r + F_th H_pth - F_pth H_th
    double bracket = gF[0] * gH[2] - gF[2] * gH[0] + gF[1] * gH[3] - gF[3] * gH[1];
    return std::abs(bracket);
}

double DriftReport::max_drift() const {
    return std::max({dH, dPtheta, dI1, dI2});
}

DriftReport drift_along_flow(const SurfaceSpec& s, const Trajectory& traj) {
    if (traj.samples.size() < 2)
        throw ValidationError("drift_along_flow: trajectory needs at least 2 samples");
    ConservedSet c0 = conserved(s, traj.samples.front().x);
    DriftReport rep;
    for (const auto& sample : traj.samples) {
        ConservedSet c = conserved(s, sample.x);
        rep.dH = std::max(rep.dH, std::abs(c.H - c0.H));
        rep.dPtheta = std::max(rep.dPtheta, std::abs(c.p_theta - c0.p_theta));
        rep.dI1 = std::max(rep.dI1, std::abs(c.I1 - c0.I1));
        rep.dI2 = std::max(rep.dI2, std::abs(c.I2 - c0.I2));
    }
    return rep;
}

} // namespace ck
