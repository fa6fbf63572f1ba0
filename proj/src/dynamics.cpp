#include "ck/dynamics.hpp"

#include <array>
#include <cmath>
#include <string>

#include "ck/errors.hpp"

namespace ck {

namespace {

void check_state(const SurfaceSpec& s, const PhaseState& x, const char* who) {
    if (!(x.r > s.r_north) || !(x.r < s.r_south))
        throw ValidationError(std::string(who) + ": r = " + std::to_string(x.r) +
                              " is at or beyond a pole");
}

ode::Rhs make_rhs(const SurfaceSpec& s) {
    return [s](double, std::span<const double> y, std::span<double> dy) {
        double f = profile_f(s, y[0]);
        double fp = profile_fp(s, y[0]);
        double f2 = f * f;
        double p_r = y[2], p_theta = y[3];
        dy[0] = p_r;
        dy[1] = p_theta / f2;
        dy[2] = p_theta * p_theta * fp / (f2 * f) - s.gamma_c / f2;
        dy[3] = 0.0;
    };
}

} // namespace

double hamiltonian(const SurfaceSpec& s, const PhaseState& x) {
    check_state(s, x, "hamiltonian");
    Profile p = profile(s, x.r);
    return 0.5 * x.p_r * x.p_r + 0.5 * x.p_theta * x.p_theta / (p.f * p.f) + p.V;
}

PhaseState eom(const SurfaceSpec& s, const PhaseState& x) {
    check_state(s, x, "eom");
    Profile p = profile(s, x.r);
    double f2 = p.f * p.f;
    PhaseState d;
    d.r = x.p_r;
    d.theta = x.p_theta / f2;
    d.p_r = x.p_theta * x.p_theta * p.fp / (f2 * p.f) - s.gamma_c / f2;
    d.p_theta = 0.0;
    return d;
}

PhaseState Trajectory::at(double t) const {
    std::array<double, 4> y;
    dense.eval(t, y);
    return PhaseState{y[0], y[1], y[2], y[3]};
}

Trajectory integrate(const SurfaceSpec& s, const PhaseState& x0, double t_end,
                     double tol, double collision_margin) {
    if (!(tol >= 1e-14 && tol <= 1e-3))
        throw ValidationError("integrate: tol = " + std::to_string(tol) +
                              " outside [1e-14, 1e-3]");
    if (!(t_end > 0.0)) throw ValidationError("integrate: t_end must be positive");
    check_state(s, x0, "integrate");
    double margin = collision_margin < 0.0 ? 1e-3 * s.r_south : collision_margin;
    if (!(margin > 0.0) || margin >= s.r_equator())
        throw ValidationError("integrate: collision_margin out of range");

    ode::Options opt;
    opt.rtol = tol;
    opt.atol = tol;

    std::array<ode::Event, 1> events{ode::Event{
        [&s, margin](double, std::span<const double> y) { return y[0] - (s.r_north + margin); },
        -1, true}};

    Trajectory traj;
    auto observer = [&traj](double t, std::span<const double> y) {
        traj.samples.push_back({t, PhaseState{y[0], y[1], y[2], y[3]}});
    };

    std::array<double, 4> y0{x0.r, x0.theta, x0.p_r, x0.p_theta};
    auto res = ode::integrate_dop853(make_rhs(s), 0.0, y0, t_end, opt, events,
                                     /*keep_dense=*/true, observer);
    traj.dense = std::move(res.dense);
    switch (res.stop) {
        case ode::Stop::ReachedEnd: traj.termination = Termination::TimeLimit; break;
        case ode::Stop::Event: traj.termination = Termination::CollisionApproach; break;
        default: traj.termination = Termination::NumericalFailure; break;
    }
    return traj;
}

std::vector<TrajectorySample> radial_turning_points(const SurfaceSpec& s,
                                                    const PhaseState& x0, double t_end,
                                                    double tol) {
    check_state(s, x0, "radial_turning_points");
    ode::Options opt;
    opt.rtol = tol;
    opt.atol = tol;
    std::array<ode::Event, 1> events{ode::Event{
        [](double, std::span<const double> y) { return y[2]; }, 0, false}};
    std::array<double, 4> y0{x0.r, x0.theta, x0.p_r, x0.p_theta};
    auto res = ode::integrate_dop853(make_rhs(s), 0.0, y0, t_end, opt, events, false);
    std::vector<TrajectorySample> points;
    points.reserve(res.hits.size());
    for (const auto& h : res.hits)
        points.push_back({h.t, PhaseState{h.y[0], h.y[1], h.y[2], h.y[3]}});
    return points;
}

} // namespace ck
