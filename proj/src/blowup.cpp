#include "ck/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ck/errors.hpp"

namespace ck {

namespace {

constexpr double kEquatorTol = 1e-9;

void check_chart(const SurfaceSpec& s, double r, Chart chart) {
    double r_eq = s.r_equator();
    if (chart == Chart::North) {
        // analytic continuation through r = 0 is allowed for differencing
        if (!(r > -r_eq) || !(r < r_eq))
            throw ValidationError("regularized_eom: r = " + std::to_string(r) +
                                  " outside the north-pole chart (Theta < 0)");
    } else {
        if (!(r > r_eq) || !(s.sqrt_K * r < 1.49 * std::numbers::pi))
            throw ValidationError("regularized_eom: r = " + std::to_string(r) +
                                  " outside the south-pole chart (Theta > 0)");
    }
}

// core field over (r, v, theta, u)
inline void eval_field(const SurfaceSpec& s, Chart chart, double r, double v, double u,
                       double& dr, double& dv, double& dtheta, double& du) {
    double f = profile_f(s, r);
    double fp = profile_fp(s, r);
    double w = inv_f_theta(s, r); // 1/(f Theta), analytic at the poles
    double coupling = (chart == Chart::North) ? (s.gamma_c - 0.5 * v * v)
                                              : -(s.gamma_c + 0.5 * v * v);
    dr = v * f;
    dv = u * u * fp + coupling * w;
    dtheta = u;
    du = -u * v * (fp + 0.5 * w);
}

} // namespace

McGeheeState to_mcgehee(const SurfaceSpec& s, const PhaseState& x) {
    if (!(x.r > s.r_north) || !(x.r < s.r_south))
        throw ValidationError("to_mcgehee: r at or beyond a pole");
    if (std::abs(x.r - s.r_equator()) < kEquatorTol * s.r_south)
        throw ValidationError("to_mcgehee: Theta(r) = 0 at the equator, transform degenerates");
    double theta_abs = std::abs(profile_theta(s, x.r));
    double root = std::sqrt(theta_abs);
    McGeheeState y;
    y.r = x.r;
    y.theta = x.theta;
    y.v = x.p_r / root;
    y.u = x.p_theta / (profile_f(s, x.r) * root);
    return y;
}

PhaseState from_mcgehee(const SurfaceSpec& s, const McGeheeState& y) {
    if (!(y.r > s.r_north) || !(y.r < s.r_south))
        throw ValidationError("from_mcgehee: r at or beyond a pole");
    if (std::abs(y.r - s.r_equator()) < kEquatorTol * s.r_south)
        throw ValidationError("from_mcgehee: Theta(r) = 0 at the equator, transform degenerates");
    double root = std::sqrt(std::abs(profile_theta(s, y.r)));
    PhaseState x;
    x.r = y.r;
    x.theta = y.theta;
    x.p_r = y.v * root;
    x.p_theta = y.u * profile_f(s, y.r) * root;
    return x;
}

McGeheeState regularized_eom(const SurfaceSpec& s, const McGeheeState& y, Chart chart) {
    check_chart(s, y.r, chart);
    McGeheeState d;
    eval_field(s, chart, y.r, y.v, y.u, d.r, d.v, d.theta, d.u);
    return d;
}

ode::Rhs regularized_rhs(const SurfaceSpec& s, Chart chart) {
    return [s, chart](double, std::span<const double> y, std::span<double> dy) {
        eval_field(s, chart, y[0], y[1], y[3], dy[0], dy[1], dy[2], dy[3]);
        double theta_abs = std::abs(profile_theta(s, y[0]));
        dy[4] = profile_f(s, y[0]) / std::sqrt(theta_abs);
    };
}

double energy_relation_residual(const SurfaceSpec& s, const McGeheeState& y, double h) {
    double theta = profile_theta(s, y.r);
    double sgn = theta < 0.0 ? -1.0 : 1.0;
    return std::abs(sgn * 0.5 * (y.u * y.u + y.v * y.v) + s.gamma_c - h / theta);
}

CollisionManifold collision_manifold(const SurfaceSpec& s) {
    return CollisionManifold{s.gamma_c, std::sqrt(2.0 * s.gamma_c)};
}

McGeheeState manifold_point(const SurfaceSpec& s, double theta, double chi) {
    double radius = std::sqrt(2.0 * s.gamma_c);
    return McGeheeState{s.r_north, theta, radius * std::sin(chi), radius * std::cos(chi)};
}

double chi_of(const McGeheeState& y) { return std::atan2(y.v, y.u); }

double flow_on_manifold(const SurfaceSpec& s, double chi0, double theta_start,
                        double theta_end) {
    return chi0 + 0.5 * std::abs(s.beta) * (theta_end - theta_start);
}

RegularizedTrajectory integrate_regularized(const SurfaceSpec& s, const McGeheeState& y0,
                                            double tau_end, double tol,
                                            RegularizedOptions opts) {
    if (!(tol >= 1e-14 && tol <= 1e-3))
        throw ValidationError("integrate_regularized: tol outside [1e-14, 1e-3]");
    check_chart(s, y0.r, opts.chart);
    double margin = opts.chart_exit_margin < 0.0 ? 1e-3 * s.r_south : opts.chart_exit_margin;
    double r_eq = s.r_equator();

    ode::Options opt;
    opt.rtol = tol;
    opt.atol = tol;

    // exit before the chart coordinate singularity at the equator
    ode::Event chart_exit;
    if (opts.chart == Chart::North) {
        double r_exit = r_eq - margin;
        chart_exit = {[r_exit](double, std::span<const double> y) { return y[0] - r_exit; },
                      +1, true};
    } else {
        double r_exit = r_eq + margin;
        chart_exit = {[r_exit](double, std::span<const double> y) { return y[0] - r_exit; },
                      -1, true};
    }
    std::array<ode::Event, 1> events{chart_exit};

    RegularizedTrajectory traj;
    auto observer = [&traj](double tau, std::span<const double> y) {
        traj.samples.push_back({tau, McGeheeState{y[0], y[2], y[1], y[3]}, y[4]});
    };

    std::array<double, 5> z0{y0.r, y0.v, y0.theta, y0.u, 0.0};
    auto res = ode::integrate_dop853(regularized_rhs(s, opts.chart), 0.0, z0, tau_end, opt,
                                     events, /*keep_dense=*/true, observer);
    traj.dense = std::move(res.dense);
    switch (res.stop) {
        case ode::Stop::ReachedEnd: traj.termination = RegularizedTermination::TauLimit; break;
        case ode::Stop::Event: traj.termination = RegularizedTermination::ChartExit; break;
        default: traj.termination = RegularizedTermination::NumericalFailure; break;
    }
    return traj;
}

std::pair<Equilibrium, Equilibrium> equilibria_and_eigenvalues(const SurfaceSpec& s) {
    double k = std::abs(s.beta);
    double b2 = s.beta * s.beta;
    double root = std::sqrt(2.0 * s.gamma_c);
    auto build = [&](double sign) {
        Equilibrium eq;
        eq.r = s.r_north;
        eq.v = sign * root;
        eq.u = 0.0;
        std::array<double, 4> ev{sign * k * root, sign * b2 * root / k, 0.0,
                                 -sign * root * (k - b2 / (2.0 * k))};
        std::sort(ev.begin(), ev.end());
        eq.eigenvalues = ev;
        return eq;
    };
    return {build(+1.0), build(-1.0)};
}

num::Mat4 regularized_jacobian_fd(const SurfaceSpec& s, const McGeheeState& y, double step,
                                  Chart chart) {
    auto field = [&](const std::array<double, 4>& z) {
        std::array<double, 4> d;
        eval_field(s, chart, z[0], z[1], z[3], d[0], d[1], d[2], d[3]);
        return d;
    };
    std::array<double, 4> z0{y.r, y.v, y.theta, y.u};
    num::Mat4 jac{};
    for (int j = 0; j < 4; ++j) {
        double h = step * std::max(1.0, std::abs(z0[j]));
        auto zp = z0, zm = z0;
        zp[j] += h;
        zm[j] -= h;
        auto fp = field(zp), fm = field(zm);
        for (int i = 0; i < 4; ++i) jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
    }
    return jac;
}

} // namespace ck
