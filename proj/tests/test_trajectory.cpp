#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ck/errors.hpp"
#include "ck/sampling.hpp"
#include "ck/trajectory.hpp"

using namespace ck;
using std::numbers::pi;

TEST_CASE("conic parameters from the generating state") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    ConservedSet c = conserved(sphere, {pi / 2, 0.0, 0.0, 1.0}); // I1 = -1, I2 = 0
    ConicParams cp = conic_params(sphere, c);
    CHECK(cp.p == doctest::Approx(1.0));
    CHECK(cp.e == doctest::Approx(1.0));
    CHECK(cp.theta0 == doctest::Approx(pi));
    // equator crossing at theta = 0
    CHECK(rho_of_theta(cp, sphere.beta, 0.0) == doctest::Approx(0.0));

    SurfaceSpec half = make_surface(1.0, 0.5, 1.0);
    ConservedSet c2;
    c2.p_theta = 2.0;
    CHECK(conic_params(half, c2).p == doctest::Approx(1.0)); // (1/4)*4/1

    ConservedSet radial;
    radial.p_theta = 0.0;
    CHECK_THROWS_AS(conic_params(sphere, radial), ValidationError);
}

TEST_CASE("circular orbits have e = 0 and constant rho") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    // equatorial circle: r = pi/2, p_r = 0, Theta = 0, force balance at p_theta = 1
    ConservedSet c = conserved(sphere, {pi / 2, 0.3, 0.0, 1.0});
    // e = 0 iff I1 = I2 = 0; here I = 1 (e = 1); construct e = 0 directly instead
    ConicParams circle{2.0, 0.0, 0.0};
    for (double theta : {0.0, 1.0, 4.0}) CHECK(rho_of_theta(circle, 1.0, theta) == 0.5);
    CHECK(c.magnitude() > 0.0);
}

TEST_CASE("rho has theta-period 2 pi / beta") {
    ConicParams cp{1.4, 0.3, 0.2};
    double beta = 2.0 / 3.0;
    double period = 2.0 * pi / beta; // 3 pi
    CHECK(period == doctest::Approx(3.0 * pi));
    for (double theta : {0.0, 0.9, 2.1})
        CHECK(rho_of_theta(cp, beta, theta + period) ==
              doctest::Approx(rho_of_theta(cp, beta, theta)));
}

TEST_CASE("r_from_rho inverts -Theta") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    CHECK(r_from_rho(sphere, 0.0) == doctest::Approx(pi / 2));
    CHECK(r_from_rho(sphere, 1.0) == doctest::Approx(pi / 4));
    // monotone, with the right pole limits
    CHECK(r_from_rho(sphere, 1e8) < 1e-7);
    CHECK(r_from_rho(sphere, -1e8) > pi - 1e-7);

    SurfaceSpec s = make_surface(4.0, 0.25, 1.0);
    for (double r : {0.1, 0.4, 0.9, 1.3}) {
        double rho = -profile_theta(s, r);
        CHECK(std::abs(r_from_rho(s, rho) - r) < 1e-12);
    }
}

TEST_CASE("numeric orbits follow the conic equation") {
    for (double beta : {1.0, 2.0 / 3.0, 0.5}) {
        SurfaceSpec s = surface_from_beta(beta, 1.0);
        auto starts = sample_bounded_orbit_states(s, 3, 7);
        for (const auto& x0 : starts) {
            Trajectory traj = integrate(s, x0, 40.0, 1e-10);
            REQUIRE(traj.termination == Termination::TimeLimit);
            CHECK(compare_orbit(s, traj) < 1e-6);
        }
    }
}

TEST_CASE("circular initial data keeps r constant") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    // at the equator the radial force vanishes when p_theta^2 f'/f^3 = gamma/f^2;
    // f' = 0 there, so balance holds only in the limit; use the force balance at
    // r = pi/2 with p_theta chosen so I1 = I2 = 0: p_r = 0, Theta = 0 gives
    // I1 = -beta Theta p^2 - gamma/beta cos(0)... use e ~ 0 via p_theta = 1, gamma = 1
    // => I = 1. Instead verify with the K = 1, L = 1 circle at p_theta = 1:
    // e = 0 requires gamma = beta^2 p_theta^2 / p... take the explicit circle:
    PhaseState x0{pi / 2, 0.0, 0.0, 1.0};
    ConservedSet c = conserved(sphere, x0);
    ConicParams cp = conic_params(sphere, c);
    // this orbit has e = 1; a genuinely circular one needs I1 = I2 = 0, i.e.
    // cos(beta theta0) terms cancelling: gamma/beta = -beta Theta p_theta^2 has no
    // solution at Theta = 0, so r = pi/2, p_theta = 1 is NOT circular on the sphere.
    CHECK(cp.e > 0.0);

    // build a circular orbit away from the equator: force balance
    // p_theta^2 f' / f^3 = gamma / f^2  =>  p_theta^2 = gamma f / f'
    double r0 = 1.1;
    Profile p = profile(sphere, r0);
    double p_theta = std::sqrt(sphere.gamma_c * p.f / p.fp);
    Trajectory traj = integrate(sphere, {r0, 0.0, 0.0, p_theta}, 30.0, 1e-10);
    ConicParams cp2 = conic_params(sphere, conserved(sphere, traj.initial()));
    CHECK(cp2.e < 1e-12);
    for (const auto& sample : traj.samples) CHECK(std::abs(sample.x.r - r0) < 1e-8);
}

TEST_CASE("beta = 2/3 orbit closes after theta advances 6 pi") {
    SurfaceSpec s = surface_from_beta(2.0 / 3.0, 1.0);
    PhaseState x0{1.5, 0.0, 0.1, 0.45};
    // rho has period 3 pi in theta; the full state recurs after 6 pi
    ConicParams cp = conic_params(s, conserved(s, x0));
    double rho0 = rho_of_theta(cp, s.beta, 0.4);
    CHECK(rho_of_theta(cp, s.beta, 0.4 + 3.0 * pi) == doctest::Approx(rho0));

    Trajectory traj = integrate(s, x0, 400.0, 1e-11);
    REQUIRE(traj.termination == Termination::TimeLimit);
    REQUIRE(traj.final().theta > x0.theta + 6.0 * pi);
    // locate theta = theta0 + 6 pi on the dense output by bisection
    double target = x0.theta + 6.0 * pi;
    double lo = 0.0, hi = traj.t_final();
    for (int i = 0; i < 200 && hi - lo > 1e-13 * traj.t_final(); ++i) {
        double mid = 0.5 * (lo + hi);
        (traj.at(mid).theta < target ? lo : hi) = mid;
    }
    PhaseState rec = traj.at(0.5 * (lo + hi));
    CHECK(std::abs(rec.r - x0.r) < 1e-5);
    CHECK(std::abs(rec.p_r - x0.p_r) < 1e-5);
    CHECK(std::abs(rec.p_theta - x0.p_theta) < 1e-5);
}

TEST_CASE("rho extrema coincide with radial turning points") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    PhaseState x0{1.2, 0.0, 0.0, 0.75};
    ConicParams cp = conic_params(sphere, conserved(sphere, x0));
    auto turning = radial_turning_points(sphere, x0, 30.0, 1e-11);
    REQUIRE(turning.size() >= 2);
    for (const auto& pt : turning) {
        // beta (theta - theta0) = 0 or pi (mod 2 pi) at extrema
        double phase = sphere.beta * (pt.x.theta - cp.theta0);
        double dist = std::abs(std::remainder(phase, pi));
        CHECK(dist < 1e-5);
    }
}

TEST_CASE("compare_orbit rejects radial orbits") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    Trajectory traj = integrate(sphere, {2.0, 0.0, 0.1, 0.0}, 2.0, 1e-10);
    CHECK_THROWS_AS(compare_orbit(sphere, traj), ValidationError);
}
