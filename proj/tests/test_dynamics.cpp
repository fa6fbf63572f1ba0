#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ck/dynamics.hpp"
#include "ck/errors.hpp"
#include "ck/invariants.hpp"
#include "ck/sampling.hpp"

using namespace ck;
using std::numbers::pi;

TEST_CASE("hamiltonian hand values") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    CHECK(hamiltonian(sphere, {pi / 2, 0.0, 0.0, 1.0}) == doctest::Approx(0.5));
    CHECK(hamiltonian(sphere, {pi / 2, 3.7, 0.0, 0.0}) == doctest::Approx(0.0));

    SurfaceSpec half = make_surface(1.0, 0.5, 1.0);
    CHECK(hamiltonian(half, {pi / 2, 0.0, 1.0, 0.0}) == doctest::Approx(0.5)); // cot(pi/2)=0

    CHECK_THROWS_AS(hamiltonian(sphere, {0.0, 0.0, 0.0, 1.0}), ValidationError);
}

TEST_CASE("equations of motion hand values") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    PhaseState d = eom(sphere, {pi / 2, 0.0, 0.0, 1.0});
    CHECK(d.r == doctest::Approx(0.0));
    CHECK(d.theta == doctest::Approx(1.0));
    CHECK(d.p_r == doctest::Approx(-1.0));
    CHECK(d.p_theta == 0.0);

    // dV/dr = gamma/f^2 = 2 at r = pi/4
    PhaseState d2 = eom(sphere, {pi / 4, 0.0, 0.0, 0.0});
    CHECK(d2.p_r == doctest::Approx(-2.0));

    // theta is cyclic on every surface
    SurfaceSpec s = make_surface(4.0, 0.25, 2.0);
    CHECK(eom(s, {0.3, 1.0, 0.2, 0.7}).p_theta == 0.0);
}

TEST_CASE("bounded orbit conserves H and p_theta") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    PhaseState x0{pi / 2, 0.0, 0.0, 1.0};
    Trajectory traj = integrate(sphere, x0, 10.0, 1e-10);
    REQUIRE(traj.termination == Termination::TimeLimit);
    double h0 = hamiltonian(sphere, x0);
    for (const auto& sample : traj.samples) {
        CHECK(std::abs(hamiltonian(sphere, sample.x) - h0) < 1e-8);
        CHECK(std::abs(sample.x.p_theta - x0.p_theta) < 10.0 * 1e-10);
    }
    // strictly increasing sample times
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        CHECK(traj.samples[i].t > traj.samples[i - 1].t);
}

TEST_CASE("dense output matches samples") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    Trajectory traj = integrate(sphere, {1.2, 0.0, 0.1, 0.8}, 5.0, 1e-11);
    for (std::size_t i = 1; i + 1 < traj.samples.size(); i += 7) {
        double t_mid = 0.5 * (traj.samples[i].t + traj.samples[i + 1].t);
        PhaseState mid = traj.at(t_mid);
        CHECK(std::abs(hamiltonian(sphere, mid) - hamiltonian(sphere, traj.initial())) <
              1e-8);
    }
    CHECK(traj.at(traj.samples[3].t).r == doctest::Approx(traj.samples[3].x.r).epsilon(1e-12));
}

TEST_CASE("radial infall terminates with collision-approach") {
    for (double beta : {1.0, 0.5}) {
        SurfaceSpec s = surface_from_beta(beta, 1.0);
        PhaseState x0{0.4 * s.r_south, 0.0, -0.2, 0.0};
        Trajectory traj = integrate(s, x0, 100.0, 1e-10);
        CHECK(traj.termination == Termination::CollisionApproach);
        CHECK(traj.t_final() < 100.0);
        // stops at the margin
        CHECK(traj.final().r == doctest::Approx(1e-3 * s.r_south).epsilon(1e-6));
    }
}

TEST_CASE("south pole is shielded by the potential barrier") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    PhaseState x0{pi / 2, 0.0, 0.9, 0.4}; // h > 0
    double h = hamiltonian(sphere, x0);
    REQUIRE(h > 0.0);
    // gamma Theta(r*) = h bounds the motion
    Trajectory traj = integrate(sphere, x0, 50.0, 1e-10);
    REQUIRE(traj.termination == Termination::TimeLimit);
    for (const auto& sample : traj.samples) {
        double theta_r = profile_theta(sphere, sample.x.r);
        CHECK(sphere.gamma_c * theta_r <= h + 1e-9);
        if (theta_r > 0.0) CHECK(h / theta_r - sphere.gamma_c >= -1e-9);
    }
}

TEST_CASE("time reversal returns to the initial state") {
    SurfaceSpec s = surface_from_beta(2.0 / 3.0, 1.0);
    PhaseState x0{1.4, 0.3, 0.2, 0.5};
    Trajectory fwd = integrate(s, x0, 20.0, 1e-11);
    REQUIRE(fwd.termination == Termination::TimeLimit);
    PhaseState back = fwd.final();
    back.p_r = -back.p_r;
    back.p_theta = -back.p_theta;
    Trajectory rev = integrate(s, back, 20.0, 1e-11);
    REQUIRE(rev.termination == Termination::TimeLimit);
    PhaseState end = rev.final();
    CHECK(std::abs(end.r - x0.r) < 1e-6);
    CHECK(std::abs(end.theta - x0.theta) < 1e-6);
    CHECK(std::abs(end.p_r + x0.p_r) < 1e-6);
    CHECK(std::abs(end.p_theta + x0.p_theta) < 1e-6);
}

TEST_CASE("drift stays below 1e-8 across the surface family") {
    for (double beta : {1.0, 2.0 / 3.0, 0.5}) {
        SurfaceSpec s = surface_from_beta(beta, 1.0);
        auto starts = sample_bounded_orbit_states(s, 5, 42);
        for (const auto& x0 : starts) {
            Trajectory traj = integrate(s, x0, 100.0, 1e-10);
            REQUIRE(traj.termination == Termination::TimeLimit);
            CHECK(drift_along_flow(s, traj).max_drift() < 1e-8);
        }
    }
}

TEST_CASE("integrate validates inputs") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    PhaseState ok{1.0, 0.0, 0.0, 0.5};
    CHECK_THROWS_AS(integrate(sphere, ok, 1.0, 1e-2), ValidationError);
    CHECK_THROWS_AS(integrate(sphere, ok, 1.0, 1e-15), ValidationError);
    CHECK_THROWS_AS(integrate(sphere, {-0.2, 0, 0, 0.5}, 1.0, 1e-10), ValidationError);
    CHECK_THROWS_AS(integrate(sphere, ok, 1.0, 1e-10, 5.0), ValidationError);
}

TEST_CASE("radial turning points are p_r zeros") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    PhaseState x0{1.1, 0.0, 0.0, 0.8};
    auto points = radial_turning_points(sphere, x0, 25.0, 1e-11);
    CHECK(points.size() >= 3);
    for (const auto& pt : points) CHECK(std::abs(pt.x.p_r) < 1e-9);
}
