#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ck/blowup.hpp"
#include "ck/errors.hpp"
#include "ck/numerics.hpp"
#include "ck/sampling.hpp"

using namespace ck;
using std::numbers::pi;

TEST_CASE("mcgehee transform hand values and round trip") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    McGeheeState y = to_mcgehee(sphere, {pi / 4, 0.0, 1.0, 0.1});
    CHECK(y.v == doctest::Approx(1.0)); // |Theta(pi/4)| = 1
    CHECK(y.u == doctest::Approx(0.1 * std::sqrt(2.0)));

    McGeheeState zero = to_mcgehee(sphere, {0.9, 0.3, 0.0, 0.0});
    CHECK(zero.u == 0.0);
    CHECK(zero.v == 0.0);

    std::mt19937_64 gen(5);
    SurfaceSpec s = make_surface(1.0, 2.0 / 3.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        PhaseState x;
        // avoid the equator where the transform degenerates
        bool north = num::uniform01(gen) < 0.5;
        x.r = north ? num::uniform(gen, 0.05, 0.45) * s.r_south
                    : num::uniform(gen, 0.55, 0.95) * s.r_south;
        x.theta = num::uniform(gen, 0.0, 2.0 * pi);
        x.p_r = num::uniform(gen, -1.0, 1.0);
        x.p_theta = num::uniform(gen, -1.0, 1.0);
        PhaseState back = from_mcgehee(s, to_mcgehee(s, x));
        CHECK(std::abs(back.r - x.r) < 1e-12);
        CHECK(std::abs(back.p_r - x.p_r) < 1e-12);
        CHECK(std::abs(back.p_theta - x.p_theta) < 1e-12);
    }

    CHECK_THROWS_AS(to_mcgehee(sphere, {pi / 2, 0.0, 0.1, 0.1}), ValidationError);
}

TEST_CASE("regularized field on the collision manifold") {
    SurfaceSpec s = make_surface(1.0, 0.5, 1.0);
    double root = std::sqrt(2.0 * s.gamma_c);

    // the equilibria S+-: derivative vanishes
    for (double sign : {1.0, -1.0}) {
        McGeheeState d = regularized_eom(s, {s.r_north, 0.7, sign * root, 0.0});
        CHECK(std::abs(d.r) < 1e-14);
        CHECK(std::abs(d.v) < 1e-14);
        CHECK(std::abs(d.theta) < 1e-14);
        CHECK(std::abs(d.u) < 1e-14);
    }

    // on N: theta' = u and u' = -u v |beta| / 2
    McGeheeState y = manifold_point(s, 0.0, 0.3);
    McGeheeState d = regularized_eom(s, y);
    CHECK(d.theta == doctest::Approx(y.u));
    CHECK(d.u == doctest::Approx(-y.u * y.v * 0.5 * s.beta));
    // v' = (|beta|/2) u^2 via the energy relation on N
    CHECK(d.v == doctest::Approx(0.5 * s.beta * y.u * y.u));

    // r' = 0 whenever r = r_N: N is invariant
    CHECK(regularized_eom(s, {s.r_north, 2.0, 0.4, 1.1}).r == 0.0);

    CHECK_THROWS_AS(regularized_eom(s, {0.9 * s.r_equator() + 0.2 * s.r_south, 0, 0, 0}),
                    ValidationError);
}

TEST_CASE("energy relation residual is conserved along regularized arcs") {
    SurfaceSpec s = make_surface(1.0, 2.0 / 3.0, 1.0);
    PhaseState x0{0.35 * s.r_south, 0.0, -0.3, 0.2};
    double h = hamiltonian(s, x0);
    McGeheeState y0 = to_mcgehee(s, x0);
    CHECK(energy_relation_residual(s, y0, h) < 1e-13);

    RegularizedTrajectory traj = integrate_regularized(s, y0, 30.0, 1e-10);
    REQUIRE(traj.samples.size() > 5);
    for (const auto& sample : traj.samples)
        CHECK(energy_relation_residual(s, sample.y, h) < 1e-8);
}

TEST_CASE("collision orbit reaches N asymptotically, physical time converges") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    PhaseState x0{1.0, 0.0, -0.5, 0.0}; // radial infall
    McGeheeState y0 = to_mcgehee(sphere, x0);
    REQUIRE(y0.u == 0.0);
    REQUIRE(y0.v < 0.0);

    RegularizedTrajectory traj = integrate_regularized(sphere, y0, 60.0, 1e-12);
    REQUIRE(traj.termination == RegularizedTermination::TauLimit);
    const auto& last = traj.final();
    // equilibrium approach: r -> r_N, v -> -sqrt(2 gamma), in infinite tau
    CHECK(last.y.r < 1e-10);
    CHECK(last.y.v == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-8));
    // physical time converges to a finite t*
    double t_mid = 0.0;
    for (const auto& sample : traj.samples)
        if (sample.tau <= 30.0) t_mid = sample.t_phys;
    CHECK(last.t_phys - t_mid < 1e-6);
    CHECK(last.t_phys > 0.0);
}

TEST_CASE("near-collision orbit transits from v < 0 to v > 0") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    McGeheeState y0{0.3, 0.0, -1.2, 0.05};
    RegularizedTrajectory traj = integrate_regularized(sphere, y0, 200.0, 1e-10);
    REQUIRE(traj.termination == RegularizedTermination::ChartExit);
    CHECK(traj.final().y.v > 0.0);
    // v is essentially monotone while near N (ascent from S- toward S+)
    bool saw_negative = false, saw_positive = false;
    for (const auto& sample : traj.samples) {
        saw_negative = saw_negative || sample.y.v < -1.0;
        saw_positive = saw_positive || sample.y.v > 1.0;
    }
    CHECK(saw_negative);
    CHECK(saw_positive);
}

TEST_CASE("flow on the collision manifold has slope |beta|/2") {
    // analytic form
    SurfaceSpec half = make_surface(1.0, 0.5, 1.0);
    CHECK(flow_on_manifold(half, 0.1, 0.0, 4.0) == doctest::Approx(0.1 + 0.25 * 4.0));
    CHECK(flow_on_manifold(half, 0.3, 1.0, 1.0) == doctest::Approx(0.3));

    // beta = 1: the unstable branch from S- rejoins S+ after Delta theta = 2 pi
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    double dtheta = pi / (0.5 * std::abs(sphere.beta));
    CHECK(flow_on_manifold(sphere, -pi / 2, 0.0, dtheta) == doctest::Approx(pi / 2));
    CHECK(dtheta == doctest::Approx(2.0 * pi));

    // numeric check: integrate the field restricted to N
    for (double beta : {1.0, 2.0 / 3.0, 0.5}) {
        SurfaceSpec s = surface_from_beta(beta, 1.0);
        McGeheeState y0 = manifold_point(s, 0.0, -pi / 2 + 0.05);
        ode::Options opt;
        opt.rtol = opt.atol = 1e-12;
        double chi_stop = pi / 2 - 0.05;
        std::array<ode::Event, 1> ev{ode::Event{
            [chi_stop](double, std::span<const double> y) {
                return std::atan2(y[1], y[3]) - chi_stop;
            },
            +1, true}};
        std::array<double, 5> z0{y0.r, y0.v, y0.theta, y0.u, 0.0};
        auto res = ode::integrate_dop853(regularized_rhs(s, Chart::North), 0.0, z0, 4000.0,
                                         opt, ev, false);
        REQUIRE(res.stop == ode::Stop::Event);
        double slope = (std::atan2(res.y[1], res.y[3]) - chi_of(y0)) / (res.y[2] - y0.theta);
        CHECK(std::abs(slope - 0.5 * beta) < 1e-8);
        // v nondecreasing along the manifold arc is implied by v' = (k/2) u^2 >= 0
    }
}

TEST_CASE("equilibrium spectra match Eq.-(20) closed forms") {
    for (double beta : {1.0, 0.5, 2.0 / 3.0}) {
        for (double gamma : {1.0, 2.0}) {
            SurfaceSpec s = surface_from_beta(beta, gamma);
            auto [sp, sm] = equilibria_and_eigenvalues(s);
            double a = beta * std::sqrt(2.0 * gamma);

            // closed form: {+-a (twice), 0, -+a/2}
            std::array<double, 4> want_p{-0.5 * a, 0.0, a, a};
            for (int i = 0; i < 4; ++i)
                CHECK(sp.eigenvalues[i] == doctest::Approx(want_p[i]).epsilon(1e-12));
            std::array<double, 4> want_m{-a, -a, 0.0, 0.5 * a};
            for (int i = 0; i < 4; ++i)
                CHECK(sm.eigenvalues[i] == doctest::Approx(want_m[i]).epsilon(1e-12));

            // FD Jacobian of the regularized field reproduces the spectrum
            for (const auto& eq : {sp, sm}) {
                auto jac = regularized_jacobian_fd(s, {eq.r, 0.0, eq.v, eq.u});
                auto ev = num::eigenvalues(jac);
                std::array<double, 4> got;
                for (int i = 0; i < 4; ++i) {
                    got[i] = ev[i].real();
                    CHECK(std::abs(ev[i].imag()) < 1e-6);
                }
                std::sort(got.begin(), got.end());
                for (int i = 0; i < 4; ++i)
                    CHECK(std::abs(got[i] - eq.eigenvalues[i]) < 1e-6);
            }
        }
    }
}

TEST_CASE("sphere S+ spectrum hand value") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    auto [sp, sm] = equilibria_and_eigenvalues(sphere);
    double root2 = std::sqrt(2.0);
    // {sqrt(2), sqrt(2), 0, -sqrt(2)/2} sorted ascending
    CHECK(sp.eigenvalues[0] == doctest::Approx(-root2 / 2));
    CHECK(sp.eigenvalues[1] == doctest::Approx(0.0));
    CHECK(sp.eigenvalues[2] == doctest::Approx(root2));
    CHECK(sp.eigenvalues[3] == doctest::Approx(root2));
    CHECK(sp.v == doctest::Approx(root2));
    CHECK(sm.v == doctest::Approx(-root2));
}

TEST_CASE("physical time quadrature matches the dynamics clock") {
    SurfaceSpec s = make_surface(1.0, 2.0 / 3.0, 1.0);
    PhaseState x0{0.3 * s.r_south, 0.2, -0.25, 0.15};
    double t_end = 1.5;
    Trajectory phys = integrate(s, x0, t_end, 1e-12);
    REQUIRE(phys.termination == Termination::TimeLimit);

    McGeheeState y0 = to_mcgehee(s, x0);
    RegularizedTrajectory reg = integrate_regularized(s, y0, 400.0, 1e-12);

    double worst = 0.0;
    int compared = 0;
    for (const auto& sample : reg.samples) {
        if (sample.t_phys > t_end || sample.y.r >= 0.45 * s.r_south) break;
        if (sample.y.r < 0.02) continue; // transform ill-conditioned on top of N
        PhaseState via_reg = from_mcgehee(s, sample.y);
        PhaseState via_phys = phys.at(sample.t_phys);
        worst = std::max({worst, std::abs(via_reg.r - via_phys.r),
                          std::abs(via_reg.theta - via_phys.theta),
                          std::abs(via_reg.p_r - via_phys.p_r),
                          std::abs(via_reg.p_theta - via_phys.p_theta)});
        ++compared;
    }
    REQUIRE(compared > 10);
    CHECK(worst < 1e-6);
}

TEST_CASE("collision manifold parametrization") {
    SurfaceSpec s = make_surface(1.0, 0.5, 2.0);
    CollisionManifold cm = collision_manifold(s);
    CHECK(cm.radius == doctest::Approx(2.0));
    McGeheeState y = manifold_point(s, 1.0, 0.25);
    CHECK(y.u * y.u + y.v * y.v == doctest::Approx(2.0 * s.gamma_c));
    CHECK(chi_of(y) == doctest::Approx(0.25));
}
