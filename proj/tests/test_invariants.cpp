#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ck/invariants.hpp"
#include "ck/numerics.hpp"
#include "ck/sampling.hpp"

using namespace ck;
using std::numbers::pi;

TEST_CASE("conserved set hand values on the sphere") {
    SurfaceSpec sphere = make_surface(1.0, 1.0, 1.0);
    ConservedSet c = conserved(sphere, {pi / 2, 0.0, 0.0, 1.0});
    CHECK(c.H == doctest::Approx(0.5));
    CHECK(c.p_theta == doctest::Approx(1.0));
    CHECK(c.I1 == doctest::Approx(-1.0)); // Theta = 0 at the equator
    CHECK(c.I2 == doctest::Approx(0.0));
    // both sides of the dependency identity: 1 = 2*(1/2) - 1 + 1
    CHECK(dependency_residual(sphere, {pi / 2, 0.0, 0.0, 1.0}) < 1e-14);
}

TEST_CASE("radial orbits have |I| = gamma/beta") {
    SurfaceSpec s = make_surface(1.0, 2.0 / 3.0, 1.3);
    for (double theta : {0.0, 0.7, 2.4}) {
        ConservedSet c = conserved(s, {1.1, theta, 0.4, 0.0});
        double b = s.beta, g = s.gamma_c;
        CHECK(c.I1 == doctest::Approx(-(g / b) * std::cos(b * theta)));
        CHECK(c.I2 == doctest::Approx(-(g / b) * std::sin(b * theta)));
        CHECK(c.magnitude() == doctest::Approx(g / b));
        CHECK(dependency_residual(s, {1.1, theta, 0.4, 0.0}) < 1e-14);
    }
}

TEST_CASE("dependency identity discriminates K from K^2") {
    StateSampleOptions opts;
    opts.p_theta_min = 0.25;

    SurfaceSpec s1 = make_surface(1.0, 1.0, 1.0);
    for (const auto& x : sample_states(s1, 1000, 11, opts))
        CHECK(dependency_residual(s1, x) < 1e-10);

    SurfaceSpec s4 = make_surface(4.0, 0.25, 1.0);
    for (const auto& x : sample_states(s4, 1000, 12, opts)) {
        CHECK(dependency_residual(s4, x) < 1e-10);
        // the K^2 reading fails by a wide margin on K = 4
        ConservedSet c = conserved(s4, x);
        double b2 = s4.beta * s4.beta;
        double pt2 = c.p_theta * c.p_theta;
        double rhs_k2 = 2.0 * pt2 * c.H - s4.K * s4.K * pt2 * pt2 / b2 +
                        s4.gamma_c * s4.gamma_c / b2;
        CHECK(std::abs(c.I1 * c.I1 + c.I2 * c.I2 - rhs_k2) >= 1e-2);
    }
}

TEST_CASE("poisson brackets of the integrals vanish") {
    SurfaceSpec s = make_surface(1.0, 1.0, 1.0);
    auto states = sample_states(s, 100, 21, {});
    for (const auto& x : states) {
        CHECK(poisson_bracket_residual(s, x, Integral::I1, 1e-5) < 1e-6);
        CHECK(poisson_bracket_residual(s, x, Integral::I2, 1e-5) < 1e-6);
        CHECK(poisson_bracket_residual(s, x, Integral::PTheta, 1e-5) < 1e-6);
        // {H,H} = 0 to round-off
        CHECK(poisson_bracket_residual(s, x, Integral::H, 1e-5) < 1e-9);
    }
}

TEST_CASE("bracket residuals converge as O(step^2)") {
    SurfaceSpec s = make_surface(1.0, 2.0 / 3.0, 1.0);
    auto states = sample_states(s, 40, 33, {});
    std::vector<double> ratios;
    for (const auto& x : states) {
        double coarse = poisson_bracket_residual(s, x, Integral::I1, 1e-4);
        double fine = poisson_bracket_residual(s, x, Integral::I1, 5e-5);
        if (coarse > 1e-12 && fine > 0.0) ratios.push_back(coarse / fine);
    }
    REQUIRE(ratios.size() > 20);
    std::sort(ratios.begin(), ratios.end());
    double median = ratios[ratios.size() / 2];
    CHECK(median > 3.0);
    CHECK(median < 5.0);
}

TEST_CASE("three of the four integrals are independent") {
    SurfaceSpec s = make_surface(1.0, 0.5, 1.0);
    auto states = sample_states(s, 100, 44, {});
    const double fd = 1e-6;
    for (const auto& x : states) {
        // rows: gradients of H, p_theta, I1 in (r, theta, p_r, p_theta)
        std::vector<double> m(12);
        int row = 0;
        for (Integral which : {Integral::H, Integral::PTheta, Integral::I1}) {
            for (int j = 0; j < 4; ++j) {
                PhaseState xp = x, xm = x;
                double* fields_p[4] = {&xp.r, &xp.theta, &xp.p_r, &xp.p_theta};
                double* fields_m[4] = {&xm.r, &xm.theta, &xm.p_r, &xm.p_theta};
                *fields_p[j] += fd;
                *fields_m[j] -= fd;
                m[row * 4 + j] =
                    (integral_value(s, xp, which) - integral_value(s, xm, which)) /
                    (2.0 * fd);
            }
            ++row;
        }
        auto sv = num::singular_values(m, 3, 4);
        CHECK(sv[2] > 1e-6 * sv[0]);
    }
}

TEST_CASE("drift along flow, radial orbit keeps p_theta exactly") {
    SurfaceSpec s = make_surface(1.0, 1.0, 1.0);
    Trajectory traj = integrate(s, {2.2, 0.0, 0.3, 0.0}, 3.0, 1e-10);
    DriftReport rep = drift_along_flow(s, traj);
    CHECK(rep.dPtheta == 0.0);

    Trajectory orbit = integrate(s, {pi / 2, 0.0, 0.0, 1.0}, 100.0, 1e-10);
    DriftReport rep2 = drift_along_flow(s, orbit);
    CHECK(rep2.max_drift() < 1e-8);

    SurfaceSpec s23 = surface_from_beta(2.0 / 3.0, 1.0);
    Trajectory orbit23 = integrate(s23, {1.5, 0.0, 0.1, 0.45}, 100.0, 1e-10);
    DriftReport rep3 = drift_along_flow(s23, orbit23);
    CHECK(rep3.dI1 < 1e-8);
    CHECK(rep3.dI2 < 1e-8);
}
