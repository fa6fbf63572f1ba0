#include "ck/block.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ck/errors.hpp"
#include "ck/numerics.hpp"

namespace ck {

namespace {

// root of 1/|Theta| = delta on the monotone branch of the given chart
double solve_r_delta(const SurfaceSpec& s, double delta, Chart chart) {
    double r_eq = s.r_equator();
    double eps = 1e-12 * s.r_south;
    if (chart == Chart::North) {
        auto g = [&](double r) { return 1.0 / std::abs(profile_theta(s, r)) - delta; };
        return num::bisect(g, eps, r_eq - eps, 1e-13);
    }
    auto g = [&](double r) { return 1.0 / profile_theta(s, r) - delta; };
    return num::bisect(g, r_eq + eps, s.r_south - eps, 1e-13);
}

double transit_tau_cap(const SurfaceSpec& s, double requested) {
    if (requested > 0.0) return requested;
    return 1000.0 / (std::abs(s.beta) * std::sqrt(2.0 * s.gamma_c));
}

} // namespace

double BlockSpec::u_max() const { return std::sqrt(boundary_radius_sq); }

double block_convexity_margin(const SurfaceSpec& s, double h, double delta) {
    double r_delta = solve_r_delta(s, delta, Chart::North);
    double fp = profile_fp(s, r_delta);
    return (h * delta + s.gamma_c) * fp * fp - 0.5 * s.gamma_c * s.beta * s.beta;
}

BlockSpec make_block(const SurfaceSpec& s, double h, double delta) {
    double bound = h != 0.0 ? s.gamma_c / std::abs(h) : kZeroEnergyDeltaCap;
    if (!(delta > 0.0) || delta >= bound)
        throw ValidationError("make_block: delta must satisfy 0 < delta < " +
                              std::to_string(bound) + " for h = " + std::to_string(h));
    BlockSpec bs;
    bs.h = h;
    bs.delta = delta;
    bs.r_delta = solve_r_delta(s, delta, Chart::North);
    double f = profile_f(s, bs.r_delta);
    double theta = profile_theta(s, bs.r_delta);
    bs.k1 = std::abs(theta) * f;
    bs.k2 = s.beta * theta * std::abs(theta) * f * f;
    bs.boundary_radius_sq = 2.0 * s.gamma_c + 2.0 * h * delta;
    if (block_convexity_margin(s, h, delta) <= 0.0)
        throw ValidationError("make_block: block too large, convexity condition fails "
                              "(delta exceeds delta_0)");
    return bs;
}

double choose_block_delta(const SurfaceSpec& s, double h, double grid_fraction) {
    if (!(grid_fraction > 0.0) || !(grid_fraction < 1.0))
        throw ValidationError("choose_block_delta: grid_fraction must be in (0, 1)");
    double g = s.gamma_c;
    // For this family the convexity margin changes sign at the positive root
    // of d^2 - (2 h q / g) d - q with q = beta^2 L^2; use it to cap the scan.
    double q = s.beta * s.beta * s.L * s.L;
    double b_c = h * q / g;
    double upper = 1.05 * (b_c + std::sqrt(b_c * b_c + q));
    if (h != 0.0) upper = std::min(upper, 0.999 * g / std::abs(h));

    // Scan for the delta that jointly maximizes the convexity margin and the
    // boundary-phase margin k2 u^2 + g/beta over |u| <= grid_fraction * u_max.
    // The latter keeps the principal-branch zeta formula on its valid branch
    // across the whole tested annulus.
    double s2 = grid_fraction * grid_fraction;
    const int n_scan = 400;
    double best_delta = -1.0, best_score = 0.0;
    for (int i = 1; i < n_scan; ++i) {
        double delta = upper * i / n_scan;
        double conv = block_convexity_margin(s, h, delta) / (0.5 * g * s.beta * s.beta);
        if (conv <= 0.0) continue;
        double radius_sq = 2.0 * g + 2.0 * h * delta;
        if (radius_sq <= 0.0) continue;
        double r_delta = solve_r_delta(s, delta, Chart::North);
        double f = profile_f(s, r_delta);
        double theta = profile_theta(s, r_delta);
        double k2 = s.beta * theta * std::abs(theta) * f * f;
        double phase = (k2 * s2 * radius_sq + g / s.beta) / (g / s.beta);
        double score = std::min(conv, phase);
        if (score > best_score) {
            best_score = score;
            best_delta = delta;
        }
    }
    if (best_delta <= 0.0)
        throw ValidationError("choose_block_delta: no admissible delta at h = " +
                              std::to_string(h) + " covering the requested annulus");
    make_block(s, h, best_delta);
    return best_delta;
}

double zeta(const BlockSpec& bs, const SurfaceSpec& s, double u) {
    double r2 = bs.boundary_radius_sq;
    if (u * u > r2 * (1.0 + 1e-12))
        throw ValidationError("zeta: u^2 exceeds the boundary circle radius");
    double v2 = std::max(0.0, r2 - u * u);
    double a = -bs.k1 * u * std::sqrt(v2);
    double b = bs.k2 * u * u + s.gamma_c / s.beta;
    double denom = std::sqrt(a * a + b * b);
    double arg = std::clamp(a / denom, -1.0, 1.0);
    return std::acos(arg) / s.beta;
}

double gamma_exit(const BlockSpec& bs, const SurfaceSpec& s, double u) {
    if (u == 0.0)
        throw ValidationError("gamma_exit: u = 0 lies in the asymptotic set a+; "
                              "only one-sided limits exist");
    double b = s.beta;
    double sign_b = b > 0.0 ? 1.0 : -1.0;
    double branch = (u > 0.0) ? (2.0 * std::numbers::pi / b) * (1.0 + sign_b)
                              : (2.0 * std::numbers::pi / b) * (1.0 - sign_b);
    return -2.0 * zeta(bs, s, u) - std::numbers::pi / b + branch;
}

double gamma_exit_limit(const SurfaceSpec& s, int sign) {
    double lim = 2.0 * std::numbers::pi / std::abs(s.beta);
    return sign >= 0 ? lim : -lim;
}

BoundaryPoint map_across_block(const BlockSpec& bs, const SurfaceSpec& s, double theta,
                               double u) {
    if (u == 0.0)
        throw ValidationError("map_across_block: u = 0 lies in a+, the map does not "
                              "reach the exit set");
    double v2 = bs.boundary_radius_sq - u * u;
    if (v2 < 0.0) throw ValidationError("map_across_block: (theta, u) not on the boundary circle");
    return BoundaryPoint{theta + gamma_exit(bs, s, u), u, std::sqrt(v2)};
}

TransitResult numeric_transit(const BlockSpec& bs, const SurfaceSpec& s, double theta,
                              double u, double tol, double tau_cap) {
    if (u == 0.0) throw ValidationError("numeric_transit: u = 0 never exits the block");
    double v2 = bs.boundary_radius_sq - u * u;
    if (v2 <= 0.0)
        throw ValidationError("numeric_transit: entry not strictly inside the boundary circle");
    double cap = transit_tau_cap(s, tau_cap);

    ode::Options opt;
    opt.rtol = tol;
    opt.atol = tol;
    double r_delta = bs.r_delta;
    std::array<ode::Event, 1> events{ode::Event{
        [r_delta](double, std::span<const double> y) { return y[0] - r_delta; }, +1, true}};

    std::array<double, 5> z0{bs.r_delta, -std::sqrt(v2), theta, u, 0.0};
    auto res = ode::integrate_dop853(regularized_rhs(s, Chart::North), 0.0, z0, cap, opt,
                                     events, false);
    if (res.stop != ode::Stop::Event)
        throw NumericalError("numeric_transit: transit timeout (entry too close to a+?)");
    return TransitResult{res.y[2], res.y[3], res.y[1], res.t};
}

double gamma_limit_extrapolated(const BlockSpec& bs, const SurfaceSpec& s, int sign,
                                double tol) {
    // Gamma(u) = Gamma(0+-) + c u + O(u^2); two smallest |u| give the limit
    const double us[] = {1e-1, 1e-2, 1e-3, 1e-4};
    double g1 = 0.0, g2 = 0.0, u1 = 0.0, u2 = 0.0;
    for (int i = 0; i < 4; ++i) {
        double u = sign >= 0 ? us[i] : -us[i];
        TransitResult t = numeric_transit(bs, s, 0.0, u, tol);
        g1 = g2;
        u1 = u2;
        g2 = t.theta_out;
        u2 = u;
    }
    return (u1 * g2 - u2 * g1) / (u1 - u2);
}

RegularizabilityVerdict classify_regularizability(const SurfaceSpec& s, int m_max) {
    if (m_max < 1) throw ValidationError("classify_regularizability: m_max must be >= 1");
    RegularizabilityVerdict v;
    double b = std::abs(s.beta);
    for (int m = 1; m <= m_max; ++m) {
        double target = 2.0 / m;
        if (std::abs(b - target) <= kRationalityTol * std::max(b, target)) {
            v.north_m = m;
            break;
        }
    }
    v.south = true;
    v.orbifold_n = classify_orbifold(s, m_max);
    if (v.orbifold_n) {
        int m_expected = 2 * *v.orbifold_n;
        if (!v.north_m && m_expected > m_max) {
            double target = 2.0 / m_expected;
            if (std::abs(b - target) <= kRationalityTol * std::max(b, target))
                v.north_m = m_expected;
        }
        if (!v.north_m || *v.north_m != m_expected)
            throw NumericalError("classify_regularizability: orbifold verdict n = " +
                                 std::to_string(*v.orbifold_n) +
                                 " inconsistent with north m");
    }
    return v;
}

std::string format_verdict_line(const SurfaceSpec& s, const RegularizabilityVerdict& v) {
    std::string line = "beta=" + num::format_shortest(s.beta);
    line += " north=";
    line += v.north_m ? std::to_string(*v.north_m) : "none";
    line += " south=regularizable orbifold=";
    line += v.orbifold_n ? std::to_string(*v.orbifold_n) : "none";
    return line;
}

double barrier_radius(const SurfaceSpec& s, double h) {
    // gamma Theta(r*) = h  <=>  cot(sqrt(K) r*) = -L^2 sqrt(K) h / gamma
    double x = -s.L * s.L * s.sqrt_K * h / s.gamma_c;
    return std::atan2(1.0, x) / s.sqrt_K;
}

SouthBlockReport south_pole_block_check(const SurfaceSpec& s, double h, double delta,
                                        int n_samples, double tol) {
    if (!(delta > 0.0)) throw ValidationError("south_pole_block_check: delta must be positive");
    if (!(h * delta > s.gamma_c))
        throw ValidationError("south_pole_block_check: boundary circle empty, "
                              "needs h * delta > gamma");
    if (n_samples < 1) throw ValidationError("south_pole_block_check: n_samples must be >= 1");

    SouthBlockReport rep;
    rep.r_delta = solve_r_delta(s, delta, Chart::South);
    rep.boundary_radius_sq = 2.0 * h * delta - 2.0 * s.gamma_c;
    rep.r_star = barrier_radius(s, h);
    rep.all_exited = true;

    double radius = std::sqrt(rep.boundary_radius_sq);
    double cap = transit_tau_cap(s, -1.0);
    double r_delta = rep.r_delta;

    ode::Options opt;
    opt.rtol = tol;
    opt.atol = tol;
    std::array<ode::Event, 1> events{ode::Event{
        [r_delta](double, std::span<const double> y) { return y[0] - r_delta; }, -1, true}};

    for (int i = 0; i < n_samples; ++i) {
        // entries across the v > 0 half-circle, tangency excluded
        double u = radius * 0.95 * (2.0 * (i + 0.5) / n_samples - 1.0);
        double v = std::sqrt(rep.boundary_radius_sq - u * u);
        std::array<double, 5> z0{r_delta, v, 0.0, u, 0.0};
        auto res = ode::integrate_dop853(regularized_rhs(s, Chart::South), 0.0, z0, cap,
                                         opt, events, false);
        ++rep.n_transits;
        if (res.stop != ode::Stop::Event) {
            rep.all_exited = false;
            continue;
        }
        rep.max_tau = std::max(rep.max_tau, res.t);
        rep.max_u_mismatch = std::max(rep.max_u_mismatch, std::abs(res.y[3] - u));
        rep.max_v_mismatch = std::max(rep.max_v_mismatch, std::abs(res.y[1] + v));
    }
    return rep;
}

} // namespace ck
