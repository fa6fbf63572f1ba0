#include "ck/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "ck/batch.hpp"
#include "ck/block.hpp"
#include "ck/blowup.hpp"
#include "ck/errors.hpp"
#include "ck/invariants.hpp"
#include "ck/io.hpp"
#include "ck/sampling.hpp"
#include "ck/trajectory.hpp"

namespace ck::harness {

namespace fs = std::filesystem;

namespace {

SurfaceSpec surface_of(const RunConfig& cfg) {
    return make_surface(cfg.K, cfg.L, cfg.gamma_c);
}

void write_effective_config(const RunConfig& cfg) {
    io::write_text_file(fs::path(cfg.out_dir) / "effective_config.txt",
                        effective_config_text(cfg));
}

std::string ns(double v) { return num::format_shortest(v); }

} // namespace

int run_simulate(const RunConfig& cfg) {
    SurfaceSpec s = surface_of(cfg);
    write_effective_config(cfg);
    Trajectory traj = integrate(s, cfg.initial, cfg.t_end, cfg.tol, cfg.collision_margin);

    io::CsvWriter csv(fs::path(cfg.out_dir) / "trajectory.csv",
                      {"t", "r", "theta", "p_r", "p_theta", "H", "I1", "I2"});
    for (const auto& sample : traj.samples) {
        ConservedSet c = conserved(s, sample.x);
        csv.row({sample.t, sample.x.r, sample.x.theta, sample.x.p_r, sample.x.p_theta,
                 c.H, c.I1, c.I2});
    }

    std::ostringstream summary;
    DriftReport drift = drift_along_flow(s, traj);
    const char* term = traj.termination == Termination::TimeLimit ? "time-limit"
                       : traj.termination == Termination::CollisionApproach
                           ? "collision-approach"
                           : "numerical-failure";
    summary << "termination = " << term << "\n";
    summary << "t_final = " << ns(traj.t_final()) << "\n";
    summary << "drift_H = " << ns(drift.dH) << "\n";
    summary << "drift_p_theta = " << ns(drift.dPtheta) << "\n";
    summary << "drift_I1 = " << ns(drift.dI1) << "\n";
    summary << "drift_I2 = " << ns(drift.dI2) << "\n";

    if (cfg.initial.p_theta != 0.0) {
        ConicParams cp = conic_params(s, conserved(s, traj.initial()));
        io::CsvWriter cmp(fs::path(cfg.out_dir) / "orbit_compare.csv",
                          {"theta", "rho_numeric", "rho_analytic", "deviation"});
        double worst = 0.0;
        for (const auto& sample : traj.samples) {
            double rho_n = -profile_theta(s, sample.x.r);
            double rho_a = rho_of_theta(cp, s.beta, sample.x.theta);
            worst = std::max(worst, std::abs(rho_n - rho_a));
            cmp.row({sample.x.theta, rho_n, rho_a, std::abs(rho_n - rho_a)});
        }
        summary << "conic_max_deviation = " << ns(worst) << "\n";
    }
    io::write_text_file(fs::path(cfg.out_dir) / "simulate_summary.txt", summary.str());
    return traj.termination == Termination::NumericalFailure ? 2 : 0;
}

int run_blowup(const RunConfig& cfg) {
    SurfaceSpec s = surface_of(cfg);
    write_effective_config(cfg);
    if (cfg.blowup_theta_lines.empty())
        throw ValidationError("blowup: theta_lines must not be empty");

    double chi0 = cfg.blowup_chi0;
    double chi_stop = -chi0; // symmetric arc ending short of S+
    if (!(chi0 > -std::numbers::pi / 2.0) || !(chi0 < chi_stop))
        throw ValidationError("blowup: chi0 must lie in (-pi/2, 0)");

    io::CsvWriter csv(fs::path(cfg.out_dir) / "manifold_flow.csv",
                      {"tau", "theta", "chi", "u", "v"});
    double tau_cap = 1000.0 / (std::abs(s.beta) * std::sqrt(2.0 * s.gamma_c));
    for (double theta_start : cfg.blowup_theta_lines) {
        McGeheeState y0 = manifold_point(s, theta_start, chi0);
        ode::Options opt;
        opt.rtol = opt.atol = std::min(cfg.tol, 1e-12);
        std::array<ode::Event, 1> ev{ode::Event{
            [chi_stop](double, std::span<const double> y) {
                return std::atan2(y[1], y[3]) - chi_stop;
            },
            +1, true}};
        std::vector<std::array<double, 5>> rows;
        auto obs = [&rows](double tau, std::span<const double> y) {
            rows.push_back({tau, y[2], std::atan2(y[1], y[3]), y[3], y[1]});
        };
        std::array<double, 5> z0{y0.r, y0.v, y0.theta, y0.u, 0.0};
        auto res = ode::integrate_dop853(regularized_rhs(s, Chart::North), 0.0, z0,
                                         tau_cap, opt, ev, false, obs);
        if (res.stop != ode::Stop::Event)
            throw NumericalError("blowup: manifold arc did not reach chi_stop");
        rows.push_back({res.t, res.y[2], std::atan2(res.y[1], res.y[3]), res.y[3], res.y[1]});
        for (const auto& r : rows) csv.row({r[0], r[1], r[2], r[3], r[4]});
    }
    return 0;
}

int run_block_map(const RunConfig& cfg) {
    SurfaceSpec s = surface_of(cfg);
    write_effective_config(cfg);
    double delta = cfg.block_delta > 0.0 ? cfg.block_delta
                                         : choose_block_delta(s, cfg.block_h, 0.95);
    BlockSpec bs = make_block(s, cfg.block_h, delta);

    std::vector<BoundaryPoint> entries;
    double u_max = bs.u_max();
    for (int sign : {-1, 1})
        for (int k = 0; k < 10; ++k) {
            double frac = 0.05 + 0.1 * k;
            entries.push_back({0.0, sign * frac * u_max, 0.0});
        }

    auto transits = batch::transit_grid(bs, s, entries, std::min(cfg.tol, 1e-11));

    io::CsvWriter csv(fs::path(cfg.out_dir) / "block_map.csv",
                      {"theta", "u", "theta_out_analytic", "theta_out_numeric", "v_out",
                       "tau_transit", "deviation"});
    double worst = 0.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        BoundaryPoint exit_a = map_across_block(bs, s, entries[i].theta, entries[i].u);
        double dev = std::abs(exit_a.theta - transits[i].theta_out);
        worst = std::max(worst, dev);
        csv.row({entries[i].theta, entries[i].u, exit_a.theta, transits[i].theta_out,
                 transits[i].v_out, transits[i].tau_transit, dev});
    }

    std::ostringstream summary;
    summary << "h = " << ns(cfg.block_h) << "\n";
    summary << "delta = " << ns(delta) << "\n";
    summary << "r_delta = " << ns(bs.r_delta) << "\n";
    summary << "gamma0_analytic = " << ns(gamma_exit_limit(s, +1)) << "\n";
    summary << "gamma0_extrapolated = "
            << ns(gamma_limit_extrapolated(bs, s, +1, std::min(cfg.tol, 1e-11))) << "\n";
    summary << "max_map_deviation = " << ns(worst) << "\n";
    io::write_text_file(fs::path(cfg.out_dir) / "block_map_summary.txt", summary.str());
    return 0;
}

int run_classify(const RunConfig& cfg) {
    write_effective_config(cfg);
    std::vector<double> betas = cfg.sweep_beta;
    std::string text;
    if (betas.empty()) {
        SurfaceSpec s = surface_of(cfg);
        text += format_verdict_line(s, classify_regularizability(s, cfg.m_max)) + "\n";
    } else {
        for (double beta : betas) {
            SurfaceSpec s = surface_from_beta(beta, cfg.gamma_c);
            text += format_verdict_line(s, classify_regularizability(s, cfg.m_max)) + "\n";
        }
    }
    io::write_text_file(fs::path(cfg.out_dir) / "verdicts.txt", text);
    return 0;
}

namespace {

struct Suite {
    std::string name;
    double worst;
    double threshold;
    bool pass;
};

void add(std::vector<Suite>& suites, std::string name, double worst, double threshold) {
    suites.push_back({std::move(name), worst, threshold, worst < threshold});
}

} // namespace

int run_verify(const RunConfig& cfg) {
    SurfaceSpec s = surface_of(cfg);
    write_effective_config(cfg);
    std::vector<Suite> suites;

    // closed-form profile identities
    {
        std::mt19937_64 gen(cfg.seed);
        double margin = s.pole_margin();
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            double r = num::uniform(gen, s.r_north + margin, s.r_south - margin);
            Profile p = profile(s, r);
            double fpp = -s.K * p.f;
            double b2 = s.beta * s.beta;
            double lead = 1.0 / (p.f * p.f * b2);
            double prop1 = std::abs(-p.f * fpp + p.fp * p.fp - b2) / std::max(1.0, b2);
            double prop2 = std::abs(p.fp / p.f + b2 * p.Theta) /
                           std::max(1.0, std::abs(p.fp / p.f));
            double prop3 = std::abs(p.Theta * p.Theta - (lead - s.K / (b2 * b2))) /
                           std::max(1.0, lead);
            worst = std::max({worst, prop1, prop2, prop3});
        }
        add(suites, "profile_identities", worst, 1e-10);
    }

    // Laplace-Beltrami residual of the potential
    {
        double worst = 0.0;
        for (int i = 1; i <= 19; ++i) {
            double r = s.r_south * (0.05 * i);
            worst = std::max(worst, std::abs(laplace_beltrami_residual(s, r)));
        }
        add(suites, "laplace_beltrami", worst, 1e-6);
    }

    // dependency identity on this surface and on a K = 4 companion
    StateSampleOptions dep_opts;
    dep_opts.p_theta_min = 0.25;
    {
        auto states = sample_states(s, 1000, cfg.seed + 1, dep_opts);
        auto residuals = batch::dependency_residuals(s, states);
        double worst = *std::max_element(residuals.begin(), residuals.end());
        SurfaceSpec s4 = make_surface(4.0, 0.25, cfg.gamma_c);
        auto states4 = sample_states(s4, 1000, cfg.seed + 2, dep_opts);
        auto residuals4 = batch::dependency_residuals(s4, states4);
        worst = std::max(worst, *std::max_element(residuals4.begin(), residuals4.end()));
        add(suites, "dependency_identity", worst, 1e-10);
    }

    // Poisson brackets of the integrals with H; also emit the report rows
    {
        auto states = sample_states(s, 100, cfg.seed + 3, dep_opts);
        auto brackets = batch::bracket_residuals(s, states, 1e-5);
        auto deps = batch::dependency_residuals(s, states);
        io::CsvWriter rep(fs::path(cfg.out_dir) / "verify_report.csv",
                          {"r", "theta", "p_r", "p_theta", "bracket_I1", "bracket_I2",
                           "dependency"});
        double worst = 0.0;
        for (std::size_t i = 0; i < states.size(); ++i) {
            rep.row({states[i].r, states[i].theta, states[i].p_r, states[i].p_theta,
                     brackets[i].I1, brackets[i].I2, deps[i]});
            worst = std::max({worst, brackets[i].I1, brackets[i].I2, brackets[i].p_theta});
        }
        add(suites, "poisson_brackets", worst, 1e-6);
    }

    // conservation drift and conic comparison along a few orbits
    {
        auto starts = sample_bounded_orbit_states(s, 5, cfg.seed + 4);
        double worst_drift = 0.0, worst_conic = 0.0;
        for (const auto& x0 : starts) {
            Trajectory traj = integrate(s, x0, 50.0, cfg.tol);
            worst_drift = std::max(worst_drift, drift_along_flow(s, traj).max_drift());
            worst_conic = std::max(worst_conic, compare_orbit(s, traj));
        }
        add(suites, "integral_drift", worst_drift, 1e-8);
        add(suites, "conic_orbit", worst_conic, 1e-6);
    }

    // slope of the flow on the collision manifold
    {
        McGeheeState y0 = manifold_point(s, 0.0, -std::numbers::pi / 2 + 0.05);
        double chi_stop = std::numbers::pi / 2 - 0.05;
        ode::Options opt;
        opt.rtol = opt.atol = 1e-12;
        std::array<ode::Event, 1> ev{ode::Event{
            [chi_stop](double, std::span<const double> y) {
                return std::atan2(y[1], y[3]) - chi_stop;
            },
            +1, true}};
        std::array<double, 5> z0{y0.r, y0.v, y0.theta, y0.u, 0.0};
        double tau_cap = 1000.0 / (std::abs(s.beta) * std::sqrt(2.0 * s.gamma_c));
        auto res = ode::integrate_dop853(regularized_rhs(s, Chart::North), 0.0, z0,
                                         tau_cap, opt, ev, false);
        double slope = (std::atan2(res.y[1], res.y[3]) - chi_of(y0)) / (res.y[2] - y0.theta);
        add(suites, "manifold_slope", std::abs(slope - 0.5 * std::abs(s.beta)), 1e-8);
    }

    // equilibrium spectra: FD Jacobian vs closed form
    {
        auto [sp, sm] = equilibria_and_eigenvalues(s);
        double worst = 0.0;
        for (const auto& eq : {sp, sm}) {
            auto jac = regularized_jacobian_fd(s, McGeheeState{eq.r, 0.0, eq.v, eq.u});
            auto ev = num::eigenvalues(jac);
            std::array<double, 4> got;
            for (int i = 0; i < 4; ++i) got[i] = ev[i].real();
            std::sort(got.begin(), got.end());
            for (int i = 0; i < 4; ++i) {
                worst = std::max(worst, std::abs(got[i] - eq.eigenvalues[i]));
                worst = std::max(worst, std::abs(ev[i].imag()));
            }
        }
        add(suites, "equilibrium_spectra", worst, 1e-6);
    }

    // analytic vs numeric map across the block
    {
        double delta = choose_block_delta(s, cfg.block_h, 0.95);
        BlockSpec bs = make_block(s, cfg.block_h, delta);
        std::vector<BoundaryPoint> entries;
        for (int sign : {-1, 1})
            for (int k = 0; k < 5; ++k)
                entries.push_back({0.7, sign * (0.1 + 0.2 * k) * bs.u_max(), 0.0});
        auto transits = batch::transit_grid(bs, s, entries, 1e-11);
        double worst = 0.0;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            BoundaryPoint exit_a = map_across_block(bs, s, entries[i].theta, entries[i].u);
            worst = std::max(worst, std::abs(exit_a.theta - transits[i].theta_out));
            worst = std::max(worst, std::abs(exit_a.v - transits[i].v_out));
            worst = std::max(worst, std::abs(exit_a.u - transits[i].u_out));
        }
        add(suites, "block_map", worst, 1e-6);
    }

    // south block: every sampled entry exits
    {
        double theta_scale = 1.0 / (s.L * s.L * s.sqrt_K);
        auto rep = south_pole_block_check(s, s.gamma_c * theta_scale, 2.0 / theta_scale, 9,
                                          cfg.tol);
        add(suites, "south_block_exits", rep.all_exited ? 0.0 : 1.0, 0.5);
        add(suites, "south_block_map", std::max(rep.max_u_mismatch, rep.max_v_mismatch),
            1e-6);
    }

    std::ostringstream out;
    bool all_pass = true;
    for (const auto& suite : suites) {
        all_pass = all_pass && suite.pass;
        out << (suite.pass ? "[PASS] " : "[FAIL] ") << suite.name
            << " worst=" << ns(suite.worst) << " threshold=" << ns(suite.threshold) << "\n";
    }
    out << (all_pass ? "VERIFY: all suites passed\n" : "VERIFY: failures present\n");
    io::write_text_file(fs::path(cfg.out_dir) / "verify_summary.txt", out.str());
    return all_pass ? 0 : 2;
}

int run_sweep(const RunConfig& cfg) {
    write_effective_config(cfg);
    if (cfg.sweep_beta.empty()) throw ValidationError("sweep: beta grid must not be empty");
    std::vector<double> energies =
        cfg.sweep_energy.empty() ? std::vector<double>{cfg.block_h} : cfg.sweep_energy;

    struct Cell {
        double beta, h;
        std::string row;
        bool failed = false;
    };
    std::vector<Cell> cells;
    for (double beta : cfg.sweep_beta)
        for (double h : energies) cells.push_back({beta, h, "", false});

    double tol = std::min(cfg.tol, 1e-11);
    int m_max = cfg.m_max;
    double gamma_c = cfg.gamma_c;

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cells.size()); ++i) {
        Cell& cell = cells[static_cast<std::size_t>(i)];
        try {
            SurfaceSpec sb = surface_from_beta(cell.beta, gamma_c);
            auto verdict = classify_regularizability(sb, m_max);
            double delta = choose_block_delta(sb, cell.h, 0.5);
            BlockSpec bs = make_block(sb, cell.h, delta);
            double g_analytic = gamma_exit_limit(sb, +1);
            double g_numeric = gamma_limit_extrapolated(bs, sb, +1, tol);
            std::string row = ns(cell.beta) + "," + ns(cell.h) + "," + ns(delta) + ",";
            row += (verdict.north_m ? std::to_string(*verdict.north_m) : "none");
            row += ",regularizable,";
            row += (verdict.orbifold_n ? std::to_string(*verdict.orbifold_n) : "none");
            row += "," + ns(g_analytic) + "," + ns(g_numeric) + "," +
                   ns(std::abs(g_analytic - g_numeric)) + ",ok";
            cell.row = row;
        } catch (const std::exception& e) {
            std::string msg = e.what();
            std::replace(msg.begin(), msg.end(), ',', ';');
            cell.row = ns(cell.beta) + "," + ns(cell.h) + ",,,,,,,," + std::string("error: ") + msg;
            cell.failed = true;
        }
    }

    io::CsvWriter csv(fs::path(cfg.out_dir) / "sweep.csv",
                      {"beta", "h", "delta", "north_m", "south", "orbifold_n",
                       "gamma0_analytic", "gamma0_numeric", "gamma0_error", "status"});
    bool any_failed = false;
    for (const auto& cell : cells) {
        csv.raw_row(cell.row);
        any_failed = any_failed || cell.failed;
    }
    return any_failed ? 2 : 0;
}

int run(const RunConfig& cfg) {
    if (cfg.mode == "simulate") return run_simulate(cfg);
    if (cfg.mode == "blowup") return run_blowup(cfg);
    if (cfg.mode == "block-map") return run_block_map(cfg);
    if (cfg.mode == "classify") return run_classify(cfg);
    if (cfg.mode == "verify") return run_verify(cfg);
    if (cfg.mode == "sweep") return run_sweep(cfg);
    throw ValidationError("run: unknown mode '" + cfg.mode + "'");
}

} // namespace ck::harness
