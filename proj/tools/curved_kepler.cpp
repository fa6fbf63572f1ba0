// curved-kepler: Kepler motion on constant-curvature surfaces of revolution.
// Modes: simulate, blowup, block-map, classify, verify, sweep.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "ck/config.hpp"
#include "ck/errors.hpp"
#include "ck/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Kepler problem on spherical surfaces of revolution with constant "
                 "positive curvature"};
    app.footer("Numbers in configs and --beta accept exact rationals like 2/3.");

    std::string mode;
    app.add_option("mode", mode, "simulate|blowup|block-map|classify|verify|sweep")
        ->required();
    std::string config_path;
    app.add_option("--config", config_path, "configuration file");
    std::string out_dir;
    app.add_option("--out", out_dir, "output directory (default: out)");
    std::string tol;
    app.add_option("--tol", tol, "integrator tolerance override");
    std::string beta;
    app.add_option("--beta", beta, "surface beta override (sets K=1, L=beta)");
    std::string energy;
    app.add_option("--energy", energy, "block energy level h override");

    CLI11_PARSE(app, argc, argv);

    try {
        ck::RunConfig cfg;
        if (!config_path.empty()) cfg = ck::parse_config_file(config_path);
        cfg.mode = mode;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!tol.empty()) cfg.tol = ck::parse_number(tol);
        if (!beta.empty()) {
            double b = ck::parse_number(beta);
            cfg.K = 1.0;
            cfg.L = b;
        }
        if (!energy.empty()) cfg.block_h = ck::parse_number(energy);
        return ck::harness::run(cfg);
    } catch (const ck::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 1;
    } catch (const ck::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
