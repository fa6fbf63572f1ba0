#ifndef CK_CONFIG_HPP
#define CK_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ck/dynamics.hpp"

namespace ck {

// Run configuration. Parsed from a nested key-value document; numbers are
// accepted as decimals or exact rationals "p/q".
struct RunConfig {
    std::string mode = "simulate"; // simulate|blowup|block-map|classify|verify|sweep
    std::string out_dir = "out";

    double K = 1.0;
    double L = 1.0;
    double gamma_c = 1.0;

    PhaseState initial{1.5707963267948966, 0.0, 0.0, 0.8};
    double t_end = 100.0;
    double tol = 1e-10;
    double collision_margin = -1.0; // auto

    double block_h = -0.5;
    double block_delta = -1.0; // auto => choose_block_delta

    std::vector<double> sweep_beta;
    std::vector<double> sweep_energy;

    std::vector<double> blowup_theta_lines{0.0, 2.0943951023931953, 4.1887902047863905};
    double blowup_chi0 = -1.4707963267948965; // just above -pi/2

    int m_max = 64;
    std::uint64_t seed = 20260810;
};

// Parse "p/q" rationals or decimal literals.
double parse_number(const std::string& text);

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

// Canonical echo; re-parses to an equivalent RunConfig.
std::string effective_config_text(const RunConfig& cfg);

bool config_equivalent(const RunConfig& a, const RunConfig& b);

} // namespace ck

#endif
