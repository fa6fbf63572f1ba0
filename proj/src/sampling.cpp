#include "ck/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ck/numerics.hpp"

namespace ck {

std::vector<PhaseState> sample_states(const SurfaceSpec& s, int n, std::uint64_t seed,
                                      const StateSampleOptions& opts) {
    std::mt19937_64 gen(seed);
    std::vector<PhaseState> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        PhaseState x;
        x.r = num::uniform(gen, opts.r_lo_frac, opts.r_hi_frac) * s.r_south;
        x.theta = num::uniform(gen, 0.0, 2.0 * std::numbers::pi);
        x.p_r = num::uniform(gen, -opts.p_r_max, opts.p_r_max);
        double mag = num::uniform(gen, opts.p_theta_min, opts.p_theta_max) * s.L;
        if (opts.signed_p_theta && num::uniform01(gen) < 0.5) mag = -mag;
        x.p_theta = mag;
        out.push_back(x);
    }
    return out;
}

std::vector<PhaseState> sample_bounded_orbit_states(const SurfaceSpec& s, int n,
                                                    std::uint64_t seed) {
    StateSampleOptions opts;
    opts.r_lo_frac = 0.3;
    opts.r_hi_frac = 0.7;
    opts.p_r_max = 0.4;
    opts.p_theta_min = 0.35;
    opts.p_theta_max = 0.9;
    return sample_states(s, n, seed, opts);
}

} // namespace ck
