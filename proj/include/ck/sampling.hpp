#ifndef CK_SAMPLING_HPP
#define CK_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "ck/dynamics.hpp"
#include "ck/geometry.hpp"

namespace ck {

struct StateSampleOptions {
    double r_lo_frac = 0.15; // of r_south
    double r_hi_frac = 0.85;
    double p_r_max = 0.6;
    double p_theta_min = 0.0; // magnitude, scaled by L
    double p_theta_max = 1.0;
    bool signed_p_theta = true;
};

// Reproducible random phase states away from the poles. A positive
// p_theta_min keeps every orbit behind the centrifugal barrier, hence bounded
// away from both poles.
std::vector<PhaseState> sample_states(const SurfaceSpec& s, int n, std::uint64_t seed,
                                      const StateSampleOptions& opts = {});

// States suitable for long drift runs: mid-latitude, moderate momenta.
std::vector<PhaseState> sample_bounded_orbit_states(const SurfaceSpec& s, int n,
                                                    std::uint64_t seed);

} // namespace ck

#endif
