// Compares the serial reference kernels against the OpenMP variants on the
// batch workloads: dependency residuals, bracket residuals, block transits.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "ck/batch.hpp"
#include "ck/block.hpp"
#include "ck/sampling.hpp"

using clock_type = std::chrono::steady_clock;

static double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int main() {
    const ck::SurfaceSpec s = ck::surface_from_beta(2.0 / 3.0, 1.0);
    std::printf("threads: %d\n", omp_get_max_threads());

    {
        auto states = ck::sample_states(s, 200000, 99, {});
        auto t0 = clock_type::now();
        auto serial = ck::batch::dependency_residuals_serial(s, states);
        double ts = seconds_since(t0);
        t0 = clock_type::now();
        auto parallel = ck::batch::dependency_residuals(s, states);
        double tp = seconds_since(t0);
        bool same = serial == parallel;
        std::printf("dependency_residuals  n=%zu  serial %.3fs  omp %.3fs  speedup %.2fx  %s\n",
                    states.size(), ts, tp, ts / tp, same ? "bitwise-equal" : "MISMATCH");
    }

    {
        auto states = ck::sample_states(s, 20000, 7, {});
        auto t0 = clock_type::now();
        auto serial = ck::batch::bracket_residuals_serial(s, states);
        double ts = seconds_since(t0);
        t0 = clock_type::now();
        auto parallel = ck::batch::bracket_residuals(s, states);
        double tp = seconds_since(t0);
        bool same = true;
        for (std::size_t i = 0; i < serial.size(); ++i)
            same = same && serial[i].I1 == parallel[i].I1 && serial[i].I2 == parallel[i].I2 &&
                   serial[i].p_theta == parallel[i].p_theta;
        std::printf("bracket_residuals     n=%zu  serial %.3fs  omp %.3fs  speedup %.2fx  %s\n",
                    states.size(), ts, tp, ts / tp, same ? "bitwise-equal" : "MISMATCH");
    }

    {
        double delta = ck::choose_block_delta(s, -0.5, 0.95);
        ck::BlockSpec bs = ck::make_block(s, -0.5, delta);
        std::vector<ck::BoundaryPoint> entries;
        for (int i = 0; i < 120; ++i) {
            double frac = 0.05 + 0.9 * i / 119.0;
            entries.push_back({0.0, (i % 2 ? frac : -frac) * bs.u_max(), 0.0});
        }
        auto t0 = clock_type::now();
        auto serial = ck::batch::transit_grid_serial(bs, s, entries);
        double ts = seconds_since(t0);
        t0 = clock_type::now();
        auto parallel = ck::batch::transit_grid(bs, s, entries);
        double tp = seconds_since(t0);
        bool same = true;
        for (std::size_t i = 0; i < serial.size(); ++i)
            same = same && serial[i].theta_out == parallel[i].theta_out &&
                   serial[i].tau_transit == parallel[i].tau_transit;
        std::printf("transit_grid          n=%zu  serial %.3fs  omp %.3fs  speedup %.2fx  %s\n",
                    entries.size(), ts, tp, ts / tp, same ? "bitwise-equal" : "MISMATCH");
    }
    return 0;
}
