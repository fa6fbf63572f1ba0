#include "ck/batch.hpp"

#include <cstddef>
#include <exception>

namespace ck::batch {

namespace {

// omp loops must not leak exceptions; rethrow after the join
template <class Fn>
void parallel_for(std::ptrdiff_t n, Fn&& fn) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

} // namespace

std::vector<double> dependency_residuals_serial(const SurfaceSpec& s,
                                                std::span<const PhaseState> states) {
    std::vector<double> out(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        out[i] = dependency_residual(s, states[i]);
    return out;
}

std::vector<double> dependency_residuals(const SurfaceSpec& s,
                                         std::span<const PhaseState> states) {
    std::vector<double> out(states.size());
    parallel_for(static_cast<std::ptrdiff_t>(states.size()),
                 [&](std::size_t i) { out[i] = dependency_residual(s, states[i]); });
    return out;
}

namespace {

BracketResiduals bracket_one(const SurfaceSpec& s, const PhaseState& x, double step) {
    BracketResiduals b;
    b.I1 = poisson_bracket_residual(s, x, Integral::I1, step);
    b.I2 = poisson_bracket_residual(s, x, Integral::I2, step);
    b.p_theta = poisson_bracket_residual(s, x, Integral::PTheta, step);
    return b;
}

} // namespace

std::vector<BracketResiduals> bracket_residuals_serial(const SurfaceSpec& s,
                                                       std::span<const PhaseState> states,
                                                       double step) {
    std::vector<BracketResiduals> out(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) out[i] = bracket_one(s, states[i], step);
    return out;
}

std::vector<BracketResiduals> bracket_residuals(const SurfaceSpec& s,
                                                std::span<const PhaseState> states,
                                                double step) {
    std::vector<BracketResiduals> out(states.size());
    parallel_for(static_cast<std::ptrdiff_t>(states.size()),
                 [&](std::size_t i) { out[i] = bracket_one(s, states[i], step); });
    return out;
}

std::vector<TransitResult> transit_grid_serial(const BlockSpec& bs, const SurfaceSpec& s,
                                               std::span<const BoundaryPoint> entries,
                                               double tol) {
    std::vector<TransitResult> out(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        out[i] = numeric_transit(bs, s, entries[i].theta, entries[i].u, tol);
    return out;
}

std::vector<TransitResult> transit_grid(const BlockSpec& bs, const SurfaceSpec& s,
                                        std::span<const BoundaryPoint> entries,
                                        double tol) {
    std::vector<TransitResult> out(entries.size());
    parallel_for(static_cast<std::ptrdiff_t>(entries.size()), [&](std::size_t i) {
        out[i] = numeric_transit(bs, s, entries[i].theta, entries[i].u, tol);
    });
    return out;
}

} // namespace ck::batch
