#ifndef CK_BATCH_HPP
#define CK_BATCH_HPP

#include <span>
#include <vector>

#include "ck/block.hpp"
#include "ck/dynamics.hpp"
#include "ck/invariants.hpp"

// Data-parallel kernels over independent states / grid cells. Each kernel has
// a _serial reference used by the tests; the parallel variant computes the
// same per-element values (no cross-element reductions), so outputs match the
// reference bit for bit regardless of thread count.
namespace ck::batch {

std::vector<double> dependency_residuals_serial(const SurfaceSpec& s,
                                                std::span<const PhaseState> states);
std::vector<double> dependency_residuals(const SurfaceSpec& s,
                                         std::span<const PhaseState> states);

struct BracketResiduals {
    double I1 = 0.0;
    double I2 = 0.0;
    double p_theta = 0.0;
};

std::vector<BracketResiduals> bracket_residuals_serial(const SurfaceSpec& s,
                                                       std::span<const PhaseState> states,
                                                       double step = 1e-5);
std::vector<BracketResiduals> bracket_residuals(const SurfaceSpec& s,
                                                std::span<const PhaseState> states,
                                                double step = 1e-5);

std::vector<TransitResult> transit_grid_serial(const BlockSpec& bs, const SurfaceSpec& s,
                                               std::span<const BoundaryPoint> entries,
                                               double tol = 1e-11);
std::vector<TransitResult> transit_grid(const BlockSpec& bs, const SurfaceSpec& s,
                                        std::span<const BoundaryPoint> entries,
                                        double tol = 1e-11);

} // namespace ck::batch

#endif
