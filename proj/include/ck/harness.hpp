#ifndef CK_HARNESS_HPP
#define CK_HARNESS_HPP

#include "ck/config.hpp"

namespace ck::harness {

// Dispatch on cfg.mode, write artifacts under cfg.out_dir. Returns the
// process exit status: 0 success, 2 numerical failures in results.
// Validation problems throw ValidationError (exit 1 at the CLI).
int run(const RunConfig& cfg);

int run_simulate(const RunConfig& cfg);
int run_blowup(const RunConfig& cfg);
int run_block_map(const RunConfig& cfg);
int run_classify(const RunConfig& cfg);
int run_verify(const RunConfig& cfg);
int run_sweep(const RunConfig& cfg);

} // namespace ck::harness

#endif
