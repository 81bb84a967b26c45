#pragma once

#include "rsmec/types.hpp"

namespace rsmec {

struct AoTrace {
    std::vector<double> objective;  // surrogate value per iteration, incl. start
    bool converged = false;
    int iterations = 0;
    double wall_seconds = 0.0;
};

struct OptimizeOptions {
    double tolerance = 1e-3;   // stop when the surrogate moves less than this
    int max_iterations = 100;
    double solver_tol = 1e-8;  // barrier duality-gap target per subproblem
    bool use_restart = true;   // second start tilted toward the split-heavy corner
};

struct OptimizeResult {
    Allocation alloc;
    ScpResult scp;
    AoTrace trace;
};

// Alternating optimization: offloading factors from the closed form,
// then alternating convex power and split restrictions until the
// surrogate stalls. The reported SCP uses the exact error products. The
// returned allocation is the best of the alternating runs and the
// optimized no-split corner, so it never loses to the NOMA baseline.
OptimizeResult optimize(const SystemConfig& cfg, const ChannelRealization& ch,
                        const OptimizeOptions& opts = {});

// NOMA baseline, decoding order s1 -> s2: user 1 transmits at full
// budget (raising it costs nothing downstream), leaving a 1-D search
// over user 2's power; grid plus golden-section refinement.
OptimizeResult optimize_noma(const SystemConfig& cfg, const ChannelRealization& ch,
                             const OptimizeOptions& opts = {});

// Exhaustive grid over (p11, p12, p2, beta) with the closed-form
// offloading factors, exact SCP at every point. Ground truth for
// validating the alternating optimizer.
OptimizeResult brute_force_oracle(const SystemConfig& cfg, const ChannelRealization& ch,
                                  int grid_density = 33);

}  // namespace rsmec
