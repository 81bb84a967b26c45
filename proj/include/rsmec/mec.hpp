#pragma once

#include "rsmec/rsma.hpp"
#include "rsmec/types.hpp"

namespace rsmec {

// Duration of the offloading phase, t2 = N * Ts.
double offload_time(const SystemConfig& cfg);

// Duration of the compute phase: slowest of the two local computations
// and the edge-server computation.
double compute_time(const SystemConfig& cfg, const OffloadFactors& lambda);

// Closed-form offloading factors: the smallest lambda that makes the
// local remainder fit into T - N*Ts, clamped at zero when the whole task
// already fits. Throws when the blocklength eats the entire budget.
OffloadFactors optimal_lambda(const SystemConfig& cfg);

// True iff the edge server can chew through the offloaded bits within
// the residual budget T - N*Ts.
bool mec_capacity_check(const SystemConfig& cfg, const OffloadFactors& lambda);

// True iff both users can finish their whole task locally within T, in
// which case no offloading is needed and the SCP is 1.
bool locally_feasible(const SystemConfig& cfg);

StreamLoads stream_loads(const SystemConfig& cfg, const OffloadFactors& lambda,
                         const SplitFactors& split);

// (1 - eps1)(1 - eps2), clamped to [0,1].
double scp_product(double eps1, double eps2);

// Full SCP of one allocation: 1 if both tasks are locally feasible,
// 0 if the timing fails, otherwise the exact success product of the
// offloading phase.
ScpResult scp(const SystemConfig& cfg, const ChannelRealization& ch,
              const PowerAllocation& pw, const OffloadFactors& lambda,
              const SplitFactors& split);

// Optimizer objective: 2 exp(-fa^2/2) + 2 exp(-fb^2/2) + exp(-fc^2/2)
// over the loaded streams. Empty streams contribute 0; streams coding at
// or beyond capacity (f < 0, including zero SINR) contribute their full
// weight, since the exponential bound is only meaningful below capacity.
double chernoff_surrogate(const ChannelRealization& ch, const PowerAllocation& pw,
                          const StreamLoads& loads, std::int64_t blocklength);

}  // namespace rsmec
