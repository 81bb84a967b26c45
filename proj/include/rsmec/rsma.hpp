#pragma once

#include "rsmec/types.hpp"

#include <array>
#include <cstdint>

namespace rsmec {

// SINRs of the three streams under the fixed SIC order s11 -> s2 -> s12:
// s11 sees everything, s2 sees only s12, s12 is interference-free.
std::array<double, 3> sinr_chain(const ChannelRealization& ch, const PowerAllocation& pw);

// Bit load per stream given the offloaded bit counts of the two users.
// user-1 bits split as beta_a / beta_c; user 2 rides s2 unsplit.
StreamLoads stream_loads(double offload_bits_1, double offload_bits_2,
                         const SplitFactors& split);

// Per-stream decoding error probabilities. A zero-bit stream decodes
// trivially (eps = 0); a zero-SINR stream with bits pending fails
// (eps = 1).
StreamErrorTriple offload_errors(const ChannelRealization& ch, const PowerAllocation& pw,
                                 const StreamLoads& loads, std::int64_t blocklength);

// Additive per-user / joint error probabilities (cross terms dropped,
// clamped to [0,1]) plus the exact product expansions.
UserErrors user_and_joint_errors(const StreamErrorTriple& t);

enum class NomaOrder {
    user1_first,  // s1 -> s2: all user-1 power on s11, beta = 1
    user2_first,  // s2 -> s1: all user-1 power on s12, beta = 0
};

PowerAllocation noma_power(double p1, double p2, NomaOrder order);
SplitFactors noma_split(NomaOrder order);

// NOMA evaluated as the degenerate RSMA allocation; identical to running
// the RSMA pipeline at noma_power / noma_split.
StreamErrorTriple noma_case(const ChannelRealization& ch, double p1, double p2,
                            NomaOrder order, double offload_bits_1,
                            double offload_bits_2, std::int64_t blocklength);

}  // namespace rsmec
