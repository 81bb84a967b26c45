#include "rsmec/rsma.hpp"

#include "rsmec/fbl.hpp"

#include <algorithm>
#include <stdexcept>

namespace rsmec {

std::array<double, 3> sinr_chain(const ChannelRealization& ch, const PowerAllocation& pw) {
    if (!(ch.noise > 0.0)) throw std::domain_error("sinr_chain: noise must be > 0");
    const double gamma_a =
        pw.p11 * ch.g1 / (pw.p12 * ch.g1 + pw.p2 * ch.g2 + ch.noise);
    const double gamma_b = pw.p2 * ch.g2 / (pw.p12 * ch.g1 + ch.noise);
    const double gamma_c = pw.p12 * ch.g1 / ch.noise;
    return {gamma_a, gamma_b, gamma_c};
}

StreamLoads stream_loads(double offload_bits_1, double offload_bits_2,
                         const SplitFactors& split) {
    StreamLoads loads;
    loads.m_a = split.beta_a * offload_bits_1;
    loads.m_b = split.beta_b * offload_bits_2;
    loads.m_c = split.beta_c * offload_bits_1;
    return loads;
}

namespace {

double stream_error(double gamma, double bits, std::int64_t n) {
    if (bits <= 0.0) return 0.0;  // nothing to decode
    if (gamma <= 0.0) return 1.0;
    return error_probability({gamma, bits, n});
}

}  // namespace

StreamErrorTriple offload_errors(const ChannelRealization& ch, const PowerAllocation& pw,
                                 const StreamLoads& loads, std::int64_t blocklength) {
    if (blocklength < 1) throw std::domain_error("offload_errors: blocklength must be >= 1");
    const auto [ga, gb, gc] = sinr_chain(ch, pw);
    StreamErrorTriple t;
    t.gamma_a = ga;
    t.gamma_b = gb;
    t.gamma_c = gc;
    t.m_a = loads.m_a;
    t.m_b = loads.m_b;
    t.m_c = loads.m_c;
    t.eps_a = stream_error(ga, loads.m_a, blocklength);
    t.eps_b = stream_error(gb, loads.m_b, blocklength);
    t.eps_c = stream_error(gc, loads.m_c, blocklength);
    return t;
}

UserErrors user_and_joint_errors(const StreamErrorTriple& t) {
    const double ea = t.eps_a, eb = t.eps_b, ec = t.eps_c;
    UserErrors u;
    u.eps1 = std::min(1.0, ea + eb + ec);
    u.eps2 = std::min(1.0, ea + eb);
    u.joint = std::min(1.0, 2.0 * ea + 2.0 * eb + ec);
    // SIC chain expansion: each stage fails only if the previous ones held.
    u.eps1_exact = ea + (1.0 - ea) * eb + (1.0 - ea) * (1.0 - eb) * ec;
    u.eps2_exact = ea + (1.0 - ea) * eb;
    return u;
}

PowerAllocation noma_power(double p1, double p2, NomaOrder order) {
    if (order == NomaOrder::user1_first) return {p1, 0.0, p2};
    return {0.0, p1, p2};
}

SplitFactors noma_split(NomaOrder order) {
    return SplitFactors::from_beta(order == NomaOrder::user1_first ? 1.0 : 0.0);
}

StreamErrorTriple noma_case(const ChannelRealization& ch, double p1, double p2,
                            NomaOrder order, double offload_bits_1,
                            double offload_bits_2, std::int64_t blocklength) {
    const PowerAllocation pw = noma_power(p1, p2, order);
    const SplitFactors split = noma_split(order);
    const StreamLoads loads = stream_loads(offload_bits_1, offload_bits_2, split);
    return offload_errors(ch, pw, loads, blocklength);
}

}  // namespace rsmec
