#include "rsmec/mec.hpp"

#include "rsmec/fbl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsmec {

namespace {

// Slack for comparisons against the residual budget: the closed-form
// lambda lands on the constraint boundary up to rounding.
double time_slack(const SystemConfig& cfg) { return 1e-12 * cfg.t_budget; }

double local_time(const SystemConfig& cfg, double task_bits, double lambda) {
    return (1.0 - lambda) * task_bits * cfg.cycles_per_bit / cfg.user_cpu_hz;
}

double mec_time(const SystemConfig& cfg, const OffloadFactors& lambda) {
    const double offloaded = lambda.lambda1 * cfg.m1_bits + lambda.lambda2 * cfg.m2_bits;
    return offloaded * cfg.cycles_per_bit / (cfg.mec_speedup * cfg.user_cpu_hz);
}

}  // namespace

double offload_time(const SystemConfig& cfg) {
    return static_cast<double>(cfg.blocklength) * cfg.symbol_duration;
}

double compute_time(const SystemConfig& cfg, const OffloadFactors& lambda) {
    return std::max({local_time(cfg, cfg.m1_bits, lambda.lambda1),
                     local_time(cfg, cfg.m2_bits, lambda.lambda2), mec_time(cfg, lambda)});
}

OffloadFactors optimal_lambda(const SystemConfig& cfg) {
    const double residual = cfg.t_budget - offload_time(cfg);
    if (!(residual > 0.0))
        throw std::domain_error("optimal_lambda: blocklength exceeds the delay budget");
    auto factor = [&](double task_bits) {
        return std::max(0.0, 1.0 - residual * cfg.user_cpu_hz /
                                       (task_bits * cfg.cycles_per_bit));
    };
    return {factor(cfg.m1_bits), factor(cfg.m2_bits)};
}

bool mec_capacity_check(const SystemConfig& cfg, const OffloadFactors& lambda) {
    const double residual = cfg.t_budget - offload_time(cfg);
    return mec_time(cfg, lambda) <= residual + time_slack(cfg);
}

bool locally_feasible(const SystemConfig& cfg) {
    const double t1 = cfg.m1_bits * cfg.cycles_per_bit / cfg.user_cpu_hz;
    const double t2 = cfg.m2_bits * cfg.cycles_per_bit / cfg.user_cpu_hz;
    return t1 <= cfg.t_budget && t2 <= cfg.t_budget;
}

StreamLoads stream_loads(const SystemConfig& cfg, const OffloadFactors& lambda,
                         const SplitFactors& split) {
    return stream_loads(lambda.lambda1 * cfg.m1_bits, lambda.lambda2 * cfg.m2_bits, split);
}

double scp_product(double eps1, double eps2) {
    const double v = (1.0 - eps1) * (1.0 - eps2);
    // products below double noise mean certain failure, not 1e-30 success
    if (v < 1e-15) return 0.0;
    return std::clamp(v, 0.0, 1.0);
}

ScpResult scp(const SystemConfig& cfg, const ChannelRealization& ch,
              const PowerAllocation& pw, const OffloadFactors& lambda,
              const SplitFactors& split) {
    ScpResult r;
    r.t2 = offload_time(cfg);
    r.t3 = compute_time(cfg, lambda);

    if (locally_feasible(cfg)) {
        // No offloading needed: both tasks complete on-device within T.
        r.scp = 1.0;
        r.feasible = true;
        r.eps1 = 0.0;
        r.eps2 = 0.0;
        return r;
    }

    r.feasible = r.t3 <= cfg.t_budget - r.t2 + time_slack(cfg);
    if (!r.feasible) {
        r.scp = 0.0;
        return r;
    }

    const StreamLoads loads = stream_loads(cfg, lambda, split);
    const StreamErrorTriple t = offload_errors(ch, pw, loads, cfg.blocklength);
    const UserErrors u = user_and_joint_errors(t);
    r.eps1 = u.eps1_exact;
    r.eps2 = u.eps2_exact;
    r.scp = scp_product(r.eps1, r.eps2);
    return r;
}

double chernoff_surrogate(const ChannelRealization& ch, const PowerAllocation& pw,
                          const StreamLoads& loads, std::int64_t blocklength) {
    const auto gamma = sinr_chain(ch, pw);
    const double m[3] = {loads.m_a, loads.m_b, loads.m_c};
    const double w[3] = {2.0, 2.0, 1.0};
    double obj = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (m[i] <= 0.0) continue;
        if (gamma[i] <= 0.0 || f_margin({gamma[i], m[i], blocklength}) < 0.0) {
            // past capacity the bound exp(-f^2/2) shrinks again and would
            // reward dead streams; the error ceiling is the honest bound
            obj += w[i];
            continue;
        }
        obj += w[i] * chernoff_bound({gamma[i], m[i], blocklength});
    }
    return obj;
}

}  // namespace rsmec
