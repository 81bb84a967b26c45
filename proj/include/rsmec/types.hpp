#pragma once

#include <cstdint>
#include <vector>

namespace rsmec {

// Static system parameters. Defaults follow the usual short-packet MEC
// simulation setup: 10 ms budget, 2.5 us symbols, 1000 cycles/bit,
// 0.5 GHz user CPUs, 5x edge speedup, unit noise power.
struct SystemConfig {
    double t_budget = 10e-3;        // total delay budget T [s]
    double symbol_duration = 2.5e-6;  // Ts [s]
    std::int64_t blocklength = 1000;  // N [symbols], shared by all streams
    double m1_bits = 7000.0;        // task size of user 1 [bits]
    double m2_bits = 7000.0;        // task size of user 2 [bits]
    double cycles_per_bit = 1000.0; // C_cpu
    double user_cpu_hz = 0.5e9;     // f_user
    double mec_speedup = 5.0;       // L, f_mec = L * f_user
    double power_budget = 10.0;     // Pt [W], per-user transmit budget
    double noise = 1.0;             // sigma_n^2 [W]
};

// One fading drop: channel power gains and receiver noise power.
struct ChannelRealization {
    double g1 = 1.0;   // |h1|^2
    double g2 = 1.0;   // |h2|^2
    double noise = 1.0;
};

// Transmit power of the three uplink streams s11, s12, s2.
struct PowerAllocation {
    double p11 = 0.0;
    double p12 = 0.0;
    double p2 = 0.0;
};

// Fraction of each user's task that is offloaded to the edge server.
struct OffloadFactors {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

// Split of user 1's offloaded bits across its two streams. User 2 is
// never split, so beta_b is pinned to 1.
struct SplitFactors {
    double beta_a = 1.0;  // share of user-1 bits on s11 (decoded first)
    double beta_b = 1.0;
    double beta_c = 0.0;  // share on s12 (decoded last), beta_c = 1 - beta_a

    static SplitFactors from_beta(double beta) { return {beta, 1.0, 1.0 - beta}; }
};

// Bit load carried by each stream.
struct StreamLoads {
    double m_a = 0.0;
    double m_b = 0.0;
    double m_c = 0.0;
};

// Per-stream SINRs, loads and decoding error probabilities after SIC.
struct StreamErrorTriple {
    double gamma_a = 0.0, gamma_b = 0.0, gamma_c = 0.0;
    double m_a = 0.0, m_b = 0.0, m_c = 0.0;
    double eps_a = 0.0, eps_b = 0.0, eps_c = 0.0;
};

// Per-user error probabilities. The additive forms drop cross terms and
// are clamped to [0,1]; the exact product expansions are kept alongside
// for reporting and diagnostics.
struct UserErrors {
    double eps1 = 0.0;        // min(1, eps_a + eps_b + eps_c)
    double eps2 = 0.0;        // min(1, eps_a + eps_b)
    double joint = 0.0;       // min(1, 2 eps_a + 2 eps_b + eps_c)
    double eps1_exact = 0.0;
    double eps2_exact = 0.0;
};

// Full decision vector for one instance.
struct Allocation {
    PowerAllocation power;
    OffloadFactors lambda;
    SplitFactors split;
};

// Successful-computation-probability evaluation of one allocation.
struct ScpResult {
    double scp = 0.0;
    bool feasible = false;     // execution fits the residual time budget
    double eps1 = 1.0;         // exact per-user offload error
    double eps2 = 1.0;
    double t2 = 0.0;           // offload phase duration [s]
    double t3 = 0.0;           // compute phase duration [s]
    std::vector<double> trace; // optimizer objective per iteration, if any
};

}  // namespace rsmec
