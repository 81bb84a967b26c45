#pragma once

#include "rsmec/convex.hpp"
#include "rsmec/types.hpp"

#include <array>
#include <cstdint>

namespace rsmec::sca {

// Anchor for one round of convex restriction: powers, SINR slacks rho,
// exponent slacks t (t ~ f^2/2 per stream) and the auxiliary slacks t1
// with t1 <= t (1+rho)^-2.
struct LinearizationPoint {
    PowerAllocation power;
    std::array<double, 3> rho{0.0, 0.0, 0.0};
    std::array<double, 3> t{0.0, 0.0, 0.0};
    std::array<double, 3> t1{0.0, 0.0, 0.0};
    SplitFactors split = SplitFactors::from_beta(0.5);
};

// First-order coefficients of the rate-side restriction:
// (1/2)(log2(1+rho) - M/N)^2  >=  a log2(1+rho) + b.
struct RateCoeffs {
    double a = 0.0;
    double b = 0.0;
};
RateCoeffs rate_rhs_coeffs(double rho_anchor, double bits, std::int64_t blocklength);

// Constants of the splitting-factor restriction
// t <= N c (d + e beta)^2 with the (e beta)^2 term replaced by its
// tangent: c = 1/(2 V(rho)), d = log2(1+rho), e = -lambda M / N.
struct BetaCoeffs {
    double c = 0.0;
    double d = 0.0;
    double e = 0.0;
};
BetaCoeffs beta_coeffs(double rho, double lambda_k, double task_bits,
                       std::int64_t blocklength);

// Tangent lower bound of (e beta)^2 at beta_anchor.
double phi_linearized(double e, double beta, double beta_anchor);

// Variable layout of the power subproblem.
enum PowerVar : int {
    kP11 = 0,
    kP12,
    kP2,
    kRhoA,
    kRhoB,
    kRhoC,
    kTA,
    kTB,
    kTC,
    kT1A,
    kT1B,
    kT1C,
    kPowerVarCount
};

// Exponent slacks are capped here; exp(-700) is already below every
// probability this model can distinguish from zero.
inline constexpr double kSlackCap = 700.0;

struct PowerProblem {
    convex::ConvexProgram program;
    convex::Vec x0;                      // the linearization point itself
    std::array<bool, 3> active{};       // streams with bits to carry
};

// Convex restriction of the power-allocation subproblem at lp, over
// (p11, p12, p2, rho, t, t1). Throws std::invalid_argument naming the
// violated constraint if lp is not strictly feasible for it.
PowerProblem power_subproblem(const ChannelRealization& ch, const SystemConfig& cfg,
                              const StreamLoads& loads, const LinearizationPoint& lp);

// Variable layout of the splitting subproblem.
enum BetaVar : int { kBetaA = 0, kBetaC, kTBetaA, kTBetaC, kBetaVarCount };

struct BetaProblem {
    convex::ConvexProgram program;
    convex::Vec x0;
    double t_b_frozen = 0.0;  // stream b rides along as a constant term
};

// Convex restriction of the task-splitting subproblem at lp, over
// (beta_a, beta_c, t_a, t_c) with beta_a + beta_c = 1. rho and the
// stream-b slack stay fixed at their power-step values.
BetaProblem beta_subproblem(const SystemConfig& cfg, const OffloadFactors& lambda,
                            const LinearizationPoint& lp);

// Strictly feasible anchor derived from a power allocation: rho at the
// true SINRs and t, t1 at the matching slack values, each pulled
// slightly inside its constraint. Powers sitting on the budget boundary
// are pre-shrunk. Throws if a loaded stream has zero SINR.
LinearizationPoint slack_seed(const ChannelRealization& ch, const PowerAllocation& pw,
                              const StreamLoads& loads, const SystemConfig& cfg);

}  // namespace rsmec::sca
