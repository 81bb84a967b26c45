#pragma once

#include <cstdint>

namespace rsmec {

// Operating point of one finite-blocklength coded stream.
struct FblPoint {
    double gamma = 0.0;            // SINR, linear scale, >= 0
    double bits = 0.0;             // payload size M in bits, >= 0
    std::int64_t blocklength = 1;  // N in symbols, >= 1
};

// Gaussian tail probability Q(x) = erfc(x/sqrt(2))/2. Rational
// approximation accurate to ~1e-15 relative for |x| <= 40; clamped to
// 0/1 beyond that.
double q_function(double x);

// Inverse of q_function on (0,1), bisection-bracketed Newton,
// |residual| driven below 1e-13. q_inverse(0.5) == 0 exactly.
double q_inverse(double p);

// Channel dispersion V(gamma) = 1 - (1+gamma)^-2, in [0,1).
double dispersion(double gamma);

// Normal-approximation achievable rate [bits/symbol] at error target
// epsilon: log2(1+gamma) - sqrt(V/N) * Qinv(epsilon).
double fbl_rate(const FblPoint& p, double epsilon);

// Argument of the Q-function in the error-probability expression:
// f = (log2(1+gamma) - M/N) / sqrt(V/N). Positive iff the coding rate
// M/N sits below capacity. Singular at gamma = 0.
double f_margin(const FblPoint& p);

// Decoding error probability Q(f_margin). Returns 1 for gamma = 0:
// a zero-SINR stream carries nothing.
double error_probability(const FblPoint& p);

// Chernoff upper bound exp(-f^2/2) on error_probability, valid as a
// bound for f >= 0.5. Same gamma = 0 convention.
double chernoff_bound(const FblPoint& p);

}  // namespace rsmec
