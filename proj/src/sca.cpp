#include "rsmec/sca.hpp"

#include "rsmec/fbl.hpp"
#include "rsmec/rsma.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace rsmec::sca {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double log2p1(double rho) { return std::log2(1.0 + rho); }

// t value matching the exponent slack definition: f^2/2 expressed in the
// slack variable rho.
double slack_target(double rho, double bits, std::int64_t n) {
    const double v = dispersion(rho);
    const double num = log2p1(rho) - bits / static_cast<double>(n);
    return static_cast<double>(n) * num * num / (2.0 * v);
}

convex::ScalarFn linear_fn(std::string name, convex::Vec coef, double constant) {
    convex::ScalarFn fn;
    fn.name = std::move(name);
    fn.value = [coef, constant](const convex::Vec& x) {
        double v = constant;
        for (size_t i = 0; i < coef.size(); ++i) v += coef[i] * x[i];
        return v;
    };
    fn.grad = [coef](const convex::Vec&, convex::Vec& g) {
        g.assign(coef.begin(), coef.end());
    };
    return fn;
}

void check_seed(const convex::ConvexProgram& prog, const convex::Vec& x0,
                const char* where) {
    for (const auto& g : prog.inequalities) {
        if (!(g.value(x0) < 0.0))
            throw std::invalid_argument(std::string(where) +
                                        ": linearization point violates " + g.name);
    }
    for (int j = 0; j < prog.n; ++j) {
        if (!prog.lower.empty() && !(x0[j] > prog.lower[j]))
            throw std::invalid_argument(std::string(where) +
                                        ": linearization point touches lower bound of x" +
                                        std::to_string(j));
        if (!prog.upper.empty() && !(x0[j] < prog.upper[j]))
            throw std::invalid_argument(std::string(where) +
                                        ": linearization point touches upper bound of x" +
                                        std::to_string(j));
    }
}

}  // namespace

RateCoeffs rate_rhs_coeffs(double rho_anchor, double bits, std::int64_t blocklength) {
    if (!(rho_anchor > 0.0))
        throw std::domain_error("rate_rhs_coeffs: rho must be > 0");
    RateCoeffs rc;
    const double cap = log2p1(rho_anchor);
    rc.a = cap - bits / static_cast<double>(blocklength);
    rc.b = 0.5 * rc.a * rc.a - rc.a * cap;
    return rc;
}

BetaCoeffs beta_coeffs(double rho, double lambda_k, double task_bits,
                       std::int64_t blocklength) {
    if (!(rho > 0.0)) throw std::domain_error("beta_coeffs: rho must be > 0");
    BetaCoeffs bc;
    bc.c = 1.0 / (2.0 * dispersion(rho));
    bc.d = log2p1(rho);
    bc.e = -lambda_k * task_bits / static_cast<double>(blocklength);
    return bc;
}

double phi_linearized(double e, double beta, double beta_anchor) {
    const double at = e * beta_anchor;
    return at * at + 2.0 * (beta - beta_anchor) * e * e * beta_anchor;
}

LinearizationPoint slack_seed(const ChannelRealization& ch, const PowerAllocation& pw,
                              const StreamLoads& loads, const SystemConfig& cfg) {
    const double pt = cfg.power_budget;
    LinearizationPoint lp;
    lp.power = pw;

    // pull boundary allocations strictly inside the budget
    const double sum1 = lp.power.p11 + lp.power.p12;
    if (sum1 >= pt && sum1 > 0.0) {
        const double scale = pt * (1.0 - 1e-8) / sum1;
        lp.power.p11 *= scale;
        lp.power.p12 *= scale;
    }
    if (lp.power.p2 >= pt) lp.power.p2 = pt * (1.0 - 1e-8);
    const double bump = 1e-12 * std::max(pt, 1.0);
    lp.power.p11 = std::max(lp.power.p11, bump);
    lp.power.p12 = std::max(lp.power.p12, bump);
    lp.power.p2 = std::max(lp.power.p2, bump);

    const auto gamma = sinr_chain(ch, lp.power);
    const double m[3] = {loads.m_a, loads.m_b, loads.m_c};
    for (int i = 0; i < 3; ++i) {
        if (m[i] > 0.0) {
            if (!(gamma[i] > 0.0))
                throw std::domain_error(
                    "slack_seed: loaded stream has zero SINR (degenerate channel)");
            const double rho = 0.999 * gamma[i];
            const double t_full = std::min(slack_target(rho, m[i], cfg.blocklength),
                                           0.9 * kSlackCap);
            const double u = 1.0 / ((1.0 + rho) * (1.0 + rho));
            // inner shrink small enough to keep the linearized rate
            // constraint strict even at low SINR
            const double s1 = std::min(1e-3, 5e-4 * dispersion(rho) / u);
            lp.rho[i] = rho;
            lp.t[i] = 0.999 * t_full;
            lp.t1[i] = (1.0 - s1) * lp.t[i] * u;
        } else {
            // unused stream: park the slacks at interior values
            lp.rho[i] = 1.0;
            lp.t[i] = 0.5 * kSlackCap;
            lp.t1[i] = 0.999 * lp.t[i] * 0.25;
        }
    }
    return lp;
}

PowerProblem power_subproblem(const ChannelRealization& ch, const SystemConfig& cfg,
                              const StreamLoads& loads, const LinearizationPoint& lp) {
    const std::int64_t n_sym = cfg.blocklength;
    const double n = static_cast<double>(n_sym);
    const double pt = cfg.power_budget;
    const double g1 = ch.g1, g2 = ch.g2, sigma = ch.noise;

    PowerProblem pp;
    pp.active = {loads.m_a > 0.0, loads.m_b > 0.0, loads.m_c > 0.0};
    const double m[3] = {loads.m_a, loads.m_b, loads.m_c};
    const double w[3] = {2.0, 2.0, 1.0};
    const int rho_idx[3] = {kRhoA, kRhoB, kRhoC};
    const int t_idx[3] = {kTA, kTB, kTC};
    const int t1_idx[3] = {kT1A, kT1B, kT1C};

    convex::ConvexProgram& prog = pp.program;
    prog.n = kPowerVarCount;

    const double rho_cap = 10.0 * (1.0 + pt * (g1 + g2) / sigma);
    prog.lower.assign(kPowerVarCount, 0.0);
    prog.upper.assign(kPowerVarCount, kSlackCap);
    prog.upper[kP11] = pt;
    prog.upper[kP12] = pt;
    prog.upper[kP2] = pt;
    prog.upper[kRhoA] = rho_cap;
    prog.upper[kRhoB] = rho_cap;
    prog.upper[kRhoC] = rho_cap;

    {
        convex::Vec coef(kPowerVarCount, 0.0);
        coef[kP11] = 1.0;
        coef[kP12] = 1.0;
        prog.inequalities.push_back(linear_fn("power budget of user 1", coef, -pt));
    }

    const char* stream_tag[3] = {"a", "b", "c"};
    for (int i = 0; i < 3; ++i) {
        if (!pp.active[i]) continue;
        const int ri = rho_idx[i], ti = t_idx[i], si = t1_idx[i];
        const RateCoeffs rc = rate_rhs_coeffs(lp.rho[i], m[i], n_sym);

        convex::ScalarFn rate;
        rate.name = std::string("rate restriction, stream ") + stream_tag[i];
        rate.value = [ti, si, ri, rc, n](const convex::Vec& x) {
            return x[ti] / n - x[si] / n - rc.a * log2p1(x[ri]) - rc.b;
        };
        rate.grad = [ti, si, ri, rc, n](const convex::Vec& x, convex::Vec& g) {
            g.assign(kPowerVarCount, 0.0);
            g[ti] = 1.0 / n;
            g[si] = -1.0 / n;
            g[ri] = -rc.a / ((1.0 + x[ri]) * kLn2);
        };
        rate.hess = [ri, rc](const convex::Vec& x, convex::Mat& h) {
            h.set_zero();
            const double s = 1.0 + x[ri];
            h(ri, ri) = rc.a / (s * s * kLn2);
        };
        prog.inequalities.push_back(std::move(rate));

        const double t1n = lp.t1[i];
        const double rhon = lp.rho[i];
        convex::ScalarFn aux;
        aux.name = std::string("auxiliary slack restriction, stream ") + stream_tag[i];
        aux.value = [ti, si, ri, t1n, rhon](const convex::Vec& x) {
            return std::log(t1n) + (x[si] - t1n) / t1n + 2.0 * std::log(1.0 + rhon) +
                   2.0 * (x[ri] - rhon) / (1.0 + rhon) - std::log(x[ti]);
        };
        aux.grad = [ti, si, ri, t1n, rhon](const convex::Vec& x, convex::Vec& g) {
            g.assign(kPowerVarCount, 0.0);
            g[si] = 1.0 / t1n;
            g[ri] = 2.0 / (1.0 + rhon);
            g[ti] = -1.0 / x[ti];
        };
        aux.hess = [ti](const convex::Vec& x, convex::Mat& h) {
            h.set_zero();
            h(ti, ti) = 1.0 / (x[ti] * x[ti]);
        };
        prog.inequalities.push_back(std::move(aux));

        convex::Vec coef(kPowerVarCount, 0.0);
        double constant = 0.0;
        if (i == 0) {
            // gamma_a >= rho_a, DC form linearized at (p11, rho_a)
            coef[kP12] = g1;
            coef[kP2] = g2;
            coef[kP11] = -g1 / lp.rho[0];
            coef[kRhoA] = lp.power.p11 * g1 / (lp.rho[0] * lp.rho[0]);
            constant = sigma - lp.power.p11 * g1 / lp.rho[0];
        } else if (i == 1) {
            coef[kP12] = g1;
            coef[kP2] = -g2 / lp.rho[1];
            coef[kRhoB] = lp.power.p2 * g2 / (lp.rho[1] * lp.rho[1]);
            constant = sigma - lp.power.p2 * g2 / lp.rho[1];
        } else {
            // gamma_c >= rho_c is already linear in (p12, rho_c)
            coef[kRhoC] = sigma;
            coef[kP12] = -g1;
        }
        prog.inequalities.push_back(linear_fn(
            std::string("sinr restriction, stream ") + stream_tag[i], coef, constant));
    }

    convex::ScalarFn obj;
    obj.name = "chernoff surrogate";
    const std::array<bool, 3> active = pp.active;
    obj.value = [active, t_idx, w](const convex::Vec& x) {
        double v = 0.0;
        for (int i = 0; i < 3; ++i)
            if (active[i]) v += w[i] * std::exp(-x[t_idx[i]]);
        return v;
    };
    obj.grad = [active, t_idx, w](const convex::Vec& x, convex::Vec& g) {
        g.assign(kPowerVarCount, 0.0);
        for (int i = 0; i < 3; ++i)
            if (active[i]) g[t_idx[i]] = -w[i] * std::exp(-x[t_idx[i]]);
    };
    obj.hess = [active, t_idx, w](const convex::Vec& x, convex::Mat& h) {
        h.set_zero();
        for (int i = 0; i < 3; ++i)
            if (active[i]) h(t_idx[i], t_idx[i]) = w[i] * std::exp(-x[t_idx[i]]);
    };
    prog.objective = std::move(obj);

    pp.x0.assign(kPowerVarCount, 0.0);
    pp.x0[kP11] = lp.power.p11;
    pp.x0[kP12] = lp.power.p12;
    pp.x0[kP2] = lp.power.p2;
    for (int i = 0; i < 3; ++i) {
        pp.x0[rho_idx[i]] = lp.rho[i];
        pp.x0[t_idx[i]] = lp.t[i];
        pp.x0[t1_idx[i]] = lp.t1[i];
    }
    check_seed(prog, pp.x0, "power_subproblem");
    return pp;
}

BetaProblem beta_subproblem(const SystemConfig& cfg, const OffloadFactors& lambda,
                            const LinearizationPoint& lp) {
    const double offload_bits = lambda.lambda1 * cfg.m1_bits;
    if (!(offload_bits > 0.0))
        throw std::invalid_argument("beta_subproblem: user 1 offloads no bits");
    const double beta_n = lp.split.beta_a;
    if (!(beta_n > 0.0 && beta_n < 1.0))
        throw std::invalid_argument("beta_subproblem: beta anchor must lie in (0,1)");

    const double n = static_cast<double>(cfg.blocklength);
    BetaProblem bp;
    bp.t_b_frozen = lp.t[1];

    convex::ConvexProgram& prog = bp.program;
    prog.n = kBetaVarCount;
    prog.lower = {0.0, 0.0, 0.0, 0.0};
    prog.upper = {1.0, 1.0, kSlackCap, kSlackCap};

    struct StreamRef {
        int rho_slot;
        int beta_var;
        int t_var;
        double anchor;
        const char* tag;
    };
    const StreamRef streams[2] = {{0, kBetaA, kTBetaA, lp.split.beta_a, "a"},
                                  {2, kBetaC, kTBetaC, lp.split.beta_c, "c"}};
    for (const StreamRef& s : streams) {
        const BetaCoeffs bc = beta_coeffs(lp.rho[s.rho_slot], lambda.lambda1,
                                          cfg.m1_bits, cfg.blocklength);
        // t <= N c (d^2 + 2 d e beta + Phi(beta)), all linear in (t, beta)
        const double slope =
            n * bc.c * (2.0 * bc.d * bc.e + 2.0 * bc.e * bc.e * s.anchor);
        const double at = bc.e * s.anchor;
        const double intercept =
            n * bc.c * (bc.d * bc.d + at * at - 2.0 * bc.e * bc.e * s.anchor * s.anchor);
        convex::Vec coef(kBetaVarCount, 0.0);
        coef[s.t_var] = 1.0;
        coef[s.beta_var] = -slope;
        prog.inequalities.push_back(linear_fn(
            std::string("split rate restriction, stream ") + s.tag, coef, -intercept));
    }

    prog.eq_a = convex::Mat(1, kBetaVarCount);
    prog.eq_a(0, kBetaA) = 1.0;
    prog.eq_a(0, kBetaC) = 1.0;
    prog.eq_b = {1.0};

    convex::ScalarFn obj;
    obj.name = "chernoff surrogate (split step)";
    const double tb = bp.t_b_frozen;
    obj.value = [tb](const convex::Vec& x) {
        return 2.0 * std::exp(-x[kTBetaA]) + std::exp(-x[kTBetaC]) +
               2.0 * std::exp(-tb);
    };
    obj.grad = [](const convex::Vec& x, convex::Vec& g) {
        g.assign(kBetaVarCount, 0.0);
        g[kTBetaA] = -2.0 * std::exp(-x[kTBetaA]);
        g[kTBetaC] = -std::exp(-x[kTBetaC]);
    };
    obj.hess = [](const convex::Vec& x, convex::Mat& h) {
        h.set_zero();
        h(kTBetaA, kTBetaA) = 2.0 * std::exp(-x[kTBetaA]);
        h(kTBetaC, kTBetaC) = std::exp(-x[kTBetaC]);
    };
    prog.objective = std::move(obj);

    bp.x0 = {lp.split.beta_a, lp.split.beta_c, 0.999 * lp.t[0], 0.999 * lp.t[2]};
    check_seed(prog, bp.x0, "beta_subproblem");
    return bp;
}

}  // namespace rsmec::sca
