#include "rsmec/ao.hpp"

#include "rsmec/convex.hpp"
#include "rsmec/fbl.hpp"
#include "rsmec/mec.hpp"
#include "rsmec/sca.hpp"

#include <chrono>
#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rsmec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double surrogate(const SystemConfig& cfg, const ChannelRealization& ch,
                 const PowerAllocation& pw, const OffloadFactors& lambda,
                 const SplitFactors& split) {
    return chernoff_surrogate(ch, pw, stream_loads(cfg, lambda, split), cfg.blocklength);
}

OptimizeResult remark2_result(const SystemConfig& cfg) {
    OptimizeResult r;
    r.alloc.power = {0.0, 0.0, 0.0};
    r.alloc.lambda = {0.0, 0.0};
    r.alloc.split = SplitFactors::from_beta(0.5);
    r.scp.scp = 1.0;
    r.scp.feasible = true;
    r.scp.eps1 = 0.0;
    r.scp.eps2 = 0.0;
    r.scp.t2 = offload_time(cfg);
    r.scp.t3 = compute_time(cfg, r.alloc.lambda);
    r.trace.converged = true;
    return r;
}

OptimizeResult infeasible_result(const SystemConfig& cfg, const OffloadFactors& lambda) {
    OptimizeResult r;
    r.alloc.lambda = lambda;
    r.alloc.split = SplitFactors::from_beta(0.5);
    r.scp.scp = 0.0;
    r.scp.feasible = false;
    r.scp.t2 = offload_time(cfg);
    r.scp.t3 = compute_time(cfg, lambda);
    r.trace.converged = true;
    return r;
}

// Anchor for the split step: true SINR slacks of the current powers.
sca::LinearizationPoint anchor_at(const SystemConfig& cfg, const ChannelRealization& ch,
                                  const PowerAllocation& pw, const StreamLoads& loads,
                                  const SplitFactors& split) {
    sca::LinearizationPoint lp;
    lp.power = pw;
    lp.split = split;
    const auto gamma = sinr_chain(ch, pw);
    const double m[3] = {loads.m_a, loads.m_b, loads.m_c};
    for (int i = 0; i < 3; ++i) {
        if (m[i] > 0.0 && gamma[i] > 0.0) {
            lp.rho[i] = gamma[i];
            const double f = f_margin({gamma[i], m[i], cfg.blocklength});
            lp.t[i] = std::min(0.5 * f * f, 0.9 * sca::kSlackCap);
            lp.t1[i] = lp.t[i] / ((1.0 + gamma[i]) * (1.0 + gamma[i]));
        } else {
            lp.rho[i] = 1.0;
            lp.t[i] = 0.5 * sca::kSlackCap;
            lp.t1[i] = lp.t[i] * 0.25;
        }
    }
    return lp;
}

// True iff every loaded stream codes strictly below capacity; the convex
// restrictions are only valid (and useful) on that branch.
bool margins_ok(const SystemConfig& cfg, const ChannelRealization& ch,
                const PowerAllocation& pw, const StreamLoads& loads) {
    const auto gamma = sinr_chain(ch, pw);
    const double m[3] = {loads.m_a, loads.m_b, loads.m_c};
    for (int i = 0; i < 3; ++i) {
        if (m[i] <= 0.0) continue;
        if (gamma[i] <= 0.0) return false;
        if (f_margin({gamma[i], m[i], cfg.blocklength}) < 0.0) return false;
    }
    return true;
}

struct ScaRun {
    PowerAllocation power;
    SplitFactors split;
    AoTrace trace;
};

// One alternating run from the given start: power restriction, then
// split restriction, each accepted only if the true surrogate improves.
// Steps anchored past capacity are skipped; the restriction there points
// the wrong way.
ScaRun run_sca(const SystemConfig& cfg, const ChannelRealization& ch,
               const OffloadFactors& lambda, PowerAllocation pw, double beta0,
               const OptimizeOptions& opts) {
    ScaRun run;
    SplitFactors split = SplitFactors::from_beta(beta0);
    const bool split_active = lambda.lambda1 * cfg.m1_bits > 0.0;
    if (!split_active) split = SplitFactors::from_beta(1.0);

    double obj = surrogate(cfg, ch, pw, lambda, split);
    run.trace.objective.push_back(obj);

    for (int n = 1; n <= opts.max_iterations; ++n) {
        const StreamLoads loads = stream_loads(cfg, lambda, split);

        if (margins_ok(cfg, ch, pw, loads)) {
            sca::LinearizationPoint lp = sca::slack_seed(ch, pw, loads, cfg);
            lp.split = split;
            pw = lp.power;  // boundary powers were pulled strictly inside
            try {
                sca::PowerProblem pp = sca::power_subproblem(ch, cfg, loads, lp);
                const convex::SolveReport rep =
                    convex::solve(pp.program, pp.x0, opts.solver_tol);
                const PowerAllocation cand{rep.x[sca::kP11], rep.x[sca::kP12],
                                           rep.x[sca::kP2]};
                if (surrogate(cfg, ch, cand, lambda, split) <=
                    surrogate(cfg, ch, pw, lambda, split))
                    pw = cand;
            } catch (const std::invalid_argument&) {
                // seed rejected by the builder; keep the current powers
            }
        }

        if (split_active && split.beta_a > 0.0 && split.beta_a < 1.0 &&
            margins_ok(cfg, ch, pw, stream_loads(cfg, lambda, split))) {
            sca::LinearizationPoint lp2 =
                anchor_at(cfg, ch, pw, stream_loads(cfg, lambda, split), split);
            try {
                sca::BetaProblem bp = sca::beta_subproblem(cfg, lambda, lp2);
                const convex::SolveReport rep =
                    convex::solve(bp.program, bp.x0, opts.solver_tol);
                const SplitFactors cand = SplitFactors::from_beta(rep.x[sca::kBetaA]);
                if (surrogate(cfg, ch, pw, lambda, cand) <=
                    surrogate(cfg, ch, pw, lambda, split))
                    split = cand;
            } catch (const std::invalid_argument&) {
            }
        }

        const double next = surrogate(cfg, ch, pw, lambda, split);
        run.trace.objective.push_back(next);
        run.trace.iterations = n;
        if (std::fabs(next - obj) <= opts.tolerance) {
            run.trace.converged = true;
            break;
        }
        obj = next;
    }
    run.power = pw;
    run.split = split;
    return run;
}

double exact_scp(const SystemConfig& cfg, const ChannelRealization& ch,
                 const PowerAllocation& pw, const OffloadFactors& lambda, double beta) {
    return scp(cfg, ch, pw, lambda, SplitFactors::from_beta(beta)).scp;
}

// Start scan for the restarted run. User 1 spends its whole budget
// (p11 only raises its own first-decoded SINR), so the shape reduces to
// (p12, p2); for each, the below-capacity window for beta follows in
// closed form and candidates near its quartiles are ranked by exact SCP.
// Interference-heavy draws often leave the symmetric start past capacity
// on a stream, where the alternating steps cannot move; the window can
// be a sliver of the p12 axis, hence the dense quadratic grid.
std::pair<PowerAllocation, double> best_start(const SystemConfig& cfg,
                                              const ChannelRealization& ch,
                                              const OffloadFactors& lambda) {
    const double pt = cfg.power_budget;
    const double n = static_cast<double>(cfg.blocklength);
    const double bits1 = lambda.lambda1 * cfg.m1_bits;
    const bool split_active = bits1 > 0.0;

    PowerAllocation best_pw{0.5 * pt, 0.5 * pt, pt};
    double best_beta = split_active ? 0.5 : 1.0;
    double best_val = -1.0;
    auto consider = [&](const PowerAllocation& pw, double beta) {
        const double v = exact_scp(cfg, ch, pw, lambda, beta);
        if (v > best_val) {
            best_val = v;
            best_pw = pw;
            best_beta = beta;
        }
    };

    const int grid_12 = 160, grid_2 = 40;
    for (int i = 1; i <= grid_12; ++i) {
        const double frac = static_cast<double>(i) / grid_12;
        const double p12 = pt * frac * frac * (1.0 - 1e-6);
        const double p11 = pt - p12;
        for (int j = 1; j <= grid_2; ++j) {
            const double p2 = pt * static_cast<double>(j) / grid_2;
            const PowerAllocation pw{p11, p12, p2};
            if (!split_active) {
                consider(pw, 1.0);
                continue;
            }
            const auto gamma = sinr_chain(ch, pw);
            const double cap_a = std::log2(1.0 + gamma[0]) * n / bits1;
            const double cap_c = std::log2(1.0 + gamma[2]) * n / bits1;
            const double lo = std::max(0.0, 1.0 - cap_c);
            const double hi = std::min(1.0, cap_a);
            if (lo >= hi) continue;
            consider(pw, 0.5 * (lo + hi));
            consider(pw, 0.75 * lo + 0.25 * hi);
            consider(pw, 0.25 * lo + 0.75 * hi);
        }
    }
    if (split_active) {
        consider({0.5 * pt, 0.5 * pt, pt}, 0.5);
        consider({0.2 * pt, 0.8 * pt, pt}, 0.2);
    }
    // keep the start strictly inside the split box
    best_beta = std::min(0.999, std::max(1e-3, best_beta));
    return {best_pw, best_beta};
}

double golden_max(double lo, double hi, const std::function<double(double)>& f) {
    const double gr = 0.6180339887498949;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 40; ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

// Fallback candidate for draws whose optimum tolerates a stream beyond
// capacity: there the exponential restriction points the wrong way and
// alternating steps stall, so search the exact SCP directly on a coarse
// grid and polish by coordinate golden sections.
Allocation direct_search(const SystemConfig& cfg, const ChannelRealization& ch,
                         const OffloadFactors& lambda) {
    const double pt = cfg.power_budget;
    const bool split_active = lambda.lambda1 * cfg.m1_bits > 0.0;
    const int g12 = 24, g2 = 12;

    struct Seed {
        double value = -1.0;
        double p12 = 0.0, p2 = 0.0, beta = 1.0;
    };
    constexpr int kSeeds = 5;
    std::array<Seed, kSeeds> seeds;
    auto offer = [&](double v, double c12, double c2, double cb) {
        for (int s = 0; s < kSeeds; ++s) {
            if (v > seeds[s].value) {
                for (int t = kSeeds - 1; t > s; --t) seeds[t] = seeds[t - 1];
                seeds[s] = {v, c12, c2, cb};
                return;
            }
        }
    };
    for (int i = 0; i <= g12; ++i) {
        const double frac = static_cast<double>(i) / g12;
        const double c12 = pt * frac * frac * (1.0 - 1e-9);
        for (int j = 1; j <= g2; ++j) {
            const double c2 = pt * static_cast<double>(j) / g2;
            if (!split_active) {
                offer(exact_scp(cfg, ch, {pt - c12, c12, c2}, lambda, 1.0), c12, c2, 1.0);
                continue;
            }
            for (int b = 0; b <= 20; ++b) {
                const double cb = 0.05 * b;
                offer(exact_scp(cfg, ch, {pt - c12, c12, c2}, lambda, cb), c12, c2, cb);
            }
        }
    }

    Seed best = seeds[0];
    for (const Seed& s : seeds) {
        if (s.value < 0.0) continue;
        double p12 = s.p12, p2 = s.p2, beta = s.beta;
        for (int round = 0; round < 3; ++round) {
            if (split_active) {
                beta = golden_max(std::max(0.0, beta - 0.1), std::min(1.0, beta + 0.1),
                                  [&](double b) {
                                      return exact_scp(cfg, ch, {pt - p12, p12, p2},
                                                       lambda, b);
                                  });
            }
            p12 = golden_max(std::max(0.0, p12 - pt / g12),
                             std::min(pt, p12 + pt / g12), [&](double v) {
                                 return exact_scp(cfg, ch, {pt - v, v, p2}, lambda, beta);
                             });
            p2 = golden_max(std::max(1e-9 * pt, p2 - pt / g2),
                            std::min(pt, p2 + pt / g2), [&](double v) {
                                return exact_scp(cfg, ch, {pt - p12, p12, v}, lambda,
                                                 beta);
                            });
        }
        const double v = exact_scp(cfg, ch, {pt - p12, p12, p2}, lambda, beta);
        if (v > best.value) best = {v, p12, p2, beta};
    }

    Allocation alloc;
    alloc.power = {pt - best.p12, best.p12, best.p2};
    alloc.lambda = lambda;
    alloc.split = SplitFactors::from_beta(best.beta);
    return alloc;
}

// Best no-split allocation under decoding order s1 -> s2: p1 = Pt, 1-D
// search over p2.
Allocation best_noma_allocation(const SystemConfig& cfg, const ChannelRealization& ch,
                                const OffloadFactors& lambda) {
    const double pt = cfg.power_budget;
    const SplitFactors split = SplitFactors::from_beta(1.0);
    auto value = [&](double p2) {
        return scp(cfg, ch, PowerAllocation{pt, 0.0, p2}, lambda, split).scp;
    };

    const int grid = 160;
    double best_p2 = pt, best = value(pt);
    for (int k = 1; k <= grid; ++k) {
        const double p2 = pt * static_cast<double>(k) / grid;
        const double v = value(p2);
        if (v > best) {
            best = v;
            best_p2 = p2;
        }
    }
    // golden-section refinement inside the winning cell
    const double cell = pt / grid;
    double lo = std::max(1e-12 * pt, best_p2 - cell);
    double hi = std::min(pt, best_p2 + cell);
    const double gr = 0.6180339887498949;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = value(x1), f2 = value(x2);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = value(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = value(x1);
        }
    }
    const double mid = 0.5 * (lo + hi);
    if (value(mid) > best) best_p2 = mid;

    Allocation alloc;
    alloc.power = {pt, 0.0, best_p2};
    alloc.lambda = lambda;
    alloc.split = split;
    return alloc;
}

}  // namespace

OptimizeResult optimize(const SystemConfig& cfg, const ChannelRealization& ch,
                        const OptimizeOptions& opts) {
    const auto t0 = Clock::now();
    if (offload_time(cfg) >= cfg.t_budget) {
        auto r = infeasible_result(cfg, {1.0, 1.0});
        r.trace.wall_seconds = seconds_since(t0);
        return r;
    }
    if (locally_feasible(cfg)) {
        auto r = remark2_result(cfg);
        r.trace.wall_seconds = seconds_since(t0);
        return r;
    }

    const OffloadFactors lambda = optimal_lambda(cfg);
    if (!mec_capacity_check(cfg, lambda)) {
        auto r = infeasible_result(cfg, lambda);
        r.trace.wall_seconds = seconds_since(t0);
        return r;
    }

    const double pt = cfg.power_budget;
    ScaRun main_run = run_sca(cfg, ch, lambda, {0.5 * pt, 0.5 * pt, pt}, 0.5, opts);

    OptimizeResult result;
    result.alloc.power = main_run.power;
    result.alloc.lambda = lambda;
    result.alloc.split = main_run.split;
    result.scp = scp(cfg, ch, main_run.power, lambda, main_run.split);
    result.trace = main_run.trace;

    if (opts.use_restart) {
        // one restart from the winner of the windowed start scan
        const auto [pw0, beta0] = best_start(cfg, ch, lambda);
        ScaRun alt = run_sca(cfg, ch, lambda, pw0, beta0, opts);
        const ScpResult alt_scp = scp(cfg, ch, alt.power, lambda, alt.split);
        if (alt_scp.scp > result.scp.scp) {
            result.alloc.power = alt.power;
            result.alloc.split = alt.split;
            result.scp = alt_scp;
            result.trace = alt.trace;
        }
    }

    // the no-split corner is a feasible point of this problem too
    const Allocation corner = best_noma_allocation(cfg, ch, lambda);
    const ScpResult corner_scp =
        scp(cfg, ch, corner.power, corner.lambda, corner.split);
    if (corner_scp.scp > result.scp.scp) {
        result.alloc = corner;
        ScpResult merged = corner_scp;
        merged.trace = result.trace.objective;
        result.scp = merged;
    }

    // when the restriction-based runs come back nearly dead, the optimum
    // may sit beyond capacity on one stream; search it directly
    if (result.scp.scp < 0.6) {
        const Allocation direct = direct_search(cfg, ch, lambda);
        const ScpResult direct_scp =
            scp(cfg, ch, direct.power, direct.lambda, direct.split);
        if (direct_scp.scp > result.scp.scp) {
            result.alloc = direct;
            ScpResult merged = direct_scp;
            merged.trace = result.trace.objective;
            result.scp = merged;
        }
    }

    result.scp.trace = result.trace.objective;
    result.trace.wall_seconds = seconds_since(t0);
    return result;
}

OptimizeResult optimize_noma(const SystemConfig& cfg, const ChannelRealization& ch,
                             const OptimizeOptions&) {
    const auto t0 = Clock::now();
    if (offload_time(cfg) >= cfg.t_budget) {
        auto r = infeasible_result(cfg, {1.0, 1.0});
        r.trace.wall_seconds = seconds_since(t0);
        return r;
    }
    if (locally_feasible(cfg)) {
        auto r = remark2_result(cfg);
        r.trace.wall_seconds = seconds_since(t0);
        return r;
    }
    const OffloadFactors lambda = optimal_lambda(cfg);
    if (!mec_capacity_check(cfg, lambda)) {
        auto r = infeasible_result(cfg, lambda);
        r.trace.wall_seconds = seconds_since(t0);
        return r;
    }

    OptimizeResult result;
    result.alloc = best_noma_allocation(cfg, ch, lambda);
    result.scp = scp(cfg, ch, result.alloc.power, lambda, result.alloc.split);
    result.trace.converged = true;
    result.trace.wall_seconds = seconds_since(t0);
    return result;
}

OptimizeResult brute_force_oracle(const SystemConfig& cfg, const ChannelRealization& ch,
                                  int grid_density) {
    if (grid_density < 17)
        throw std::invalid_argument("brute_force_oracle: grid density must be >= 17");
    const auto t0 = Clock::now();
    if (offload_time(cfg) >= cfg.t_budget) return infeasible_result(cfg, {1.0, 1.0});
    if (locally_feasible(cfg)) return remark2_result(cfg);
    const OffloadFactors lambda = optimal_lambda(cfg);
    if (!mec_capacity_check(cfg, lambda)) return infeasible_result(cfg, lambda);

    const double pt = cfg.power_budget;
    const int d = grid_density;
    const bool split_active = lambda.lambda1 * cfg.m1_bits > 0.0;

    struct Cand {
        double v = -1.0, p11 = 0.0, p12 = 0.0, p2 = 0.0, beta = 1.0;
    };
    std::vector<Cand> reservoir;  // top grid points, sorted descending
    constexpr size_t kReservoir = 256;
    auto offer = [&](const Cand& c) {
        if (reservoir.size() >= kReservoir && c.v <= reservoir.back().v) return;
        auto pos = std::lower_bound(
            reservoir.begin(), reservoir.end(), c,
            [](const Cand& a, const Cand& b) { return a.v > b.v; });
        reservoir.insert(pos, c);
        if (reservoir.size() > kReservoir) reservoir.pop_back();
    };

    OptimizeResult best;
    best.alloc.lambda = lambda;
    best.scp.scp = -1.0;
    for (int i = 0; i <= d - 1; ++i) {
        const double p11 = pt * static_cast<double>(i) / (d - 1);
        for (int j = 0; j <= d - 1 - i; ++j) {
            const double p12 = pt * static_cast<double>(j) / (d - 1);
            for (int k = 1; k <= d; ++k) {
                const double p2 = pt * static_cast<double>(k) / d;
                const int beta_steps = split_active ? d : 1;
                for (int b = 0; b < beta_steps; ++b) {
                    const double beta =
                        split_active ? static_cast<double>(b) / (d - 1) : 1.0;
                    const PowerAllocation pw{p11, p12, p2};
                    const SplitFactors split = SplitFactors::from_beta(beta);
                    const ScpResult r = scp(cfg, ch, pw, lambda, split);
                    if (r.scp > 1e-6) offer({r.scp, p11, p12, p2, beta});
                    if (r.scp > best.scp.scp) {
                        best.scp = r;
                        best.alloc.power = pw;
                        best.alloc.split = split;
                    }
                }
            }
        }
    }

    // Derivative-free polish from a diverse set of top grid cells; the
    // raw grid can sit a long way below the optimum when the feasible
    // region is a needle. Moves recentre every round so the walk can
    // travel, and one move trades power along the user-1 budget ridge.
    const double cell = pt / (d - 1);
    std::vector<Cand> seeds;
    for (const Cand& c : reservoir) {
        bool fresh = true;
        for (const Cand& s : seeds) {
            if (std::fabs(c.p12 - s.p12) <= 2.0 * cell &&
                std::fabs(c.p2 - s.p2) <= 2.0 * cell &&
                std::fabs(c.beta - s.beta) <= 2.0 / (d - 1.0))
                fresh = false;
        }
        if (fresh) seeds.push_back(c);
        if (seeds.size() >= 12) break;
    }

    for (const Cand& seed : seeds) {
        double p11 = seed.p11, p12 = seed.p12, p2 = seed.p2, beta = seed.beta;
        double cur = seed.v;
        const double w = 1.5 * cell;
        // each move keeps the coordinate only if the slice search improves
        auto try_move = [&](double lo, double hi, const std::function<double(double)>& f,
                            double& coord) {
            const double cand = golden_max(std::max(lo, 0.0), hi, f);
            const double v = f(cand);
            if (v > cur) {
                cur = v;
                coord = cand;
            }
        };
        for (int round = 0; round < 5; ++round) {
            try_move(p11 - w, std::min(pt - p12, p11 + w),
                     [&](double v) { return exact_scp(cfg, ch, {v, p12, p2}, lambda, beta); },
                     p11);
            try_move(p12 - w, std::min(pt - p11, p12 + w),
                     [&](double v) { return exact_scp(cfg, ch, {p11, v, p2}, lambda, beta); },
                     p12);
            {
                // exchange along the ridge p11 + p12 = const
                const double sum = p11 + p12;
                try_move(p12 - w, std::min(sum, p12 + w),
                         [&](double v) {
                             return exact_scp(cfg, ch, {sum - v, v, p2}, lambda, beta);
                         },
                         p12);
                p11 = sum - p12;
            }
            try_move(std::max(1e-9 * pt, p2 - w), std::min(pt, p2 + w),
                     [&](double v) { return exact_scp(cfg, ch, {p11, p12, v}, lambda, beta); },
                     p2);
            if (split_active) {
                const double bw = 1.5 / (d - 1.0);
                try_move(beta - bw, std::min(1.0, beta + bw),
                         [&](double b) {
                             return exact_scp(cfg, ch, {p11, p12, p2}, lambda, b);
                         },
                         beta);
            }
        }
        const ScpResult polished =
            scp(cfg, ch, {p11, p12, p2}, lambda, SplitFactors::from_beta(beta));
        if (polished.scp > best.scp.scp) {
            best.scp = polished;
            best.alloc.power = {p11, p12, p2};
            best.alloc.split = SplitFactors::from_beta(beta);
        }
    }

    best.trace.converged = true;
    best.trace.wall_seconds = seconds_since(t0);
    return best;
}

}  // namespace rsmec
