#include "rsmec/ao.hpp"

#include "rsmec/mc.hpp"
#include "rsmec/mec.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace rsmec;

namespace {

SystemConfig regime_config(double snr_db = 15.0) {
    SystemConfig cfg;
    cfg.m1_bits = 7000.0;
    cfg.m2_bits = 7000.0;
    cfg.blocklength = 1000;
    cfg.power_budget = mc::transmit_power_for_snr_db(snr_db);
    return cfg;
}

}  // namespace

TEST_SUITE("ao") {

TEST_CASE("locally feasible instance returns scp 1 without iterating") {
    SystemConfig cfg = regime_config();
    cfg.m1_bits = 4000.0;
    cfg.m2_bits = 4500.0;
    const auto r = optimize(cfg, {1.0, 1.0, 1.0});
    CHECK(r.scp.scp == 1.0);
    CHECK(r.alloc.lambda.lambda1 == 0.0);
    CHECK(r.alloc.lambda.lambda2 == 0.0);
    CHECK(r.trace.iterations == 0);
    const auto rn = optimize_noma(cfg, {1.0, 1.0, 1.0});
    CHECK(rn.scp.scp == 1.0);
}

TEST_CASE("vanishing power budget drives the scp to zero") {
    SystemConfig cfg = regime_config();
    cfg.power_budget = 1e-9;
    const auto r = optimize(cfg, {1.0, 1.0, 1.0});
    CHECK(r.scp.scp <= 1e-9);
}

TEST_CASE("blocklength beyond the budget is infeasible") {
    SystemConfig cfg = regime_config();
    cfg.blocklength = 4000;  // N Ts = T
    const auto r = optimize(cfg, {1.0, 1.0, 1.0});
    CHECK(r.scp.scp == 0.0);
    CHECK_FALSE(r.scp.feasible);
}

TEST_CASE("trace is monotone and the loop terminates") {
    const SystemConfig cfg = regime_config();
    std::mt19937_64 rng(101);
    for (int i = 0; i < 15; ++i) {
        const ChannelRealization ch = mc::draw_channel(rng);
        const auto r = optimize(cfg, ch);
        REQUIRE(!r.trace.objective.empty());
        CHECK(r.trace.converged);
        CHECK(r.trace.iterations <= 100);
        for (size_t k = 1; k < r.trace.objective.size(); ++k)
            CHECK(r.trace.objective[k] <= r.trace.objective[k - 1] + 1e-9);
        CHECK(r.trace.objective.back() <= r.trace.objective.front() + 1e-9);
        CHECK(r.scp.scp >= 0.0);
        CHECK(r.scp.scp <= 1.0);
    }
}

TEST_CASE("optimized split scheme never loses to the no-split baseline") {
    const SystemConfig cfg = regime_config();
    std::mt19937_64 rng(103);
    for (int i = 0; i < 20; ++i) {
        const ChannelRealization ch = mc::draw_channel(rng);
        const auto rsma = optimize(cfg, ch);
        const auto noma = optimize_noma(cfg, ch);
        CHECK(rsma.scp.scp >= noma.scp.scp - 1e-9);
    }
}

TEST_CASE("noma search agrees with a 2-D grid oracle") {
    const SystemConfig cfg = regime_config();
    const auto lambda = optimal_lambda(cfg);
    std::mt19937_64 rng(107);
    const int d = 41;
    for (int i = 0; i < 6; ++i) {
        const ChannelRealization ch = mc::draw_channel(rng);
        const auto r = optimize_noma(cfg, ch);
        double best = 0.0;
        for (int a = 0; a <= d; ++a) {
            for (int b = 1; b <= d; ++b) {
                const PowerAllocation pw{cfg.power_budget * a / d, 0.0,
                                         cfg.power_budget * b / d};
                best = std::max(best,
                                scp(cfg, ch, pw, lambda, SplitFactors::from_beta(1.0)).scp);
            }
        }
        CHECK(r.scp.scp >= best - 1e-6);
    }
}

TEST_CASE("oracle contains the corner allocations and dominates noma") {
    const SystemConfig cfg = regime_config();
    std::mt19937_64 rng(109);
    for (int i = 0; i < 4; ++i) {
        const ChannelRealization ch = mc::draw_channel(rng);
        const auto oracle = brute_force_oracle(cfg, ch, 17);
        const auto noma = optimize_noma(cfg, ch);
        // the grid includes beta in {0,1} and p11 in {0,Pt}; only the finite
        // p2 grid keeps this from being an exact superset
        CHECK(oracle.scp.scp >= noma.scp.scp - 0.02);
    }
    CHECK_THROWS_AS((brute_force_oracle(cfg, {1.0, 1.0, 1.0}, 5)), std::invalid_argument);
}

TEST_CASE("alternating optimizer tracks the brute-force optimum") {
    const SystemConfig cfg = regime_config();
    std::mt19937_64 rng(113);
    int close = 0;
    const int total = 6;
    for (int i = 0; i < total; ++i) {
        const ChannelRealization ch = mc::draw_channel(rng);
        const auto ao = optimize(cfg, ch);
        const auto oracle = brute_force_oracle(cfg, ch, 21);
        if (std::fabs(ao.scp.scp - oracle.scp.scp) <= 0.03) ++close;
    }
    CHECK(close >= total - 1);
}

}  // TEST_SUITE
