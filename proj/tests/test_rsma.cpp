#include "rsmec/rsma.hpp"

#include "rsmec/fbl.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace rsmec;

TEST_SUITE("rsma") {

TEST_CASE("sinr_chain unit and hand-computed cases") {
    {
        const auto s = sinr_chain({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0});
        CHECK(s[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(s[1] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(s[2] == doctest::Approx(1.0).epsilon(1e-15));
    }
    {
        const auto s = sinr_chain({1.0, 1.0, 1.0}, {0.0, 1.0, 1.0});
        CHECK(s[0] == 0.0);
    }
    {
        const auto s = sinr_chain({2.0, 1.0, 1.0}, {4.0, 1.0, 2.0});
        CHECK(s[0] == doctest::Approx(8.0 / 5.0).epsilon(1e-15));
        CHECK(s[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(s[2] == doctest::Approx(2.0).epsilon(1e-15));
    }
}

TEST_CASE("sinr_chain matches a direct re-derivation on random instances") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        const ChannelRealization ch{u(rng), u(rng), u(rng) + 0.1};
        const PowerAllocation pw{u(rng), u(rng), u(rng)};
        const auto s = sinr_chain(ch, pw);
        const double den_a = pw.p12 * ch.g1 + pw.p2 * ch.g2 + ch.noise;
        CHECK(s[0] == doctest::Approx(pw.p11 * ch.g1 / den_a).epsilon(1e-14));
        CHECK(s[1] ==
              doctest::Approx(pw.p2 * ch.g2 / (pw.p12 * ch.g1 + ch.noise)).epsilon(1e-14));
        CHECK(s[2] == doctest::Approx(pw.p12 * ch.g1 / ch.noise).epsilon(1e-14));
    }
}

TEST_CASE("stream_loads splits and conserves bits") {
    {
        const auto l = stream_loads(6000.0, 0.0, SplitFactors::from_beta(0.5));
        CHECK(l.m_a == 3000.0);
        CHECK(l.m_c == 3000.0);
    }
    {
        const auto l = stream_loads(5000.0, 0.0, SplitFactors::from_beta(1.0));
        CHECK(l.m_c == 0.0);
        CHECK(l.m_a == 5000.0);
    }
    {
        // lambda1 = 0.0625, beta = 0.2, M1 = 5000
        const auto l = stream_loads(0.0625 * 5000.0, 4000.0, SplitFactors::from_beta(0.2));
        CHECK(l.m_a == doctest::Approx(62.5).epsilon(1e-12));
        CHECK(l.m_c == doctest::Approx(250.0).epsilon(1e-12));
        CHECK(l.m_b == 4000.0);
    }
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double bits = 10000.0 * u(rng);
        const auto l = stream_loads(bits, 0.0, SplitFactors::from_beta(u(rng)));
        CHECK(l.m_a + l.m_c == doctest::Approx(bits).epsilon(1e-12));
    }
}

TEST_CASE("offload_errors conventions") {
    const ChannelRealization ch{1.0, 1.0, 1.0};
    const PowerAllocation pw{1.0, 1.0, 1.0};
    {
        const auto t = offload_errors(ch, pw, {0.0, 100.0, 100.0}, 250);
        CHECK(t.eps_a == 0.0);
    }
    {
        const auto t = offload_errors(ch, pw, {100.0, 100.0, 100.0}, 250);
        const double expected = error_probability({1.0 / 3.0, 100.0, 250});
        CHECK(t.eps_a == doctest::Approx(expected).epsilon(1e-12));
        CHECK(t.eps_b == doctest::Approx(error_probability({0.5, 100.0, 250})).epsilon(1e-12));
        CHECK(t.eps_c == doctest::Approx(error_probability({1.0, 100.0, 250})).epsilon(1e-12));
    }
    {
        // stream c carries bits but gets zero power
        const auto t = offload_errors(ch, {1.0, 0.0, 1.0}, {100.0, 100.0, 100.0}, 250);
        CHECK(t.eps_c == 1.0);
    }
}

TEST_CASE("user_and_joint_errors against the product expansion") {
    {
        const auto u = user_and_joint_errors({0, 0, 0, 0, 0, 0, 0.0, 0.0, 0.0});
        CHECK(u.eps1 == 0.0);
        CHECK(u.eps2 == 0.0);
        CHECK(u.joint == 0.0);
    }
    {
        StreamErrorTriple t;
        t.eps_a = 0.01;
        t.eps_b = 0.02;
        t.eps_c = 0.03;
        const auto u = user_and_joint_errors(t);
        CHECK(u.eps1 == doctest::Approx(0.06).epsilon(1e-12));
        CHECK(u.eps2 == doctest::Approx(0.03).epsilon(1e-12));
        CHECK(u.joint == doctest::Approx(0.09).epsilon(1e-12));
        const double exact1 = 0.01 + 0.99 * 0.02 + 0.99 * 0.98 * 0.03;
        CHECK(u.eps1_exact == doctest::Approx(exact1).epsilon(1e-14));
        CHECK(u.eps2_exact == doctest::Approx(0.01 + 0.99 * 0.02).epsilon(1e-14));
    }
    {
        StreamErrorTriple t;
        t.eps_a = 1.0;
        t.eps_b = 0.4;
        t.eps_c = 0.7;
        const auto u = user_and_joint_errors(t);
        CHECK(u.eps1 == 1.0);
        CHECK(u.eps2 == 1.0);
        CHECK(u.eps1_exact == 1.0);
        CHECK(u.eps2_exact == 1.0);
    }
}

TEST_CASE("exact joint error never exceeds the additive bound") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 0.1);
    for (int i = 0; i < 2000; ++i) {
        StreamErrorTriple t;
        t.eps_a = u(rng);
        t.eps_b = u(rng);
        t.eps_c = u(rng);
        const auto ue = user_and_joint_errors(t);
        const double exact_joint =
            1.0 - (1.0 - ue.eps1_exact) * (1.0 - ue.eps2_exact);
        CHECK(exact_joint <= ue.joint + 1e-15);
    }
}

TEST_CASE("noma_case equals the degenerate split pipeline bit for bit") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    for (int i = 0; i < 200; ++i) {
        const ChannelRealization ch{u(rng), u(rng), 1.0};
        const double p1 = u(rng), p2 = u(rng);
        const double bits1 = 500.0 * u(rng), bits2 = 500.0 * u(rng);

        for (const auto order : {NomaOrder::user1_first, NomaOrder::user2_first}) {
            const auto direct = noma_case(ch, p1, p2, order, bits1, bits2, 500);
            const auto pipeline =
                offload_errors(ch, noma_power(p1, p2, order),
                               stream_loads(bits1, bits2, noma_split(order)), 500);
            CHECK(direct.eps_a == pipeline.eps_a);
            CHECK(direct.eps_b == pipeline.eps_b);
            CHECK(direct.eps_c == pipeline.eps_c);
            CHECK(direct.gamma_a == pipeline.gamma_a);
            CHECK(direct.gamma_b == pipeline.gamma_b);
            CHECK(direct.gamma_c == pipeline.gamma_c);
        }
    }
}

TEST_CASE("noma SINR shapes") {
    const ChannelRealization ch{1.0, 1.0, 1.0};
    {
        const auto t = noma_case(ch, 1.0, 1.0, NomaOrder::user1_first, 100.0, 100.0, 250);
        CHECK(t.gamma_a == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(t.gamma_b == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(t.m_c == 0.0);
    }
    {
        const auto t = noma_case(ch, 1.0, 1.0, NomaOrder::user2_first, 100.0, 100.0, 250);
        CHECK(t.gamma_b == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(t.gamma_c == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(t.m_a == 0.0);
    }
}

}  // TEST_SUITE
