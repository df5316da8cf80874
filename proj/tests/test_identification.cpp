#include "persuade/identification.hpp"

#include "fixtures.hpp"
#include "gen.hpp"

#include <gtest/gtest.h>

using namespace persuade;
using fx::R;

TEST(Dominance, Examples) {
    auto imp = fx::improvement();
    for (std::size_t a = 0; a < 3; ++a) {
        EXPECT_FALSE(is_dominated(imp, a).holds);
        EXPECT_FALSE(is_redundant(imp, a).holds);
    }
    auto pros = fx::prosecutor();
    EXPECT_FALSE(is_dominated(pros, 0).holds);
    EXPECT_FALSE(is_dominated(pros, 1).holds);

    auto p = fx::improvement();
    p.actions.push_back("low");
    p.u.push_back({R(0), R(-1)}); // strictly below action "1"
    p.v.push_back(R(5));
    auto d = is_dominated(p, 3);
    ASSERT_TRUE(d.holds);
    ASSERT_TRUE(d.mixture);
    for (std::size_t w = 0; w < 2; ++w) {
        Rat mix = 0;
        for (std::size_t b = 0; b < 4; ++b) mix += (*d.mixture)[b] * p.u[b][w];
        EXPECT_GT(mix, p.u[3][w]);
    }
    EXPECT_TRUE(is_redundant(p, 3).holds);
}

TEST(Redundancy, ShiftedCopyAndMidpoint) {
    auto p = fx::improvement();
    p.actions.push_back("mid");
    p.u.push_back({R(1, 2), R(-1, 2)}); // midpoint of "0" and "1"
    p.v.push_back(R(7));
    auto r = is_redundant(p, 3);
    EXPECT_TRUE(r.holds);
    EXPECT_FALSE(is_dominated(p, 3).holds);

    auto q = fx::prosecutor();
    q.actions.push_back("shifted");
    q.u.push_back({R(-1), R(-2)}); // "0" minus one everywhere
    q.v.push_back(R(3));
    EXPECT_TRUE(is_redundant(q, 2).holds);
}

TEST(NormalCone, Examples) {
    auto two = fx::fosd();
    auto c = normal_cone(two, 1, true);
    ASSERT_EQ(c.region.ge.size(), 4u); // nonnegativity plus the single comparison
    EXPECT_EQ(c.region.ge.back(), (Vec{R(-2), R(-1), R(1)}));

    auto imp = normal_cone(fx::improvement(), 1, true);
    EXPECT_FALSE(imp.empty);
    EXPECT_EQ(*imp.vertices, (std::vector<Vec>{{R(1, 3), R(2, 3)}, {R(1, 2), R(1, 2)}}));

    auto p = fx::improvement();
    p.actions.push_back("low");
    p.u.push_back({R(0), R(-1)});
    p.v.push_back(R(5));
    auto dominated = normal_cone(p, 3, true);
    EXPECT_TRUE(dominated.empty);
    EXPECT_TRUE(dominated.vertices->empty());
}

TEST(Rationalizes, ProsecutorInterval) {
    auto p = fx::prosecutor();
    Dist alpha{R(3, 5), R(2, 5)};
    EXPECT_TRUE(rationalizes(p, {R(4, 5), R(1, 5)}, alpha).holds);
    EXPECT_TRUE(rationalizes(p, {R(3, 10), R(7, 10)}, alpha).holds);
    EXPECT_FALSE(rationalizes(p, {R(29, 100), R(71, 100)}, alpha).holds);
    EXPECT_FALSE(rationalizes(p, {R(81, 100), R(19, 100)}, alpha).holds);
}

TEST(Rationalizes, PointMassData) {
    auto p = fx::improvement();
    Dist mu{R(2, 5), R(3, 5)}; // inside the cone of "1"
    auto r = rationalizes(p, mu, {R(0), R(1), R(0)});
    ASSERT_TRUE(r.holds);
    EXPECT_EQ(r.witness->beliefs, (Matrix{mu}));
}

TEST(Rationalizes, DominatedActionInData) {
    auto p = fx::improvement();
    p.actions.push_back("low");
    p.u.push_back({R(0), R(-1)});
    p.v.push_back(R(5));
    auto r = rationalizes(p, {R(1, 2), R(1, 2)}, {R(1, 2), R(0), R(0), R(1, 2)});
    EXPECT_FALSE(r.holds);
    EXPECT_NE(r.reason.find("dominated"), std::string::npos);
}

TEST(WitnessSignal, Prosecutor) {
    auto p = fx::prosecutor();
    Dist mu{R(4, 5), R(1, 5)}, alpha{R(3, 5), R(2, 5)};
    auto r = rationalizes(p, mu, alpha);
    ASSERT_TRUE(r.holds);
    auto sig = witness_signal(p, mu, alpha, *r.witness);
    EXPECT_EQ(sig.messages, (std::vector<std::string>{"0", "1"}));
    EXPECT_EQ(sig.kernel[0][1], R(1, 4));
    EXPECT_EQ(sig.kernel[1][1], R(1));
    EXPECT_TRUE(straightforward_check(p, mu, sig, alpha));
}

TEST(WitnessSignal, PointMassAndImprovement) {
    auto p = fx::improvement();
    Dist mu{R(2, 5), R(3, 5)}, alpha{R(0), R(1), R(0)};
    auto r = rationalizes(p, mu, alpha);
    auto sig = witness_signal(p, mu, alpha, *r.witness);
    EXPECT_EQ(sig.messages, (std::vector<std::string>{"1"}));

    Dist lo{R(11, 18), R(7, 18)}, uni = fx::uniform(3);
    auto r2 = rationalizes(p, lo, uni);
    ASSERT_TRUE(r2.holds);
    auto sig2 = witness_signal(p, lo, uni, *r2.witness);
    EXPECT_EQ(sig2.num_messages(), 3u);
    EXPECT_TRUE(straightforward_check(p, lo, sig2, uni));
}

TEST(WitnessSignal, RejectsInvalidWitness) {
    auto p = fx::prosecutor();
    Dist mu{R(4, 5), R(1, 5)}, alpha{R(3, 5), R(2, 5)};
    SelectionWitness bad{{0, 1}, {{R(1), R(0)}, {R(1), R(0)}}}; // "1" not optimal at (1,0)
    EXPECT_THROW(witness_signal(p, mu, alpha, bad), InvalidInput);
    SelectionWitness off{{0, 1}, {{R(1, 2), R(1, 2)}, {R(1, 2), R(1, 2)}}}; // wrong average
    EXPECT_THROW(witness_signal(p, mu, alpha, off), InvalidInput);
}

TEST(StraightforwardCheck, Cases) {
    auto p = fx::prosecutor();
    Dist mu{R(4, 5), R(1, 5)}, alpha{R(3, 5), R(2, 5)};
    Signal opt{{"0", "1"}, {{R(3, 4), R(1, 4)}, {R(0), R(1)}}};
    EXPECT_TRUE(straightforward_check(p, mu, opt, alpha));
    Signal greedy{{"0", "1"}, {{R(1, 2), R(1, 2)}, {R(0), R(1)}}}; // recommends "1" at posterior 1/3
    EXPECT_FALSE(straightforward_check(p, mu, greedy, alpha));
    Signal indirect{{"x", "1"}, {{R(3, 4), R(1, 4)}, {R(0), R(1)}}};
    EXPECT_FALSE(straightforward_check(p, mu, indirect, alpha));
}

TEST(IdentifiedVertices, TwoStateEndpoints) {
    auto v = identified_vertices(fx::prosecutor(), {R(3, 5), R(2, 5)});
    EXPECT_EQ(v, (std::vector<Vec>{{R(3, 10), R(7, 10)}, {R(4, 5), R(1, 5)}}));
}

TEST(IdentifiedVertices, LiftedAgreesWithMinkowski) {
    auto p = fx::rev();
    Dist alpha{R(1, 2), R(1, 2)};
    auto direct = identified_vertices(p, alpha);
    PriorConstraint none{{Vec(3, Rat(1))}, {R(1)}}; // redundant constraint
    auto lifted = identified_vertices(p, alpha, none);
    EXPECT_EQ(direct, lifted);
    EXPECT_NE(std::find(direct.begin(), direct.end(), Vec{R(3, 4), R(0), R(1, 4)}), direct.end());
}

TEST(IdentificationProperties, ConvexityWitnessesAndDominance) {
    gen::Rng rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t ns = rng.integer(2, 3);
        auto p = fx::two_action(rng.gaps(ns));
        if (rng.coin()) {
            p.actions.push_back("2");
            Vec row;
            for (std::size_t w = 0; w < ns; ++w) row.push_back(rng.rational(2, 2));
            p.u.push_back(row);
            p.v.push_back(R(2));
            if (!problem_violations(p).empty()) continue;
        }
        for (std::size_t a = 0; a < p.num_actions(); ++a)
            if (is_dominated(p, a).holds) EXPECT_TRUE(is_redundant(p, a).holds);

        Dist alpha = rng.dist(p.num_actions(), 4);
        auto verts = identified_vertices(p, alpha);
        if (verts.empty()) continue;
        for (const auto& v : verts) {
            auto r = rationalizes(p, v, alpha);
            ASSERT_TRUE(r.holds);
            auto sig = witness_signal(p, v, alpha, *r.witness);
            EXPECT_TRUE(straightforward_check(p, v, sig, alpha));
            for (std::size_t j = 0; j < r.witness->actions.size(); ++j)
                EXPECT_TRUE(rationalizes(p, r.witness->beliefs[j], point_mass(p.num_actions(), r.witness->actions[j])).holds);
        }
        const auto& x = verts[rng.integer(0, verts.size() - 1)];
        const auto& y = verts[rng.integer(0, verts.size() - 1)];
        Rat lam(rng.integer(0, 5), 5);
        EXPECT_TRUE(rationalizes(p, scaled(x, lam) + scaled(y, 1 - lam), alpha).holds);
    }
}
