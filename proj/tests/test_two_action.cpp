#include "persuade/oracle.hpp"
#include "persuade/two_action.hpp"
#include "persuade/two_state.hpp"

#include "fixtures.hpp"
#include "two_action_gen.hpp"

#include <gtest/gtest.h>

using namespace persuade;
using fx::R;

namespace {

/// Direct two-action signal recommending the favored action "1" with
/// probability x[w] in state w.
Signal direct(const Vec& x) {
    Signal s{{"0", "1"}, {}};
    for (const auto& xi : x) s.kernel.push_back({1 - xi, xi});
    return s;
}

/// Indirect signal from the three-state example with a reversed middle message.
Signal rev_indirect() {
    return Signal{{"s1", "s2", "s3"}, {{R(5, 6), R(0), R(1, 6)}, {R(0), R(1), R(0)}, {R(0), R(0), R(1)}}};
}

} // namespace

TEST(ClassifyStates, Examples) {
    auto rev = classify_states(fx::rev());
    EXPECT_EQ(rev.low_count, 1u);
    EXPECT_EQ(rev.c(0, 1), 1);
    EXPECT_EQ(rev.c(0, 2), R(1, 2));
    auto fosd = classify_states(fx::fosd());
    EXPECT_EQ(fosd.low_count, 2u);
    EXPECT_TRUE(fosd.is_low(1));
    EXPECT_FALSE(fosd.is_low(2));
    EXPECT_EQ(classify_states(fx::two_action({R(-1), R(1)})).c(0, 1), R(1, 2));
    EXPECT_THROW(rev.c(1, 2), InvalidInput);
}

TEST(ClassifyStates, SortsAndRecordsPermutation) {
    auto p = fx::two_action({R(1), R(-2), R(-1)});
    auto view = classify_states(p);
    EXPECT_EQ(view.gap, (Vec{R(-2), R(-1), R(1)}));
    EXPECT_EQ(view.order, (std::vector<std::size_t>{1, 2, 0}));
    EXPECT_EQ(view.rank_of, (std::vector<std::size_t>{2, 0, 1}));
    EXPECT_EQ(view.gap_by_state(), (Vec{R(1), R(-2), R(-1)}));
    Vec x{R(1, 2), R(1, 3), R(1, 6)};
    EXPECT_EQ(view.from_ranked(view.to_ranked(x)), x);

    // Sender prefers the first listed action: gaps flip sign.
    auto q = fx::rev();
    q.v = {R(1), R(0)};
    auto flipped = classify_states(q);
    EXPECT_EQ(flipped.one, 0u);
    EXPECT_EQ(flipped.gap, (Vec{R(-1), R(0), R(1)}));
    EXPECT_EQ(flipped.order, (std::vector<std::size_t>{2, 1, 0}));
}

TEST(ClassifyStates, Errors) {
    EXPECT_THROW(classify_states(fx::improvement()), InvalidInput);
    EXPECT_THROW(classify_states(fx::two_action({R(-1), R(1), R(1)})), InvalidInput);
    EXPECT_THROW(classify_states(fx::two_action({R(0), R(1)})), InvalidInput);
    EXPECT_THROW(classify_states(fx::two_action({R(-2), R(-1)})), InvalidInput);
}

TEST(CutoffSignal, Examples) {
    auto view = classify_states(fx::fosd());
    auto s = cutoff_signal(view, 0, 0);
    EXPECT_EQ(s.messages, (std::vector<std::string>{"0", "1"}));
    EXPECT_EQ(s.kernel, (Matrix{{R(1), R(0)}, {R(0), R(1)}, {R(0), R(1)}}));
    EXPECT_EQ(cutoff_signal(view, 1, 1).kernel, (Matrix{{R(1), R(0)}, {R(0), R(1)}, {R(0), R(1)}}));
    EXPECT_EQ(cutoff_signal(view, 2, 1).kernel, (Matrix{{R(1), R(0)}, {R(1), R(0)}, {R(0), R(1)}}));
    EXPECT_EQ(cutoff_signal(view, 0, 1).kernel, (Matrix(3, Vec{R(0), R(1)})));
    EXPECT_EQ(cutoff_signal(view, 1, R(1, 3)).kernel[1], (Vec{R(2, 3), R(1, 3)}));
    EXPECT_THROW(cutoff_signal(view, 3, 0), InvalidInput);
    EXPECT_THROW(cutoff_signal(view, 0, R(3, 2)), InvalidInput);
}

TEST(CutoffParams, Examples) {
    auto view = classify_states(fx::fosd());
    auto mu = cutoff_params(view, {R(1, 2), R(1, 4), R(1, 4)});
    EXPECT_TRUE(mu.eligible);
    EXPECT_EQ(mu.i, 0u);
    EXPECT_EQ(mu.z, 0);
    EXPECT_EQ(mu.Pi, R(1, 2));
    auto nu = cutoff_params(view, {R(0), R(3, 4), R(1, 4)});
    EXPECT_EQ(nu.i, 1u);
    EXPECT_EQ(nu.z, R(1, 3));
    EXPECT_EQ(nu.Pi, R(1, 2));
    auto top = cutoff_params(view, point_mass(3, 2));
    EXPECT_FALSE(top.eligible);
    EXPECT_EQ(top.i, 0u);
    EXPECT_EQ(top.z, 1);
    EXPECT_EQ(top.Pi, 1);
    // The optimal signal at mu earns nothing at nu.
    EXPECT_EQ(sender_value(fx::fosd(), cutoff_signal(view, 0, 0), {R(0), R(3, 4), R(1, 4)}), 0);
}

TEST(KnownPriorOptimum, Examples) {
    auto view = classify_states(fx::fosd());
    auto opt = known_prior_optimum(view, {R(1, 3), R(1, 6), R(1, 2)});
    EXPECT_EQ(opt.params.i, 0u);
    EXPECT_EQ(opt.params.z, R(1, 2));
    // Pi = (1 - 1/2) 1/6 + (1 + 1/2) 1/2
    EXPECT_EQ(opt.value, R(5, 6));
    EXPECT_EQ(opt.value, lp_known_prior_value(view, {R(1, 3), R(1, 6), R(1, 2)}));
    EXPECT_EQ(known_prior_optimum(view, point_mass(3, 2)).value, 1);
    EXPECT_EQ(known_prior_optimum(view, point_mass(3, 0)).value, 0);
}

TEST(IsEquivalent, Examples) {
    auto p = fx::rev();
    auto view = classify_states(p);
    Dist mu{R(3, 4), R(0), R(1, 4)};
    auto d = direct({R(0), R(1), R(1)});
    EXPECT_TRUE(is_equivalent(view, d, d, mu));
    // Message s1 is answered with "0", s3 with "1", s2 is never sent.
    EXPECT_FALSE(is_equivalent(view, rev_indirect(), d, mu));
    EXPECT_TRUE(is_equivalent(view, rev_indirect(), direct({R(1, 6), R(0), R(1)}), mu));
    EXPECT_TRUE(is_equivalent(view, rev_indirect(), direct({R(1, 6), R(1, 2), R(1)}), mu));
    EXPECT_EQ(sender_value(p, rev_indirect(), mu), R(3, 8));

    Signal split{{"0", "1a", "1b"}, {{R(1), R(0), R(0)}, {R(0), R(1, 3), R(2, 3)}, {R(0), R(1, 2), R(1, 2)}}};
    EXPECT_TRUE(is_equivalent(view, split, d, fx::uniform(3)));
    EXPECT_THROW(is_equivalent(view, d, rev_indirect(), mu), InvalidInput);
}

TEST(Guarantee, ThreeStateExample) {
    auto view = classify_states(fx::rev());
    auto direct_g = guarantee(view, direct({R(0), R(1), R(1)}), R(1, 2));
    EXPECT_EQ(direct_g.value, R(1, 4));
    EXPECT_TRUE(direct_g.attained);
    EXPECT_EQ(direct_g.witness, (Dist{R(3, 4), R(0), R(1, 4)}));
    EXPECT_EQ(sender_value(fx::rev(), direct({R(0), R(1), R(1)}), direct_g.witness), R(1, 4));

    auto indirect = guarantee(view, rev_indirect(), R(1, 2));
    EXPECT_EQ(indirect.value, R(3, 10));
    EXPECT_FALSE(indirect.attained);
    EXPECT_EQ(indirect.witness, (Dist{R(3, 5), R(3, 10), R(1, 10)}));
    EXPECT_EQ(indirect.pattern, (std::vector<std::string>{"s2"}));
    EXPECT_GT(indirect.value, direct_g.value);
    // At the limit point the receiver breaks the tie toward the sender.
    EXPECT_GT(sender_value(fx::rev(), rev_indirect(), indirect.witness), indirect.value);
    EXPECT_TRUE(rationalizes(fx::rev(), indirect.witness, {R(1, 2), R(1, 2)}).holds);
}

TEST(Guarantee, UninformativeAndErrors) {
    auto view = classify_states(fx::fosd());
    for (Rat a : {R(1, 4), R(1, 2), R(3, 4)}) EXPECT_EQ(guarantee(view, uninformative_signal(3, "m"), a).value, 0);
    EXPECT_EQ(guarantee(view, uninformative_signal(3, "m"), R(1)).value, 1);

    Signal wide;
    for (int s = 0; s < 13; ++s) wide.messages.push_back("m" + std::to_string(s));
    wide.kernel.assign(3, Vec(13, R(1, 13)));
    EXPECT_THROW(guarantee(view, wide, R(1, 2)), LimitExceeded);

    // Under the uniform prior the favored action is never optimal.
    PriorConstraint known{identity(3), fx::uniform(3)};
    EXPECT_THROW(guarantee(view, uninformative_signal(3, "m"), R(1), known), Infeasible);
    EXPECT_THROW(guarantee(view, uninformative_signal(3, "m"), R(2)), InvalidInput);
}

TEST(Guarantee, KnownPriorConstraintGivesKnownPriorValue) {
    auto view = classify_states(fx::fosd());
    Dist mu{R(1, 2), R(1, 4), R(1, 4)};
    PriorConstraint known{identity(3), mu};
    auto g = guarantee(view, cutoff_signal(view, 0, 0), R(1, 2), known);
    EXPECT_EQ(g.value, R(1, 2));
    EXPECT_TRUE(g.attained);
    EXPECT_EQ(g.witness, mu);
}

TEST(NoSaddleWitness, SingleLowState) {
    auto view = classify_states(fx::rev());
    auto w = no_saddle_witness(view, R(1, 2));
    EXPECT_TRUE(w.single_low);
    EXPECT_EQ(w.c12, 1);
    EXPECT_EQ(w.c13, R(1, 2));
    EXPECT_EQ(w.family.front().second, (Dist{R(3, 4), R(0), R(1, 4)}));
    for (std::size_t k = 0; k < w.family.size(); ++k) {
        EXPECT_EQ(cutoff_params(view, w.family[k].second).Pi, R(1, 2));
        EXPECT_TRUE(rationalizes(fx::rev(), w.family[k].second, {R(1, 2), R(1, 2)}).holds);
        for (std::size_t l = 0; l < k; ++l) EXPECT_NE(w.family_z[k], w.family_z[l]);
    }
}

TEST(NoSaddleWitness, SeveralLowStates) {
    auto view = classify_states(fx::fosd());
    auto w = no_saddle_witness(view, R(1, 2));
    EXPECT_FALSE(w.single_low);
    EXPECT_EQ(*w.mu, (Dist{R(2, 3), R(0), R(1, 3)}));
    EXPECT_EQ(*w.nu, (Dist{R(1, 2), R(1, 4), R(1, 4)}));
    EXPECT_EQ(w.mu_params->Pi, R(1, 2));
    EXPECT_EQ(w.nu_params->Pi, R(1, 2));
    EXPECT_GT(w.mu_params->z, 0);
    EXPECT_EQ(w.nu_params->z, 0);
    // Each prior's optimal signal falls short at the other prior.
    EXPECT_LT(sender_value(fx::fosd(), cutoff_signal(view, w.mu_params->i, w.mu_params->z), *w.nu), R(1, 2));
    EXPECT_LT(sender_value(fx::fosd(), cutoff_signal(view, w.nu_params->i, w.nu_params->z), *w.mu), R(1, 2));
}

TEST(NoSaddleWitness, BoundaryDataAndErrors) {
    auto view = classify_states(fx::rev());
    auto one = no_saddle_witness(view, R(1));
    ASSERT_TRUE(one.trivial_saddle);
    EXPECT_EQ(one.trivial_saddle->value, 1);
    EXPECT_EQ(one.trivial_saddle->prior, point_mass(3, 2));
    auto zero = no_saddle_witness(view, R(0));
    ASSERT_TRUE(zero.trivial_saddle);
    EXPECT_EQ(zero.trivial_saddle->value, 0);
    EXPECT_THROW(no_saddle_witness(classify_states(fx::prosecutor()), R(1, 2)), PreconditionRefused);
    EXPECT_THROW(no_saddle_witness(view, R(-1, 2)), InvalidInput);
}

TEST(TwoActionProperties, CutoffAchievesPiAndMatchesLp) {
    gen::Rng rng(61);
    for (int inst = 0; inst < 12; ++inst) {
        auto p = gen::random_two_action(rng, static_cast<std::size_t>(rng.integer(2, 5)));
        auto view = classify_states(p);
        for (int k = 0; k < 25; ++k) {
            Dist mu = rng.coin() ? rng.dist(p.num_states(), 12) : rng.full_dist(p.num_states(), 9);
            auto cp = cutoff_params(view, mu);
            ASSERT_EQ(cp.Pi, lp_known_prior_value(view, mu));
            auto sig = cutoff_signal(view, cp.i, cp.z);
            ASSERT_EQ(sender_value(p, sig, mu), cp.Pi);
            if (cp.eligible) {
                ASSERT_GT(mu[view.order[cp.i]], 0);
                ASSERT_LT(cp.z, 1);
                Vec high = joint_weights(sig, mu, 1);
                Rat ic = dot(view.gap_by_state(), high);
                ASSERT_GE(ic, 0);
                if (cp.z > 0) ASSERT_EQ(ic, 0);
            }
            ASSERT_TRUE(rationalizes(p, mu, action_data(view, cp.Pi)).holds);
        }
    }
}

TEST(TwoActionProperties, GuaranteeInvariantUnderRelabelAndSplit) {
    gen::Rng rng(62);
    for (int trial = 0; trial < 12; ++trial) {
        auto p = gen::random_two_action(rng, 3);
        auto view = classify_states(p);
        const std::size_t m = static_cast<std::size_t>(rng.integer(2, 3));
        Signal s;
        for (std::size_t j = 0; j < m; ++j) s.messages.push_back("m" + std::to_string(j));
        for (std::size_t w = 0; w < 3; ++w) s.kernel.push_back(rng.dist(m, 4));
        const Rat alpha(rng.integer(1, 3), 4);
        auto base = guarantee(view, s, alpha);

        Signal relabeled{{}, Matrix(3)};
        for (std::size_t j = m; j-- > 0;) {
            relabeled.messages.push_back("r" + std::to_string(j));
            for (std::size_t w = 0; w < 3; ++w) relabeled.kernel[w].push_back(s.kernel[w][j]);
        }
        auto g1 = guarantee(view, relabeled, alpha);
        EXPECT_EQ(g1.value, base.value);
        EXPECT_EQ(g1.attained, base.attained);

        Signal split = s;
        split.messages.push_back("m0'");
        for (auto& row : split.kernel) {
            Rat half = row[0] / 2;
            row[0] = half;
            row.push_back(half);
        }
        auto g2 = guarantee(view, split, alpha);
        EXPECT_EQ(g2.value, base.value);
        EXPECT_EQ(g2.attained, base.attained);
        if (base.attained) EXPECT_EQ(sender_value(p, s, base.witness), base.value);
        EXPECT_TRUE(rationalizes(p, base.witness, action_data(view, alpha)).holds);
    }
}

TEST(TwoActionProperties, GuaranteeBelowPriorValues) {
    // The guarantee never exceeds the payoff at any rationalizing grid prior.
    gen::Rng rng(63);
    for (int trial = 0; trial < 6; ++trial) {
        auto p = gen::random_two_action(rng, 3);
        auto view = classify_states(p);
        const Rat alpha(rng.integer(1, 3), 4);
        Signal s = direct({R(rng.integer(0, 4), 4), R(rng.integer(0, 4), 4), R(rng.integer(0, 4), 4)});
        s.messages = {p.actions[view.zero], p.actions[view.one]};
        auto g = guarantee(view, s, alpha);
        Rat lowest = 2;
        for (const auto& mu : grid_priors(p, action_data(view, alpha), 8)) lowest = std::min(lowest, sender_value(p, s, mu));
        EXPECT_LE(g.value, lowest);
    }
}

TEST(TwoActionProperties, TwoByTwoSignalGuaranteesAlpha) {
    gen::Rng rng(64);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = fx::two_action(rng.gaps(2));
        auto view = classify_states(p);
        const Rat alpha(rng.integer(0, 6), 6);
        auto r = solve_two_by_two(p, action_data(view, alpha));
        EXPECT_EQ(guarantee(view, r.signal, alpha).value, alpha);
    }
}
