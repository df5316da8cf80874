#include "persuade/linalg.hpp"
#include "persuade/lp.hpp"
#include "persuade/polyhedron.hpp"

#include "gen.hpp"

#include <gtest/gtest.h>

using namespace persuade;

namespace {

Rat R(long p, long q = 1) { return Rat(p, q); }

LinearSystem simplex(std::size_t n) {
    LinearSystem s(n);
    s.add_eq(Vec(n, R(1)), 1);
    s.add_nonnegativity();
    return s;
}

} // namespace

TEST(Rational, ParseAndPrint) {
    EXPECT_EQ(parse_rat("4/5"), R(4, 5));
    EXPECT_EQ(parse_rat("-6/8"), R(-3, 4));
    EXPECT_EQ(parse_rat("0.25"), R(1, 4));
    EXPECT_EQ(parse_rat("-.5"), R(-1, 2));
    EXPECT_EQ(parse_rat(" 7 "), R(7));
    EXPECT_EQ(to_string(R(7, 22)), "7/22");
    EXPECT_EQ(to_string(R(-3)), "-3");
    EXPECT_THROW(parse_rat("1/0"), InvalidInput);
    EXPECT_THROW(parse_rat("abc"), InvalidInput);
    EXPECT_THROW(parse_rat(""), InvalidInput);
    EXPECT_EQ(parse_vec("4/5,1/5"), (Vec{R(4, 5), R(1, 5)}));
}

TEST(Rational, CanonicalForm) {
    Rat r(BigInt(-10), BigInt(-4));
    EXPECT_EQ(numer(r), 5);
    EXPECT_EQ(denom(r), 2);
    EXPECT_EQ(primitive(Vec{R(1, 2), R(-1, 3)}), (Vec{R(3), R(-2)}));
}

TEST(Lp, SimplexFace) {
    LinearSystem s(2);
    s.add_le({R(1), R(1)}, 1);
    s.add_nonnegativity();
    auto out = lp_solve({R(1), R(1)}, s, Sense::Maximize);
    ASSERT_TRUE(out.optimal());
    EXPECT_EQ(out.value, 1);
    EXPECT_TRUE(s.contains(out.optimizer));
}

TEST(Lp, DirectSignalProgram) {
    // max sum x_i mu_i  s.t.  sum gap_i x_i mu_i >= 0, 0 <= x <= 1
    Vec gap{R(-2), R(-1), R(1)}, mu{R(1, 2), R(1, 4), R(1, 4)};
    LinearSystem s(3);
    Vec ic(3);
    for (int i = 0; i < 3; ++i) ic[i] = gap[i] * mu[i];
    s.add_ge(ic, 0);
    s.add_nonnegativity();
    for (std::size_t i = 0; i < 3; ++i) s.add_le(s.unit(i), 1);
    auto out = lp_solve(mu, s, Sense::Maximize);
    ASSERT_TRUE(out.optimal());
    EXPECT_EQ(out.value, R(1, 2));
}

TEST(Lp, Infeasible) {
    LinearSystem s(1);
    s.add_ge({R(1)}, 1);
    s.add_le({R(1)}, 0);
    EXPECT_EQ(lp_solve({R(1)}, s, Sense::Maximize).status, LpStatus::Infeasible);
}

TEST(Lp, Unbounded) {
    LinearSystem s(2);
    s.add_ge({R(1), R(-1)}, 0);
    EXPECT_EQ(lp_solve({R(1), R(0)}, s, Sense::Maximize).status, LpStatus::Unbounded);
    EXPECT_EQ(lp_solve({R(1), R(-1)}, s, Sense::Minimize).value, 0);
}

TEST(Lp, DimensionMismatch) {
    LinearSystem s(2);
    EXPECT_THROW(s.add_ge({R(1)}, 0), InvalidInput);
    EXPECT_THROW(lp_solve({R(1)}, s, Sense::Maximize), InvalidInput);
}

TEST(Lp, RedundantEqualities) {
    LinearSystem s(3);
    s.add_eq({R(1), R(1), R(1)}, 1);
    s.add_eq({R(2), R(2), R(2)}, 2);
    s.add_nonnegativity();
    auto out = lp_solve({R(0), R(1), R(3)}, s, Sense::Minimize);
    ASSERT_TRUE(out.optimal());
    EXPECT_EQ(out.value, 0);
}

TEST(StrictFeasible, Interior) {
    auto r = strict_feasible(simplex(2));
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(*r.point, (Vec{R(1, 2), R(1, 2)}));
}

TEST(StrictFeasible, BoundaryOnly) {
    LinearSystem s(2);
    s.add_eq({R(1), R(1)}, 1);
    s.add_ge({R(1), R(0)}, 1);
    s.add_ge({R(0), R(1)}, 0);
    EXPECT_FALSE(strict_feasible(s).feasible);
}

TEST(StrictFeasible, OpenRegionInSimplex) {
    // mu1 > 6 mu3 together with strict positivity
    LinearSystem s = simplex(3);
    s.add_ge({R(1), R(0), R(-6)}, 0);
    auto r = strict_feasible(s);
    ASSERT_TRUE(r.feasible);
    EXPECT_GT((*r.point)[0], 6 * (*r.point)[2]);
}

TEST(NullBasis, Examples) {
    EXPECT_TRUE(null_basis(identity(3)).empty());

    auto ones = null_basis(Matrix{{R(1), R(1), R(1)}});
    ASSERT_EQ(ones.size(), 2u);
    for (const auto& v : ones) EXPECT_EQ(sum(v), 0);
    EXPECT_EQ(rank(ones), 2u);

    Matrix partition{{R(1), R(0), R(0)}, {R(0), R(1), R(1)}};
    auto d = null_basis(partition);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_TRUE(d[0] == (Vec{R(0), R(1), R(-1)}) || d[0] == (Vec{R(0), R(-1), R(1)}));
}

TEST(NullBasis, RandomMatrices) {
    gen::Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t rows = rng.integer(1, 4), cols = rng.integer(1, 6);
        Matrix m(rows, Vec(cols));
        for (auto& row : m)
            for (auto& x : row) x = rng.coin() ? Rat(0) : rng.rational(3, 4);
        if (rng.coin() && rows > 1) m[1] = scaled(m[0], R(-2, 3));
        auto basis = null_basis(m, cols);
        EXPECT_EQ(basis.size() + rank(m, cols), cols);
        for (const auto& v : basis)
            for (const auto& row : m) EXPECT_EQ(dot(row, v), 0);
        if (!basis.empty()) EXPECT_EQ(rank(basis, cols), basis.size());
    }
}

TEST(Vertices, StandardSimplex) {
    auto v = vertices(simplex(3));
    EXPECT_EQ(v, (std::vector<Vec>{{R(0), R(0), R(1)}, {R(0), R(1), R(0)}, {R(1), R(0), R(0)}}));
}

TEST(Vertices, IdentifiedRegion) {
    LinearSystem s = simplex(3);
    s.add_ge({R(2), R(1), R(0)}, R(1, 2));
    s.add_ge({R(0), R(1), R(2)}, R(1, 2));
    auto v = vertices(s);
    auto has = [&](const Vec& x) { return std::find(v.begin(), v.end(), x) != v.end(); };
    EXPECT_TRUE(has({R(3, 4), R(0), R(1, 4)}));
    EXPECT_TRUE(has({R(0), R(1, 2), R(1, 2)}));
    for (const auto& x : v) EXPECT_TRUE(s.contains(x));
}

TEST(Vertices, Interval) {
    LinearSystem s(1);
    s.add_ge({R(1)}, R(-2, 3));
    s.add_le({R(1)}, R(5, 2));
    EXPECT_EQ(vertices(s), (std::vector<Vec>{{R(-2, 3)}, {R(5, 2)}}));
}

TEST(Vertices, Errors) {
    LinearSystem unbounded(1);
    unbounded.add_ge({R(1)}, 0);
    EXPECT_THROW(vertices(unbounded), InvalidInput);
    EXPECT_THROW(vertices(simplex(11)), LimitExceeded);
    LinearSystem empty(1);
    empty.add_ge({R(1)}, 1);
    empty.add_le({R(1)}, 0);
    EXPECT_TRUE(vertices(empty).empty());
}

TEST(LpProperties, OptimizerFeasibleAndDuality) {
    gen::Rng rng(7);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = rng.integer(1, 4);
        LinearSystem s(n);
        // bounded box plus random cuts and maybe an equality
        for (std::size_t j = 0; j < n; ++j) {
            s.add_ge(s.unit(j), rng.rational(2, 3) - 3);
            s.add_le(s.unit(j), rng.rational(2, 3) + 3);
        }
        for (int k = rng.integer(0, 3); k > 0; --k) {
            Vec row(n);
            for (auto& x : row) x = rng.rational(3, 3);
            s.add_ge(row, rng.rational(2, 3));
        }
        if (rng.coin()) {
            Vec row(n);
            for (auto& x : row) x = rng.rational(3, 2);
            s.add_eq(row, rng.rational(1, 2));
        }
        Vec c(n);
        for (auto& x : c) x = rng.rational(3, 4);

        auto mx = lp_solve(c, s, Sense::Maximize);
        auto mn = lp_solve(scaled(c, -1), s, Sense::Minimize);
        ASSERT_EQ(mx.status, mn.status);
        if (!mx.optimal()) {
            EXPECT_EQ(mx.status, LpStatus::Infeasible);
            EXPECT_TRUE(vertices(s).empty());
            continue;
        }
        EXPECT_TRUE(s.contains(mx.optimizer));
        EXPECT_TRUE(s.contains(mn.optimizer));
        EXPECT_EQ(mx.value, -mn.value);

        auto verts = vertices(s);
        ASSERT_FALSE(verts.empty());
        Rat best = dot(c, verts.front());
        for (const auto& v : verts) best = std::max(best, dot(c, v));
        EXPECT_EQ(best, mx.value);
    }
}

TEST(ExtremePoints, DropsInteriorPoints) {
    std::vector<Vec> pts{{R(0), R(0)}, {R(1), R(0)}, {R(1, 2), R(0)}, {R(0), R(1)}, {R(1, 4), R(1, 4)}, {R(0), R(0)}};
    EXPECT_EQ(extreme_points(pts), (std::vector<Vec>{{R(0), R(0)}, {R(0), R(1)}, {R(1), R(0)}}));
}
