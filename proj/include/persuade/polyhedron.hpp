#pragma once

#include "persuade/linalg.hpp"
#include "persuade/lp.hpp"

#include <algorithm>
#include <string>

namespace persuade {

struct VertexOptions {
    std::size_t max_vars = 10;
    std::size_t max_bases = 500000; // candidate active sets examined
};

namespace detail {

inline bool lex_less(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// Calls f(indices) for every k-subset of {0..m-1} in lexicographic order.
template <class F>
void for_each_subset(std::size_t m, std::size_t k, F&& f) {
    if (k > m) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        f(static_cast<const std::vector<std::size_t>&>(idx));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == m - k + (i - 1)) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

inline std::size_t binomial(std::size_t m, std::size_t k) {
    if (k > m) return 0;
    long double acc = 1;
    for (std::size_t i = 1; i <= k; ++i) acc = acc * static_cast<long double>(m - k + i) / i;
    return acc > 1e18L ? SIZE_MAX : static_cast<std::size_t>(acc + 0.5L);
}

} // namespace detail

/// Throws InvalidInput if the polyhedron is unbounded in some coordinate.
inline void require_bounded(const LinearSystem& sys) {
    for (std::size_t j = 0; j < sys.vars; ++j) {
        for (Sense s : {Sense::Maximize, Sense::Minimize}) {
            if (lp_solve(sys.unit(j), sys, s).status == LpStatus::Unbounded)
                throw InvalidInput("vertices: polyhedron is unbounded along variable " + std::to_string(j));
        }
    }
}

/// All vertices of a bounded polyhedron, by enumerating active sets of
/// inequality rows that pin down a unique point together with the
/// equalities. Returned in lexicographic order without duplicates.
inline std::vector<Vec> vertices(const LinearSystem& sys, const VertexOptions& opt = {}) {
    sys.validate();
    const std::size_t n = sys.vars;
    if (n > opt.max_vars)
        throw LimitExceeded("vertices: " + std::to_string(n) + " variables exceeds limit " +
                            std::to_string(opt.max_vars));
    if (!lp_feasible_point(sys).optimal()) return {};
    require_bounded(sys);

    const std::size_t eq_rank = rank(sys.eq, n);
    const std::size_t k = n - eq_rank;
    if (detail::binomial(sys.ge.size(), k) > opt.max_bases)
        throw LimitExceeded("vertices: too many candidate active sets");

    std::vector<Vec> found;
    auto consider = [&](const std::vector<std::size_t>& active) {
        Matrix m = sys.eq;
        Vec rhs = sys.eq_rhs;
        for (auto i : active) {
            m.push_back(sys.ge[i]);
            rhs.push_back(sys.ge_rhs[i]);
        }
        if (rank(m, n) != n) return;
        auto x = solve_particular(m, rhs, n);
        if (!x || !sys.contains(*x)) return;
        found.push_back(std::move(*x));
    };
    if (k == 0) {
        consider({});
    } else {
        detail::for_each_subset(sys.ge.size(), k, consider);
    }
    std::sort(found.begin(), found.end(), detail::lex_less);
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
}

/// Keeps only points that are not convex combinations of the others.
inline std::vector<Vec> extreme_points(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end(), detail::lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 1) return pts;
    const std::size_t dim = pts.front().size();
    std::vector<Vec> out;
    for (std::size_t p = 0; p < pts.size(); ++p) {
        // weights over the other points reproducing pts[p]
        const std::size_t others = pts.size() - 1;
        LinearSystem sys(others);
        for (std::size_t d = 0; d < dim; ++d) {
            Vec row;
            for (std::size_t q = 0; q < pts.size(); ++q)
                if (q != p) row.push_back(pts[q][d]);
            sys.add_eq(std::move(row), pts[p][d]);
        }
        sys.add_eq(Vec(others, Rat(1)), 1);
        sys.add_nonnegativity();
        if (!lp_feasible_point(sys).optimal()) out.push_back(pts[p]);
    }
    return out;
}

} // namespace persuade
