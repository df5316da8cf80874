#pragma once

// Brute-force verifiers. Each one reaches its answer by a route independent
// of the closed form it checks.

#include "persuade/identification.hpp"
#include "persuade/linalg.hpp"
#include "persuade/lp.hpp"
#include "persuade/two_action.hpp"

#include <functional>

namespace persuade {

/// Best direct signal for a known prior, by LP over the probabilities x_w of
/// recommending the favored action: max sum x mu s.t. the recommendation is
/// obeyed, 0 <= x <= 1.
inline Rat lp_known_prior_value(const TwoActionView& view, const Dist& mu) {
    const std::size_t n = view.states();
    check_dist(mu, n, "prior");
    const Vec gaps = view.gap_by_state();
    LinearSystem sys(n);
    Vec ic(n);
    for (std::size_t w = 0; w < n; ++w) ic[w] = gaps[w] * mu[w];
    sys.add_ge(ic, 0);
    sys.add_nonnegativity();
    for (std::size_t w = 0; w < n; ++w) sys.add_le(sys.unit(w), 1);
    return lp_solve(mu, sys, Sense::Maximize).value;
}

/// Calls f on every point of the n-simplex with common denominator `den`,
/// in lexicographic order of numerators.
inline void for_each_grid_point(std::size_t n, long den, const std::function<void(const Vec&)>& f) {
    std::vector<long> k(n, 0);
    std::function<void(std::size_t, long)> rec = [&](std::size_t pos, long left) {
        if (pos + 1 == n) {
            k[pos] = left;
            Vec x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = Rat(k[i], den);
            f(x);
            return;
        }
        for (long v = left; v >= 0; --v) {
            k[pos] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, den);
}

inline bool satisfies(const std::optional<PriorConstraint>& c, const Vec& mu) {
    if (!c) return true;
    for (std::size_t r = 0; r < c->A.size(); ++r)
        if (dot(c->A[r], mu) != c->b[r]) return false;
    return true;
}

/// Rationalizing priors with common denominator at most `limit`, plus the
/// extreme points of the identified set; optionally restricted by a
/// constraint. Sorted, without duplicates.
inline std::vector<Dist> grid_priors(const DecisionProblem& p, const Dist& alpha, long limit,
                                     const std::optional<PriorConstraint>& constraint = std::nullopt) {
    std::vector<Dist> out = identified_vertices(p, alpha, constraint);
    for (long den = 1; den <= limit; ++den)
        for_each_grid_point(p.num_states(), den, [&](const Vec& mu) {
            if (satisfies(constraint, mu) && rationalizes(p, mu, alpha).holds) out.push_back(mu);
        });
    std::sort(out.begin(), out.end(), detail::lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Fractions in [0,1] with denominator at most `limit`, ascending.
inline std::vector<Rat> farey(long limit) {
    std::vector<Rat> out;
    for (long q = 1; q <= limit; ++q)
        for (long p = 0; p <= q; ++p) out.emplace_back(p, q);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Distributions over k outcomes whose entries all lie in `values`.
inline std::vector<Vec> grid_rows(std::size_t k, const std::vector<Rat>& values) {
    std::vector<Vec> out;
    Vec row(k);
    std::function<void(std::size_t, const Rat&)> rec = [&](std::size_t pos, const Rat& left) {
        if (pos + 1 == k) {
            if (std::binary_search(values.begin(), values.end(), left)) {
                row[pos] = left;
                out.push_back(row);
            }
            return;
        }
        for (const auto& v : values) {
            if (v > left) break;
            row[pos] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, Rat(1));
    return out;
}

namespace detail {

/// Solves the square system M x = b exactly; nullopt when M is singular.
inline std::optional<Vec> solve_square(Matrix m, Vec b) {
    const std::size_t k = m.size();
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = c;
        while (p < k && m[p][c].is_zero()) ++p;
        if (p == k) return std::nullopt;
        std::swap(m[p], m[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c || m[r][c].is_zero()) continue;
            const Rat f = m[r][c] / m[c][c];
            for (std::size_t j = c; j < k; ++j) m[r][j] -= f * m[c][j];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t c = 0; c < k; ++c) b[c] /= m[c][c];
    return b;
}

/// Joint table j(a,w) = pi(a|w) mu(w) over the supports of the data and the
/// prior: row sums alpha, column sums mu, j >= 0, and every recommended
/// action optimal against its row. The table set is a polytope, so it is
/// nonempty iff it has a vertex; vertices are found by enumerating active
/// sets in the affine hull of the marginal constraints.
inline bool joint_table_exists(const DecisionProblem& p, const Dist& mu, const Dist& alpha) {
    const auto acts = support(alpha), sts = support(mu);
    const std::size_t ka = acts.size(), ks = sts.size(), nv = ka * ks;
    auto var = [&](std::size_t a, std::size_t w) { return a * ks + w; };
    Matrix eq;
    Vec rhs;
    for (std::size_t a = 0; a < ka; ++a) {
        Vec row(nv, Rat(0));
        for (std::size_t w = 0; w < ks; ++w) row[var(a, w)] = 1;
        eq.push_back(row);
        rhs.push_back(alpha[acts[a]]);
    }
    for (std::size_t w = 0; w < ks; ++w) {
        Vec row(nv, Rat(0));
        for (std::size_t a = 0; a < ka; ++a) row[var(a, w)] = 1;
        eq.push_back(row);
        rhs.push_back(mu[sts[w]]);
    }
    Matrix ge;
    for (std::size_t v = 0; v < nv; ++v) {
        Vec row(nv, Rat(0));
        row[v] = 1;
        ge.push_back(row);
    }
    for (std::size_t a = 0; a < ka; ++a)
        for (std::size_t b = 0; b < p.num_actions(); ++b) {
            if (b == acts[a]) continue;
            Vec row(nv, Rat(0));
            for (std::size_t w = 0; w < ks; ++w) row[var(a, w)] = p.u[acts[a]][sts[w]] - p.u[b][sts[w]];
            ge.push_back(row);
        }

    // x = x0 + N t; inequalities become G N t >= -G x0.
    const auto x0 = solve_particular(eq, rhs, nv);
    if (!x0) return false;
    const auto basis = null_basis(eq, nv);
    const std::size_t k = basis.size();
    Matrix rows;
    Vec bound;
    for (const auto& g : ge) {
        Vec r(k);
        for (std::size_t j = 0; j < k; ++j) r[j] = dot(g, basis[j]);
        rows.push_back(r);
        bound.push_back(-dot(g, *x0));
    }
    auto feasible = [&](const Vec& t) {
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (dot(rows[i], t) < bound[i]) return false;
        return true;
    };
    if (k == 0) return feasible({});
    bool found = false;
    detail::for_each_subset(rows.size(), k, [&](const std::vector<std::size_t>& idx) {
        if (found) return;
        Matrix m;
        Vec b;
        for (auto i : idx) {
            m.push_back(rows[i]);
            b.push_back(bound[i]);
        }
        auto t = solve_square(std::move(m), std::move(b));
        found = t && feasible(*t);
    });
    return found;
}

} // namespace detail

/// Searches direct signals (one message per action in the data's support).
/// First pass: kernels whose rows, in every possible state but one, have
/// entries with denominator at most `limit`, the remaining row pinned down
/// by the data; each state takes a turn as the pinned one. Second pass,
/// when the grid finds nothing: exact enumeration of the vertices of the
/// joint-table polytope, which settles boundary cases off the grid. True iff
/// some kernel reproduces the data with every recommendation obeyed.
inline bool brute_rationalizes(const DecisionProblem& p, const Dist& mu, const Dist& alpha, long limit) {
    const std::size_t na = p.num_actions(), ns = p.num_states();
    if (na > 4 || ns > 4 || limit > 8)
        throw LimitExceeded("brute_rationalizes: desk-scale guard (4 actions, 4 states, limit 8)");
    check_dist(mu, ns, "prior");
    check_dist(alpha, na, "action data");
    const auto supp = support(mu);
    const auto rows = grid_rows(na, farey(limit));

    Matrix joint(na, Vec(ns, Rat(0))); // joint[a][w] = pi(a|w) mu(w)
    Vec used(na, Rat(0));
    auto obeyed = [&]() {
        for (std::size_t a = 0; a < na; ++a) {
            if (alpha[a].is_zero()) continue;
            auto br = best_response(p, joint[a]);
            if (!std::binary_search(br.set.begin(), br.set.end(), a)) return false;
        }
        return true;
    };
    for (const std::size_t pinned : supp) {
        std::vector<std::size_t> free;
        for (auto w : supp)
            if (w != pinned) free.push_back(w);
        std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
            if (k == free.size()) {
                for (std::size_t a = 0; a < na; ++a) {
                    joint[a][pinned] = alpha[a] - used[a];
                    if (joint[a][pinned] < 0) return false;
                }
                return obeyed();
            }
            const std::size_t w = free[k];
            for (const auto& row : rows) {
                bool ok = true;
                for (std::size_t a = 0; a < na && ok; ++a) {
                    joint[a][w] = row[a] * mu[w];
                    ok = used[a] + joint[a][w] <= alpha[a];
                }
                if (!ok) continue;
                for (std::size_t a = 0; a < na; ++a) used[a] += joint[a][w];
                bool found = rec(k + 1);
                for (std::size_t a = 0; a < na; ++a) used[a] -= joint[a][w];
                if (found) return true;
            }
            return false;
        };
        for (auto& r : joint) std::fill(r.begin(), r.end(), Rat(0));
        if (rec(0)) return true;
    }
    return detail::joint_table_exists(p, mu, alpha);
}

struct VerifyOptions {
    long signal_denominator = 8;
    long prior_denominator = 12;
    std::size_t max_signals = 20000;
};

struct VerifyResult {
    bool passed = true;
    std::string counterexample;
    std::optional<Signal> better_signal;
    std::optional<Dist> worse_prior;
    std::size_t signals_checked = 0;
    std::size_t priors_checked = 0;
    std::string family;
};

/// Candidate signals for the sender-optimality check: every direct signal
/// whose kernel entries have denominator `den` (capped at `max_signals`),
/// every cutoff signal with z on that grid when there are two actions, and
/// every two-message signal on that grid when there are two states.
inline std::vector<Signal> candidate_signals(const DecisionProblem& p, long den, std::size_t max_signals) {
    std::vector<Signal> out;
    const std::size_t na = p.num_actions(), ns = p.num_states();
    if (na == 2) {
        if (auto view = [&]() -> std::optional<TwoActionView> {
                try {
                    return classify_states(p);
                } catch (const InvalidInput&) {
                    return std::nullopt;
                }
            }()) {
            for (std::size_t i = 0; i < ns; ++i)
                for (long k = 0; k <= den; ++k) out.push_back(cutoff_signal(*view, i, Rat(k, den)));
        }
    }
    if (ns == 2) {
        for (std::size_t a = 0; a < na; ++a)
            for (std::size_t b = a + 1; b < na; ++b)
                for (long x = 0; x <= den; ++x)
                    for (long y = 0; y <= den; ++y) {
                        Rat px(x, den), py(y, den);
                        out.push_back(Signal{{p.actions[a], p.actions[b]}, {{1 - px, px}, {1 - py, py}}});
                    }
    }
    std::vector<Vec> rows;
    for_each_grid_point(na, den, [&](const Vec& r) { rows.push_back(r); });
    std::vector<std::size_t> idx(ns, 0);
    for (;;) {
        if (out.size() >= max_signals) break;
        Signal s;
        s.messages = p.actions;
        for (std::size_t w = 0; w < ns; ++w) s.kernel.push_back(rows[idx[w]]);
        out.push_back(std::move(s));
        std::size_t w = 0;
        while (w < ns && ++idx[w] == rows.size()) idx[w++] = 0;
        if (w == ns) break;
    }
    return out;
}

/// Falsification check of a claimed saddle: the report's signal must be
/// optimal against the report's prior over the candidate signal family, and
/// the report's prior must be worst for the signal over grid priors and
/// extreme points of the (constrained) identified set.
inline VerifyResult verify_saddle(const DecisionProblem& p, const SaddleReport& report, const Dist& alpha,
                                  const std::optional<PriorConstraint>& constraint = std::nullopt,
                                  const VerifyOptions& opt = {}) {
    VerifyResult res;
    const Rat claimed = sender_value(p, report.signal, report.prior);
    if (claimed != report.value) {
        res.passed = false;
        res.counterexample = "reported value " + to_string(report.value) + " differs from the signal's value " +
                             to_string(claimed) + " at the reported prior";
        return res;
    }
    if (!satisfies(constraint, report.prior) || !rationalizes(p, report.prior, alpha).holds) {
        res.passed = false;
        res.counterexample = "reported prior does not rationalize the data";
        return res;
    }
    const auto signals = candidate_signals(p, opt.signal_denominator, opt.max_signals);
    for (const auto& s : signals) {
        ++res.signals_checked;
        Rat val = sender_value(p, s, report.prior);
        if (val > report.value) {
            res.passed = false;
            res.better_signal = s;
            res.counterexample = "a candidate signal earns " + to_string(val) + " > " + to_string(report.value) +
                                 " at the reported prior";
            break;
        }
    }
    if (res.passed) {
        for (const auto& mu : grid_priors(p, alpha, opt.prior_denominator, constraint)) {
            ++res.priors_checked;
            Rat val = sender_value(p, report.signal, mu);
            if (val < report.value) {
                res.passed = false;
                res.worse_prior = mu;
                res.counterexample = "prior (" + join(mu) + ") rationalizes the data but gives the signal only " +
                                     to_string(val) + " < " + to_string(report.value);
                break;
            }
        }
    }
    res.family = std::to_string(res.signals_checked) + " signals (grid denominator " +
                 std::to_string(opt.signal_denominator) + "), " + std::to_string(res.priors_checked) +
                 " priors (grid denominator up to " + std::to_string(opt.prior_denominator) + " plus extreme points)";
    return res;
}

} // namespace persuade
