#pragma once

// Blackwell experiments that reveal a linear image A mu of the prior, and the
// sender's problem when both the action data and an experiment outcome are
// observed. Two actions throughout; see two_action.hpp for the conventions.

#include "persuade/linalg.hpp"
#include "persuade/two_action.hpp"

#include <functional>

namespace persuade {

/// Column-stochastic matrix[outcome][state], plus an observed outcome
/// distribution when one is available.
struct Experiment {
    Matrix matrix;
    std::optional<Dist> outcome;

    std::size_t outcomes() const { return matrix.size(); }

    void validate(std::size_t states) const {
        if (matrix.empty()) throw InvalidInput("experiment: no outcomes");
        for (const auto& row : matrix)
            if (row.size() != states)
                throw InvalidInput("experiment: row has " + std::to_string(row.size()) + " entries for " +
                                   std::to_string(states) + " states");
        const Matrix cols = transpose(matrix);
        for (std::size_t w = 0; w < states; ++w) check_dist(cols[w], outcomes(), "experiment column " + std::to_string(w));
        if (outcome) check_dist(*outcome, outcomes(), "experiment outcome");
    }

    PriorConstraint constraint() const {
        if (!outcome) throw InvalidInput("experiment: no observed outcome");
        return {matrix, *outcome};
    }
};

struct Consistency {
    bool consistent = false;
    std::optional<Vec> particular; // some x with A x = beta, not necessarily a prior
};

inline Consistency consistent_outcome(const Matrix& A, const Vec& beta) {
    if (A.empty()) throw InvalidInput("experiment: no outcomes");
    if (beta.size() != A.size()) throw InvalidInput("experiment outcome: wrong length");
    auto x = solve_particular(A, beta, A.front().size());
    return {x.has_value(), x};
}

/// Null space of the experiment: directions along which priors cannot be told
/// apart. Every direction sums to zero because the columns do.
inline std::vector<Vec> null_directions(const Matrix& A) {
    auto basis = null_basis(A);
    for (const auto& d : basis)
        if (!sum(d).is_zero()) throw std::logic_error("null direction does not sum to zero");
    return basis;
}

/// Picks d or -d: mass on high states first, then gap-weighted mass on high
/// states, then the sign of the last nonzero entry in rank order.
inline Vec normalize_direction(const TwoActionView& view, const Vec& d) {
    const Vec r = view.to_ranked(d);
    if (std::all_of(r.begin(), r.end(), [](const Rat& x) { return x.is_zero(); }))
        throw InvalidInput("normalize_direction: zero vector");
    Rat mass = 0, weighted = 0;
    for (std::size_t k = view.low_count; k < r.size(); ++k) {
        mass += r[k];
        weighted += view.gap[k] * r[k];
    }
    bool flip;
    if (mass != 0)
        flip = mass < 0;
    else if (weighted != 0)
        flip = weighted < 0;
    else {
        std::size_t last = r.size();
        while (r[--last].is_zero()) {}
        flip = r[last] < 0;
    }
    return flip ? scaled(d, -1) : d;
}

/// Sum of d (optionally gap-weighted) over ranks >= r.
inline Rat tail(const TwoActionView& view, const Vec& d, std::size_t r, bool weighted) {
    Rat acc = 0;
    for (std::size_t k = r; k < view.states(); ++k) acc += (weighted ? view.gap[k] : Rat(1)) * d[view.order[k]];
    return acc;
}

/// First rank r in [0, low_count] at which the normalized direction has a
/// negative tail mass or negative gap-weighted tail mass; nullopt when none.
inline std::optional<std::size_t> definition_violation(const TwoActionView& view, const Vec& d) {
    const Vec n = normalize_direction(view, d);
    for (std::size_t r = 0; r <= view.low_count; ++r)
        if (tail(view, n, r, false) < 0 || tail(view, n, r, true) < 0) return r;
    return std::nullopt;
}

struct OrderReport {
    bool ordered = true;
    std::vector<Vec> basis;
    /// When not ordered: a rank r and null direction d whose tail mass and
    /// gap-weighted tail mass from r on have strictly opposite signs.
    std::optional<std::size_t> rank;
    std::optional<Vec> direction;
    bool mass_positive = false; // sign pattern of the violation
};

/// Decides orderedness by searching, for each rank r in [1, low_count], for a
/// null direction whose two tails from r have opposite signs (two LPs each,
/// normalized to margins of 1 so strictness needs no epsilon).
inline OrderReport is_ordered(const TwoActionView& view, const Matrix& A) {
    const std::size_t n = view.states();
    if (A.empty() || A.front().size() != n) throw InvalidInput("experiment: width must equal the number of states");
    OrderReport rep;
    rep.basis = null_directions(A);
    const std::size_t k = rep.basis.size();
    if (k == 0) return rep;
    for (std::size_t r = 1; r <= view.low_count; ++r) {
        Vec mass(k), weighted(k);
        for (std::size_t b = 0; b < k; ++b) {
            mass[b] = tail(view, rep.basis[b], r, false);
            weighted[b] = tail(view, rep.basis[b], r, true);
        }
        for (bool mass_positive : {true, false}) {
            LinearSystem sys(k);
            if (mass_positive) {
                sys.add_ge(mass, 1);
                sys.add_le(weighted, -1);
            } else {
                sys.add_ge(weighted, 1);
                sys.add_le(mass, -1);
            }
            auto out = lp_feasible_point(sys);
            if (!out.optimal()) continue;
            Vec d(n, Rat(0));
            for (std::size_t b = 0; b < k; ++b) d = d + scaled(rep.basis[b], out.optimizer[b]);
            rep.ordered = false;
            rep.rank = r;
            rep.direction = d;
            rep.mass_positive = mass_positive;
            return rep;
        }
    }
    return rep;
}

inline bool is_reliable(const TwoActionView& view, const Matrix& A) {
    if (view.states() < 3) throw PreconditionRefused("reliability characterization needs at least three states");
    return is_ordered(view, A).ordered;
}

struct SimpleReport {
    bool simple = false;
    std::vector<std::vector<std::size_t>> partition; // cells of states with identical columns
    Matrix reduced;                                  // one column per cell, [outcome][cell]
};

inline SimpleReport is_simple(const Matrix& A) {
    if (A.empty()) throw InvalidInput("experiment: no outcomes");
    const Matrix cols = transpose(A);
    SimpleReport rep;
    std::vector<Vec> distinct;
    for (std::size_t w = 0; w < cols.size(); ++w) {
        auto it = std::find(distinct.begin(), distinct.end(), cols[w]);
        if (it == distinct.end()) {
            distinct.push_back(cols[w]);
            rep.partition.push_back({w});
        } else {
            rep.partition[static_cast<std::size_t>(it - distinct.begin())].push_back(w);
        }
    }
    rep.reduced = transpose(distinct, A.size());
    rep.simple = rank(rep.reduced, distinct.size()) == distinct.size();
    return rep;
}

struct SimpleVerdict {
    bool reliable = false;
    std::string reason;
};

/// Reliability of a simple experiment read off its partition: reliable iff it
/// separates every low state, or pools exactly one low state with exactly
/// one high state and separates everything else.
inline SimpleVerdict simple_reliability(const TwoActionView& view, const Matrix& A) {
    auto s = is_simple(A);
    if (!s.simple) throw PreconditionRefused("experiment is not simple: its distinct columns are linearly dependent");
    const auto& labels = view.problem.states;
    auto low = [&](std::size_t w) { return view.is_low(view.rank_of[w]); };
    bool lows_separated = true;
    std::size_t pooled = 0;
    std::optional<std::vector<std::size_t>> pair;
    for (const auto& cell : s.partition) {
        if (cell.size() == 1) continue;
        ++pooled;
        for (auto w : cell) lows_separated = lows_separated && !low(w);
        if (cell.size() == 2 && low(cell[0]) != low(cell[1])) pair = cell;
    }
    if (lows_separated) return {true, "separates every low state"};
    if (pooled == 1 && pair)
        return {true, "pools low/high pair {" + labels[(*pair)[0]] + ", " + labels[(*pair)[1]] +
                          "} and separates every other state"};
    return {false, "pools a low state with other states beyond a single low/high pair"};
}

/// Minimizes the known-prior value over the priors consistent with both the
/// action data and the experiment outcome. The value is linear on each
/// piece where the cutoff rank is fixed, so each piece is one LP; the
/// ineligible piece is worth 1.
struct ExperimenterSolution {
    SaddleReport report;
    CutoffParams params;
};

inline ExperimenterSolution solve_experimenter(const TwoActionView& view, const Rat& alpha, const Experiment& exp) {
    const std::size_t n = view.states();
    exp.validate(n);
    if (!exp.outcome) throw InvalidInput("experimenter: no observed outcome");
    auto ord = is_ordered(view, exp.matrix);
    if (!ord.ordered)
        throw PreconditionRefused("experiment is not ordered: some data set leaves every signal short of the data "
                                  "value, so no robust solution of this form exists");
    if (!consistent_outcome(exp.matrix, *exp.outcome).consistent)
        throw Infeasible("experiment outcome is inconsistent with the experiment");
    const IdentifiedSet id = identified_set(view.problem, action_data(view, alpha), exp.constraint());
    if (!lp_feasible_point(id.lifted).optimal())
        throw Infeasible("no prior rationalizes the action data and the experiment outcome");

    // Tail sum over ranks >= from with per-rank coefficients, as a lifted row.
    auto tail_row = [&](std::size_t from, const std::function<Rat(std::size_t)>& coef) {
        Vec row(n, Rat(0));
        for (std::size_t k = from; k < n; ++k) row[view.order[k]] = coef(k);
        return id.pull_back(row);
    };
    auto gap = [&](std::size_t k) { return view.gap[k]; };

    std::optional<Rat> best;
    Vec best_point;
    std::string piece;
    {
        LinearSystem sys = id.lifted;
        sys.add_ge(tail_row(0, gap), 0);
        auto out = lp_feasible_point(sys);
        if (out.optimal()) {
            best = 1;
            best_point = out.optimizer;
            piece = "ineligible";
        }
    }
    for (std::size_t i = 0; i < view.low_count; ++i) {
        LinearSystem sys = id.lifted;
        sys.add_le(tail_row(i, gap), 0);
        sys.add_ge(tail_row(i + 1, gap), 0);
        const Rat scale = -view.gap[i];
        auto out = lp_solve(tail_row(i + 1, [&](std::size_t k) { return 1 + view.gap[k] / scale; }), sys, Sense::Minimize);
        if (!out.optimal()) continue;
        if (!best || out.value < *best) {
            best = out.value;
            best_point = out.optimizer;
            piece = "cutoff rank " + std::to_string(i);
        }
    }
    ExperimenterSolution sol;
    const Dist mu = id.prior_of(best_point);
    sol.params = cutoff_params(view, mu);
    if (sol.params.Pi != *best) throw std::logic_error("solve_experimenter: piecewise value disagrees with the prior's value");
    sol.report.prior = mu;
    sol.report.signal = cutoff_signal(view, sol.params.i, sol.params.z);
    sol.report.value = *best;
    sol.report.notes = "minimum of the known-prior value over the identified set, attained on the " + piece + " piece";
    return sol;
}

/// Default mixing weight: the midpoint between the smallest admissible weight
/// and 1.
inline Rat default_lambda(const TwoActionView& view, std::size_t i) {
    const std::size_t n = view.states();
    Rat above = 0;
    for (std::size_t j = i + 1; j < n; ++j) above += view.gap[j];
    if (above > 0) return 0;
    const Rat top = Rat(static_cast<long>(n - 1)) * view.gap[n - 1];
    const Rat least = -above / (top - above);
    return (1 + least) / 2;
}

/// Fully supported prior whose optimal cutoff is (i, z), i a low rank and
/// z in (0,1). With `alpha`, the prior is additionally mixed toward a point
/// with a zero gap or toward a two-point prior on the extreme ranks so its
/// known-prior value equals alpha. Returned in state order.
inline Dist full_support_prior(const TwoActionView& view, std::size_t i, const Rat& z,
                               const std::optional<Rat>& alpha = std::nullopt,
                               const std::optional<Rat>& lambda_in = std::nullopt) {
    const std::size_t n = view.states();
    if (n < 3) throw PreconditionRefused("full_support_prior needs at least three states");
    if (!view.is_low(i)) throw PreconditionRefused("full_support_prior: cutoff rank must be a low state");
    if (!(z > 0 && z < 1)) throw PreconditionRefused("full_support_prior: z must lie strictly between 0 and 1");
    const Rat lambda = lambda_in ? *lambda_in : default_lambda(view, i);
    Rat above = 0;
    for (std::size_t j = i + 1; j < n; ++j) above += view.gap[j];
    const Rat nm1(static_cast<long>(n - 1));
    const Rat mix = (1 - lambda) * above + lambda * nm1 * view.gap[n - 1];
    if (lambda < 0 || lambda >= 1 || !(mix > 0))
        throw PreconditionRefused("full_support_prior: mixing weight " + to_string(lambda) + " is not admissible");
    const Rat kappa = mix / -view.gap[i];
    const Rat x = z / (nm1 * z + kappa);
    Vec m(n, (1 - lambda) * x);
    m[i] = 1 - nm1 * x;
    m[n - 1] = (1 - lambda) * x + lambda * nm1 * x;
    if (!alpha) return view.from_ranked(m);

    const Rat a = *alpha;
    if (!(a > 0 && a < 1)) throw PreconditionRefused("action frequency must lie strictly between 0 and 1");
    const Rat pi = cutoff_params(view, view.from_ranked(m)).Pi;
    if (pi == a) return view.from_ranked(m);
    if (pi < a) {
        std::optional<std::size_t> zero_rank;
        for (std::size_t r = 0; r < n; ++r)
            if (view.gap[r].is_zero()) zero_rank = r;
        if (!zero_rank) throw PreconditionRefused("raising the value needs a state leaving the receiver indifferent");
        // Mass moved to the indifference state raises the value linearly.
        Vec nu = scaled(m, (1 - a) / (1 - pi));
        nu[*zero_rank] += (a - pi) / (1 - pi);
        return view.from_ranked(nu);
    }
    if (i > 0) {
        // Mass moved to the lowest state lowers the value linearly while
        // leaving the cutoff untouched.
        Vec nu = scaled(m, a / pi);
        nu[0] += (pi - a) / pi;
        return view.from_ranked(nu);
    }
    // Cutoff at the lowest rank: the value on this piece is bounded below by
    // that of the two-point prior on the extreme ranks with the same cutoff.
    const Rat g1 = -view.gap[0], gn = view.gap[n - 1];
    Vec eta(n, Rat(0));
    eta[0] = gn / (gn + z * g1);
    eta[n - 1] = z * g1 / (gn + z * g1);
    const Rat floor = z * (g1 + gn) / (gn + z * g1);
    if (a <= floor)
        throw PreconditionRefused("no fully supported prior has cutoff (lowest state, " + to_string(z) +
                                  ") and value " + to_string(a) + ": every such prior has value above " + to_string(floor));
    const Rat theta = (a - floor) / (pi - floor);
    return view.from_ranked(scaled(m, theta) + scaled(eta, 1 - theta));
}

inline bool sequential_reliable(const TwoActionView& view, const Matrix& A, const Rat& alpha) {
    if (view.states() < 3) throw PreconditionRefused("sequential reliability needs at least three states");
    if (!(alpha > 0 && alpha < 1)) throw PreconditionRefused("sequential reliability needs interior action data");
    bool zero = false;
    for (const auto& g : view.gap) zero = zero || g.is_zero();
    if (!zero) throw PreconditionRefused("sequential reliability needs a state leaving the receiver indifferent");
    return is_ordered(view, A).ordered;
}

/// Data under which an unordered experiment leaves every signal short of the
/// data value: a fully supported prior mu whose optimal cutoff straddles the
/// offending direction, alpha = its value, beta = A mu.
struct AdverseData {
    std::size_t cut = 0;
    Rat z;
    Dist prior;
    Rat alpha;
    Dist outcome;
    Vec direction; // oriented so its tail mass is negative and its gap tail positive
};

inline AdverseData adverse_data(const TwoActionView& view, const Matrix& A,
                                const std::optional<Rat>& fixed_alpha = std::nullopt) {
    auto ord = is_ordered(view, A);
    if (ord.ordered) throw PreconditionRefused("experiment is ordered: no adverse data exist");
    AdverseData out;
    out.direction = ord.mass_positive ? scaled(*ord.direction, -1) : *ord.direction;
    const std::size_t r = *ord.rank;
    out.cut = view.is_low(r) ? r : r - 1;
    // Need z in (0,1) with z d_c + S < 0 < z gap_c d_c + T, S and T the tails
    // strictly above the cut.
    const Rat dc = out.direction[view.order[out.cut]];
    const Rat S = tail(view, out.direction, out.cut + 1, false), T = tail(view, out.direction, out.cut + 1, true);
    Rat lo = 0, hi = 1;
    auto restrict = [&](const Rat& slope, const Rat& offset, bool want_negative) {
        // slope z + offset < 0 (or > 0)
        const Rat s = want_negative ? slope : -slope, o = want_negative ? offset : -offset;
        if (s.is_zero()) {
            if (!(o < 0)) hi = lo;
        } else if (s > 0) {
            hi = std::min(hi, -o / s);
        } else {
            lo = std::max(lo, -o / s);
        }
    };
    restrict(dc, S, true);
    restrict(view.gap[out.cut] * dc, T, false);
    if (!(lo < hi)) throw std::logic_error("adverse_data: no cutoff weight separates the direction");
    out.z = (lo + hi) / 2;
    out.prior = full_support_prior(view, out.cut, out.z, fixed_alpha);
    out.alpha = cutoff_params(view, out.prior).Pi;
    out.outcome = mat_vec(A, out.prior);
    return out;
}

} // namespace persuade
