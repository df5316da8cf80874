#pragma once

#include "persuade/lp.hpp"
#include "persuade/model.hpp"
#include "persuade/polyhedron.hpp"

namespace persuade {

/// Outcome of a dominance or redundancy test. `mixture` is a distribution
/// over actions certifying the property when `holds`.
struct MixtureTest {
    bool holds = false;
    std::optional<Dist> mixture;
};

/// Some mixture of actions pays strictly more than `a` in every state.
inline MixtureTest is_dominated(const DecisionProblem& p, std::size_t a) {
    const std::size_t na = p.num_actions();
    LinearSystem sys(na);
    std::vector<bool> strict;
    for (std::size_t w = 0; w < p.num_states(); ++w) {
        Vec row(na);
        for (std::size_t b = 0; b < na; ++b) row[b] = p.u[b][w];
        sys.add_ge(std::move(row), p.u[a][w]);
        strict.push_back(true);
    }
    sys.add_eq(Vec(na, Rat(1)), 1);
    for (std::size_t b = 0; b < na; ++b) {
        sys.add_ge(sys.unit(b), 0);
        strict.push_back(false);
    }
    auto r = strict_feasible(sys, strict);
    if (!r.feasible) return {};
    return {true, r.point};
}

/// Some mixture other than the pure action pays at least as much as `a` in
/// every state.
inline MixtureTest is_redundant(const DecisionProblem& p, std::size_t a) {
    const std::size_t na = p.num_actions();
    LinearSystem sys(na);
    for (std::size_t w = 0; w < p.num_states(); ++w) {
        Vec row(na);
        for (std::size_t b = 0; b < na; ++b) row[b] = p.u[b][w];
        sys.add_ge(std::move(row), p.u[a][w]);
    }
    sys.add_eq(Vec(na, Rat(1)), 1);
    sys.add_nonnegativity();
    Vec others(na, Rat(1));
    others[a] = 0;
    auto out = lp_solve(others, sys, Sense::Maximize);
    if (!out.optimal() || out.value <= 0) return {};
    return {true, out.optimizer};
}

/// Beliefs at which `action` is receiver-optimal, as an H-representation
/// over the states: the simplex plus one comparison row per other action.
struct NormalCone {
    std::size_t action = 0;
    LinearSystem region;
    bool empty = false;
    std::optional<std::vector<Vec>> vertices;
};

inline LinearSystem simplex_system(std::size_t n) {
    LinearSystem s(n);
    s.add_eq(Vec(n, Rat(1)), 1);
    s.add_nonnegativity();
    return s;
}

inline NormalCone normal_cone(const DecisionProblem& p, std::size_t a, bool with_vertices = false) {
    NormalCone c;
    c.action = a;
    c.region = simplex_system(p.num_states());
    for (std::size_t b = 0; b < p.num_actions(); ++b)
        if (b != a) c.region.add_ge(p.u[a] - p.u[b], 0);
    c.empty = !lp_feasible_point(c.region).optimal();
    if (with_vertices) c.vertices = c.empty ? std::vector<Vec>{} : persuade::vertices(c.region);
    return c;
}

/// Linear restriction A mu = b on priors (e.g. from an observed experiment).
struct PriorConstraint {
    Matrix A;
    Vec b;
};

/// Lifted description of the priors rationalizing `alpha`. Variables are the
/// beliefs n(.|a), one block per action in the support of the data; each lies
/// in the normal cone of its action, and the prior is mu = sum_a alpha(a) n(.|a).
struct IdentifiedSet {
    std::vector<std::size_t> support;
    std::size_t states = 0;
    Matrix to_prior; // states x lifted variables
    LinearSystem lifted;

    /// A row over the prior coordinates rewritten over the lifted variables.
    Vec pull_back(const Vec& prior_row) const {
        if (prior_row.size() != states) throw InvalidInput("identified set: row width mismatch");
        Vec out(lifted.vars, Rat(0));
        for (std::size_t w = 0; w < states; ++w)
            if (!prior_row[w].is_zero())
                for (std::size_t j = 0; j < lifted.vars; ++j) out[j] += prior_row[w] * to_prior[w][j];
        return out;
    }
    Dist prior_of(const Vec& y) const { return mat_vec(to_prior, y); }
};

inline IdentifiedSet identified_set(const DecisionProblem& p, const Dist& alpha,
                                    const std::optional<PriorConstraint>& constraint = std::nullopt) {
    check_dist(alpha, p.num_actions(), "action data");
    IdentifiedSet id;
    id.states = p.num_states();
    id.support = support(alpha);
    const std::size_t n = id.states, k = id.support.size();
    id.lifted = LinearSystem(n * k);
    id.to_prior.assign(n, Vec(n * k, Rat(0)));
    auto block = [&](std::size_t j, const Vec& row) {
        Vec out(id.lifted.vars, Rat(0));
        for (std::size_t w = 0; w < n; ++w) out[j * n + w] = row[w];
        return out;
    };
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t a = id.support[j];
        id.lifted.add_eq(block(j, Vec(n, Rat(1))), 1);
        for (std::size_t b = 0; b < p.num_actions(); ++b)
            if (b != a) id.lifted.add_ge(block(j, p.u[a] - p.u[b]), 0);
        for (std::size_t w = 0; w < n; ++w) id.to_prior[w][j * n + w] = alpha[a];
    }
    id.lifted.add_nonnegativity();
    if (constraint) {
        if (constraint->A.size() != constraint->b.size()) throw InvalidInput("prior constraint: row count mismatch");
        for (std::size_t r = 0; r < constraint->A.size(); ++r)
            id.lifted.add_eq(id.pull_back(constraint->A[r]), constraint->b[r]);
    }
    return id;
}

/// Per-action beliefs n(.|a), one for each action in the support of the data,
/// averaging (under the data) to the prior.
struct SelectionWitness {
    std::vector<std::size_t> actions;
    Matrix beliefs;
};

struct Rationalization {
    bool holds = false;
    std::optional<SelectionWitness> witness;
    std::string reason;
};

inline Rationalization rationalizes(const DecisionProblem& p, const Dist& mu, const Dist& alpha) {
    check_dist(mu, p.num_states(), "prior");
    check_dist(alpha, p.num_actions(), "action data");
    for (auto a : support(alpha))
        if (is_dominated(p, a).holds)
            return {false, std::nullopt, "action '" + p.actions[a] + "' is dominated and cannot be observed"};
    IdentifiedSet id = identified_set(p, alpha);
    for (std::size_t w = 0; w < id.states; ++w) id.lifted.add_eq(id.to_prior[w], mu[w]);
    auto out = lp_feasible_point(id.lifted);
    if (!out.optimal()) return {false, std::nullopt, "no selection of beliefs averages to the prior"};
    SelectionWitness sw;
    sw.actions = id.support;
    for (std::size_t j = 0; j < id.support.size(); ++j) {
        auto first = out.optimizer.begin() + static_cast<std::ptrdiff_t>(j * id.states);
        sw.beliefs.emplace_back(first, first + static_cast<std::ptrdiff_t>(id.states));
    }
    return {true, std::move(sw), ""};
}

/// Direct signal recommending a with probability alpha(a) n(w|a) / mu(w).
/// States outside the support of mu send the first message.
inline Signal witness_signal(const DecisionProblem& p, const Dist& mu, const Dist& alpha, const SelectionWitness& w) {
    check_dist(mu, p.num_states(), "prior");
    check_dist(alpha, p.num_actions(), "action data");
    const std::size_t n = p.num_states();
    if (w.actions != support(alpha) || w.beliefs.size() != w.actions.size())
        throw InvalidInput("witness: actions do not match the support of the data");
    Vec total(n, Rat(0));
    for (std::size_t j = 0; j < w.actions.size(); ++j) {
        const std::size_t a = w.actions[j];
        check_dist(w.beliefs[j], n, "witness belief");
        const auto br = best_response(p, w.beliefs[j]);
        if (!std::binary_search(br.set.begin(), br.set.end(), a))
            throw InvalidInput("witness: action '" + p.actions[a] + "' is not optimal at its belief");
        total = total + scaled(w.beliefs[j], alpha[a]);
    }
    if (total != mu) throw InvalidInput("witness: beliefs do not average to the prior");

    Signal sig;
    for (auto a : w.actions) sig.messages.push_back(p.actions[a]);
    sig.kernel.assign(n, Vec(w.actions.size(), Rat(0)));
    for (std::size_t s = 0; s < n; ++s) {
        if (mu[s].is_zero()) {
            sig.kernel[s][0] = 1;
            continue;
        }
        for (std::size_t j = 0; j < w.actions.size(); ++j)
            sig.kernel[s][j] = alpha[w.actions[j]] * w.beliefs[j][s] / mu[s];
    }
    return sig;
}

/// Direct labels, every sent recommendation optimal at its own posterior,
/// and recommendation frequencies exactly equal to the data.
inline bool straightforward_check(const DecisionProblem& p, const Dist& mu, const Signal& sig, const Dist& alpha) {
    check_dist(mu, p.num_states(), "prior");
    check_dist(alpha, p.num_actions(), "action data");
    sig.validate(p.num_states());
    if (!sig.is_direct(p)) return false;
    Dist freq(p.num_actions(), Rat(0));
    for (std::size_t s = 0; s < sig.num_messages(); ++s) {
        const std::size_t a = *p.action_index(sig.messages[s]);
        Vec joint = joint_weights(sig, mu, s);
        Rat prob = sum(joint);
        if (prob.is_zero()) continue;
        auto br = best_response(p, joint);
        if (!std::binary_search(br.set.begin(), br.set.end(), a)) return false;
        freq[a] += prob;
    }
    return freq == alpha;
}

/// Extreme points of the identified set, optionally intersected with a
/// constraint. Unconstrained, the set is the Minkowski sum of the scaled
/// normal cones, so candidates are sums of cone vertices. Constrained, every
/// extreme point is the image of a vertex of the lifted polytope.
inline std::vector<Vec> identified_vertices(const DecisionProblem& p, const Dist& alpha,
                                            const std::optional<PriorConstraint>& constraint = std::nullopt) {
    check_dist(alpha, p.num_actions(), "action data");
    if (constraint) {
        IdentifiedSet id = identified_set(p, alpha, constraint);
        VertexOptions opt;
        opt.max_vars = 30;
        std::vector<Vec> pts;
        for (const auto& y : vertices(id.lifted, opt)) pts.push_back(id.prior_of(y));
        return extreme_points(std::move(pts));
    }
    std::vector<Vec> acc{Vec(p.num_states(), Rat(0))};
    for (auto a : support(alpha)) {
        auto cone = normal_cone(p, a, true);
        if (cone.empty) return {};
        std::vector<Vec> next;
        for (const auto& base : acc)
            for (const auto& v : *cone.vertices) next.push_back(base + scaled(v, alpha[a]));
        acc = extreme_points(std::move(next));
    }
    return acc;
}

} // namespace persuade
