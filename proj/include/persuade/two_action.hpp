#pragma once

#include "persuade/identification.hpp"
#include "persuade/lp.hpp"
#include "persuade/model.hpp"

#include <numeric>

namespace persuade {

/// Two-action problem seen through the payoff gap
/// gap(w) = u(high action|w) - u(low action|w), where the high action is the
/// one the sender prefers. States are ranked by ascending gap; ranks are
/// 0-based and every public function takes and returns vectors in the
/// problem's own state order.
struct TwoActionView {
    DecisionProblem problem;
    std::size_t zero = 0, one = 1;    // sender's disfavored / favored action
    Vec gap;                          // by rank, strictly increasing
    std::vector<std::size_t> order;   // rank -> state index
    std::vector<std::size_t> rank_of; // state index -> rank
    std::size_t low_count = 0;        // ranks [0, low_count) have negative gap

    std::size_t states() const { return gap.size(); }
    bool is_low(std::size_t r) const { return r < low_count; }

    /// Indifference weight on high rank j against low rank i.
    Rat c(std::size_t i, std::size_t j) const {
        if (!is_low(i) || is_low(j)) throw InvalidInput("c: needs a low rank and a high rank");
        return -gap[i] / (-gap[i] + gap[j]);
    }

    Vec to_ranked(const Vec& x) const {
        if (x.size() != states()) throw InvalidInput("two-action view: vector has wrong length");
        Vec out(x.size());
        for (std::size_t r = 0; r < x.size(); ++r) out[r] = x[order[r]];
        return out;
    }
    Vec from_ranked(const Vec& x) const {
        if (x.size() != states()) throw InvalidInput("two-action view: vector has wrong length");
        Vec out(x.size());
        for (std::size_t r = 0; r < x.size(); ++r) out[order[r]] = x[r];
        return out;
    }
    /// Payoff gap in the problem's own state order.
    Vec gap_by_state() const { return from_ranked(gap); }
};

inline TwoActionView classify_states(const DecisionProblem& p) {
    if (p.num_actions() != 2) throw InvalidInput("two-action view needs exactly two actions");
    TwoActionView view;
    view.problem = p;
    view.one = p.v[1] > p.v[0] ? 1 : 0;
    view.zero = 1 - view.one;
    const std::size_t n = p.num_states();
    Vec raw(n);
    for (std::size_t w = 0; w < n; ++w) raw[w] = p.u[view.one][w] - p.u[view.zero][w];
    view.order.resize(n);
    std::iota(view.order.begin(), view.order.end(), std::size_t{0});
    std::stable_sort(view.order.begin(), view.order.end(), [&](auto a, auto b) { return raw[a] < raw[b]; });
    view.rank_of.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        view.gap.push_back(raw[view.order[r]]);
        view.rank_of[view.order[r]] = r;
        if (r > 0 && view.gap[r] == view.gap[r - 1])
            throw InvalidInput("payoff gap not injective: states '" + p.states[view.order[r - 1]] + "' and '" +
                               p.states[view.order[r]] + "' share gap " + to_string(view.gap[r]));
    }
    if (!(view.gap.front() < 0)) throw InvalidInput("no state favors the sender's disfavored action: the favored action is redundant");
    if (!(view.gap.back() > 0)) throw InvalidInput("no state favors the sender's favored action: the disfavored action is redundant");
    while (view.gap[view.low_count] < 0) ++view.low_count;
    return view;
}

/// Two-message signal: ranks below `i` send the low message, ranks above
/// send the high message, rank `i` sends the high message with probability z.
/// Messages carry the action labels, low first.
inline Signal cutoff_signal(const TwoActionView& view, std::size_t i, const Rat& z) {
    if (i >= view.states()) throw InvalidInput("cutoff_signal: rank out of range");
    if (z < 0 || z > 1) throw InvalidInput("cutoff_signal: z must lie in [0,1]");
    Signal s;
    s.messages = {view.problem.actions[view.zero], view.problem.actions[view.one]};
    s.kernel.assign(view.states(), Vec(2, Rat(0)));
    for (std::size_t r = 0; r < view.states(); ++r) {
        Vec& row = s.kernel[view.order[r]];
        if (r < i)
            row = {Rat(1), Rat(0)};
        else if (r > i)
            row = {Rat(0), Rat(1)};
        else
            row = {1 - z, z};
    }
    return s;
}

/// Parameters of the known-prior optimal cutoff signal and its value.
/// Ineligible priors (gap . mu >= 0) carry (0, 1, 1).
struct CutoffParams {
    std::size_t i = 0; // rank
    Rat z = 1;
    Rat Pi = 1;
    bool eligible = false;
};

inline CutoffParams cutoff_params(const TwoActionView& view, const Dist& mu) {
    check_dist(mu, view.states(), "prior");
    const Vec m = view.to_ranked(mu);
    const std::size_t n = view.states();
    // tail[i] = sum_{j >= i} gap_j m_j
    Vec tail(n + 1, Rat(0));
    for (std::size_t j = n; j-- > 0;) tail[j] = tail[j + 1] + view.gap[j] * m[j];
    CutoffParams cp;
    if (tail[0] >= 0) return cp;
    cp.eligible = true;
    std::size_t i = 0;
    for (std::size_t j = n; j-- > 0;)
        if (tail[j] < 0) {
            i = j;
            break;
        }
    cp.i = i;
    const Rat scale = -view.gap[i];
    cp.z = tail[i + 1] / (scale * m[i]);
    cp.Pi = 0;
    for (std::size_t j = i + 1; j < n; ++j) cp.Pi += (1 + view.gap[j] / scale) * m[j];
    return cp;
}

struct KnownPriorOptimum {
    Signal signal;
    Rat value;
    CutoffParams params;
};

inline KnownPriorOptimum known_prior_optimum(const TwoActionView& view, const Dist& mu) {
    auto cp = cutoff_params(view, mu);
    return {cutoff_signal(view, cp.i, cp.z), cp.Pi, cp};
}

/// Messages after which the receiver (with sender-favored ties) takes each
/// action sum to the direct signal's recommendation probabilities, in every
/// state the prior deems possible.
inline bool is_equivalent(const TwoActionView& view, const Signal& sig, const Signal& direct, const Dist& mu) {
    const auto& p = view.problem;
    check_dist(mu, p.num_states(), "prior");
    sig.validate(p.num_states());
    direct.validate(p.num_states());
    if (!direct.is_direct(p)) throw InvalidInput("is_equivalent: second signal must be direct");
    const auto acts = message_actions(p, sig, mu);
    for (auto w : support(mu)) {
        for (std::size_t a = 0; a < p.num_actions(); ++a) {
            Rat lhs = 0;
            for (std::size_t s = 0; s < sig.num_messages(); ++s)
                if (acts[s] && *acts[s] == a) lhs += sig.kernel[w][s];
            auto d = direct.message_index(p.actions[a]);
            Rat rhs = d ? direct.kernel[w][*d] : Rat(0);
            if (lhs != rhs) return false;
        }
    }
    return true;
}

inline Dist action_data(const TwoActionView& view, const Rat& alpha) {
    if (alpha < 0 || alpha > 1) throw InvalidInput("action frequency must lie in [0,1]");
    Dist d(2);
    d[view.one] = alpha;
    d[view.zero] = 1 - alpha;
    return d;
}

/// Worst case of a fixed signal over the identified set.
struct GuaranteeResult {
    Rat value;
    bool attained = false;
    Dist witness; // minimizer when attained, otherwise a limit point
    std::vector<std::string> pattern; // messages answered with the favored action
    std::size_t regions = 0;          // nonempty assignment regions examined
};

struct GuaranteeOptions {
    std::size_t max_messages = 12;
};

/// Infimum of the sender's payoff over the priors rationalizing `alpha`
/// (optionally restricted by a constraint). The prior space splits into
/// regions by which messages the receiver answers with the favored action;
/// on each region the payoff is linear, so each region contributes one LP
/// over its closure, after a strict-feasibility check that it is nonempty.
inline GuaranteeResult guarantee(const TwoActionView& view, const Signal& signal, const Rat& alpha,
                                 const std::optional<PriorConstraint>& constraint = std::nullopt,
                                 const GuaranteeOptions& opt = {}) {
    const auto& p = view.problem;
    signal.validate(p.num_states());
    const Signal sig = signal.pruned();
    const std::size_t m = sig.num_messages(), n = p.num_states();
    if (m > opt.max_messages)
        throw LimitExceeded("guarantee: " + std::to_string(m) + " messages exceeds the limit of " +
                            std::to_string(opt.max_messages));
    const IdentifiedSet id = identified_set(p, action_data(view, alpha), constraint);
    if (!lp_feasible_point(id.lifted).optimal()) throw Infeasible("guarantee: the identified set is empty");

    const Vec gaps = view.gap_by_state();
    std::vector<Vec> ic(m), mass(m);
    for (std::size_t s = 0; s < m; ++s) {
        Vec icrow(n), prob(n);
        for (std::size_t w = 0; w < n; ++w) {
            icrow[w] = gaps[w] * sig.kernel[w][s];
            prob[w] = sig.kernel[w][s];
        }
        ic[s] = id.pull_back(icrow);
        mass[s] = id.pull_back(prob);
    }

    struct Region {
        std::size_t mask;
        LinearSystem sys;
        std::vector<bool> strict;
        Vec objective;
        Rat value;
        Vec argmin;
    };
    std::vector<Region> regions;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        Region r{mask, id.lifted, std::vector<bool>(id.lifted.ge.size(), false), Vec(id.lifted.vars, Rat(0)), {}, {}};
        for (std::size_t s = 0; s < m; ++s) {
            if (mask >> s & 1) {
                r.sys.add_ge(ic[s], 0);
                r.strict.push_back(false);
                r.objective = r.objective + mass[s];
            } else {
                r.sys.add_ge(scaled(ic[s], -1), 0);
                r.strict.push_back(true);
            }
        }
        if (!strict_feasible(r.sys, r.strict).feasible) continue;
        auto out = lp_solve(r.objective, r.sys, Sense::Minimize);
        r.value = out.value;
        r.argmin = out.optimizer;
        regions.push_back(std::move(r));
    }

    GuaranteeResult g;
    g.regions = regions.size();
    const Region* best = nullptr;
    for (const auto& r : regions)
        if (!best || r.value < best->value) best = &r;
    g.value = best->value;
    g.witness = id.prior_of(best->argmin);
    for (std::size_t s = 0; s < m; ++s)
        if (best->mask >> s & 1) g.pattern.push_back(sig.messages[s]);

    for (const auto& r : regions) {
        if (r.value != g.value) continue;
        LinearSystem face = r.sys;
        auto strict = r.strict;
        face.add_le(r.objective, g.value);
        strict.push_back(false);
        auto sf = strict_feasible(face, strict);
        if (!sf.feasible) continue;
        g.attained = true;
        g.witness = id.prior_of(*sf.point);
        g.pattern.clear();
        for (std::size_t s = 0; s < m; ++s)
            if (r.mask >> s & 1) g.pattern.push_back(sig.messages[s]);
        break;
    }
    return g;
}

/// Certificate that no saddle exists for interior data (at least three
/// states), or the trivial saddle for data in {0, 1}.
struct NoSaddleWitness {
    std::optional<SaddleReport> trivial_saddle;

    /// Single low state: priors mu(lambda) on the three lowest ranks, all with
    /// known-prior value alpha, whose optimal cutoff weight z(mu(lambda))
    /// differs for every lambda.
    bool single_low = false;
    Rat c12, c13;
    std::vector<std::pair<Rat, Dist>> family; // (lambda, prior) samples
    std::vector<Rat> family_z;

    /// Several low states: two priors with known-prior value alpha whose
    /// optimal signals disagree on whether the lowest and highest states
    /// share a favored-action message.
    std::optional<Dist> mu, nu;
    std::optional<CutoffParams> mu_params, nu_params;

    std::string certificate;
};

/// Member of the single-low-state family (ranks 0, 1, 2), in state order.
inline Dist low_family_prior(const TwoActionView& view, const Rat& alpha, const Rat& lambda) {
    const Rat c12 = view.c(0, 1), c13 = view.c(0, 2);
    Vec m(view.states(), Rat(0));
    m[1] = lambda * c12 * alpha;
    m[2] = (1 - lambda) * c13 * alpha;
    m[0] = 1 - m[1] - m[2];
    return view.from_ranked(m);
}

inline NoSaddleWitness no_saddle_witness(const TwoActionView& view, const Rat& alpha) {
    const std::size_t n = view.states();
    if (alpha < 0 || alpha > 1) throw InvalidInput("action frequency must lie in [0,1]");
    NoSaddleWitness w;
    if (alpha == 0 || alpha == 1) {
        // alpha = 0: the lowest state alone rationalizes the data and the
        // all-low cutoff is optimal there. alpha = 1: every rationalizing
        // prior is ineligible and pooling on the favored action is optimal.
        Vec m(n, Rat(0));
        m[alpha == 0 ? 0 : n - 1] = 1;
        Dist prior = view.from_ranked(m);
        auto opt = known_prior_optimum(view, prior);
        SaddleReport r;
        r.prior = prior;
        r.signal = opt.signal.pruned();
        r.value = opt.value;
        r.notes = alpha == 0 ? "favored action never observed" : "favored action always observed";
        w.trivial_saddle = r;
        w.certificate = "saddle exists for data at the boundary";
        return w;
    }
    if (n < 3) throw PreconditionRefused("no-saddle construction needs at least three states");

    auto check = [&](const Dist& prior) {
        auto cp = cutoff_params(view, prior);
        if (cp.Pi != alpha) throw std::logic_error("no_saddle_witness: constructed prior has value " + to_string(cp.Pi));
        return cp;
    };

    if (view.low_count == 1) {
        w.single_low = true;
        w.c12 = view.c(0, 1);
        w.c13 = view.c(0, 2);
        for (Rat lambda : {Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)}) {
            Dist prior = low_family_prior(view, alpha, lambda);
            w.family_z.push_back(check(prior).z);
            w.family.emplace_back(lambda, prior);
        }
        // z(lambda) = (alpha - K)/(1 - K) with K = alpha (c13 + lambda (c12 - c13)):
        // a Moebius map of lambda, injective since c12 != c13 and alpha < 1.
        w.certificate = "z(mu(lambda)) = (alpha - K)/(1 - K), K = alpha*(" + to_string(w.c13) + " + lambda*(" +
                        to_string(w.c12 - w.c13) + ")); slope factor " + to_string(w.c12 - w.c13) +
                        " != 0 and alpha < 1, so z is injective in lambda and no signal is optimal for two members";
        return w;
    }

    const Rat c1n = view.c(0, n - 1), c2n = view.c(1, n - 1);
    Vec m(n, Rat(0)), v(n, Rat(0));
    m[0] = 1 - c1n * alpha;
    m[n - 1] = c1n * alpha;
    v[0] = 1 - alpha;
    v[1] = alpha - c2n * alpha;
    v[n - 1] = c2n * alpha;
    w.mu = view.from_ranked(m);
    w.nu = view.from_ranked(v);
    w.mu_params = check(*w.mu);
    w.nu_params = check(*w.nu);
    w.certificate = "optimality at mu needs the lowest state to reach the favored message (z = " +
                    to_string(w.mu_params->z) +
                    " > 0) while the highest always does; optimality at nu needs the lowest state never to reach it "
                    "(z = 0); no signal satisfies both";
    return w;
}

} // namespace persuade
