#pragma once

#include "persuade/rational.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace persuade {

/// Probability vector over a finite index set. Validated with check_dist.
using Dist = Vec;

inline void check_dist(const Dist& d, std::size_t n, const std::string& what) {
    if (d.size() != n)
        throw InvalidInput(what + ": expected " + std::to_string(n) + " weights, got " + std::to_string(d.size()));
    for (const auto& x : d)
        if (x < 0) throw InvalidInput(what + ": negative weight " + to_string(x));
    if (sum(d) != 1) throw InvalidInput(what + ": weights sum to " + to_string(sum(d)) + ", not 1");
}

inline Dist point_mass(std::size_t n, std::size_t i) {
    Dist d(n, Rat(0));
    d.at(i) = 1;
    return d;
}

inline std::vector<std::size_t> support(const Dist& d) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > 0) s.push_back(i);
    return s;
}

/// Receiver utility u[action][state], sender utility v[action].
struct DecisionProblem {
    std::vector<std::string> actions;
    std::vector<std::string> states;
    Matrix u;
    Vec v;

    std::size_t num_actions() const { return actions.size(); }
    std::size_t num_states() const { return states.size(); }

    std::optional<std::size_t> action_index(const std::string& label) const {
        for (std::size_t a = 0; a < actions.size(); ++a)
            if (actions[a] == label) return a;
        return std::nullopt;
    }
    std::optional<std::size_t> state_index(const std::string& label) const {
        for (std::size_t w = 0; w < states.size(); ++w)
            if (states[w] == label) return w;
        return std::nullopt;
    }
};

/// Raised by validate_problem; carries every violation found.
class ProblemViolations : public InvalidInput {
public:
    explicit ProblemViolations(std::vector<std::string> v)
        : InvalidInput(joined(v)), violations_(std::move(v)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string joined(const std::vector<std::string>& v) {
        std::string out = "invalid decision problem";
        for (const auto& s : v) out += "; " + s;
        return out;
    }
    std::vector<std::string> violations_;
};

/// Every way `p` fails to be a valid decision problem (empty if valid).
inline std::vector<std::string> problem_violations(const DecisionProblem& p) {
    std::vector<std::string> out;
    const std::size_t na = p.actions.size(), ns = p.states.size();
    if (na < 2) out.push_back("fewer than two actions");
    if (ns < 2) out.push_back("fewer than two states");
    auto duplicates = [&](const std::vector<std::string>& labels, const std::string& kind) {
        for (std::size_t i = 0; i < labels.size(); ++i)
            for (std::size_t j = i + 1; j < labels.size(); ++j)
                if (labels[i] == labels[j]) out.push_back("duplicate " + kind + " label '" + labels[i] + "'");
    };
    duplicates(p.actions, "action");
    duplicates(p.states, "state");

    bool shape_ok = p.u.size() == na && p.v.size() == na;
    if (p.u.size() != na)
        out.push_back("receiver utility has " + std::to_string(p.u.size()) + " rows for " + std::to_string(na) + " actions");
    for (std::size_t a = 0; a < p.u.size(); ++a) {
        if (p.u[a].size() != ns) {
            shape_ok = false;
            out.push_back("receiver utility row " + std::to_string(a) + " has " + std::to_string(p.u[a].size()) +
                          " entries for " + std::to_string(ns) + " states");
        }
    }
    if (p.v.size() != na)
        out.push_back("sender utility has " + std::to_string(p.v.size()) + " entries for " + std::to_string(na) + " actions");
    if (!shape_ok) return out;

    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = a + 1; b < na; ++b) {
            if (p.v[a] == p.v[b])
                out.push_back("sender utility not injective: actions '" + p.actions[a] + "' and '" + p.actions[b] +
                              "' both have value " + to_string(p.v[a]));
            if (p.u[a] == p.u[b])
                out.push_back("payoff map not injective: actions '" + p.actions[a] + "' and '" + p.actions[b] +
                              "' have identical receiver payoffs");
        }
    return out;
}

inline DecisionProblem validate_problem(DecisionProblem p) {
    auto v = problem_violations(p);
    if (!v.empty()) throw ProblemViolations(std::move(v));
    return p;
}

struct BestResponse {
    std::vector<std::size_t> set; // receiver-optimal actions, ascending
    std::size_t selected = 0;     // sender-preferred member of `set`
};

/// Receiver-optimal actions at a belief. The belief only needs nonnegative
/// weights: positive rescaling does not change the argmax.
inline BestResponse best_response(const DecisionProblem& p, const Vec& belief) {
    if (belief.size() != p.num_states()) throw InvalidInput("best_response: belief dimension mismatch");
    BestResponse br;
    Rat best;
    for (std::size_t a = 0; a < p.num_actions(); ++a) {
        Rat val = dot(p.u[a], belief);
        if (br.set.empty() || val > best) {
            best = val;
            br.set.assign(1, a);
        } else if (val == best) {
            br.set.push_back(a);
        }
    }
    br.selected = br.set.front();
    for (auto a : br.set)
        if (p.v[a] > p.v[br.selected]) br.selected = a;
    return br;
}

/// Finite message set and kernel[state][message] = probability of sending
/// the message in that state.
struct Signal {
    std::vector<std::string> messages;
    Matrix kernel;

    std::size_t num_messages() const { return messages.size(); }

    void validate(std::size_t states) const {
        if (messages.empty()) throw InvalidInput("signal: no messages");
        for (std::size_t i = 0; i < messages.size(); ++i)
            for (std::size_t j = i + 1; j < messages.size(); ++j)
                if (messages[i] == messages[j]) throw InvalidInput("signal: duplicate message '" + messages[i] + "'");
        if (kernel.size() != states)
            throw InvalidInput("signal: kernel has " + std::to_string(kernel.size()) + " rows for " +
                               std::to_string(states) + " states");
        for (std::size_t w = 0; w < states; ++w)
            check_dist(kernel[w], messages.size(), "signal kernel row " + std::to_string(w));
    }

    /// Every message label is an action label.
    bool is_direct(const DecisionProblem& p) const {
        for (const auto& m : messages)
            if (!p.action_index(m)) return false;
        return true;
    }

    /// Drops messages that are sent in no state.
    Signal pruned() const {
        Signal out;
        out.kernel.assign(kernel.size(), Vec{});
        for (std::size_t s = 0; s < messages.size(); ++s) {
            bool used = false;
            for (const auto& row : kernel) used = used || row[s] > 0;
            if (!used) continue;
            out.messages.push_back(messages[s]);
            for (std::size_t w = 0; w < kernel.size(); ++w) out.kernel[w].push_back(kernel[w][s]);
        }
        return out;
    }

    std::optional<std::size_t> message_index(const std::string& label) const {
        for (std::size_t s = 0; s < messages.size(); ++s)
            if (messages[s] == label) return s;
        return std::nullopt;
    }
};

inline Signal uninformative_signal(std::size_t states, std::string label) {
    return Signal{{std::move(label)}, Matrix(states, Vec{Rat(1)})};
}

/// One message per state, labeled by the state.
inline Signal revealing_signal(const DecisionProblem& p) {
    return Signal{p.states, identity(p.num_states())};
}

/// Candidate solution of the sender's problem.
struct SaddleReport {
    Signal signal;
    Dist prior;
    Rat value;
    bool verified = false;
    std::string notes;
};

/// Unconditional probability of message s.
inline Rat message_probability(const Signal& sig, const Dist& prior, std::size_t s) {
    Rat acc = 0;
    for (std::size_t w = 0; w < prior.size(); ++w)
        if (prior[w] > 0) acc += sig.kernel[w][s] * prior[w];
    return acc;
}

/// Joint weights pi(s|w) mu(w), i.e. the unnormalized posterior.
inline Vec joint_weights(const Signal& sig, const Dist& prior, std::size_t s) {
    Vec out(prior.size(), Rat(0));
    for (std::size_t w = 0; w < prior.size(); ++w)
        if (prior[w] > 0) out[w] = sig.kernel[w][s] * prior[w];
    return out;
}

inline std::size_t require_message(const Signal& sig, const std::string& label) {
    auto s = sig.message_index(label);
    if (!s) throw InvalidInput("unknown message '" + label + "'");
    return *s;
}

inline Dist bayes_posterior(const DecisionProblem& p, const Signal& sig, const Dist& prior, std::size_t s) {
    check_dist(prior, p.num_states(), "prior");
    sig.validate(p.num_states());
    if (s >= sig.num_messages()) throw InvalidInput("bayes_posterior: message index out of range");
    Rat prob = message_probability(sig, prior, s);
    if (prob.is_zero()) throw InvalidInput("bayes_posterior: message '" + sig.messages[s] + "' has probability zero");
    Vec post = joint_weights(sig, prior, s);
    for (auto& x : post) x /= prob;
    return post;
}

inline Dist bayes_posterior(const DecisionProblem& p, const Signal& sig, const Dist& prior, const std::string& msg) {
    return bayes_posterior(p, sig, prior, require_message(sig, msg));
}

/// Receiver's tie-broken action after each message; nullopt for messages of
/// probability zero.
inline std::vector<std::optional<std::size_t>> message_actions(const DecisionProblem& p, const Signal& sig,
                                                               const Dist& prior) {
    std::vector<std::optional<std::size_t>> out(sig.num_messages());
    for (std::size_t s = 0; s < sig.num_messages(); ++s) {
        Vec joint = joint_weights(sig, prior, s);
        if (sum(joint).is_zero()) continue;
        out[s] = best_response(p, joint).selected;
    }
    return out;
}

inline Dist induced_action_dist(const DecisionProblem& p, const Signal& sig, const Dist& prior) {
    check_dist(prior, p.num_states(), "prior");
    sig.validate(p.num_states());
    Dist out(p.num_actions(), Rat(0));
    auto acts = message_actions(p, sig, prior);
    for (std::size_t s = 0; s < sig.num_messages(); ++s)
        if (acts[s]) out[*acts[s]] += message_probability(sig, prior, s);
    return out;
}

inline Rat sender_value(const DecisionProblem& p, const Signal& sig, const Dist& prior) {
    return dot(p.v, induced_action_dist(p, sig, prior));
}

} // namespace persuade
