#pragma once

#include "persuade/model.hpp"

#include <optional>
#include <sstream>
#include <utility>

namespace persuade {

// Two states: index 0 is the low state, index 1 the high state. Beliefs are
// identified with the probability x of the high state.

inline Dist belief(const Rat& x) { return {1 - x, x}; }

/// Belief thresholds xi(0..k+1): action i is optimal exactly on
/// [xi(i), xi(i+1)].
struct ThresholdProfile {
    Vec xi;
};

inline void require_two_states(const DecisionProblem& p) {
    if (p.num_states() != 2) throw InvalidInput("two-state solver needs exactly two states, got " + std::to_string(p.num_states()));
}

/// Checks that sender and high-state receiver payoffs increase with the
/// action index, then computes the thresholds between adjacent actions.
inline ThresholdProfile thresholds(const DecisionProblem& p) {
    require_two_states(p);
    const std::size_t k = p.num_actions() - 1;
    for (std::size_t i = 1; i <= k; ++i) {
        if (!(p.v[i - 1] < p.v[i]))
            throw PreconditionRefused("sender utility must increase with the action index: v('" + p.actions[i - 1] +
                                      "') >= v('" + p.actions[i] + "')");
        if (!(p.u[i - 1][1] < p.u[i][1]))
            throw PreconditionRefused("high-state receiver utility must increase with the action index: u('" +
                                      p.actions[i - 1] + "'|high) >= u('" + p.actions[i] + "'|high)");
    }
    ThresholdProfile t;
    t.xi.push_back(0);
    for (std::size_t i = 1; i <= k; ++i) {
        Rat loss = p.u[i - 1][0] - p.u[i][0];
        Rat gain = p.u[i][1] - p.u[i - 1][1];
        t.xi.push_back(loss / (loss + gain));
    }
    t.xi.push_back(1);
    for (std::size_t i = 1; i < t.xi.size(); ++i)
        if (!(t.xi[i - 1] < t.xi[i]))
            throw PreconditionRefused("thresholds not strictly increasing at action '" +
                                      p.actions[std::min(i, k)] + "': some action is redundant");
    return t;
}

struct Interval {
    Rat lo, hi;
};

/// Range of high-state probabilities of priors that rationalize alpha.
inline Interval identified_interval(const DecisionProblem& p, const Dist& alpha) {
    check_dist(alpha, p.num_actions(), "action data");
    auto t = thresholds(p);
    Interval iv{0, 0};
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        iv.lo += t.xi[i] * alpha[i];
        iv.hi += t.xi[i + 1] * alpha[i];
    }
    return iv;
}

/// Sender payoff when the receiver holds belief x.
inline Rat step_value(const DecisionProblem& p, const Rat& x) { return p.v[best_response(p, belief(x)).selected]; }

using Point2 = std::pair<Rat, Rat>;

/// Piecewise-linear concave function on [0,1] given by its breakpoints.
struct EnvelopeFn {
    std::vector<Point2> points; // strictly increasing abscissae, from 0 to 1

    /// Index j of the segment [points[j], points[j+1]] containing x; for a
    /// breakpoint x, the segment starting there (or the last one).
    std::size_t segment(const Rat& x) const {
        if (x < points.front().first || x > points.back().first) throw InvalidInput("envelope: argument outside [0,1]");
        for (std::size_t j = 0; j + 2 < points.size(); ++j)
            if (x < points[j + 1].first) return j;
        return points.size() - 2;
    }

    Rat operator()(const Rat& x) const {
        if (points.size() == 1) return points.front().second;
        const std::size_t j = segment(x);
        const auto& [x0, y0] = points[j];
        const auto& [x1, y1] = points[j + 1];
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }

    bool is_breakpoint(const Rat& x) const {
        for (const auto& pt : points)
            if (pt.first == x) return true;
        return false;
    }
};

/// Upper concave hull (monotone chain) of points sorted by abscissa.
/// Collinear interior points are dropped.
inline std::vector<Point2> upper_hull(const std::vector<Point2>& pts) {
    std::vector<Point2> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            Rat cross = (b.first - a.first) * (pt.second - a.second) - (b.second - a.second) * (pt.first - a.first);
            if (cross >= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    return hull;
}

/// Concave envelope of the sender's payoff as a function of the belief.
/// The payoff is a nondecreasing step function jumping at the thresholds, so
/// the hull of the threshold tops (plus the right end point) suffices.
inline EnvelopeFn concave_envelope(const DecisionProblem& p) {
    auto t = thresholds(p);
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < p.num_actions(); ++i) pts.emplace_back(t.xi[i], p.v[i]);
    pts.emplace_back(Rat(1), p.v.back());
    return {upper_hull(pts)};
}

/// Saddle for the two-state problem: the adversary picks the lowest
/// rationalizing prior and the sender concavifies there.
inline SaddleReport solve_two_state(const DecisionProblem& p, const Dist& alpha) {
    const Interval iv = identified_interval(p, alpha);
    const EnvelopeFn env = concave_envelope(p);
    const Rat mu = iv.lo;

    // Split mu into posteriors low <= mu <= high with weight lam on high.
    Rat low = mu, high = mu, lam = 1;
    if (!env.is_breakpoint(mu)) {
        const std::size_t j = env.segment(mu);
        low = env.points[j].first;
        high = env.points[j + 1].first;
        lam = (mu - low) / (high - low);
    }
    const std::size_t a_low = best_response(p, belief(low)).selected;
    const std::size_t a_high = best_response(p, belief(high)).selected;

    SaddleReport r;
    r.prior = belief(mu);
    r.value = env(mu);
    if (a_low == a_high) {
        r.signal = uninformative_signal(2, p.actions[a_high]);
        r.notes = "both posteriors induce the same action; pooling is optimal";
        return r;
    }
    r.signal.messages = {p.actions[a_low], p.actions[a_high]};
    r.signal.kernel.assign(2, Vec(2, Rat(0)));
    const Rat ml = 1 - mu;
    const Rat high_from_l = (1 - high) * lam, high_from_h = high * lam;
    if (ml > 0) {
        r.signal.kernel[0] = {(ml - high_from_l) / ml, high_from_l / ml};
    } else {
        r.signal.kernel[0] = {Rat(1), Rat(0)};
    }
    if (mu > 0) {
        r.signal.kernel[1] = {(mu - high_from_h) / mu, high_from_h / mu};
    } else {
        r.signal.kernel[1] = {Rat(1), Rat(0)};
    }
    r.signal = r.signal.pruned();
    r.notes = "posteriors " + to_string(low) + " and " + to_string(high) + " with weight " + to_string(lam) +
              " on the higher one";
    return r;
}

/// Two actions, two states: the high message is sent always in the state
/// favoring the high action, and in the other state just often enough that
/// the lowest rationalizing prior makes the receiver indifferent.
inline SaddleReport solve_two_by_two(const DecisionProblem& p, const Dist& alpha) {
    require_two_states(p);
    if (p.num_actions() != 2) throw InvalidInput("two-by-two solver needs exactly two actions");
    check_dist(alpha, 2, "action data");
    const std::size_t one = p.v[1] > p.v[0] ? 1 : 0, zero = 1 - one;
    const Rat gap_l = p.u[one][0] - p.u[zero][0], gap_h = p.u[one][1] - p.u[zero][1];
    if (!(gap_l < 0 && gap_h > 0))
        throw PreconditionRefused("two-by-two solver needs the preferred action to lose in the low state and win in the high state");
    const Rat c = -gap_l / (-gap_l + gap_h);
    const Rat a1 = alpha[one];
    const Rat mu_h = c * a1, mu_l = 1 - mu_h;

    SaddleReport r;
    r.prior = belief(mu_h);
    r.value = p.v[zero] * (1 - a1) + p.v[one] * a1;
    if (a1.is_zero()) {
        r.signal = uninformative_signal(2, p.actions[zero]);
        r.notes = "high action never observed; no information is needed";
        return r;
    }
    Signal s;
    s.messages = {p.actions[zero], p.actions[one]};
    const Rat from_l = (a1 - mu_h) / mu_l;
    s.kernel = {{1 - from_l, from_l}, {Rat(0), Rat(1)}};
    r.signal = s.pruned();
    r.notes = "indifference threshold " + to_string(c);
    return r;
}

struct DataValueGap {
    Rat guarantee;
    Rat data_value;
    bool equal = false;
    /// Hull segment containing every observed threshold top, when one exists.
    std::optional<std::pair<Point2, Point2>> segment;
};

inline DataValueGap data_value_gap(const DecisionProblem& p, const Dist& alpha) {
    const Interval iv = identified_interval(p, alpha);
    const EnvelopeFn env = concave_envelope(p);
    const auto t = thresholds(p);
    DataValueGap g;
    g.guarantee = env(iv.lo);
    g.data_value = dot(p.v, alpha);
    g.equal = g.guarantee == g.data_value;

    const auto supp = support(alpha);
    bool on_hull = true;
    for (auto i : supp) on_hull = on_hull && env(t.xi[i]) == p.v[i];
    if (on_hull) {
        const Rat lo = t.xi[supp.front()], hi = t.xi[supp.back()];
        for (std::size_t j = 0; j + 1 < env.points.size(); ++j) {
            if (env.points[j].first <= lo && hi <= env.points[j + 1].first) {
                g.segment = std::make_pair(env.points[j], env.points[j + 1]);
                break;
            }
        }
    }
    return g;
}

/// CSV of the step payoff and its envelope on a uniform grid refined by the
/// thresholds. Columns: mu_h,vhat,Vhat plus decimal renderings.
inline std::string envelope_csv(const DecisionProblem& p, long grid = 100) {
    if (grid < 1) throw InvalidInput("envelope_csv: grid must be positive");
    const EnvelopeFn env = concave_envelope(p);
    const auto t = thresholds(p);
    std::vector<Rat> xs;
    for (long j = 0; j <= grid; ++j) xs.emplace_back(j, grid);
    xs.insert(xs.end(), t.xi.begin(), t.xi.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::ostringstream out;
    out << "mu_h,vhat,Vhat,mu_h_decimal,vhat_decimal,Vhat_decimal\n";
    for (const auto& x : xs) {
        Rat vh = step_value(p, x), vv = env(x);
        out << to_string(x) << ',' << to_string(vh) << ',' << to_string(vv) << ',' << to_double(x) << ','
            << to_double(vh) << ',' << to_double(vv) << '\n';
    }
    return out.str();
}

} // namespace persuade
