#pragma once

// Decision problems shared by the test suites.

#include "persuade/model.hpp"

namespace fx {

using namespace persuade;

inline Rat R(long p, long q = 1) { return Rat(p, q); }

/// Two actions "0","1"; u(0|.) = 0 and u(1|.) = gaps; v = (0, 1).
inline DecisionProblem two_action(const Vec& gaps) {
    DecisionProblem p;
    p.actions = {"0", "1"};
    for (std::size_t i = 0; i < gaps.size(); ++i) p.states.push_back("w" + std::to_string(i + 1));
    p.u = {Vec(gaps.size(), Rat(0)), gaps};
    p.v = {R(0), R(1)};
    return p;
}

/// Judge who dislikes both errors equally: acquit "0", convict "1".
inline DecisionProblem prosecutor() {
    DecisionProblem p;
    p.actions = {"0", "1"};
    p.states = {"l", "h"};
    p.u = {{R(0), R(-1)}, {R(-1), R(0)}};
    p.v = {R(0), R(1)};
    return p;
}

/// Two states, three actions with thresholds 1/2 and 2/3.
inline DecisionProblem improvement() {
    DecisionProblem p;
    p.actions = {"0", "1", "2"};
    p.states = {"l", "h"};
    p.u = {{R(1), R(-1)}, {R(0), R(0)}, {R(-2), R(1)}};
    p.v = {R(0), R(1), R(2)};
    return p;
}

inline DecisionProblem rev() { return two_action({R(-1), R(0), R(1)}); }
inline DecisionProblem fosd() { return two_action({R(-2), R(-1), R(1)}); }

inline Dist uniform(std::size_t n) { return Dist(n, Rat(1, static_cast<long>(n))); }

} // namespace fx
