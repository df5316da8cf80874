#pragma once

#include "persuade/rational.hpp"

#include <optional>
#include <string>

namespace persuade {

/// Polyhedron {x | E x = f, G x >= h} over free variables.
struct LinearSystem {
    std::size_t vars = 0;
    Matrix eq;
    Vec eq_rhs;
    Matrix ge;
    Vec ge_rhs;

    LinearSystem() = default;
    explicit LinearSystem(std::size_t n) : vars(n) {}

    void add_eq(Vec row, Rat rhs) {
        check_width(row);
        eq.push_back(std::move(row));
        eq_rhs.push_back(std::move(rhs));
    }
    void add_ge(Vec row, Rat rhs) {
        check_width(row);
        ge.push_back(std::move(row));
        ge_rhs.push_back(std::move(rhs));
    }
    void add_le(Vec row, Rat rhs) {
        for (auto& x : row) x = -x;
        add_ge(std::move(row), -rhs);
    }
    /// x_j >= 0 for every variable.
    void add_nonnegativity() {
        for (std::size_t j = 0; j < vars; ++j) add_ge(unit(j), 0);
    }
    Vec unit(std::size_t j) const {
        Vec row(vars, Rat(0));
        row.at(j) = 1;
        return row;
    }
    Vec zeros() const { return Vec(vars, Rat(0)); }

    void validate() const {
        if (eq.size() != eq_rhs.size() || ge.size() != ge_rhs.size())
            throw InvalidInput("linear system: row/rhs count mismatch");
        for (const auto& r : eq) check_width(r);
        for (const auto& r : ge) check_width(r);
    }

    /// Exact membership test.
    bool contains(const Vec& x) const {
        if (x.size() != vars) throw InvalidInput("linear system: point dimension mismatch");
        for (std::size_t i = 0; i < eq.size(); ++i)
            if (dot(eq[i], x) != eq_rhs[i]) return false;
        for (std::size_t i = 0; i < ge.size(); ++i)
            if (dot(ge[i], x) < ge_rhs[i]) return false;
        return true;
    }

private:
    void check_width(const Vec& row) const {
        if (row.size() != vars)
            throw InvalidInput("linear system: row width " + std::to_string(row.size()) +
                               " != variable count " + std::to_string(vars));
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class Sense { Maximize, Minimize };

inline const char* to_string(LpStatus s) {
    switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    }
    return "?";
}

struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    Rat value;     // valid when Optimal
    Vec optimizer; // basic feasible solution, valid when Optimal

    bool optimal() const { return status == LpStatus::Optimal; }
};

namespace detail {

/// Dense simplex tableau in canonical form with respect to `basis`.
class Tableau {
public:
    Tableau(Matrix rows, std::vector<std::size_t> basis, std::size_t cols)
        : rows_(std::move(rows)), basis_(std::move(basis)), cols_(cols) {}

    std::size_t cols() const { return cols_; }
    std::size_t nrows() const { return rows_.size(); }
    const Matrix& rows() const { return rows_; }
    const std::vector<std::size_t>& basis() const { return basis_; }

    /// Maximizes cost . y over the current feasible region, only letting
    /// columns with allowed[j] enter. Bland's rule on both entering and
    /// leaving choices, so the method terminates.
    /// Returns false when unbounded.
    bool maximize(const Vec& cost, const std::vector<bool>& allowed) {
        Vec obj(cols_ + 1, Rat(0));
        for (std::size_t j = 0; j < cols_; ++j) obj[j] = -cost[j];
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Rat& cb = cost[basis_[i]];
            if (cb.is_zero()) continue;
            for (std::size_t j = 0; j <= cols_; ++j)
                if (!rows_[i][j].is_zero()) obj[j] += cb * rows_[i][j];
        }
        for (;;) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (allowed[j] && obj[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols_) return true;

            std::size_t leave = rows_.size();
            Rat best_ratio;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                const Rat& a = rows_[i][enter];
                if (a <= 0) continue;
                Rat ratio = rows_[i][cols_] / a;
                if (leave == rows_.size() || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = std::move(ratio);
                }
            }
            if (leave == rows_.size()) return false;
            pivot(leave, enter, &obj);
        }
    }

    void pivot(std::size_t r, std::size_t c, Vec* obj = nullptr) {
        Vec& prow = rows_[r];
        const Rat inv = Rat(1) / prow[c];
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j <= cols_; ++j) {
            if (prow[j].is_zero()) continue;
            prow[j] *= inv;
            nz.push_back(j);
        }
        auto eliminate = [&](Vec& row) {
            if (row[c].is_zero()) return;
            const Rat f = row[c];
            for (auto j : nz) row[j] -= f * prow[j];
        };
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (i != r) eliminate(rows_[i]);
        if (obj) eliminate(*obj);
        basis_[r] = c;
    }

    void drop_row(std::size_t r) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    }

    Vec solution() const {
        Vec y(cols_, Rat(0));
        for (std::size_t i = 0; i < rows_.size(); ++i) y[basis_[i]] = rows_[i][cols_];
        return y;
    }

private:
    Matrix rows_;
    std::vector<std::size_t> basis_;
    std::size_t cols_;
};

} // namespace detail

/// Exact two-phase simplex. Free variables are split into positive and
/// negative parts, except for variables that carry an explicit x_j >= 0 row,
/// which are kept as single nonnegative columns.
inline LpOutcome lp_solve(const Vec& objective, const LinearSystem& sys, Sense sense) {
    sys.validate();
    const std::size_t n = sys.vars;
    if (objective.size() != n) throw InvalidInput("lp_solve: objective width != variable count");

    // x_j >= 0 rows become column bounds.
    std::vector<bool> nonneg(n, false);
    std::vector<bool> keep_row(sys.ge.size(), true);
    for (std::size_t i = 0; i < sys.ge.size(); ++i) {
        if (!sys.ge_rhs[i].is_zero()) continue;
        std::size_t count = 0, where = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (!sys.ge[i][j].is_zero()) ++count, where = j;
        if (count == 1 && sys.ge[i][where] > 0) {
            nonneg[where] = true;
            keep_row[i] = false;
        }
    }

    // Column layout: [x columns (plus[, minus])] [slacks] [artificials]
    std::vector<std::size_t> plus_col(n), minus_col(n, SIZE_MAX);
    std::size_t cols = 0;
    for (std::size_t j = 0; j < n; ++j) {
        plus_col[j] = cols++;
        if (!nonneg[j]) minus_col[j] = cols++;
    }
    const std::size_t structural = cols;

    struct RawRow {
        Vec coef; // over structural columns
        Rat rhs;
        bool has_slack;
    };
    std::vector<RawRow> raw;
    auto expand = [&](const Vec& row) {
        Vec out(structural, Rat(0));
        for (std::size_t j = 0; j < n; ++j) {
            if (row[j].is_zero()) continue;
            out[plus_col[j]] = row[j];
            if (minus_col[j] != SIZE_MAX) out[minus_col[j]] = -row[j];
        }
        return out;
    };
    for (std::size_t i = 0; i < sys.eq.size(); ++i) raw.push_back({expand(sys.eq[i]), sys.eq_rhs[i], false});
    for (std::size_t i = 0; i < sys.ge.size(); ++i)
        if (keep_row[i]) raw.push_back({expand(sys.ge[i]), sys.ge_rhs[i], true});

    std::size_t slack_count = 0;
    for (const auto& r : raw) slack_count += r.has_slack ? 1 : 0;
    const std::size_t slack_begin = structural;
    const std::size_t art_begin = slack_begin + slack_count;

    // Rows: coef . y - s = rhs (for >= rows). Normalize rhs >= 0.
    const std::size_t m = raw.size();
    std::vector<std::size_t> basis(m, SIZE_MAX);
    std::vector<bool> needs_art(m, false);
    std::vector<bool> negate(m, false);
    std::size_t art_count = 0;
    {
        std::size_t s = 0;
        for (std::size_t i = 0; i < m; ++i) {
            negate[i] = raw[i].rhs < 0 || (raw[i].has_slack && raw[i].rhs.is_zero());
            if (raw[i].has_slack) {
                // after negation slack coefficient is +1 and can start basic
                if (negate[i]) basis[i] = slack_begin + s;
                ++s;
            }
            if (basis[i] == SIZE_MAX) {
                needs_art[i] = true;
                ++art_count;
            }
        }
    }
    const std::size_t total = art_begin + art_count;
    Matrix rows(m, Vec(total + 1, Rat(0)));
    {
        std::size_t s = 0, a = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const Rat sign = negate[i] ? Rat(-1) : Rat(1);
            for (std::size_t j = 0; j < structural; ++j)
                if (!raw[i].coef[j].is_zero()) rows[i][j] = sign * raw[i].coef[j];
            if (raw[i].has_slack) {
                rows[i][slack_begin + s] = -sign;
                ++s;
            }
            if (needs_art[i]) {
                rows[i][art_begin + a] = 1;
                basis[i] = art_begin + a;
                ++a;
            }
            rows[i][total] = sign * raw[i].rhs;
        }
    }

    detail::Tableau tab(std::move(rows), std::move(basis), total);
    std::vector<bool> allowed(total, true);

    if (art_count > 0) {
        Vec phase1(total, Rat(0));
        for (std::size_t j = art_begin; j < total; ++j) phase1[j] = -1;
        tab.maximize(phase1, allowed);
        Rat infeas = 0;
        Vec y = tab.solution();
        for (std::size_t j = art_begin; j < total; ++j) infeas += y[j];
        if (infeas > 0) return {LpStatus::Infeasible, Rat(0), {}};
        // Drive zero-level artificials out of the basis; drop redundant rows.
        for (std::size_t i = 0; i < tab.nrows();) {
            if (tab.basis()[i] < art_begin) {
                ++i;
                continue;
            }
            std::size_t col = art_begin;
            for (std::size_t j = 0; j < art_begin; ++j)
                if (!tab.rows()[i][j].is_zero()) {
                    col = j;
                    break;
                }
            if (col == art_begin) {
                tab.drop_row(i);
            } else {
                tab.pivot(i, col);
                ++i;
            }
        }
        for (std::size_t j = art_begin; j < total; ++j) allowed[j] = false;
    }

    Vec cost(total, Rat(0));
    const Rat dir = sense == Sense::Maximize ? Rat(1) : Rat(-1);
    for (std::size_t j = 0; j < n; ++j) {
        if (objective[j].is_zero()) continue;
        cost[plus_col[j]] = dir * objective[j];
        if (minus_col[j] != SIZE_MAX) cost[minus_col[j]] = -dir * objective[j];
    }
    if (!tab.maximize(cost, allowed)) return {LpStatus::Unbounded, Rat(0), {}};

    Vec y = tab.solution();
    Vec x(n, Rat(0));
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = y[plus_col[j]];
        if (minus_col[j] != SIZE_MAX) x[j] -= y[minus_col[j]];
    }
    Rat value = dot(objective, x);
    return {LpStatus::Optimal, std::move(value), std::move(x)};
}

inline LpOutcome lp_feasible_point(const LinearSystem& sys) {
    return lp_solve(sys.zeros(), sys, Sense::Maximize);
}

struct StrictFeasibility {
    bool feasible = false;
    std::optional<Vec> point;
    Rat slack; // optimal uniform slack t* (capped at 1)
};

/// Decides whether some x satisfies E x = f and G_i x > h_i for every row i
/// flagged in `strict` (other rows non-strict) by maximizing a common slack
/// t <= 1.
inline StrictFeasibility strict_feasible(const LinearSystem& sys, const std::vector<bool>& strict) {
    sys.validate();
    if (strict.size() != sys.ge.size()) throw InvalidInput("strict_feasible: mask size mismatch");
    LinearSystem lifted(sys.vars + 1);
    auto widen = [&](const Vec& row, const Rat& tcoef) {
        Vec out(row);
        out.push_back(tcoef);
        return out;
    };
    for (std::size_t i = 0; i < sys.eq.size(); ++i) lifted.add_eq(widen(sys.eq[i], 0), sys.eq_rhs[i]);
    for (std::size_t i = 0; i < sys.ge.size(); ++i)
        lifted.add_ge(widen(sys.ge[i], strict[i] ? Rat(-1) : Rat(0)), sys.ge_rhs[i]);
    lifted.add_le(lifted.unit(sys.vars), 1);

    auto out = lp_solve(lifted.unit(sys.vars), lifted, Sense::Maximize);
    StrictFeasibility res;
    if (!out.optimal()) return res;
    res.slack = out.value;
    if (out.value > 0) {
        res.feasible = true;
        out.optimizer.pop_back();
        res.point = std::move(out.optimizer);
    }
    return res;
}

/// All inequality rows strict.
inline StrictFeasibility strict_feasible(const LinearSystem& sys) {
    return strict_feasible(sys, std::vector<bool>(sys.ge.size(), true));
}

} // namespace persuade
