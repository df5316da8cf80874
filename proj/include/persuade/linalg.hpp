#pragma once

#include "persuade/rational.hpp"

#include <optional>
#include <utility>

namespace persuade {

/// Row echelon form produced by fraction-free (Bareiss) elimination.
struct Echelon {
    Matrix rows;                     // echelon rows; rows past `pivots.size()` are zero
    std::vector<std::size_t> pivots; // pivot column of each nonzero row
    std::size_t cols = 0;
};

/// Fraction-free elimination. Each row is first scaled to integer entries;
/// every update then divides exactly by the previous pivot, so entries stay
/// integral throughout.
inline Echelon fraction_free_echelon(const Matrix& m, std::size_t cols) {
    Echelon e;
    e.cols = cols;
    e.rows = m;
    for (auto& row : e.rows) {
        if (row.size() != cols) throw InvalidInput("echelon: ragged matrix");
        Rat l(common_denominator(row));
        for (auto& x : row) x *= l;
    }
    const std::size_t nrows = e.rows.size();
    Rat prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < nrows; ++c) {
        std::size_t p = r;
        while (p < nrows && e.rows[p][c].is_zero()) ++p;
        if (p == nrows) continue;
        std::swap(e.rows[r], e.rows[p]);
        const Rat piv = e.rows[r][c];
        for (std::size_t i = r + 1; i < nrows; ++i) {
            const Rat lead = e.rows[i][c];
            for (std::size_t j = c + 1; j < cols; ++j) {
                e.rows[i][j] = (piv * e.rows[i][j] - lead * e.rows[r][j]) / prev;
            }
            e.rows[i][c] = 0;
        }
        prev = piv;
        e.pivots.push_back(c);
        ++r;
    }
    return e;
}

inline std::size_t rank(const Matrix& m, std::size_t cols) {
    return fraction_free_echelon(m, cols).pivots.size();
}

inline std::size_t rank(const Matrix& m) { return rank(m, m.empty() ? 0 : m.front().size()); }

/// Exact basis of {x | Mx = 0}, one primitive integer vector per free column.
/// Empty iff the null space is trivial.
inline std::vector<Vec> null_basis(const Matrix& m, std::size_t cols) {
    const Echelon e = fraction_free_echelon(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : e.pivots) is_pivot[c] = true;

    std::vector<Vec> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        Vec x(cols, Rat(0));
        x[f] = 1;
        for (std::size_t k = e.pivots.size(); k-- > 0;) {
            const std::size_t pc = e.pivots[k];
            Rat acc = 0;
            for (std::size_t j = pc + 1; j < cols; ++j)
                if (!x[j].is_zero() && !e.rows[k][j].is_zero()) acc += e.rows[k][j] * x[j];
            x[pc] = -acc / e.rows[k][pc];
        }
        basis.push_back(primitive(x));
    }
    return basis;
}

inline std::vector<Vec> null_basis(const Matrix& m) {
    return null_basis(m, m.empty() ? 0 : m.front().size());
}

/// A particular solution of Mx = b (free variables set to zero), or nullopt
/// when the system is inconsistent.
inline std::optional<Vec> solve_particular(const Matrix& m, const Vec& b, std::size_t cols) {
    if (m.size() != b.size()) throw InvalidInput("solve: row count mismatch");
    Matrix aug = m;
    for (std::size_t i = 0; i < aug.size(); ++i) {
        if (aug[i].size() != cols) throw InvalidInput("solve: ragged matrix");
        aug[i].push_back(b[i]);
    }
    const Echelon e = fraction_free_echelon(aug, cols + 1);
    for (auto c : e.pivots)
        if (c == cols) return std::nullopt;
    Vec x(cols, Rat(0));
    for (std::size_t k = e.pivots.size(); k-- > 0;) {
        const std::size_t pc = e.pivots[k];
        Rat acc = e.rows[k][cols];
        for (std::size_t j = pc + 1; j < cols; ++j)
            if (!x[j].is_zero()) acc -= e.rows[k][j] * x[j];
        x[pc] = acc / e.rows[k][pc];
    }
    return x;
}

} // namespace persuade
