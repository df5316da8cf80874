#pragma once

#include "persuade/errors.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace persuade {

/// Exact rational number backed by GMP. Always stored in canonical form
/// (positive denominator, coprime numerator/denominator).
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;
/// Arbitrary-precision integer matching Rat's numerator/denominator type.
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

using Vec = std::vector<Rat>;
/// Dense row-major matrix.
using Matrix = std::vector<Vec>;

inline BigInt numer(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt denom(const Rat& r) { return boost::multiprecision::denominator(r); }

/// Parses "p/q", "p" or a finite decimal like "0.25" into an exact rational.
inline Rat parse_rat(std::string_view text) {
    std::string s(text);
    auto first = s.find_first_not_of(" \t");
    auto last = s.find_last_not_of(" \t");
    if (first == std::string::npos) throw InvalidInput("empty rational");
    s = s.substr(first, last - first + 1);

    auto valid_int = [](const std::string& t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    auto to_int = [](std::string t) {
        if (!t.empty() && t[0] == '+') t.erase(0, 1);
        return BigInt(t);
    };

    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string p = s.substr(0, slash), q = s.substr(slash + 1);
        if (!valid_int(p) || !valid_int(q)) throw InvalidInput("malformed rational '" + s + "'");
        BigInt den = to_int(q);
        if (den == 0) throw InvalidInput("zero denominator in '" + s + "'");
        return Rat(to_int(p), den);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        if (!valid_int(whole) || (!frac.empty() && !valid_int(frac)) ||
            (!frac.empty() && (frac[0] == '-' || frac[0] == '+')))
            throw InvalidInput("malformed decimal '" + s + "'");
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        Rat f = frac.empty() ? Rat(0) : Rat(to_int(frac), scale);
        Rat w(to_int(whole));
        return negative ? w - f : w + f;
    }
    if (!valid_int(s)) throw InvalidInput("malformed rational '" + s + "'");
    return Rat(to_int(s));
}

/// "p/q", or "p" for integers.
inline std::string to_string(const Rat& r) {
    BigInt d = denom(r);
    if (d == 1) return numer(r).str();
    return numer(r).str() + "/" + d.str();
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw InvalidInput("dot: dimension mismatch");
    Rat acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero() && !b[i].is_zero()) acc += a[i] * b[i];
    return acc;
}

inline Rat sum(const Vec& a) {
    Rat acc = 0;
    for (const auto& x : a) acc += x;
    return acc;
}

inline Vec scaled(const Vec& a, const Rat& s) {
    Vec out(a);
    for (auto& x : out) x *= s;
    return out;
}

inline Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw InvalidInput("vector add: dimension mismatch");
    Vec out(a);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
    return out;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw InvalidInput("vector sub: dimension mismatch");
    Vec out(a);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
    return out;
}

inline Vec mat_vec(const Matrix& m, const Vec& x) {
    Vec out;
    out.reserve(m.size());
    for (const auto& row : m) out.push_back(dot(row, x));
    return out;
}

inline Matrix identity(std::size_t n) {
    Matrix m(n, Vec(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline Matrix transpose(const Matrix& m, std::size_t cols_if_empty = 0) {
    std::size_t cols = m.empty() ? cols_if_empty : m.front().size();
    Matrix t(cols, Vec(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) t[j][i] = m[i][j];
    return t;
}

/// Least common multiple of the denominators in v.
inline BigInt common_denominator(const Vec& v) {
    BigInt l = 1;
    for (const auto& x : v) l = boost::multiprecision::lcm(l, denom(x));
    return l;
}

/// Scales a nonzero vector to the unique primitive integer vector on the same
/// ray (positive multiple, gcd of entries 1).
inline Vec primitive(const Vec& v) {
    BigInt l = common_denominator(v);
    BigInt g = 0;
    for (const auto& x : v) {
        BigInt n = numer(x * Rat(l));
        if (n != 0) g = boost::multiprecision::gcd(g, abs(n));
    }
    if (g == 0) return v;
    Rat s(l, g);
    return scaled(v, s);
}

inline std::string join(const Vec& v, std::string_view sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += to_string(v[i]);
    }
    return out;
}

/// Parses a comma separated list of rationals ("4/5,1/5").
inline Vec parse_vec(std::string_view text) {
    Vec out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                          : comma - start);
        out.push_back(parse_rat(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace persuade
