#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace qidx
{

// The four symbolic units tau_a .. tau_d.
enum class VarId : std::uint8_t { a = 0, b = 1, c = 2, d = 3 };

inline constexpr std::size_t num_units = 4;

inline constexpr const char *unit_name(VarId v)
{
    constexpr const char *names[] = {"ta", "tb", "tc", "td"};
    return names[static_cast<std::size_t>(v)];
}

// Exponent vector over the symbolic units. The ordering is lexicographic,
// which is translation invariant: multiplying a sorted term list by a fixed
// monomial keeps it sorted.
struct Monomial {
    std::array<int, num_units> exps{};

    static Monomial unit(VarId v, int e = 1)
    {
        Monomial m;
        m.exps[static_cast<std::size_t>(v)] = e;
        return m;
    }

    int operator[](VarId v) const { return exps[static_cast<std::size_t>(v)]; }

    bool is_one() const
    {
        return std::all_of(exps.begin(), exps.end(), [](int e) { return e == 0; });
    }

    Monomial inverse() const
    {
        Monomial r;
        for (std::size_t i = 0; i < num_units; ++i) {
            r.exps[i] = -exps[i];
        }
        return r;
    }

    Monomial pow(int k) const
    {
        Monomial r;
        for (std::size_t i = 0; i < num_units; ++i) {
            r.exps[i] = exps[i] * k;
        }
        return r;
    }

    friend Monomial operator*(const Monomial &x, const Monomial &y)
    {
        Monomial r;
        for (std::size_t i = 0; i < num_units; ++i) {
            r.exps[i] = x.exps[i] + y.exps[i];
        }
        return r;
    }

    friend bool operator==(const Monomial &, const Monomial &) = default;
    friend auto operator<=>(const Monomial &, const Monomial &) = default;

    std::string str() const
    {
        std::string out;
        for (std::size_t i = 0; i < num_units; ++i) {
            if (exps[i] == 0) {
                continue;
            }
            if (!out.empty()) {
                out += '*';
            }
            out += unit_name(static_cast<VarId>(i));
            if (exps[i] != 1) {
                out += '^' + std::to_string(exps[i]);
            }
        }
        return out.empty() ? "1" : out;
    }
};

// Sparse Laurent polynomial in the symbolic units with rational coefficients.
// Terms are kept sorted by monomial with no zero coefficients, so the
// representation is canonical and == is ring equality.
class LaurentPoly
{
public:
    using Term = std::pair<Monomial, Rational>;

    LaurentPoly() = default;
    LaurentPoly(long c) : LaurentPoly(Rational(c)) {}
    LaurentPoly(const Rational &c)
    {
        if (!c.is_zero()) {
            terms_.emplace_back(Monomial{}, c);
        }
    }
    LaurentPoly(const Monomial &m, const Rational &c)
    {
        if (!c.is_zero()) {
            terms_.emplace_back(m, c);
        }
    }

    static LaurentPoly var(VarId v, int e = 1) { return LaurentPoly(Monomial::unit(v, e), Rational(1)); }

    // Builds from arbitrary (possibly repeated, unsorted) terms.
    static LaurentPoly from_terms(std::vector<Term> terms)
    {
        LaurentPoly p;
        p.terms_ = std::move(terms);
        p.canonicalize();
        return p;
    }

    const std::vector<Term> &terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    Rational coefficient(const Monomial &m) const
    {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term &t, const Monomial &k) { return t.first < k; });
        return (it != terms_.end() && it->first == m) ? it->second : Rational(0);
    }

    LaurentPoly &operator+=(const LaurentPoly &o)
    {
        terms_ = merge(terms_, o.terms_, false);
        return *this;
    }
    LaurentPoly &operator-=(const LaurentPoly &o)
    {
        terms_ = merge(terms_, o.terms_, true);
        return *this;
    }
    LaurentPoly &operator*=(const LaurentPoly &o)
    {
        *this = *this * o;
        return *this;
    }
    LaurentPoly &operator*=(const Rational &c)
    {
        if (c.is_zero()) {
            terms_.clear();
        } else {
            for (auto &t : terms_) {
                t.second *= c;
            }
        }
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly &b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly &b) { return a -= b; }
    friend LaurentPoly operator-(LaurentPoly a)
    {
        for (auto &t : a.terms_) {
            t.second = -t.second;
        }
        return a;
    }

    friend LaurentPoly operator*(const LaurentPoly &a, const LaurentPoly &b)
    {
        if (a.terms_.size() == 1) {
            return b.scaled(a.terms_[0].first, a.terms_[0].second);
        }
        if (b.terms_.size() == 1) {
            return a.scaled(b.terms_[0].first, b.terms_[0].second);
        }
        std::vector<Term> prod;
        prod.reserve(a.terms_.size() * b.terms_.size());
        for (const auto &x : a.terms_) {
            for (const auto &y : b.terms_) {
                prod.emplace_back(x.first * y.first, x.second * y.second);
            }
        }
        return from_terms(std::move(prod));
    }

    // Multiplication by c * m, which preserves the term order.
    LaurentPoly scaled(const Monomial &m, const Rational &c) const
    {
        LaurentPoly r;
        if (c.is_zero()) {
            return r;
        }
        r.terms_.reserve(terms_.size());
        for (const auto &t : terms_) {
            r.terms_.emplace_back(t.first * m, t.second * c);
        }
        return r;
    }

    friend bool operator==(const LaurentPoly &, const LaurentPoly &) = default;

    std::string str() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string out;
        for (const auto &[m, c] : terms_) {
            const bool neg = c.sign() < 0;
            const Rational mag = neg ? -c : c;
            if (out.empty()) {
                out += neg ? "-" : "";
            } else {
                out += neg ? " - " : " + ";
            }
            if (m.is_one()) {
                out += mag.str();
            } else if (mag.is_one()) {
                out += m.str();
            } else {
                out += mag.str() + "*" + m.str();
            }
        }
        return out;
    }

    friend std::ostream &operator<<(std::ostream &os, const LaurentPoly &p) { return os << p.str(); }

private:
    void canonicalize()
    {
        std::sort(terms_.begin(), terms_.end(), [](const Term &x, const Term &y) { return x.first < y.first; });
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (auto &t : terms_) {
            if (!out.empty() && out.back().first == t.first) {
                out.back().second += t.second;
            } else {
                if (!out.empty() && out.back().second.is_zero()) {
                    out.pop_back();
                }
                out.push_back(std::move(t));
            }
        }
        if (!out.empty() && out.back().second.is_zero()) {
            out.pop_back();
        }
        terms_ = std::move(out);
    }

    static std::vector<Term> merge(const std::vector<Term> &x, const std::vector<Term> &y, bool subtract)
    {
        std::vector<Term> out;
        out.reserve(x.size() + y.size());
        std::size_t i = 0, j = 0;
        while (i < x.size() || j < y.size()) {
            if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
                out.push_back(x[i++]);
            } else if (i == x.size() || y[j].first < x[i].first) {
                out.emplace_back(y[j].first, subtract ? -y[j].second : y[j].second);
                ++j;
            } else {
                Rational c = subtract ? x[i].second - y[j].second : x[i].second + y[j].second;
                if (!c.is_zero()) {
                    out.emplace_back(x[i].first, std::move(c));
                }
                ++i;
                ++j;
            }
        }
        return out;
    }

    std::vector<Term> terms_;
};

inline LaurentPoly lp_add(const LaurentPoly &p, const LaurentPoly &q) { return p + q; }
inline LaurentPoly lp_mul(const LaurentPoly &p, const LaurentPoly &q) { return p * q; }

// Euler operator tau_v * d/d(tau_v): weights each term by its exponent of v.
inline LaurentPoly lp_euler(const LaurentPoly &p, VarId v)
{
    std::vector<LaurentPoly::Term> out;
    for (const auto &[m, c] : p.terms()) {
        if (m[v] != 0) {
            out.emplace_back(m, c * Rational(m[v]));
        }
    }
    return LaurentPoly::from_terms(std::move(out));
}

// Ring homomorphism tau_v := sign.
inline LaurentPoly lp_subst_unit(const LaurentPoly &p, VarId v, int sign)
{
    std::vector<LaurentPoly::Term> out;
    out.reserve(p.size());
    const auto idx = static_cast<std::size_t>(v);
    for (const auto &[m, c] : p.terms()) {
        Monomial k = m;
        const bool odd = (k.exps[idx] % 2) != 0;
        k.exps[idx] = 0;
        out.emplace_back(k, (sign < 0 && odd) ? -c : c);
    }
    return LaurentPoly::from_terms(std::move(out));
}

// The (monomial, scalar) pair when p is a single nonzero term.
inline std::optional<std::pair<Monomial, Rational>> lp_is_unit(const LaurentPoly &p)
{
    if (p.size() != 1) {
        return std::nullopt;
    }
    return p.terms().front();
}

inline std::string to_string(const LaurentPoly &p) { return p.str(); }

} // namespace qidx
