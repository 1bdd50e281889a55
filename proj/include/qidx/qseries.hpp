#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "coeff.hpp"
#include "errors.hpp"
#include "laurent.hpp"
#include "rational.hpp"

namespace qidx
{

namespace detail
{

inline void scale_by(Rational &c, const Rational &s) { c *= s; }
inline void scale_by(LaurentPoly &c, const Rational &s) { c *= s; }

} // namespace detail

// Truncated Laurent series sum_{k >= offset} c_k q^k, known exactly through
// q^order. Coefficients are stored densely for offset..order. The offset is
// kept at the first nonzero coefficient; the zero series known to order K has
// offset K + 1 and no stored coefficients.
template <typename C>
class QSeries
{
public:
    using coeff_type = C;

    explicit QSeries(int order = 0) : offset_(order + 1), order_(order) {}

    QSeries(int offset, std::vector<C> coeffs, int order) : offset_(offset), order_(order), coeffs_(std::move(coeffs))
    {
        const long want = static_cast<long>(order_) - offset_ + 1;
        if (want <= 0) {
            coeffs_.clear();
            offset_ = order_ + 1;
        } else {
            coeffs_.resize(static_cast<std::size_t>(want));
        }
        normalise();
    }

    static QSeries constant(const C &c, int order) { return monomial(c, 0, order); }
    static QSeries one(int order) { return constant(C(1), order); }

    static QSeries monomial(const C &c, int exponent, int order)
    {
        if (exponent > order || ring_traits<C>::is_zero(c)) {
            return QSeries(order);
        }
        return QSeries(exponent, std::vector<C>{c}, order);
    }

    int offset() const noexcept { return offset_; }
    int order() const noexcept { return order_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    const std::vector<C> &coeffs() const noexcept { return coeffs_; }

    // Coefficient of q^n; zero below the offset.
    C coeff(int n) const
    {
        if (n > order_) {
            throw OrderExceeded("coefficient of q^" + std::to_string(n) + " requested from a series known to order " +
                                std::to_string(order_));
        }
        return n < offset_ ? C(0) : coeffs_[static_cast<std::size_t>(n - offset_)];
    }

    QSeries truncated(int order) const
    {
        if (order >= order_) {
            return *this;
        }
        if (order < offset_) {
            return QSeries(order);
        }
        std::vector<C> c(coeffs_.begin(), coeffs_.begin() + (order - offset_ + 1));
        return QSeries(offset_, std::move(c), order);
    }

    // Multiplication by q^e.
    QSeries shifted(int e) const
    {
        QSeries r = *this;
        r.offset_ += e;
        r.order_ += e;
        return r;
    }

    QSeries &operator+=(const QSeries &o) { return accumulate(o, false); }
    QSeries &operator-=(const QSeries &o) { return accumulate(o, true); }

    QSeries &operator*=(const C &s)
    {
        if (ring_traits<C>::is_zero(s)) {
            coeffs_.clear();
            offset_ = order_ + 1;
            return *this;
        }
        for (auto &c : coeffs_) {
            c = c * s;
        }
        normalise();
        return *this;
    }

    QSeries &scale(const Rational &s)
    {
        if (s.is_zero()) {
            coeffs_.clear();
            offset_ = order_ + 1;
            return *this;
        }
        for (auto &c : coeffs_) {
            detail::scale_by(c, s);
        }
        return *this;
    }

    // *this *= (1 - c q^k) with k >= 0, in place; the order is unchanged.
    QSeries &mul_binomial(const C &c, int k)
    {
        if (k < 0) {
            throw NegativeOrderArgument("binomial factor with negative q-exponent");
        }
        if (k == 0) {
            return (*this *= (C(1) - c));
        }
        const long n = static_cast<long>(coeffs_.size());
        for (long j = n - 1; j >= k; --j) {
            if (!ring_traits<C>::is_zero(coeffs_[static_cast<std::size_t>(j - k)])) {
                coeffs_[static_cast<std::size_t>(j)] -= c * coeffs_[static_cast<std::size_t>(j - k)];
            }
        }
        normalise();
        return *this;
    }

    friend QSeries operator+(QSeries a, const QSeries &b) { return a += b; }
    friend QSeries operator-(QSeries a, const QSeries &b) { return a -= b; }
    friend QSeries operator-(QSeries a)
    {
        for (auto &c : a.coeffs_) {
            c = -c;
        }
        return a;
    }
    friend QSeries operator*(QSeries a, const C &s) { return a *= s; }
    friend QSeries operator*(const C &s, QSeries a) { return a *= s; }

    friend QSeries operator*(const QSeries &x, const QSeries &y) { return multiply(x, y); }
    QSeries &operator*=(const QSeries &o) { return *this = multiply(*this, o); }

    // Structural equality: same order and same coefficients.
    friend bool operator==(const QSeries &, const QSeries &) = default;

private:
    static QSeries multiply(const QSeries &x, const QSeries &y)
    {
        const int order = std::min(x.order_ + y.offset_, y.order_ + x.offset_);
        if (x.is_zero() || y.is_zero()) {
            return QSeries(order);
        }
        const int off = x.offset_ + y.offset_;
        const long len = static_cast<long>(order) - off + 1;
        if (len <= 0) {
            return QSeries(order);
        }
        const auto n = static_cast<std::size_t>(len);
        if constexpr (std::is_same_v<C, LaurentPoly>) {
            // Gather every partial product per exponent, canonicalise once.
            std::vector<std::vector<LaurentPoly::Term>> acc(n);
            for (std::size_t i = 0; i < x.coeffs_.size() && i < n; ++i) {
                const auto &xi = x.coeffs_[i];
                if (xi.is_zero()) {
                    continue;
                }
                for (std::size_t j = 0; j < y.coeffs_.size() && i + j < n; ++j) {
                    const auto &yj = y.coeffs_[j];
                    for (const auto &[mx, cx] : xi.terms()) {
                        for (const auto &[my, cy] : yj.terms()) {
                            acc[i + j].emplace_back(mx * my, cx * cy);
                        }
                    }
                }
            }
            std::vector<C> out(n);
            for (std::size_t k = 0; k < n; ++k) {
                out[k] = LaurentPoly::from_terms(std::move(acc[k]));
            }
            return QSeries(off, std::move(out), order);
        } else {
            std::vector<C> out(n, C(0));
            for (std::size_t i = 0; i < x.coeffs_.size() && i < n; ++i) {
                const auto &xi = x.coeffs_[i];
                if (ring_traits<C>::is_zero(xi)) {
                    continue;
                }
                for (std::size_t j = 0; j < y.coeffs_.size() && i + j < n; ++j) {
                    out[i + j] += xi * y.coeffs_[j];
                }
            }
            return QSeries(off, std::move(out), order);
        }
    }

    QSeries &accumulate(const QSeries &o, bool subtract)
    {
        const int order = std::min(order_, o.order_);
        if (order < order_) {
            *this = truncated(order);
        }
        if (o.is_zero() || o.offset_ > order) {
            order_ = order;
            normalise();
            return *this;
        }
        if (is_zero()) {
            *this = subtract ? -o.truncated(order) : o.truncated(order);
            return *this;
        }
        order_ = order;
        if (o.offset_ < offset_) {
            coeffs_.insert(coeffs_.begin(), static_cast<std::size_t>(offset_ - o.offset_), C(0));
            offset_ = o.offset_;
        }
        const int last = std::min(order, o.order_);
        for (int e = o.offset_; e <= last; ++e) {
            auto &dst = coeffs_[static_cast<std::size_t>(e - offset_)];
            const auto &src = o.coeffs_[static_cast<std::size_t>(e - o.offset_)];
            if (subtract) {
                dst -= src;
            } else {
                dst += src;
            }
        }
        normalise();
        return *this;
    }

    void normalise()
    {
        std::size_t lead = 0;
        while (lead < coeffs_.size() && ring_traits<C>::is_zero(coeffs_[lead])) {
            ++lead;
        }
        if (lead == coeffs_.size()) {
            coeffs_.clear();
            offset_ = order_ + 1;
            return;
        }
        if (lead > 0) {
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
            offset_ += static_cast<int>(lead);
        }
    }

    int offset_;
    int order_;
    std::vector<C> coeffs_;
};

template <typename C>
QSeries<C> qs_add(const QSeries<C> &x, const QSeries<C> &y)
{
    return x + y;
}

template <typename C>
QSeries<C> qs_mul(const QSeries<C> &x, const QSeries<C> &y)
{
    return x * y;
}

template <typename C>
C qs_coeff(const QSeries<C> &x, int n)
{
    return x.coeff(n);
}

// Multiplicative inverse. The lowest coefficient must be a unit of the ring;
// for x = q^o (a_0 + a_1 q + ...) known to order K the result is known to
// order K - 2o.
template <typename C>
QSeries<C> qs_inv(const QSeries<C> &x)
{
    if (x.is_zero()) {
        throw NonUnitLeading("inverse of a series that vanishes to order " + std::to_string(x.order()));
    }
    const auto inv0 = ring_traits<C>::inverse(x.coeffs().front());
    if (!inv0) {
        throw NonUnitLeading("lowest coefficient " + ring_traits<C>::str(x.coeffs().front()) + " is not invertible");
    }
    const int o = x.offset();
    const int rel = x.order() - o;
    const auto &a = x.coeffs();
    std::vector<C> b(static_cast<std::size_t>(rel + 1), C(0));
    b[0] = *inv0;
    for (int n = 1; n <= rel; ++n) {
        C acc(0);
        for (int k = 1; k <= n && k < static_cast<int>(a.size()); ++k) {
            if (!ring_traits<C>::is_zero(a[static_cast<std::size_t>(k)])) {
                acc += a[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(n - k)];
            }
        }
        b[static_cast<std::size_t>(n)] = -(acc * *inv0);
    }
    return QSeries<C>(-o, std::move(b), rel - o);
}

template <typename C>
struct Mismatch {
    int exponent;
    C lhs;
    C rhs;
};

template <typename C>
struct EqualityResult {
    bool equal = true;
    std::optional<Mismatch<C>> mismatch;
    explicit operator bool() const noexcept { return equal; }
};

// Coefficientwise comparison through q^K, reporting the first mismatch.
template <typename C>
EqualityResult<C> qs_eq_upto(const QSeries<C> &x, const QSeries<C> &y, int K)
{
    if (K > x.order() || K > y.order()) {
        throw OrderExceeded("comparison to order " + std::to_string(K) + " exceeds known orders " +
                            std::to_string(x.order()) + " and " + std::to_string(y.order()));
    }
    for (int e = std::min(x.offset(), y.offset()); e <= K; ++e) {
        C cx = x.coeff(e);
        C cy = y.coeff(e);
        if (!(cx == cy)) {
            return {false, Mismatch<C>{e, std::move(cx), std::move(cy)}};
        }
    }
    return {};
}

// Applies f to every coefficient, producing a series over the ring of f's result.
template <typename C, typename F>
auto map_coeffs(const QSeries<C> &x, F f)
{
    using D = std::decay_t<std::invoke_result_t<F, const C &>>;
    std::vector<D> out;
    out.reserve(x.coeffs().size());
    for (const auto &c : x.coeffs()) {
        out.push_back(f(c));
    }
    return QSeries<D>(x.offset(), std::move(out), x.order());
}

inline QSeries<LaurentPoly> qs_euler(const QSeries<LaurentPoly> &x, VarId v)
{
    return map_coeffs(x, [v](const LaurentPoly &p) { return lp_euler(p, v); });
}

inline QSeries<LaurentPoly> qs_subst_unit(const QSeries<LaurentPoly> &x, VarId v, int sign)
{
    return map_coeffs(x, [v, sign](const LaurentPoly &p) { return lp_subst_unit(p, v, sign); });
}

inline QSeries<LaurentPoly> to_laurent(const QSeries<Rational> &x)
{
    return map_coeffs(x, [](const Rational &c) { return LaurentPoly(c); });
}

namespace detail
{

inline std::string q_power(int k)
{
    if (k == 0) {
        return "";
    }
    return k == 1 ? "q" : "q^" + std::to_string(k);
}

inline void append_term(std::string &out, const Rational &c, int k)
{
    const bool neg = c.sign() < 0;
    const Rational mag = neg ? -c : c;
    if (out.empty()) {
        out += neg ? "-" : "";
    } else {
        out += neg ? " - " : " + ";
    }
    if (k == 0) {
        out += mag.str();
    } else if (mag.is_one()) {
        out += q_power(k);
    } else {
        out += mag.str() + "*" + q_power(k);
    }
}

inline void append_term(std::string &out, const LaurentPoly &c, int k)
{
    if (!out.empty()) {
        out += " + ";
    }
    out += ring_traits<LaurentPoly>::str(c);
    if (k != 0) {
        out += "*" + q_power(k);
    }
}

} // namespace detail

// Ascending exponents, rationals as p/r, Laurent coefficients parenthesised,
// closed by the truncation marker O(q^{order+1}).
template <typename C>
std::string to_string(const QSeries<C> &x)
{
    std::string out;
    for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
        const auto &c = x.coeffs()[i];
        if (!ring_traits<C>::is_zero(c)) {
            detail::append_term(out, c, x.offset() + static_cast<int>(i));
        }
    }
    const std::string tail = "O(q^" + std::to_string(x.order() + 1) + ")";
    return out.empty() ? tail : out + " + " + tail;
}

template <typename C>
std::ostream &operator<<(std::ostream &os, const QSeries<C> &x)
{
    return os << to_string(x);
}

} // namespace qidx
