#pragma once

#include <cstdlib>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "errors.hpp"
#include "qseries.hpp"
#include "specialization.hpp"

// Series constructors: q-Pochhammer products, theta and partial-fraction
// bilateral sums, the Jordan-Kronecker function, and Lambert families.
//
// Every constructor takes a target order N and returns a series exact through
// q^N. Bilateral and one-sided sums run over a window derived from the exact
// lowest exponent of each term; a window closes at the first term past N once
// the term orders are known to be increasing.

namespace qidx
{

struct BuildOptions {
    // Keep visiting terms past the computed window (to twice its length).
    // Used to check that the window bound is tight enough.
    bool double_window = false;
};

namespace detail
{

// Lowest exponent of v/(1-v)^s for v of q-order gamma.
inline int term_low(int gamma, int s)
{
    if (s == 1) {
        return gamma > 0 ? gamma : 0;
    }
    return gamma == 0 ? 0 : std::abs(gamma);
}

// Lowest exponent of 1/(1-v) for v of q-order gamma.
inline int recip_low(int gamma) { return gamma < 0 ? -gamma : 0; }

inline int parity_sign(long n) { return (n % 2 == 0) ? 1 : -1; }

// Visits n = first, first + step, ... . lower(n) is the exact lowest exponent
// of term n and must be increasing from index `settle` on; the scan stops at
// the first such term that starts above `order`.
template <typename Lower, typename Visit>
void scan_side(int first, int step, int settle, int order, const BuildOptions &opt, Lower lower, Visit visit)
{
    constexpr int cap = 1 << 22;
    int i = 0;
    for (;; ++i) {
        if (i > cap) {
            throw DivergentTail("summation window does not close");
        }
        const int n = first + step * i;
        if (lower(n) <= order) {
            visit(n);
        } else if (i >= settle) {
            break;
        }
    }
    if (lower(first + step * (i + 1)) <= order) {
        throw std::logic_error("summation window closed before its last contributing term");
    }
    if (opt.double_window) {
        for (int j = i; j <= 2 * i + 1; ++j) {
            visit(first + step * j);
        }
    }
}

// w * pre * inner, where inner(o) must be a power series exact through q^o.
template <typename C, typename F>
QSeries<C> prefactor_times(const SpecMonomial &pre, const Rational &w, int order, F &&inner)
{
    if (pre.qexp > order) {
        return QSeries<C>(order);
    }
    QSeries<C> s = inner(order - pre.qexp);
    C c = pre.coefficient<C>();
    detail::scale_by(c, w);
    s *= c;
    return s.shifted(pre.qexp);
}

inline void check_term_power(int s)
{
    if (s != 1 && s != 2) {
        throw std::invalid_argument("Lambert power must be 1 or 2, got " + std::to_string(s));
    }
}

} // namespace detail

// Expansion of v/(1 - v)^s for s in {1, 2}. Arguments of negative q-order go
// through the flip 1/(1 - v) = -v^-1/(1 - v^-1); at order zero only v = -1 is
// admissible and gives the constants -1/2 and -1/4.
template <typename C>
QSeries<C> term_series(const SpecMonomial &v, int s, int order)
{
    detail::check_term_power(s);
    const int g = v.qexp;
    if (g == 0) {
        if (v.is_symbolic()) {
            throw SymbolicNonUnit("v/(1-v) at an order-0 symbolic unit " + v.str() + " has no Laurent expansion");
        }
        if (v.sign > 0) {
            throw PoleError("v/(1-v) at v = 1");
        }
        return QSeries<C>::constant(C(s == 1 ? Rational(-1, 2) : Rational(-1, 4)), order);
    }
    if (g > 0) {
        if (order < g) {
            return QSeries<C>(order);
        }
        std::vector<C> c(static_cast<std::size_t>(order - g + 1), C(0));
        for (int k = 1; static_cast<long>(k) * g <= order; ++k) {
            C t = v.pow(k).template coefficient<C>();
            if (s == 2) {
                detail::scale_by(t, Rational(k));
            }
            c[static_cast<std::size_t>(k * g - g)] = std::move(t);
        }
        return QSeries<C>(g, std::move(c), order);
    }
    const int h = -g;
    const SpecMonomial w = v.inverse();
    if (s == 1) {
        // v/(1-v) = -1 - sum_{k>=1} v^-k
        if (order < 0) {
            return QSeries<C>(order);
        }
        std::vector<C> c(static_cast<std::size_t>(order + 1), C(0));
        c[0] = C(-1);
        for (int k = 1; static_cast<long>(k) * h <= order; ++k) {
            c[static_cast<std::size_t>(k * h)] = -w.pow(k).template coefficient<C>();
        }
        return QSeries<C>(0, std::move(c), order);
    }
    // v/(1-v)^2 = v^-1/(1-v^-1)^2
    return term_series<C>(w, 2, order);
}

// 1/(1 - v).
template <typename C>
QSeries<C> reciprocal(const SpecMonomial &v, int order)
{
    return QSeries<C>::one(order) + term_series<C>(v, 1, order);
}

// The polynomial 1 - x, x of nonnegative q-order.
template <typename C>
QSeries<C> one_minus(const SpecMonomial &x, int order)
{
    QSeries<C> s = QSeries<C>::one(order);
    return s.mul_binomial(x.coefficient<C>(), x.qexp);
}

// s *= (x; q^m)_inf, in place.
template <typename C>
void mul_poch(QSeries<C> &s, const SpecMonomial &x, BaseScale base)
{
    if (x.qexp < 0) {
        throw NegativeOrderArgument("Pochhammer argument " + x.str() + " has negative q-order");
    }
    if (s.is_zero()) {
        return;
    }
    const int span = s.order() - s.offset();
    const C c = x.coefficient<C>();
    for (long k = x.qexp; k <= span; k += base.m()) {
        s.mul_binomial(c, static_cast<int>(k));
    }
}

// (x; q^m)_inf. An exact +1 argument gives the zero series.
template <typename C>
QSeries<C> poch_inf(const SpecMonomial &x, BaseScale base, int order)
{
    QSeries<C> s = QSeries<C>::one(order);
    mul_poch(s, x, base);
    return s;
}

// (x; q^m)_n = prod_{i<n} (1 - x q^{mi}); (x)_0 = 1.
template <typename C>
QSeries<C> poch_fin(const SpecMonomial &x, int n, BaseScale base, int order)
{
    if (x.qexp < 0) {
        throw NegativeOrderArgument("Pochhammer argument " + x.str() + " has negative q-order");
    }
    if (n < 0) {
        throw std::invalid_argument("finite Pochhammer length must be nonnegative");
    }
    QSeries<C> s = QSeries<C>::one(order);
    const C c = x.coefficient<C>();
    for (long i = 0; i < n; ++i) {
        const long k = x.qexp + base.m() * i;
        if (k > order) {
            break;
        }
        s.mul_binomial(c, static_cast<int>(k));
    }
    return s;
}

// Product of Pochhammer symbols, each with its own base.
struct PochFactor {
    SpecMonomial x;
    BaseScale base;
};

template <typename C>
void mul_pochs(QSeries<C> &s, std::initializer_list<PochFactor> factors)
{
    for (const auto &f : factors) {
        mul_poch(s, f.x, f.base);
    }
}

template <typename C>
QSeries<C> poch_product(std::initializer_list<PochFactor> factors, int order)
{
    QSeries<C> s = QSeries<C>::one(order);
    mul_pochs(s, factors);
    return s;
}

// sum_{n in Z} (-1)^n z^n q^{m(n^2-n)/2}.
template <typename C>
QSeries<C> theta_sum(const SpecMonomial &z, BaseScale base, int order, const BuildOptions &opt = {})
{
    const long m = base.m(), e = z.qexp;
    auto expo = [&](long n) { return m * (n * n - n) / 2 + n * e; };
    auto lower = [&](int n) { return expo(n); };
    QSeries<C> acc(order);
    auto visit = [&](int n) {
        const long k = expo(n);
        if (k > order) {
            return;
        }
        SpecMonomial c = z.pow(n);
        c.sign *= detail::parity_sign(n);
        acc += QSeries<C>::monomial(c.template coefficient<C>(), static_cast<int>(k), order);
    };
    const int settle = static_cast<int>(std::abs(e) / m + 2);
    detail::scan_side(0, 1, settle, order, opt, lower, visit);
    detail::scan_side(-1, -1, settle, order, opt, lower, visit);
    return acc;
}

// Denominator-cleared partial-fraction sum
//   sum_{n in Z} (-1)^n q^{m(n^2+n)/2} (1 - z)/(1 - z q^{mn}),
// with the n = 0 term equal to 1. Satisfies
//   (q^m; q^m)^2 = pf_sum(z) (z q^m; q^m)(z^-1 q^m; q^m).
template <typename C>
QSeries<C> pf_sum(const SpecMonomial &z, BaseScale base, int order, const BuildOptions &opt = {})
{
    if (z.qexp < 0) {
        throw ConstraintViolation("pf_sum requires ord(z) >= 0, got " + z.str());
    }
    const long m = base.m(), e = z.qexp;
    auto tri = [&](long n) { return m * (n * n + n) / 2; };
    auto lower = [&](int n) { return tri(n) + detail::recip_low(static_cast<int>(e + m * n)); };
    QSeries<C> acc = QSeries<C>::one(order);
    auto visit = [&](int n) {
        if (n == 0) {
            return;
        }
        const SpecMonomial pre = SpecMonomial::q_power(static_cast<int>(tri(n)), detail::parity_sign(n));
        acc += detail::prefactor_times<C>(pre, Rational(1), order, [&](int o) {
            return one_minus<C>(z, o) * reciprocal<C>(z.times_q(static_cast<int>(m * n)), o);
        });
    };
    const int settle = static_cast<int>(e / m + 2);
    detail::scan_side(1, 1, settle, order, opt, lower, visit);
    detail::scan_side(-1, -1, settle, order, opt, lower, visit);
    return acc;
}

// The printed partial-fraction sum sum_{n in Z} (-1)^n q^{m(n^2+n)/2}/(1 - z q^{mn}).
template <typename C>
QSeries<C> pf_sum_uncleared(const SpecMonomial &z, BaseScale base, int order, const BuildOptions &opt = {})
{
    if (z.qexp < 0) {
        throw ConstraintViolation("pf_sum requires ord(z) >= 0, got " + z.str());
    }
    const long m = base.m(), e = z.qexp;
    auto tri = [&](long n) { return m * (n * n + n) / 2; };
    auto lower = [&](int n) { return tri(n) + detail::recip_low(static_cast<int>(e + m * n)); };
    QSeries<C> acc(order);
    auto visit = [&](int n) {
        const SpecMonomial pre = SpecMonomial::q_power(static_cast<int>(tri(n)), detail::parity_sign(n));
        acc += detail::prefactor_times<C>(pre, Rational(1), order, [&](int o) {
            return reciprocal<C>(z.times_q(static_cast<int>(m * n)), o);
        });
    };
    const int settle = static_cast<int>(e / m + 2);
    detail::scan_side(0, 1, settle, order, opt, lower, visit);
    detail::scan_side(-1, -1, settle, order, opt, lower, visit);
    return acc;
}

namespace detail
{

// 0 < ord(a) < m, and 1 - b q^{mn} never vanishes identically.
inline void check_jk_args(const SpecMonomial &a, const SpecMonomial &b, BaseScale base, const char *what)
{
    const int m = base.m();
    if (a.qexp <= 0 || a.qexp >= m) {
        throw ConstraintViolation(std::string(what) + " requires 0 < ord(a) < m; got ord(a) = " +
                                  std::to_string(a.qexp) + ", m = " + std::to_string(m));
    }
    if (b.qexp % m == 0 && !(b.sign < 0 && !b.is_symbolic())) {
        throw ConstraintViolation(std::string(what) + ": 1 - b q^{mn} has a pole or non-unit at order 0 for b = " +
                                  b.str());
    }
}

// Shared bilateral scan for sums of w(n) a^n / (1 - b q^{mn}).
template <typename C, typename Weight>
QSeries<C> jk_like_sum(const SpecMonomial &a, const SpecMonomial &b, BaseScale base, int order,
                       const BuildOptions &opt, Weight weight)
{
    const long m = base.m(), al = a.qexp, be = b.qexp;
    auto lower = [&](int n) { return static_cast<int>(n * al) + recip_low(static_cast<int>(be + m * n)); };
    QSeries<C> acc(order);
    auto visit = [&](int n) {
        const Rational w = weight(n);
        if (w.is_zero()) {
            return;
        }
        acc += prefactor_times<C>(a.pow(n), w, order,
                                  [&](int o) { return reciprocal<C>(b.times_q(static_cast<int>(m * n)), o); });
    };
    const int settle = static_cast<int>(std::abs(be) / m + 2);
    scan_side(0, 1, settle, order, opt, lower, visit);
    scan_side(-1, -1, settle, order, opt, lower, visit);
    return acc;
}

} // namespace detail

// Jordan-Kronecker function f(a, b) = sum_{n in Z} a^n / (1 - b q^{mn}).
template <typename C>
QSeries<C> jordan_kronecker(const SpecMonomial &a, const SpecMonomial &b, BaseScale base, int order,
                            const BuildOptions &opt = {})
{
    detail::check_jk_args(a, b, base, "jordan_kronecker");
    return detail::jk_like_sum<C>(a, b, base, order, opt, [](int) { return Rational(1); });
}

// sum_{n in Z} n a^n / (1 - x q^{mn}), which equals a * f_a(a, x).
template <typename C>
QSeries<C> n_weighted_sum(const SpecMonomial &a, const SpecMonomial &x, BaseScale base, int order,
                          const BuildOptions &opt = {})
{
    detail::check_jk_args(a, x, base, "n_weighted_sum");
    return detail::jk_like_sum<C>(a, x, base, order, opt, [](int n) { return Rational(n); });
}

// f_a(a, b) = sum_{n in Z} b^n q^{mn} / (1 - a q^{mn})^2, expanded as
// a^-1 sum_n b^n term(a q^{mn}, 2). Here b is the geometric variable.
template <typename C>
QSeries<C> jk_partial_a(const SpecMonomial &a, const SpecMonomial &b, BaseScale base, int order,
                        const BuildOptions &opt = {})
{
    const long m = base.m(), al = a.qexp, be = b.qexp;
    if (al <= 0 || al >= m || be <= 0 || be >= m) {
        throw ConstraintViolation("jk_partial_a requires 0 < ord(a), ord(b) < m; got ord(a) = " + std::to_string(al) +
                                  ", ord(b) = " + std::to_string(be) + ", m = " + std::to_string(m));
    }
    const SpecMonomial ainv = a.inverse();
    auto lower = [&](int n) {
        return static_cast<int>(-al + n * be) + detail::term_low(static_cast<int>(al + m * n), 2);
    };
    QSeries<C> acc(order);
    auto visit = [&](int n) {
        acc += detail::prefactor_times<C>(ainv * b.pow(n), Rational(1), order, [&](int o) {
            return term_series<C>(a.times_q(static_cast<int>(m * n)), 2, o);
        });
    };
    detail::scan_side(0, 1, 2, order, opt, lower, visit);
    detail::scan_side(-1, -1, 2, order, opt, lower, visit);
    return acc;
}

// f(a, b) as a quotient of Pochhammer symbols,
//   (q)^2 (ab)(a^-1 b^-1 q) / ((a)(a^-1 q)(b)(b^-1 q)), all in base q^m.
template <typename C>
QSeries<C> jk_product_form(const SpecMonomial &a, const SpecMonomial &b, BaseScale base, int order)
{
    const int m = base.m();
    const SpecMonomial ab = a * b;
    const bool inside = a.qexp > 0 && a.qexp < m && b.qexp > 0 && b.qexp < m && ab.qexp <= m;
    if (!inside || (ab.qexp == m && ab.is_plus())) {
        throw ConstraintViolation("jk_product_form requires 0 < ord(a), ord(b) < m and ord(ab) <= m "
                                  "(with ab != q^m); got a = " +
                                  a.str() + ", b = " + b.str() + ", m = " + std::to_string(m));
    }
    const SpecMonomial qm = SpecMonomial::q_power(m);
    QSeries<C> num = poch_product<C>({{qm, base}, {qm, base}, {ab, base}, {ab.inverse() * qm, base}}, order);
    QSeries<C> den = poch_product<C>({{a, base}, {a.inverse() * qm, base}, {b, base}, {b.inverse() * qm, base}}, order);
    return num * qs_inv(den);
}

// sum_{r >= r0} W(r) M^r (x q^{mr}) / (1 - x q^{mr})^s.
template <typename C>
QSeries<C> generalized_lambert(const SpecMonomial &M, const SpecMonomial &x, int s, const AffineWeight &W, int r0,
                               BaseScale base, int order, const BuildOptions &opt = {})
{
    detail::check_term_power(s);
    const long m = base.m();
    if (M.qexp + m <= 0) {
        throw DivergentTail("Lambert tail with ord(M) + m = " + std::to_string(M.qexp + m) + " does not truncate");
    }
    auto lower = [&](int r) {
        return static_cast<int>(r * static_cast<long>(M.qexp)) + detail::term_low(static_cast<int>(x.qexp + m * r), s);
    };
    QSeries<C> acc(order);
    auto visit = [&](int r) {
        const Rational w = W.at(r);
        if (w.is_zero()) {
            return;
        }
        acc += detail::prefactor_times<C>(M.pow(r), w, order, [&](int o) {
            return term_series<C>(x.times_q(static_cast<int>(m * r)), s, o);
        });
    };
    const int settle = static_cast<int>(std::max<long>(0, -static_cast<long>(x.qexp) / m + 2));
    detail::scan_side(r0, 1, settle, order, opt, lower, visit);
    return acc;
}

// Plain Lambert sum sum_{r >= r0} W(r) (x q^{mr}) / (1 - x q^{mr})^s.
template <typename C>
QSeries<C> lambert(const SpecMonomial &x, int s, const AffineWeight &W, int r0, BaseScale base, int order,
                   const BuildOptions &opt = {})
{
    return generalized_lambert<C>(SpecMonomial::one(), x, s, W, r0, base, order, opt);
}

namespace detail
{

inline void check_l_arg(const SpecMonomial &b)
{
    if (b.qexp <= 0) {
        throw ConstraintViolation("l(b) requires ord(b) > 0, got " + b.str());
    }
}

} // namespace detail

// l(b) = sum_{r>=0} b q^{mr}/(1 - b q^{mr}) - sum_{r>=1} b^-1 q^{mr}/(1 - b^-1 q^{mr}).
template <typename C>
QSeries<C> l_func(const SpecMonomial &b, BaseScale base, int order, const BuildOptions &opt = {})
{
    detail::check_l_arg(b);
    const AffineWeight one = AffineWeight::constant(Rational(1));
    return lambert<C>(b, 1, one, 0, base, order, opt) - lambert<C>(b.inverse(), 1, one, 1, base, order, opt);
}

// b * dl(b)/db, as the squared-denominator Lambert pair
//   sum_{r>=0} b q^{mr}/(1 - b q^{mr})^2 + sum_{r>=1} b^-1 q^{mr}/(1 - b^-1 q^{mr})^2.
template <typename C>
QSeries<C> l_derivative(const SpecMonomial &b, BaseScale base, int order, const BuildOptions &opt = {})
{
    detail::check_l_arg(b);
    const AffineWeight one = AffineWeight::constant(Rational(1));
    return lambert<C>(b, 2, one, 0, base, order, opt) + lambert<C>(b.inverse(), 2, one, 1, base, order, opt);
}

// sum_{r>=1} chi(r) q^r/(1 - q^r)^s for a table periodic mod k = table.size(),
// with table[0] the value on multiples of k.
template <typename C>
QSeries<C> char_lambert(std::span<const int> table, int s, int order)
{
    detail::check_term_power(s);
    if (table.empty()) {
        throw std::invalid_argument("character table must have period >= 1");
    }
    const int k = static_cast<int>(table.size());
    QSeries<C> acc(order);
    for (int j = 1; j <= k; ++j) {
        const int chi = table[static_cast<std::size_t>(j % k)];
        if (chi < -1 || chi > 1) {
            throw std::invalid_argument("character values must lie in {-1, 0, 1}");
        }
        if (chi == 0) {
            continue;
        }
        acc += lambert<C>(SpecMonomial::q_power(j), s, AffineWeight::constant(Rational(chi)), 0, BaseScale(k), order);
    }
    return acc;
}

// sum_{n in Z} (-1)^n q^{m n^2}.
template <typename C>
QSeries<C> phi_minus(BaseScale base, int order)
{
    const long m = base.m();
    QSeries<C> acc(order);
    for (long n = 0; m * n * n <= order; ++n) {
        const Rational c = n == 0 ? Rational(1) : Rational(2 * detail::parity_sign(n));
        acc += QSeries<C>::monomial(C(c), static_cast<int>(m * n * n), order);
    }
    return acc;
}

} // namespace qidx
