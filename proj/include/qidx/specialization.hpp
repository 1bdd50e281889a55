#pragma once

#include <string>

#include "coeff.hpp"
#include "errors.hpp"
#include "laurent.hpp"
#include "rational.hpp"

namespace qidx
{

// A parameter value sign * tau^unit * q^qexp. Assignments only ever use a
// plain sign or a single symbolic unit; products of parameters (ab, a^-1 q^m,
// ...) produce mixed units.
struct SpecMonomial {
    int sign = 1;
    Monomial unit{};
    int qexp = 0;

    static SpecMonomial one() { return {}; }
    static SpecMonomial q_power(int e, int sign = 1) { return {sign, Monomial{}, e}; }
    static SpecMonomial symbolic(VarId v, int e) { return {1, Monomial::unit(v), e}; }

    int ord() const noexcept { return qexp; }
    bool is_symbolic() const { return !unit.is_one(); }
    // Exactly +1 * q^qexp.
    bool is_plus() const { return sign == 1 && unit.is_one(); }

    SpecMonomial inverse() const { return {sign, unit.inverse(), -qexp}; }

    SpecMonomial pow(int k) const
    {
        return {(sign < 0 && (k % 2 != 0)) ? -1 : 1, unit.pow(k), qexp * k};
    }

    SpecMonomial times_q(int e) const { return {sign, unit, qexp + e}; }

    friend SpecMonomial operator*(const SpecMonomial &x, const SpecMonomial &y)
    {
        return {x.sign * y.sign, x.unit * y.unit, x.qexp + y.qexp};
    }

    friend bool operator==(const SpecMonomial &, const SpecMonomial &) = default;

    // Coefficient sign * tau^unit in ring C.
    template <typename C>
    C coefficient() const
    {
        return ring_traits<C>::unit(sign, unit);
    }

    // "q^2", "-q^2", "~q^2" for assignment values; mixed units print in full.
    std::string str() const
    {
        const std::string q = "q^" + std::to_string(qexp);
        if (unit.is_one()) {
            return (sign < 0 ? "-" : "") + q;
        }
        int nonzero = 0, ones = 0;
        for (int e : unit.exps) {
            nonzero += e != 0;
            ones += e == 1;
        }
        if (nonzero == 1 && ones == 1 && sign > 0) {
            return "~" + q;
        }
        return (sign < 0 ? "-" : "") + unit.str() + "*" + q;
    }
};

// Realises q -> q^m; every Pochhammer and Lambert sum runs in base q^m.
class BaseScale
{
public:
    explicit BaseScale(int m = 1) : m_(m)
    {
        if (m < 1) {
            throw ConstraintViolation("base scale must be a positive integer, got " + std::to_string(m));
        }
    }
    int m() const noexcept { return m_; }
    friend bool operator==(const BaseScale &, const BaseScale &) = default;

private:
    int m_;
};

// Weight W(r) = u * r + v on the r-th Lambert term.
struct AffineWeight {
    Rational u{0};
    Rational v{1};

    static AffineWeight constant(const Rational &v) { return {Rational(0), v}; }
    static AffineWeight linear(const Rational &u, const Rational &v = Rational(0)) { return {u, v}; }

    Rational at(long r) const { return u * Rational(r) + v; }
};

} // namespace qidx
