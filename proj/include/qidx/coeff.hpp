#pragma once

#include <optional>
#include <string>

#include "laurent.hpp"
#include "rational.hpp"

namespace qidx
{

// Coefficient-ring adaptor. A ring supplies the embedding of a signed
// symbolic unit, unit inversion, and printing.
template <typename C>
struct ring_traits;

template <>
struct ring_traits<Rational> {
    static constexpr const char *name = "Q";

    static Rational unit(int sign, const Monomial &m)
    {
        if (!m.is_one()) {
            throw RingMismatch("symbolic unit " + m.str() + " in a rational-coefficient series");
        }
        return Rational(sign);
    }
    static std::optional<Rational> inverse(const Rational &c)
    {
        if (c.is_zero()) {
            return std::nullopt;
        }
        return Rational(1) / c;
    }
    static bool is_zero(const Rational &c) { return c.is_zero(); }
    static std::string str(const Rational &c) { return c.str(); }
};

template <>
struct ring_traits<LaurentPoly> {
    static constexpr const char *name = "Q[ta,tb,tc,td]";

    static LaurentPoly unit(int sign, const Monomial &m) { return LaurentPoly(m, Rational(sign)); }
    static std::optional<LaurentPoly> inverse(const LaurentPoly &c)
    {
        auto u = lp_is_unit(c);
        if (!u) {
            return std::nullopt;
        }
        return LaurentPoly(u->first.inverse(), Rational(1) / u->second);
    }
    static bool is_zero(const LaurentPoly &c) { return c.is_zero(); }
    static std::string str(const LaurentPoly &c)
    {
        return "(" + c.str() + ")";
    }
};

template <typename C>
concept CoefficientRing = requires { ring_traits<C>::name; };

} // namespace qidx
