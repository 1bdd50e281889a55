#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

#include "errors.hpp"

namespace qidx
{

// Exact rational number in lowest terms with positive denominator.
class Rational
{
public:
    Rational() = default;
    Rational(long n) : value_(n) {}
    Rational(long n, long d)
    {
        if (d == 0) {
            throw std::domain_error("Rational: zero denominator");
        }
        value_ = mpq_class(n, d);
        value_.canonicalize();
    }
    explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

    // Accepts "p" or "p/r" with an optional leading sign.
    static Rational parse(std::string_view text)
    {
        mpq_class v;
        if (text.empty() || v.set_str(std::string(text), 10) != 0) {
            throw std::invalid_argument("Rational: cannot parse '" + std::string(text) + "'");
        }
        if (v.get_den() == 0) {
            throw std::domain_error("Rational: zero denominator");
        }
        return Rational(std::move(v));
    }

    const mpq_class &value() const noexcept { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }

    bool is_zero() const noexcept { return sgn(value_) == 0; }
    bool is_one() const noexcept { return value_ == 1; }
    bool is_integer() const noexcept { return value_.get_den() == 1; }
    double to_double() const { return value_.get_d(); }
    int sign() const noexcept { return sgn(value_); }

    Rational &operator+=(const Rational &o)
    {
        value_ += o.value_;
        return *this;
    }
    Rational &operator-=(const Rational &o)
    {
        value_ -= o.value_;
        return *this;
    }
    Rational &operator*=(const Rational &o)
    {
        value_ *= o.value_;
        return *this;
    }
    Rational &operator/=(const Rational &o)
    {
        if (o.is_zero()) {
            throw std::domain_error("Rational: division by zero");
        }
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational &b) { return a += b; }
    friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational &b) { return a /= b; }
    friend Rational operator-(const Rational &a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational &a, const Rational &b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational &a, const Rational &b)
    {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::string str() const { return value_.get_str(10); }

    friend std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.str(); }

private:
    mpq_class value_{0};
};

inline Rational pow(const Rational &base, unsigned exponent)
{
    Rational result(1), b = base;
    while (exponent != 0) {
        if (exponent & 1u) {
            result *= b;
        }
        b *= b;
        exponent >>= 1u;
    }
    return result;
}

inline std::string to_string(const Rational &r) { return r.str(); }

} // namespace qidx
