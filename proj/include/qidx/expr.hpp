#pragma once

#include <cctype>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "constructors.hpp"
#include "errors.hpp"
#include "identities.hpp"
#include "numtheory.hpp"
#include "qseries.hpp"
#include "specialization.hpp"

// Expression language for the command line:
//   expr   := term (('+' | '-') term)*
//   term   := unary ('*' unary)*
//   unary  := '-' unary | factor
//   factor := atom ['^' ['-'] INT]
//   atom   := NUMBER | 'q' | NAME | IDENT '(' [expr (',' expr)*] ')' | '(' expr ')'
// NUMBER is INT or INT/INT. Negation of a number or q-power and integer
// powers of plain q are folded at parse time.

namespace qidx
{

struct Expr {
    enum class Kind { number, qpower, param, call, add, sub, mul, pow, neg };

    Kind kind = Kind::number;
    Rational number{0};
    int sign = 1;     // qpower
    int exponent = 0; // qpower, pow
    std::string name; // param, call
    std::vector<Expr> args;

    friend bool operator==(const Expr &, const Expr &) = default;
};

struct FunctionInfo {
    std::string_view name;
    std::size_t min_args;
    std::size_t max_args;
};

inline constexpr FunctionInfo functions[] = {
    {"poch", 1, 2}, {"pochn", 2, 3}, {"theta", 1, 1}, {"pf", 1, 1}, {"f", 2, 2},
    {"fa", 2, 2},   {"l", 1, 1},     {"glam", 6, 6},  {"chilam", 2, 2}, {"phi", 0, 0},
};

inline const FunctionInfo *find_function(std::string_view name)
{
    for (const auto &f : functions) {
        if (f.name == name) {
            return &f;
        }
    }
    return nullptr;
}

namespace detail
{

class ExprParser
{
public:
    explicit ExprParser(std::string_view text) : s_(text) {}

    Expr parse()
    {
        Expr e = expr();
        skip();
        if (pos_ != s_.size()) {
            fail(std::string("unexpected '") + s_[pos_] + "'");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string &msg) const { throw SyntaxError(msg, pos_ + 1); }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            fail(pos_ < s_.size() ? std::string("expected '") + c + "', found '" + s_[pos_] + "'"
                                  : std::string("expected '") + c + "', found end of input");
        }
    }

    static Expr binary(Expr::Kind k, Expr x, Expr y)
    {
        Expr e;
        e.kind = k;
        e.args.push_back(std::move(x));
        e.args.push_back(std::move(y));
        return e;
    }

    Expr expr()
    {
        Expr e = term();
        for (;;) {
            if (accept('+')) {
                e = binary(Expr::Kind::add, std::move(e), term());
            } else if (accept('-')) {
                e = binary(Expr::Kind::sub, std::move(e), term());
            } else {
                return e;
            }
        }
    }

    Expr term()
    {
        Expr e = unary();
        while (accept('*')) {
            e = binary(Expr::Kind::mul, std::move(e), unary());
        }
        return e;
    }

    Expr unary()
    {
        if (accept('-')) {
            Expr e = unary();
            if (e.kind == Expr::Kind::number) {
                e.number = -e.number;
                return e;
            }
            if (e.kind == Expr::Kind::qpower) {
                e.sign = -e.sign;
                return e;
            }
            Expr n;
            n.kind = Expr::Kind::neg;
            n.args.push_back(std::move(e));
            return n;
        }
        return factor();
    }

    long integer()
    {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected an integer");
        }
        const std::string digits(s_.substr(start, pos_ - start));
        if (digits.size() > 9) {
            pos_ = start;
            fail("integer too large");
        }
        return std::stol(digits);
    }

    Expr factor()
    {
        Expr base = atom();
        if (!accept('^')) {
            return base;
        }
        const bool negative = accept('-');
        const long k = integer();
        const int e = static_cast<int>(negative ? -k : k);
        if (base.kind == Expr::Kind::qpower && base.sign == 1) {
            base.exponent *= e;
            return base;
        }
        Expr p;
        p.kind = Expr::Kind::pow;
        p.exponent = e;
        p.args.push_back(std::move(base));
        return p;
    }

    Expr atom()
    {
        skip();
        if (pos_ >= s_.size()) {
            fail("unexpected end of input");
        }
        const char ch = s_[pos_];
        if (ch == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            const std::size_t start = pos_;
            const long p = integer();
            long r = 1;
            if (pos_ < s_.size() && s_[pos_] == '/') {
                ++pos_;
                r = integer();
                if (r == 0) {
                    pos_ = start;
                    fail("zero denominator");
                }
            }
            Expr e;
            e.kind = Expr::Kind::number;
            e.number = Rational(p, r);
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                ++pos_;
            }
            const std::string name(s_.substr(start, pos_ - start));
            skip();
            const bool is_call = pos_ < s_.size() && s_[pos_] == '(';
            const FunctionInfo *fn = find_function(name);
            if (is_call) {
                if (!fn) {
                    throw UnknownFunction("unknown function '" + name + "'", start + 1);
                }
                return call(*fn, start);
            }
            if (fn) {
                fail("expected '(' after '" + name + "'");
            }
            Expr e;
            if (name == "q") {
                e.kind = Expr::Kind::qpower;
                e.exponent = 1;
                return e;
            }
            e.kind = Expr::Kind::param;
            e.name = name;
            return e;
        }
        fail(std::string("unexpected '") + ch + "'");
    }

    Expr call(const FunctionInfo &fn, std::size_t start)
    {
        expect('(');
        Expr e;
        e.kind = Expr::Kind::call;
        e.name = std::string(fn.name);
        if (!accept(')')) {
            do {
                e.args.push_back(expr());
            } while (accept(','));
            expect(')');
        }
        if (e.args.size() < fn.min_args || e.args.size() > fn.max_args) {
            const std::string want = fn.min_args == fn.max_args
                                         ? std::to_string(fn.min_args)
                                         : std::to_string(fn.min_args) + " to " + std::to_string(fn.max_args);
            throw ArityError(e.name + " takes " + want + " argument(s), got " + std::to_string(e.args.size()),
                             start + 1);
        }
        return e;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Expr parse_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

// Fully parenthesised source form; parse_expr(to_source(e)) == e.
inline std::string to_source(const Expr &e)
{
    using K = Expr::Kind;
    switch (e.kind) {
    case K::number:
        return e.number.sign() < 0 ? "(" + e.number.str() + ")" : e.number.str();
    case K::qpower: {
        const std::string q = "q^" + std::to_string(e.exponent);
        return e.sign < 0 ? "(-" + q + ")" : q;
    }
    case K::param:
        return e.name;
    case K::call: {
        std::string out = e.name + "(";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            out += (i ? ", " : "") + to_source(e.args[i]);
        }
        return out + ")";
    }
    case K::add:
        return "(" + to_source(e.args[0]) + " + " + to_source(e.args[1]) + ")";
    case K::sub:
        return "(" + to_source(e.args[0]) + " - " + to_source(e.args[1]) + ")";
    case K::mul:
        return "(" + to_source(e.args[0]) + " * " + to_source(e.args[1]) + ")";
    case K::pow:
        return "(" + to_source(e.args[0]) + ")^" + std::to_string(e.exponent);
    case K::neg:
        return "(-" + to_source(e.args[0]) + ")";
    }
    return {};
}

// Parameter specs: "a=-q^1,b=~q^2,z=-1". Signed monomials [+|-]q[^INT],
// symbolic units ~q[^INT], and the constants +1 / -1.
inline ParamAssignment parse_spec(std::string_view text, BaseScale base = BaseScale(1))
{
    ParamAssignment out;
    out.base = base;
    std::size_t pos = 0;
    auto fail = [&](const std::string &msg) -> void { throw SyntaxError("spec: " + msg, pos + 1); };
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
    };
    auto integer = [&] {
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        if (start == pos || pos - start > 9) {
            pos = start;
            fail("expected an integer");
        }
        return std::stoi(std::string(text.substr(start, pos - start)));
    };
    skip();
    if (pos == text.size()) {
        return out;
    }
    for (;;) {
        skip();
        if (pos >= text.size() || param_names.find(text[pos]) == std::string_view::npos) {
            fail("expected a parameter name (one of a, b, c, d, z)");
        }
        const char name = text[pos++];
        if (out.has(name)) {
            --pos;
            fail(std::string("parameter '") + name + "' assigned twice");
        }
        skip();
        if (pos >= text.size() || text[pos] != '=') {
            fail("expected '='");
        }
        ++pos;
        skip();
        int sign = 1;
        bool symbolic = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-' || text[pos] == '~')) {
            symbolic = text[pos] == '~';
            sign = text[pos] == '-' ? -1 : 1;
            ++pos;
        }
        skip();
        SpecMonomial v;
        if (pos < text.size() && text[pos] == 'q') {
            ++pos;
            int e = 1;
            skip();
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                skip();
                bool neg = false;
                if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
                    neg = text[pos] == '-';
                    ++pos;
                }
                e = integer();
                e = neg ? -e : e;
            }
            v = symbolic ? SpecMonomial::symbolic(unit_for(name), e) : SpecMonomial::q_power(e, sign);
        } else if (pos < text.size() && text[pos] == '1' && !symbolic) {
            ++pos;
            v = SpecMonomial::q_power(0, sign);
        } else {
            fail(symbolic ? "expected 'q' after '~'" : "expected 'q' or '1'");
        }
        out.values[name] = v;
        skip();
        if (pos == text.size()) {
            return out;
        }
        if (text[pos] != ',') {
            fail("expected ','");
        }
        ++pos;
    }
}

namespace detail
{

// c * x with x.sign folded into c.
struct Mono {
    Rational c{1};
    SpecMonomial x;
};

template <typename C>
using Value = std::variant<Mono, QSeries<C>>;

template <typename C>
class Evaluator
{
public:
    Evaluator(const ParamAssignment &spec, int order) : spec_(spec), N_(order) {}

    QSeries<C> series(const Expr &e) { return to_series(eval(e)); }

private:
    QSeries<C> to_series(const Value<C> &v) const
    {
        if (const auto *s = std::get_if<QSeries<C>>(&v)) {
            return *s;
        }
        const auto &m = std::get<Mono>(v);
        C c = m.x.template coefficient<C>();
        scale_by(c, m.c);
        return QSeries<C>::monomial(c, m.x.qexp, N_);
    }

    static Mono mono_of(SpecMonomial x)
    {
        Mono m{Rational(x.sign), x};
        m.x.sign = 1;
        return m;
    }

    static SpecMonomial monomial_arg(const Value<C> &v, const Expr &e)
    {
        const auto *m = std::get_if<Mono>(&v);
        if (!m || !(m->c == Rational(1) || m->c == Rational(-1))) {
            throw ConstraintViolation("argument " + to_source(e) + " must be a signed monomial [+|-]q^k");
        }
        SpecMonomial x = m->x;
        x.sign = m->c.sign();
        return x;
    }

    static Rational rational_arg(const Value<C> &v, const Expr &e)
    {
        const auto *m = std::get_if<Mono>(&v);
        if (!m || !m->x.unit.is_one() || m->x.qexp != 0) {
            throw ConstraintViolation("argument " + to_source(e) + " must be a number");
        }
        return m->c;
    }

    static int int_arg(const Value<C> &v, const Expr &e)
    {
        const Rational r = rational_arg(v, e);
        if (!r.is_integer() || !r.numerator().fits_sint_p()) {
            throw ConstraintViolation("argument " + to_source(e) + " must be an integer");
        }
        return static_cast<int>(r.numerator().get_si());
    }

    QSeries<C> power(QSeries<C> s, int k) const
    {
        if (k == 0) {
            return QSeries<C>::one(N_);
        }
        if (k < 0) {
            s = qs_inv(s);
            k = -k;
        }
        std::optional<QSeries<C>> r;
        while (k > 0) {
            if (k & 1) {
                r = r ? *r * s : s;
            }
            k >>= 1;
            if (k > 0) {
                s = s * s;
            }
        }
        return *r;
    }

    Value<C> eval(const Expr &e)
    {
        using K = Expr::Kind;
        switch (e.kind) {
        case K::number:
            return Mono{e.number, SpecMonomial::one()};
        case K::qpower:
            return Mono{Rational(e.sign), SpecMonomial::q_power(e.exponent)};
        case K::param:
            if (e.name.size() != 1 || param_names.find(e.name[0]) == std::string_view::npos) {
                throw UnboundParameter("unknown parameter '" + e.name + "'");
            }
            return mono_of(spec_.at(e.name[0]));
        case K::neg: {
            Value<C> v = eval(e.args[0]);
            if (auto *m = std::get_if<Mono>(&v)) {
                m->c = -m->c;
                return v;
            }
            return -std::get<QSeries<C>>(v);
        }
        case K::add:
            return to_series(eval(e.args[0])) + to_series(eval(e.args[1]));
        case K::sub:
            return to_series(eval(e.args[0])) - to_series(eval(e.args[1]));
        case K::mul: {
            Value<C> x = eval(e.args[0]), y = eval(e.args[1]);
            const auto *mx = std::get_if<Mono>(&x);
            const auto *my = std::get_if<Mono>(&y);
            if (mx && my) {
                return Mono{mx->c * my->c, mx->x * my->x};
            }
            if (mx || my) {
                const Mono &m = mx ? *mx : *my;
                QSeries<C> s = std::get<QSeries<C>>(mx ? y : x);
                C c = m.x.template coefficient<C>();
                scale_by(c, m.c);
                s *= c;
                return s.shifted(m.x.qexp);
            }
            return std::get<QSeries<C>>(x) * std::get<QSeries<C>>(y);
        }
        case K::pow: {
            Value<C> v = eval(e.args[0]);
            const int k = e.exponent;
            if (auto *m = std::get_if<Mono>(&v)) {
                if (k < 0 && m->c.is_zero()) {
                    throw PoleError("negative power of zero");
                }
                const Rational base = k < 0 ? Rational(1) / m->c : m->c;
                return Mono{pow(base, static_cast<unsigned>(k < 0 ? -k : k)), m->x.pow(k)};
            }
            return power(std::get<QSeries<C>>(v), k);
        }
        case K::call:
            return call(e);
        }
        throw std::logic_error("unhandled expression node");
    }

    Value<C> call(const Expr &e)
    {
        std::vector<Value<C>> a;
        for (const auto &arg : e.args) {
            a.push_back(eval(arg));
        }
        auto M = [&](std::size_t i) { return monomial_arg(a[i], e.args[i]); };
        auto I = [&](std::size_t i) { return int_arg(a[i], e.args[i]); };
        auto R = [&](std::size_t i) { return rational_arg(a[i], e.args[i]); };
        const BaseScale base = spec_.base;
        const std::string &n = e.name;
        if (n == "poch") {
            return poch_inf<C>(M(0), a.size() > 1 ? BaseScale(I(1)) : base, N_);
        }
        if (n == "pochn") {
            return poch_fin<C>(M(0), I(1), a.size() > 2 ? BaseScale(I(2)) : base, N_);
        }
        if (n == "theta") {
            return theta_sum<C>(M(0), base, N_);
        }
        if (n == "pf") {
            return pf_sum_uncleared<C>(M(0), base, N_);
        }
        if (n == "f") {
            return jordan_kronecker<C>(M(0), M(1), base, N_);
        }
        if (n == "fa") {
            return jk_partial_a<C>(M(0), M(1), base, N_);
        }
        if (n == "l") {
            return l_func<C>(M(0), base, N_);
        }
        if (n == "glam") {
            return generalized_lambert<C>(M(0), M(1), I(2), AffineWeight{R(3), R(4)}, I(5), base, N_);
        }
        if (n == "chilam") {
            const int which = I(0);
            if (which < 1 || which > 3) {
                throw ConstraintViolation("chilam: character index must be 1, 2 or 3");
            }
            return char_lambert<C>(numtheory::chi_table(which).span(), I(1), N_);
        }
        if (n == "phi") {
            return phi_minus<C>(base, N_);
        }
        throw UnknownFunction("unknown function '" + n + "'", 1);
    }

    const ParamAssignment &spec_;
    int N_;
};

} // namespace detail

using AnySeries = std::variant<QSeries<Rational>, QSeries<LaurentPoly>>;

// Evaluates over the Laurent ring when any assigned parameter is symbolic.
inline AnySeries eval_expr(const Expr &e, const ParamAssignment &spec, int order)
{
    if (order < 0) {
        throw std::invalid_argument("order must be nonnegative");
    }
    if (spec.symbolic(param_names)) {
        return detail::Evaluator<LaurentPoly>(spec, order).series(e);
    }
    return detail::Evaluator<Rational>(spec, order).series(e);
}

inline std::string to_string(const AnySeries &s)
{
    return std::visit([](const auto &x) { return to_string(x); }, s);
}

} // namespace qidx
