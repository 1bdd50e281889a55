#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "constructors.hpp"
#include "errors.hpp"
#include "numtheory.hpp"
#include "qseries.hpp"
#include "specialization.hpp"

// Registry of checkable identities. Each identity is a pair of side builders
// in division-free form plus validity constraints on the parameter exponents.

namespace qidx
{

inline constexpr std::string_view param_names = "abcdz";

inline std::size_t param_index(char p)
{
    const auto i = param_names.find(p);
    if (i == std::string_view::npos) {
        throw UnboundParameter(std::string("unknown parameter '") + p + "'");
    }
    return i;
}

// Symbolic unit carried by a parameter; z shares tau_a (no identity uses both).
inline VarId unit_for(char p)
{
    switch (p) {
    case 'b':
        return VarId::b;
    case 'c':
        return VarId::c;
    case 'd':
        return VarId::d;
    default:
        return VarId::a;
    }
}

struct ParamAssignment {
    std::map<char, SpecMonomial> values;
    BaseScale base{1};

    const SpecMonomial &at(char p) const
    {
        auto it = values.find(p);
        if (it == values.end()) {
            throw UnboundParameter(std::string("parameter '") + p + "' is not assigned");
        }
        return it->second;
    }
    bool has(char p) const { return values.count(p) != 0; }

    bool symbolic(std::string_view used) const
    {
        return std::any_of(used.begin(), used.end(), [&](char p) { return has(p) && at(p).is_symbolic(); });
    }

    // "a=-q^1,b=~q^2", in parameter order.
    std::string str() const
    {
        std::string out;
        for (const auto &[name, v] : values) {
            if (!out.empty()) {
                out += ',';
            }
            out += name;
            out += '=';
            out += v.str();
        }
        return out;
    }
};

template <typename C>
struct Sides {
    QSeries<C> lhs;
    QSeries<C> rhs;
};

using AnySides = std::variant<Sides<Rational>, Sides<LaurentPoly>>;

// A linear form in the parameter orders, constrained relative to the base m.
struct Constraint {
    enum class Kind {
        open,   // 0 < L < m
        closed, // 0 <= L <= m
    };

    std::string form;
    std::array<int, 5> coeffs{};
    Kind kind = Kind::open;
    // For open forms: L = 0 or L = m is tolerated when the product of the
    // parameters in the form is not exactly +q^L (no 1 - 1 factor arises).
    bool boundary_if_not_plus = false;

    int value(const ParamAssignment &p) const
    {
        int L = 0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs[i] != 0) {
                L += coeffs[i] * p.at(param_names[i]).qexp;
            }
        }
        return L;
    }

    SpecMonomial product(const ParamAssignment &p) const
    {
        SpecMonomial u;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs[i] != 0) {
                u = u * p.at(param_names[i]).pow(coeffs[i]);
            }
        }
        return u;
    }

    // Strict interior used for sampling; non-strict admits the documented boundary.
    bool satisfied(const ParamAssignment &p, bool strict = false) const
    {
        const int L = value(p), m = p.base.m();
        if (L > 0 && L < m) {
            return true;
        }
        if (strict || L < 0 || L > m) {
            return false;
        }
        if (kind == Kind::closed) {
            return true;
        }
        return boundary_if_not_plus && !product(p).is_plus();
    }

    std::string str() const
    {
        if (kind == Kind::closed) {
            return "0 <= ord(" + form + ") <= m";
        }
        return "0 < ord(" + form + ") < m" + (boundary_if_not_plus ? " (= 0 or m if " + form + " != +q^ord)" : "");
    }
};

namespace detail
{

inline Constraint make_constraint(std::string form, Constraint::Kind kind = Constraint::Kind::open,
                                  bool boundary = false)
{
    Constraint c;
    for (char ch : form) {
        if (ch != '+') {
            c.coeffs[param_index(ch)] += 1;
        }
    }
    c.form = std::move(form);
    c.kind = kind;
    c.boundary_if_not_plus = boundary;
    return c;
}

inline std::vector<Constraint> each_open(std::string_view params)
{
    std::vector<Constraint> out;
    for (char p : params) {
        out.push_back(make_constraint(std::string(1, p)));
    }
    return out;
}

} // namespace detail

enum class Mode {
    standard,      // signed and symbolic-unit specialisations
    symbolic_only, // needs symbolic units (Euler-operator routes)
    fixed,         // no parameters; base ignored
};

inline const char *mode_name(Mode m)
{
    switch (m) {
    case Mode::standard:
        return "signed+symbolic";
    case Mode::symbolic_only:
        return "symbolic";
    default:
        return "fixed";
    }
}

struct IdentityDescriptor {
    std::string id;
    std::string title;
    std::string params;
    std::vector<Constraint> constraints;
    Mode mode = Mode::standard;
    // Parameter units that must be symbolic in symbolic_only mode.
    std::string symbolic_params;
    // Printed form; a mismatch points at the source text, not at
    // the parent identity (its substitution-derived twin carries that).
    bool transcription = false;
    // Substitutions used in the source, kept as regression specs.
    std::vector<ParamAssignment> fixed_specs;
    std::function<Sides<Rational>(const ParamAssignment &, int)> build_rational;
    std::function<Sides<LaurentPoly>(const ParamAssignment &, int)> build_laurent;
};

namespace detail
{

// Shorthands over a fixed base and target order.
template <typename C>
struct Builder {
    using coeff_type = C;

    BaseScale base;
    int N;

    SpecMonomial qm() const { return SpecMonomial::q_power(base.m()); }
    static SpecMonomial qp(int e, int sign = 1) { return SpecMonomial::q_power(e, sign); }

    QSeries<C> constant(const Rational &c) const { return QSeries<C>::constant(C(c), N); }
    QSeries<C> l(const SpecMonomial &x) const { return l_func<C>(x, base, N); }
    QSeries<C> ld(const SpecMonomial &x) const { return l_derivative<C>(x, base, N); }
    QSeries<C> f(const SpecMonomial &a, const SpecMonomial &b) const { return jordan_kronecker<C>(a, b, base, N); }

    QSeries<C> lam(const SpecMonomial &M, const SpecMonomial &x, int s, const AffineWeight &W, int r0) const
    {
        return generalized_lambert<C>(M, x, s, W, r0, base, N);
    }
    // sum_{r >= r0} W(r) q^{mr + j}/(1 - q^{mr + j})^s, in base q^mod.
    QSeries<C> S(int j, int mod, int s = 1, AffineWeight W = AffineWeight::constant(Rational(1)), int r0 = 0,
                 int sign = 1) const
    {
        return generalized_lambert<C>(SpecMonomial::one(), qp(j, sign), s, W, r0, BaseScale(mod), N);
    }

    // sum_{r >= 1} q^{mr}/(1 - q^{mr})^2
    QSeries<C> g2() const { return lam(SpecMonomial::one(), SpecMonomial::one(), 2, AffineWeight{}, 1); }

    // sum_{r >= 1} M^r q^{mr}/(1 - q^{mr})^2
    QSeries<C> g2_weighted(const SpecMonomial &M) const { return lam(M, SpecMonomial::one(), 2, AffineWeight{}, 1); }

    // sum_{r>=1} (b^r + b^-r + c^r + c^-r - (bc)^r - (bc)^-r - 2) q^{mr}/(1 - q^{mr})^2
    QSeries<C> mixed_block(const SpecMonomial &b, const SpecMonomial &c) const
    {
        const SpecMonomial bc = b * c;
        QSeries<C> s = g2_weighted(b) + g2_weighted(b.inverse()) + g2_weighted(c) + g2_weighted(c.inverse());
        s -= g2_weighted(bc);
        s -= g2_weighted(bc.inverse());
        s -= g2().scale(Rational(2));
        return s;
    }

    // x * series, the series built to order N - ord(x).
    template <typename F>
    QSeries<C> times(const SpecMonomial &x, F &&inner) const
    {
        return prefactor_times<C>(x, Rational(1), N, std::forward<F>(inner));
    }

    QSeries<C> pochs(std::initializer_list<SpecMonomial> xs) const
    {
        QSeries<C> s = QSeries<C>::one(N);
        for (const auto &x : xs) {
            mul_poch(s, x, base);
        }
        return s;
    }
    QSeries<C> &mul_pochs(QSeries<C> &s, std::initializer_list<SpecMonomial> xs) const
    {
        for (const auto &x : xs) {
            mul_poch(s, x, base);
        }
        return s;
    }
};

inline QSeries<Rational> scaled(QSeries<Rational> s, const Rational &c) { return s.scale(c); }
inline QSeries<LaurentPoly> scaled(QSeries<LaurentPoly> s, const Rational &c) { return s.scale(c); }

// Pieces of the parent identities, reused by the substitution twins.

// 1 + l(a) + l(b) + l(c) - l(abc)
template <typename C>
QSeries<C> thm1_lambert(const Builder<C> &B, const SpecMonomial &a, const SpecMonomial &b, const SpecMonomial &c)
{
    QSeries<C> s = B.constant(Rational(1)) + B.l(a) + B.l(b) + B.l(c);
    s -= B.l(a * b * c);
    return s;
}

// (q)^2 (ab)(a^-1 b^-1 q)(ac)(a^-1 c^-1 q)(bc)(b^-1 c^-1 q)
template <typename C>
QSeries<C> thm1_numerator(const Builder<C> &B, const SpecMonomial &a, const SpecMonomial &b, const SpecMonomial &c)
{
    const auto qm = B.qm();
    return B.pochs({qm, qm, a * b, (a * b).inverse() * qm, a * c, (a * c).inverse() * qm, b * c,
                    (b * c).inverse() * qm});
}

// s * (a)(a^-1 q)(b)(b^-1 q)(c)(c^-1 q)(abc)(a^-1 b^-1 c^-1 q)
template <typename C>
QSeries<C> thm1_times_denominator(const Builder<C> &B, QSeries<C> s, const SpecMonomial &a, const SpecMonomial &b,
                                  const SpecMonomial &c)
{
    const auto qm = B.qm();
    const auto abc = a * b * c;
    B.mul_pochs(s, {a, a.inverse() * qm, b, b.inverse() * qm, c, c.inverse() * qm, abc, abc.inverse() * qm});
    return s;
}

// {l(b) - l(bc)}{l(c) - l(bc)}
template <typename C>
QSeries<C> thm2_lhs(const Builder<C> &B, const SpecMonomial &b, const SpecMonomial &c)
{
    const auto lbc = B.l(b * c);
    return (B.l(b) - lbc) * (B.l(c) - lbc);
}

// bc/(1-bc)^2 + sum_{r>=1} r((bc)^r + (bc)^-r) q^r/(1-q^r) + mixed block
template <typename C>
QSeries<C> thm2_rhs(const Builder<C> &B, const SpecMonomial &b, const SpecMonomial &c)
{
    const auto bc = b * c;
    const auto one = SpecMonomial::one();
    const auto r = AffineWeight::linear(Rational(1));
    return term_series<C>(bc, 2, B.N) + B.lam(bc, one, 1, r, 1) + B.lam(bc.inverse(), one, 1, r, 1) +
           B.mixed_block(b, c);
}

// {1/2 + l(b) + l(c) - l(bc)}^2
template <typename C>
QSeries<C> thm3_lhs(const Builder<C> &B, const SpecMonomial &b, const SpecMonomial &c)
{
    QSeries<C> s = B.constant(Rational(1, 2)) + B.l(b) + B.l(c);
    s -= B.l(b * c);
    return s * s;
}

// 1/4 + b l'(b) + c l'(c) + bc l'(bc) - 6 sum q^r/(1-q^r)^2
template <typename C>
QSeries<C> thm3_rhs(const Builder<C> &B, const SpecMonomial &b, const SpecMonomial &c)
{
    QSeries<C> s = B.constant(Rational(1, 4)) + B.ld(b) + B.ld(c) + B.ld(b * c);
    s -= B.g2().scale(Rational(6));
    return s;
}

template <typename C>
QSeries<C> twelve_lhs(const Builder<C> &B, const SpecMonomial &a, const SpecMonomial &b, const SpecMonomial &c,
                      const SpecMonomial &d)
{
    const auto la = B.l(a), lb = B.l(b), lc = B.l(c), ld = B.l(d), lab = B.l(a * b), lcd = B.l(c * d);
    QSeries<C> first = la + lb - lc - ld - lab + lcd;
    QSeries<C> second = B.constant(Rational(1)) + la + lb + lc + ld - lab - lcd;
    return first * second;
}

template <typename C>
QSeries<C> twelve_rhs(const Builder<C> &B, const SpecMonomial &a, const SpecMonomial &b, const SpecMonomial &c,
                      const SpecMonomial &d)
{
    return B.ld(a) + B.ld(b) + B.ld(a * b) - B.ld(c) - B.ld(d) - B.ld(c * d);
}

// Printed sides, all in plain q.

// 1/2 + sum_{r>=0} {[7r+3] + [7r+5] + [7r+6] - [7r+1] - [7r+2] - [7r+4]},
// [k] = q^k/(1 + q^k).
template <typename C>
QSeries<C> cor31_lambert(const Builder<C> &B)
{
    QSeries<C> s = B.constant(Rational(1, 2));
    for (int j : {3, 5, 6}) {
        s -= B.S(j, 7, 1, AffineWeight{}, 0, -1);
    }
    for (int j : {1, 2, 4}) {
        s += B.S(j, 7, 1, AffineWeight{}, 0, -1);
    }
    return s;
}

template <typename C>
QSeries<C> cor33_lambert(const Builder<C> &B)
{
    const std::pair<int, int> terms[] = {{1, 1}, {8, -1}, {2, 1}, {7, -1}, {3, 2}, {6, -2}};
    QSeries<C> s = B.constant(Rational(1));
    for (auto [j, w] : terms) {
        s += B.S(j, 9, 1, AffineWeight::constant(Rational(w)));
    }
    return s;
}

// {S1 + e2 S2 + e3 S3 + e4 S4}^2 in base 5
template <typename C>
QSeries<C> signed_square_mod5(const Builder<C> &B, std::array<int, 4> signs)
{
    QSeries<C> s(B.N);
    for (int j = 1; j <= 4; ++j) {
        s += B.S(j, 5, 1, AffineWeight::constant(Rational(signs[static_cast<std::size_t>(j - 1)])));
    }
    return s * s;
}

// Right side shared by both mod-5 corollaries:
//   [p]_2 + [q]_2 + sum_{r>=1}(2r[u] - r[v]) + sum_{r>=0}(2(r+1)[w] - (r+1)[x]) - 2 sum_{r>=1}[5r]
template <typename C>
QSeries<C> mod5_rhs(const Builder<C> &B, int p, int q, int u, int v, int w, int x)
{
    const auto lin = [](long a, long b) { return AffineWeight::linear(Rational(a), Rational(b)); };
    QSeries<C> s = B.S(p, 5, 2) + B.S(q, 5, 2);
    s += B.S(u, 5, 1, lin(2, 0), 1);
    s -= B.S(v, 5, 1, lin(1, 0), 1);
    s += B.S(w, 5, 1, lin(2, 2), 0);
    s -= B.S(x, 5, 1, lin(1, 1), 0);
    s -= B.S(0, 5, 1, AffineWeight::constant(Rational(2)), 1);
    return s;
}

template <typename C>
QSeries<C> cor36_lhs(const Builder<C> &B)
{
    QSeries<C> first = B.S(1, 5) - B.S(4, 5);
    QSeries<C> second = B.S(2, 5) - B.S(3, 5);
    return first * second;
}

template <typename C>
QSeries<C> cor36_rhs(const Builder<C> &B)
{
    const auto r = AffineWeight::linear(Rational(1));
    QSeries<C> sq = B.S(1, 5, 2) - B.S(2, 5, 2) - B.S(3, 5, 2) + B.S(4, 5, 2);
    QSeries<C> lin1 = B.S(2, 5, 1, r, 1) - B.S(1, 5, 1, r, 1);
    QSeries<C> lin2 = B.S(3, 5, 1, r, 1) - B.S(4, 5, 1, r, 1);
    QSeries<C> s = scaled(sq, Rational(1, 4)) + scaled(lin1, Rational(3, 4)) + scaled(lin2, Rational(3, 4));
    s -= scaled(B.S(1, 5), Rational(1, 4));
    s -= scaled(B.S(4, 5), Rational(1, 2));
    s += scaled(B.S(3, 5), Rational(3, 4));
    return s;
}

template <typename C>
QSeries<C> cor37_lhs(const Builder<C> &B)
{
    QSeries<C> s = B.constant(Rational(1, 2));
    const int signs[] = {1, 1, -1, 1, -1, -1};
    for (int j = 1; j <= 6; ++j) {
        s += B.S(j, 7, 1, AffineWeight::constant(Rational(signs[j - 1])));
    }
    return s * s;
}

template <typename C>
QSeries<C> cor37_rhs(const Builder<C> &B)
{
    QSeries<C> s = B.constant(Rational(1, 4)) + B.S(0, 1, 1, AffineWeight::linear(Rational(1)), 1);
    s -= B.S(0, 7, 1, AffineWeight::linear(Rational(7)), 1);
    return s;
}

template <typename C>
QSeries<C> cor39_lhs(const Builder<C> &B)
{
    const auto chi1 = char_lambert<C>(numtheory::chi_table(1).span(), 1, B.N);
    const auto chi2 = char_lambert<C>(numtheory::chi_table(2).span(), 1, B.N);
    return chi1 * (B.constant(Rational(1)) + chi2);
}

template <typename C>
QSeries<C> cor39_rhs(const Builder<C> &B)
{
    return char_lambert<C>(numtheory::chi_table(3).span(), 2, B.N);
}

inline SpecMonomial qv(int e, int sign = 1) { return SpecMonomial::q_power(e, sign); }

inline ParamAssignment assignment(int m, std::initializer_list<std::pair<char, SpecMonomial>> vals)
{
    ParamAssignment p;
    p.base = BaseScale(m);
    for (const auto &[k, v] : vals) {
        p.values[k] = v;
    }
    return p;
}

// Wraps a generic side builder for both coefficient rings.
template <typename F>
void set_builders(IdentityDescriptor &d, F f)
{
    d.build_rational = [f](const ParamAssignment &p, int N) { return f(Builder<Rational>{p.base, N}, p); };
    d.build_laurent = [f](const ParamAssignment &p, int N) { return f(Builder<LaurentPoly>{p.base, N}, p); };
}

template <typename F>
IdentityDescriptor make_identity(std::string id, std::string title, std::string params,
                                 std::vector<Constraint> constraints, F f, Mode mode = Mode::standard,
                                 std::vector<ParamAssignment> fixed = {})
{
    IdentityDescriptor d;
    d.id = std::move(id);
    d.title = std::move(title);
    d.params = std::move(params);
    d.constraints = std::move(constraints);
    d.mode = mode;
    d.fixed_specs = std::move(fixed);
    set_builders(d, std::move(f));
    return d;
}

template <typename F>
IdentityDescriptor make_fixed(std::string id, std::string title, F f)
{
    return make_identity(std::move(id), std::move(title), "", {}, std::move(f), Mode::fixed);
}

template <typename F>
IdentityDescriptor make_printed(std::string id, std::string title, F f)
{
    auto d = make_fixed(std::move(id), std::move(title), std::move(f));
    d.transcription = true;
    return d;
}

inline std::vector<Constraint> plus(std::vector<Constraint> v, std::vector<Constraint> w)
{
    v.insert(v.end(), w.begin(), w.end());
    return v;
}

// The single symbolic unit a parameter carries.
inline VarId symbolic_var(const SpecMonomial &x, char name)
{
    int nonzero = 0;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < num_units; ++i) {
        if (x.unit.exps[i] != 0) {
            ++nonzero;
            idx = i;
        }
    }
    if (nonzero != 1 || x.unit.exps[idx] != 1) {
        throw ConstraintViolation(std::string("parameter '") + name + "' must be a single symbolic unit");
    }
    return static_cast<VarId>(idx);
}

template <typename C>
QSeries<C> euler_of(const QSeries<C> &s, VarId v)
{
    if constexpr (std::is_same_v<C, LaurentPoly>) {
        return qs_euler(s, v);
    } else {
        (void)v;
        throw ConstraintViolation("the Euler-operator route needs symbolic-unit coefficients");
    }
}

inline std::vector<IdentityDescriptor> build_registry()
{
    using detail::make_constraint;
    using K = Constraint::Kind;
    std::vector<IdentityDescriptor> reg;

    const auto a_b = each_open("ab");
    const auto a_b_ab = plus(each_open("ab"), {make_constraint("a+b", K::open, true)});
    const auto abc_sum = plus(each_open("abc"), {make_constraint("a+b+c", K::open, true)});
    const auto bc_sum = plus(each_open("bc"), {make_constraint("b+c")});

    reg.push_back(make_identity(
        "1.1", "Jacobi triple product", "z", {make_constraint("z", K::closed)},
        [](const auto &B, const ParamAssignment &p) {
            using C = typename std::decay_t<decltype(B)>::coeff_type;
            const auto z = p.at('z');
            return Sides<C>{B.pochs({B.qm(), z, z.inverse() * B.qm()}), theta_sum<C>(z, B.base, B.N)};
        },
        Mode::standard, {assignment(1, {{'z', SpecMonomial::symbolic(VarId::a, 0)}})}));

    reg.push_back(make_identity(
        "1.2", "partial fractions of 1/((z)(q/z)), cross-multiplied", "z",
        {make_constraint("z", K::open, true)},
        [](const auto &B, const ParamAssignment &p) {
            using C = typename std::decay_t<decltype(B)>::coeff_type;
            const auto z = p.at('z');
            QSeries<C> rhs = pf_sum<C>(z, B.base, B.N);
            B.mul_pochs(rhs, {z * B.qm(), z.inverse() * B.qm()});
            return Sides<C>{B.pochs({B.qm(), B.qm()}), std::move(rhs)};
        },
        Mode::standard, {assignment(1, {{'z', SpecMonomial::symbolic(VarId::a, 0)}})}));

    const std::vector<ParamAssignment> cor1_and_3 = {
        assignment(7, {{'a', qv(1, -1)}, {'b', qv(2, -1)}, {'c', qv(4, -1)}}),
        assignment(9, {{'a', qv(1)}, {'b', qv(2)}, {'c', qv(3)}}),
    };
    reg.push_back(make_identity(
        "1.3", "product form of 1 + l(a) + l(b) + l(c) - l(abc)", "abc", abc_sum,
        [](const auto &B, const ParamAssignment &p) {
            const auto a = p.at('a'), b = p.at('b'), c = p.at('c');
            using C = typename std::decay_t<decltype(B)>::coeff_type;
            return Sides<C>{thm1_numerator(B, a, b, c), thm1_times_denominator(B, thm1_lambert(B, a, b, c), a, b, c)};
        },
        Mode::standard, cor1_and_3));

    const std::vector<ParamAssignment> mod5 = {
        assignment(5, {{'b', qv(1)}, {'c', qv(1)}}),
        assignment(5, {{'b', qv(2)}, {'c', qv(2)}}),
    };
    reg.push_back(make_identity(
        "1.4", "{l(b) - l(bc)}{l(c) - l(bc)} as Lambert sums", "bc", bc_sum,
        [](const auto &B, const ParamAssignment &p) {
            using C = typename std::decay_t<decltype(B)>::coeff_type;
            return Sides<C>{thm2_lhs(B, p.at('b'), p.at('c')), thm2_rhs(B, p.at('b'), p.at('c'))};
        },
        Mode::standard, mod5));

    const auto thm3 = [](const auto &B, const ParamAssignment &p) {
        using C = typename std::decay_t<decltype(B)>::coeff_type;
        return Sides<C>{thm3_lhs(B, p.at('b'), p.at('c')), thm3_rhs(B, p.at('b'), p.at('c'))};
    };
    const std::vector<ParamAssignment> mod7 = {assignment(7, {{'b', qv(1)}, {'c', qv(2)}})};
    reg.push_back(make_identity("1.5", "{1/2 + l(b) + l(c) - l(bc)}^2 as Lambert sums", "bc", bc_sum, thm3,
                                Mode::standard, mod7));

    reg.push_back(make_identity("2.1", "f(a,b) = f(b,a)", "ab", a_b, [](const auto &B, const ParamAssignment &p) {
        using C = typename std::decay_t<decltype(B)>::coeff_type;
        return Sides<C>{B.f(p.at('a'), p.at('b')), B.f(p.at('b'), p.at('a'))};
    }));

    reg.push_back(make_identity(
        "2.2", "f(a,b) = -b^-1 f(q a^-1, b^-1)", "ab", a_b, [](const auto &B, const ParamAssignment &p) {
            using C = typename std::decay_t<decltype(B)>::coeff_type;
            const auto a = p.at('a'), b = p.at('b');
            SpecMonomial pre = b.inverse();
            pre.sign = -pre.sign;
            QSeries<C> rhs = B.times(pre, [&](int o) {
                return jordan_kronecker<C>(a.inverse() * B.qm(), b.inverse(), B.base, o);
            });
            return Sides<C>{B.f(a, b), std::move(rhs)};
        }));

    reg.push_back(make_identity(
        "2.3", "f(a,b) split into (1-ab)/((1-a)(1-b)) and two Lambert tails, cross-multiplied", "ab", a_b,
        [](const auto &B, const ParamAssignment &p) {
            using C = typename std::decay_t<decltype(B)>::coeff_type;
            const auto a = p.at('a'), b = p.at('b');
            const auto w = AffineWeight{};
            QSeries<C> lhs = B.f(a, b);
            lhs.mul_binomial(a.template coefficient<C>(), a.qexp);
            lhs.mul_binomial(b.template coefficient<C>(), b.qexp);
            QSeries<C> tails = B.lam(a, b, 1, w, 1) - B.lam(a.inverse(), b.inverse(), 1, w, 1);
            tails.mul_binomial(a.template coefficient<C>(), a.qexp);
            tails.mul_binomial(b.template coefficient<C>(), b.qexp);
            return Sides<C>{std::move(lhs), one_minus<C>(a * b, B.N) + tails};
        }));

    reg.push_back(make_identity("2.5", "a f(a, b q) = f(a, b)", "ab", a_b,
                                [](const auto &B, const ParamAssignment &p) {
                                    using C = typename std::decay_t<decltype(B)>::coeff_type;
                                    const auto a = p.at('a'), b = p.at('b');
                                    QSeries<C> lhs = B.times(a, [&](int o) {
                                        return jordan_kronecker<C>(a, b * B.qm(), B.base, o);
                                    });
                                    return Sides<C>{std::move(lhs), B.f(a, b)};
                                }));

    reg.push_back(make_identity("2.6", "a f_a(a,b) = sum n a^n/(1 - b q^n)", "ab", a_b,
                                [](const auto &B, const ParamAssignment &p) {
                                    using C = typename std::decay_t<decltype(B)>::coeff_type;
                                    const auto a = p.at('a'), b = p.at('b');
                                    QSeries<C> lhs = B.times(a, [&](int o) {
                                        return jk_partial_a<C>(a, b, B.base, o);
                                    });
                                    return Sides<C>{std::move(lhs), n_weighted_sum<C>(a, b, B.base, B.N)};
                                }));

    {
        auto d = make_identity("2.6e", "a f_a(a,b) = Euler derivative of f(a,b) in a", "ab", a_b,
                               [](const auto &B, const ParamAssignment &p) {
                                   using C = typename std::decay_t<decltype(B)>::coeff_type;
                                   const auto a = p.at('a'), b = p.at('b');
                                   QSeries<C> lhs = B.times(a, [&](int o) {
                                       return jk_partial_a<C>(a, b, B.base, o);
                                   });
                                   return Sides<C>{std::move(lhs), euler_of(B.f(a, b), symbolic_var(a, 'a'))};
                               },
                               Mode::symbolic_only);
        d.symbolic_params = "a";
        reg.push_back(std::move(d));
    }

    reg.push_back(make_identity(
        "2.7", "(q)(a)(q/a) f(a,b) = (q)^3 (ab)(q/ab)/((b)(q/b)), cross-multiplied", "ab", a_b_ab,
        [](const auto &B, const ParamAssignment &p) {
            using C = typename std::decay_t<decltype(B)>::coeff_type;
            const auto a = p.at('a'), b = p.at('b'), qm = B.qm();
            QSeries<C> lhs = B.f(a, b);
            B.mul_pochs(lhs, {qm, a, a.inverse() * qm, b, b.inverse() * qm});
            return Sides<C>{std::move(lhs), B.pochs({qm, qm, qm, a * b, (a * b).inverse() * qm})};
        }));

    reg.push_back(make_identity("2.8", "f(a,b) as a Pochhammer quotient", "ab", a_b_ab,
                                [](const auto &B, const ParamAssignment &p) {
                                    using C = typename std::decay_t<decltype(B)>::coeff_type;
                                    const auto a = p.at('a'), b = p.at('b');
                                    return Sides<C>{B.f(a, b), jk_product_form<C>(a, b, B.base, B.N)};
                                }));

    reg.push_back(make_identity("2.9", "a f_a(a,bc) = f(a,bc){l(a) - l(abc)}", "abc", abc_sum,
                                [](const auto &B, const ParamAssignment &p) {
                                    using C = typename std::decay_t<decltype(B)>::coeff_type;
                                    const auto a = p.at('a'), bc = p.at('b') * p.at('c');
                                    QSeries<C> lhs = n_weighted_sum<C>(a, bc, B.base, B.N);
                                    return Sides<C>{std::move(lhs), B.f(a, bc) * (B.l(a) - B.l(a * bc))};
                                }));

    reg.push_back(make_identity(
        "2.10", "f(a,b) f(a,c) = f(a,bc){1 + l(a) + l(b) + l(c) - l(abc)}", "abc", abc_sum,
        [](const auto &B, const ParamAssignment &p) {
            using C = typename std::decay_t<decltype(B)>::coeff_type;
            const auto a = p.at('a'), b = p.at('b'), c = p.at('c');
            return Sides<C>{B.f(a, b) * B.f(a, c), B.f(a, b * c) * thm1_lambert(B, a, b, c)};
        }));

    reg.push_back(make_identity(
        "2.11", "l(b) l(c) = l(bc){l(b) + l(c) - l(bc)} + Lambert sums", "bc", bc_sum,
        [](const auto &B, const ParamAssignment &p) {
            using C = typename std::decay_t<decltype(B)>::coeff_type;
            const auto b = p.at('b'), c = p.at('c');
            const auto lb = B.l(b), lc = B.l(c), lbc = B.l(b * c);
            QSeries<C> rhs = lbc * (lb + lc - lbc) + B.mixed_block(b, c) + B.ld(b * c);
            return Sides<C>{lb * lc, std::move(rhs)};
        }));

    const auto l_squared = [](const auto &B, const SpecMonomial &b, auto deriv) {
        using C = typename std::decay_t<decltype(B)>::coeff_type;
        const auto lb = B.l(b);
        QSeries<C> rhs = deriv(lb) - lb;
        rhs -= (B.g2_weighted(b) + B.g2_weighted(b.inverse())).scale(Rational(2));
        rhs -= B.g2().scale(Rational(2));
        return Sides<C>{lb * lb, std::move(rhs)};
    };
    reg.push_back(make_identity("2.12", "l(b)^2 = b l'(b) - l(b) - 2 sum (b^r + b^-r + 1) q^r/(1-q^r)^2", "b",
                                each_open("b"), [l_squared](const auto &B, const ParamAssignment &p) {
                                    const auto b = p.at('b');
                                    return l_squared(B, b, [&](const auto &) { return B.ld(b); });
                                }));
    {
        auto d = make_identity("2.12e", "2.12 with b l'(b) taken as the Euler derivative in b", "b", each_open("b"),
                               [l_squared](const auto &B, const ParamAssignment &p) {
                                   const auto b = p.at('b');
                                   const VarId v = symbolic_var(b, 'b');
                                   return l_squared(B, b, [v](const auto &lb) { return euler_of(lb, v); });
                               },
                               Mode::symbolic_only);
        d.symbolic_params = "b";
        reg.push_back(std::move(d));
    }

    reg.push_back(make_identity("2.13", "{1/2 + l(b) + l(c) - l(bc)}^2 (same statement as 1.5)", "bc", bc_sum,
                                thm3, Mode::standard, mod7));

    // Corollaries, as printed.
    reg.push_back(make_printed("3.1", "Ramanujan's mod-7 Lambert identity, cross-multiplied",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 const BaseScale b1(1), b7(7);
                                 QSeries<C> lhs = cor31_lambert(B).scale(Rational(2));
                                 mul_pochs(lhs, {{qv(7, -1), b7}, {qv(1, -1), b1}});
                                 return Sides<C>{std::move(lhs), poch_product<C>({{qv(7), b7}, {qv(1), b1}}, B.N)};
                             }));

    reg.push_back(make_fixed("3.2", "representations by 7a^2 + b^2 against the divisor-sum formula",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 QSeries<C> lhs(B.N), rhs(B.N);
                                 for (int n = 1; n <= B.N; ++n) {
                                     lhs += QSeries<C>::monomial(C(Rational(numtheory::rep_count(n))), n, B.N);
                                     rhs += QSeries<C>::monomial(C(Rational(numtheory::corollary2_predict(n))), n,
                                                                 B.N);
                                 }
                                 return Sides<C>{std::move(lhs), std::move(rhs)};
                             }));

    reg.push_back(make_printed("3.3", "mod-9 Lambert sum as a product, cross-multiplied",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 const BaseScale b9(9);
                                 QSeries<C> lhs = cor33_lambert(B);
                                 mul_poch(lhs, qv(1), BaseScale(1));
                                 QSeries<C> rhs = QSeries<C>::one(B.N);
                                 for (int i = 0; i < 3; ++i) {
                                     mul_pochs(rhs, {{qv(9), b9}, {qv(4), b9}, {qv(5), b9}});
                                 }
                                 return Sides<C>{std::move(lhs), std::move(rhs)};
                             }));

    reg.push_back(make_printed("3.4", "squared mod-5 Lambert sum, b = c = q",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 return Sides<C>{signed_square_mod5(B, {1, -1, 1, -1}), mod5_rhs(B, 2, 3, 1, 2, 4, 3)};
                             }));

    reg.push_back(make_printed("3.5", "squared mod-5 Lambert sum, b = c = q^2",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 return Sides<C>{signed_square_mod5(B, {1, 1, -1, -1}), mod5_rhs(B, 1, 4, 2, 4, 3, 1)};
                             }));

    reg.push_back(make_printed("3.6", "product of mod-5 Lambert sums (3.4 minus 3.5)",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 return Sides<C>{cor36_lhs(B), cor36_rhs(B)};
                             }));

    reg.push_back(make_printed("3.7", "squared mod-7 Lambert sum", [](const auto &B, const ParamAssignment &) {
        using C = typename std::decay_t<decltype(B)>::coeff_type;
        return Sides<C>{cor37_lhs(B), cor37_rhs(B)};
    }));

    reg.push_back(make_identity(
        "3.8", "difference of two squared l-combinations as Lambert sums", "abcd",
        plus(each_open("abcd"), {make_constraint("a+b"), make_constraint("c+d")}),
        [](const auto &B, const ParamAssignment &p) {
            using C = typename std::decay_t<decltype(B)>::coeff_type;
            const auto a = p.at('a'), b = p.at('b'), c = p.at('c'), d = p.at('d');
            return Sides<C>{twelve_lhs(B, a, b, c, d), twelve_rhs(B, a, b, c, d)};
        },
        Mode::standard, {assignment(13, {{'a', qv(1)}, {'b', qv(3)}, {'c', qv(2)}, {'d', qv(6)}})}));

    reg.push_back(make_printed("3.9", "mod-13 character identity", [](const auto &B, const ParamAssignment &) {
        using C = typename std::decay_t<decltype(B)>::coeff_type;
        return Sides<C>{cor39_lhs(B), cor39_rhs(B)};
    }));

    reg.push_back(make_identity("phi", "(q;q)/(-q;q) = sum (-1)^n q^{n^2}, cross-multiplied", "", {},
                                [](const auto &B, const ParamAssignment &) {
                                    using C = typename std::decay_t<decltype(B)>::coeff_type;
                                    QSeries<C> rhs = phi_minus<C>(B.base, B.N);
                                    mul_poch(rhs, SpecMonomial::q_power(B.base.m(), -1), B.base);
                                    return Sides<C>{B.pochs({B.qm()}), std::move(rhs)};
                                }));

    // Re-derived from the parent identity under the printed substitution.
    reg.push_back(make_fixed("3.1/sum", "1.3 at base 7, a=-q, b=-q^2, c=-q^4: Lambert side vs 3.1",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 const Builder<C> P{BaseScale(7), B.N};
                                 return Sides<C>{thm1_lambert(P, qv(1, -1), qv(2, -1), qv(4, -1)), cor31_lambert(B)};
                             }));
    reg.push_back(make_fixed(
        "3.1/prod", "1.3 at base 7, a=-q, b=-q^2, c=-q^4: product side vs 3.1",
        [](const auto &B, const ParamAssignment &) {
            using C = typename std::decay_t<decltype(B)>::coeff_type;
            const Builder<C> P{BaseScale(7), B.N};
            const auto a = qv(1, -1), b = qv(2, -1), c = qv(4, -1);
            const BaseScale b1(1), b7(7);
            // P_num * C_den = C_num * P_den
            QSeries<C> lhs = thm1_numerator(P, a, b, c).scale(Rational(2));
            mul_pochs(lhs, {{qv(7, -1), b7}, {qv(1, -1), b1}});
            QSeries<C> rhs = thm1_times_denominator(P, poch_product<C>({{qv(7), b7}, {qv(1), b1}}, B.N), a, b, c);
            return Sides<C>{std::move(lhs), std::move(rhs)};
        }));
    reg.push_back(make_fixed("3.3/sum", "1.3 at base 9, a=q, b=q^2, c=q^3: Lambert side vs 3.3",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 const Builder<C> P{BaseScale(9), B.N};
                                 return Sides<C>{thm1_lambert(P, qv(1), qv(2), qv(3)), cor33_lambert(B)};
                             }));
    reg.push_back(make_fixed("3.3/prod", "1.3 at base 9, a=q, b=q^2, c=q^3: product side vs 3.3",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 const Builder<C> P{BaseScale(9), B.N};
                                 const BaseScale b9(9);
                                 QSeries<C> lhs = thm1_numerator(P, qv(1), qv(2), qv(3));
                                 mul_poch(lhs, qv(1), BaseScale(1));
                                 QSeries<C> num = QSeries<C>::one(B.N);
                                 for (int i = 0; i < 3; ++i) {
                                     mul_pochs(num, {{qv(9), b9}, {qv(4), b9}, {qv(5), b9}});
                                 }
                                 return Sides<C>{std::move(lhs),
                                                 thm1_times_denominator(P, std::move(num), qv(1), qv(2), qv(3))};
                             }));

    const auto mod5_twin = [](int e, bool left) {
        return [e, left](const auto &B, const ParamAssignment &) {
            using C = typename std::decay_t<decltype(B)>::coeff_type;
            const Builder<C> P{BaseScale(5), B.N};
            const auto x = qv(e);
            if (left) {
                return Sides<C>{thm2_lhs(P, x, x),
                                e == 1 ? signed_square_mod5(B, {1, -1, 1, -1}) : signed_square_mod5(B, {1, 1, -1, -1})};
            }
            return Sides<C>{thm2_rhs(P, x, x), e == 1 ? mod5_rhs(B, 2, 3, 1, 2, 4, 3) : mod5_rhs(B, 1, 4, 2, 4, 3, 1)};
        };
    };
    reg.push_back(make_fixed("3.4/lhs", "1.4 at base 5, b = c = q: left side vs 3.4", mod5_twin(1, true)));
    reg.push_back(make_printed("3.4/rhs", "1.4 at base 5, b = c = q: right side vs 3.4", mod5_twin(1, false)));
    reg.push_back(make_fixed("3.5/lhs", "1.4 at base 5, b = c = q^2: left side vs 3.5", mod5_twin(2, true)));
    reg.push_back(make_printed("3.5/rhs", "1.4 at base 5, b = c = q^2: right side vs 3.5", mod5_twin(2, false)));

    reg.push_back(make_fixed("3.6/lhs", "1.4 at b = c = q^2 minus b = c = q: left side vs 4 x 3.6",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 const Builder<C> P{BaseScale(5), B.N};
                                 return Sides<C>{thm2_lhs(P, qv(2), qv(2)) - thm2_lhs(P, qv(1), qv(1)),
                                                 cor36_lhs(B).scale(Rational(4))};
                             }));
    reg.push_back(make_fixed("3.6/rhs", "1.4 at b = c = q^2 minus b = c = q: right side vs 4 x 3.6",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 const Builder<C> P{BaseScale(5), B.N};
                                 return Sides<C>{thm2_rhs(P, qv(2), qv(2)) - thm2_rhs(P, qv(1), qv(1)),
                                                 cor36_rhs(B).scale(Rational(4))};
                             }));

    reg.push_back(make_fixed("3.7/lhs", "1.5 at base 7, b = q, c = q^2: left side vs 3.7",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 const Builder<C> P{BaseScale(7), B.N};
                                 return Sides<C>{thm3_lhs(P, qv(1), qv(2)), cor37_lhs(B)};
                             }));
    reg.push_back(make_fixed("3.7/rhs", "1.5 at base 7, b = q, c = q^2: right side vs 3.7",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 const Builder<C> P{BaseScale(7), B.N};
                                 return Sides<C>{thm3_rhs(P, qv(1), qv(2)), cor37_rhs(B)};
                             }));

    reg.push_back(make_fixed("3.9/lhs", "3.8 at base 13, a=q, b=q^3, c=q^2, d=q^6: left side vs 3.9",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 const Builder<C> P{BaseScale(13), B.N};
                                 return Sides<C>{twelve_lhs(P, qv(1), qv(3), qv(2), qv(6)), cor39_lhs(B)};
                             }));
    reg.push_back(make_fixed("3.9/rhs", "3.8 at base 13, a=q, b=q^3, c=q^2, d=q^6: right side vs 3.9",
                             [](const auto &B, const ParamAssignment &) {
                                 using C = typename std::decay_t<decltype(B)>::coeff_type;
                                 const Builder<C> P{BaseScale(13), B.N};
                                 return Sides<C>{twelve_rhs(P, qv(1), qv(3), qv(2), qv(6)), cor39_rhs(B)};
                             }));

    return reg;
}

} // namespace detail

inline const std::vector<IdentityDescriptor> &registry()
{
    static const std::vector<IdentityDescriptor> reg = detail::build_registry();
    return reg;
}

inline const IdentityDescriptor &find_identity(std::string_view id)
{
    for (const auto &d : registry()) {
        if (d.id == id) {
            return d;
        }
    }
    throw UnknownIdentity("unknown identity '" + std::string(id) + "'");
}

struct IdentitySummary {
    std::string id;
    std::string title;
    std::string params;
    std::vector<std::string> constraints;
    std::string mode;
};

inline std::vector<IdentitySummary> list_identities()
{
    std::vector<IdentitySummary> out;
    for (const auto &d : registry()) {
        IdentitySummary s{d.id, d.title, d.params, {}, mode_name(d.mode)};
        for (const auto &c : d.constraints) {
            s.constraints.push_back(c.str());
        }
        out.push_back(std::move(s));
    }
    return out;
}

// Throws ConstraintViolation / UnboundParameter when `spec` is not admissible.
inline void validate(const IdentityDescriptor &d, const ParamAssignment &spec)
{
    for (char p : d.params) {
        spec.at(p);
    }
    for (const auto &c : d.constraints) {
        if (!c.satisfied(spec)) {
            throw ConstraintViolation("identity " + d.id + ": constraint " + c.str() + " fails for " + spec.str() +
                                      " at base " + std::to_string(spec.base.m()) + " (ord = " +
                                      std::to_string(c.value(spec)) + ")");
        }
    }
    if (d.mode == Mode::symbolic_only) {
        for (char p : d.symbolic_params) {
            detail::symbolic_var(spec.at(p), p);
        }
    }
}

// Both sides through at least q^order (unless a boundary constant shaves the
// comparable range; see check_identity).
inline AnySides build_sides(const IdentityDescriptor &d, const ParamAssignment &spec, int order)
{
    validate(d, spec);
    if (d.mode == Mode::symbolic_only || spec.symbolic(d.params)) {
        return d.build_laurent(spec, order);
    }
    return d.build_rational(spec, order);
}

inline AnySides build_sides(std::string_view id, const ParamAssignment &spec, int order)
{
    return build_sides(find_identity(id), spec, order);
}

struct CheckReport {
    enum class Status { equal, mismatch, constraint_violation };
    struct FirstMismatch {
        int exponent;
        std::string lhs;
        std::string rhs;
    };

    std::string identity;
    int base = 1;
    std::string spec;
    int order_requested = 0;
    int order_compared = 0;
    Status status = Status::equal;
    std::optional<FirstMismatch> first_mismatch;
    double runtime_ms = 0;
    std::optional<std::uint64_t> seed;
    std::string message;

    bool ok() const { return status == Status::equal; }
};

inline const char *status_name(CheckReport::Status s)
{
    switch (s) {
    case CheckReport::Status::equal:
        return "equal";
    case CheckReport::Status::mismatch:
        return "mismatch";
    default:
        return "constraint-violation";
    }
}

// Builds both sides and compares them coefficientwise. Never throws for
// constraint or pole failures; they are recorded in the report.
inline CheckReport check_identity(std::string_view id, const ParamAssignment &spec, int order,
                                  std::optional<std::uint64_t> seed = std::nullopt)
{
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep;
    rep.identity = std::string(id);
    rep.spec = spec.str();
    rep.base = spec.base.m();
    rep.order_requested = order;
    rep.seed = seed;
    try {
        const auto &d = find_identity(id);
        if (d.mode == Mode::fixed) {
            rep.base = 1;
            rep.spec.clear();
        }
        int build_order = order;
        for (int attempt = 0;; ++attempt) {
            AnySides sides = build_sides(d, spec, build_order);
            const bool done = std::visit(
                [&](auto &s) {
                    const int avail = std::min(s.lhs.order(), s.rhs.order());
                    if (avail < order && attempt < 3) {
                        build_order += order - avail;
                        return false;
                    }
                    rep.order_compared = std::min(order, avail);
                    const auto eq = qs_eq_upto(s.lhs, s.rhs, rep.order_compared);
                    if (eq) {
                        rep.status = CheckReport::Status::equal;
                    } else {
                        rep.status = CheckReport::Status::mismatch;
                        using C = typename std::decay_t<decltype(s.lhs)>::coeff_type;
                        rep.first_mismatch = CheckReport::FirstMismatch{eq.mismatch->exponent,
                                                                        ring_traits<C>::str(eq.mismatch->lhs),
                                                                        ring_traits<C>::str(eq.mismatch->rhs)};
                    }
                    return true;
                },
                sides);
            if (done) {
                break;
            }
        }
    } catch (const UnknownIdentity &) {
        throw;
    } catch (const Error &e) {
        rep.status = CheckReport::Status::constraint_violation;
        rep.order_compared = 0;
        rep.message = e.what();
    }
    rep.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

namespace detail
{

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h = (h ^ ch) * 0x100000001b3ULL;
    }
    return h;
}

// Deterministic stream; next() % n is used directly so the draws do not
// depend on the standard library's distribution implementations.
class Stream
{
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() { return state_ = splitmix64(state_); }
    std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

} // namespace detail

// Per-trial seed from (master seed, identity, trial index).
inline std::uint64_t trial_seed(std::uint64_t master, std::string_view id, std::uint64_t trial)
{
    return detail::splitmix64(master ^ detail::splitmix64(detail::fnv1a(id) + trial));
}

// Uniform draw from the strict interior of the identity's constraint set:
// exponents in [1, m-1], signs uniform in signed mode, one symbolic unit per
// parameter in symbolic mode.
inline ParamAssignment random_spec(std::string_view id, BaseScale base, std::uint64_t seed, bool symbolic = false)
{
    const auto &d = find_identity(id);
    ParamAssignment out;
    out.base = base;
    if (d.params.empty()) {
        if (d.mode == Mode::fixed) {
            out.base = BaseScale(1);
        }
        return out;
    }
    const int m = base.m();
    const std::size_t k = d.params.size();
    std::vector<std::vector<int>> admissible;
    std::vector<int> e(k, 1);
    if (m >= 2) {
        for (;;) {
            ParamAssignment probe;
            probe.base = base;
            for (std::size_t i = 0; i < k; ++i) {
                probe.values[d.params[i]] = SpecMonomial::q_power(e[i]);
            }
            if (std::all_of(d.constraints.begin(), d.constraints.end(),
                            [&](const Constraint &c) { return c.satisfied(probe, true); })) {
                admissible.push_back(e);
            }
            std::size_t i = 0;
            while (i < k && ++e[i] > m - 1) {
                e[i] = 1;
                ++i;
            }
            if (i == k) {
                break;
            }
        }
    }
    if (admissible.empty()) {
        throw EmptyConstraintSet("identity " + d.id + " has no admissible exponents at base " + std::to_string(m));
    }
    detail::Stream rng(seed ^ detail::fnv1a(id) ^ (static_cast<std::uint64_t>(m) << 32));
    const auto &pick = admissible[rng.below(admissible.size())];
    const bool as_symbolic = symbolic || d.mode == Mode::symbolic_only;
    for (std::size_t i = 0; i < k; ++i) {
        const char p = d.params[i];
        if (as_symbolic) {
            out.values[p] = SpecMonomial::symbolic(unit_for(p), pick[i]);
        } else {
            out.values[p] = SpecMonomial::q_power(pick[i], rng.below(2) == 0 ? 1 : -1);
        }
    }
    return out;
}

struct SuiteConfig {
    int order = 100;
    int symbolic_order = 40;
    int trials = 25;
    int symbolic_trials = 5;
    std::uint64_t seed = 42;
    std::vector<int> bases{5, 7, 9, 11, 13};
    unsigned threads = 0; // 0: hardware concurrency
};

struct SuiteTask {
    std::string id;
    ParamAssignment spec;
    int order;
    std::optional<std::uint64_t> seed;
};

// Fixed and source specs first, then signed trials, then symbolic trials,
// identity by identity in registry order.
inline std::vector<SuiteTask> suite_tasks(const SuiteConfig &cfg)
{
    std::vector<SuiteTask> tasks;
    for (const auto &d : registry()) {
        if (d.mode == Mode::fixed || d.params.empty()) {
            tasks.push_back({d.id, ParamAssignment{}, cfg.order, std::nullopt});
            continue;
        }
        for (const auto &spec : d.fixed_specs) {
            tasks.push_back({d.id, spec, spec.symbolic(d.params) ? cfg.symbolic_order : cfg.order, std::nullopt});
        }
        auto draw = [&](std::uint64_t index, bool symbolic) {
            const std::uint64_t s = trial_seed(cfg.seed, d.id, index);
            const BaseScale base(cfg.bases[static_cast<std::size_t>(s % cfg.bases.size())]);
            tasks.push_back({d.id, random_spec(d.id, base, s, symbolic), symbolic ? cfg.symbolic_order : cfg.order, s});
        };
        if (d.mode == Mode::standard) {
            for (int t = 0; t < cfg.trials; ++t) {
                draw(static_cast<std::uint64_t>(t), false);
            }
        }
        for (int t = 0; t < cfg.symbolic_trials; ++t) {
            draw(static_cast<std::uint64_t>(cfg.trials + t), true);
        }
    }
    return tasks;
}

// Runs tasks on worker threads; results come back in task order.
inline std::vector<CheckReport> run_checks(const std::vector<SuiteTask> &tasks, unsigned threads = 0)
{
    std::vector<CheckReport> out(tasks.size());
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            out[i] = check_identity(tasks[i].id, tasks[i].spec, tasks[i].order, tasks[i].seed);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(work);
    }
    work();
    for (auto &th : pool) {
        th.join();
    }
    return out;
}

inline std::vector<CheckReport> run_suite(const SuiteConfig &cfg)
{
    return run_checks(suite_tasks(cfg), cfg.threads);
}

} // namespace qidx
