#include <catch_amalgamated.hpp>

#include <set>

#include <qidx/qidx.hpp>

using namespace qidx;
using QS = QSeries<Rational>;

namespace
{

SpecMonomial q(int e, int sign = 1) { return SpecMonomial::q_power(e, sign); }
SpecMonomial sym(char p, int e) { return SpecMonomial::symbolic(unit_for(p), e); }

ParamAssignment spec(int m, std::initializer_list<std::pair<char, SpecMonomial>> vals)
{
    ParamAssignment p;
    p.base = BaseScale(m);
    for (const auto &[k, v] : vals) {
        p.values[k] = v;
    }
    return p;
}

// q -> q^k on a series known through q^K gives one known through q^{kK}.
QS dilate(const QS &s, int k)
{
    if (s.is_zero()) {
        return QS(k * s.order());
    }
    std::vector<Rational> c(static_cast<std::size_t>(k * (s.order() - s.offset()) + 1), Rational(0));
    for (std::size_t i = 0; i < s.coeffs().size(); ++i) {
        c[static_cast<std::size_t>(k) * i] = s.coeffs()[i];
    }
    return QS(k * s.offset(), std::move(c), k * s.order());
}

ParamAssignment scaled(const ParamAssignment &p, int k)
{
    ParamAssignment out = p;
    out.base = BaseScale(k * p.base.m());
    for (auto &[name, v] : out.values) {
        v.qexp *= k;
    }
    return out;
}

std::string report_line(const CheckReport &r)
{
    std::string s = r.identity + " [" + r.spec + " @ m=" + std::to_string(r.base) + "] " + status_name(r.status);
    if (r.first_mismatch) {
        s += " at q^" + std::to_string(r.first_mismatch->exponent) + ": " + r.first_mismatch->lhs + " vs " +
             r.first_mismatch->rhs;
    }
    return s + " " + r.message;
}

} // namespace

TEST_CASE("registry contents", "[identities]")
{
    const auto ids = list_identities();
    CHECK(ids.size() >= 24);
    std::set<std::string> names;
    for (const auto &s : ids) {
        CHECK(names.insert(s.id).second);
    }
    for (const char *id : {"1.1", "1.2", "1.3", "1.4", "1.5", "2.1", "2.2", "2.3", "2.5", "2.6", "2.7", "2.8", "2.9",
                           "2.10", "2.11", "2.12", "2.13", "3.1", "3.3", "3.4", "3.5", "3.6", "3.7", "3.8", "3.9",
                           "phi", "3.2"}) {
        INFO(id);
        CHECK(names.count(id) == 1);
    }
    CHECK(names.count("2.4") == 0);
    CHECK_THROWS_AS(find_identity("9.9"), UnknownIdentity);
    CHECK(find_identity("3.4").transcription);
    CHECK_FALSE(find_identity("3.4/lhs").transcription);
    CHECK(find_identity("3.4/rhs").transcription);
    // stable order
    CHECK(ids.front().id == "1.1");
    CHECK(list_identities().size() == ids.size());
}

TEST_CASE("source examples", "[identities]")
{
    CHECK(check_identity("1.1", spec(1, {{'z', sym('z', 0)}}), 30).ok());
    CHECK(check_identity("1.3", spec(7, {{'a', q(1, -1)}, {'b', q(2, -1)}, {'c', q(4, -1)}}), 50).ok());
    CHECK(check_identity("3.9", ParamAssignment{}, 100).ok());
    CHECK(check_identity("2.8", spec(7, {{'a', q(1, -1)}, {'b', q(2, -1)}}), 100).ok());
    CHECK(check_identity("1.2", spec(1, {{'z', sym('z', 0)}}), 40).ok());
    CHECK(check_identity("phi", spec(3, {}), 60).ok());
}

TEST_CASE("constraint handling", "[identities]")
{
    const auto r = check_identity("1.4", spec(5, {{'b', q(6)}, {'c', q(1)}}), 20);
    CHECK(r.status == CheckReport::Status::constraint_violation);
    CHECK(r.message.find("constraint") != std::string::npos);
    CHECK_THROWS_AS(build_sides("1.4", spec(5, {{'b', q(6)}, {'c', q(1)}}), 10), ConstraintViolation);
    CHECK_THROWS_AS(build_sides("1.4", spec(5, {{'b', q(1)}}), 10), UnboundParameter);
    CHECK(check_identity("1.4", spec(5, {{'b', q(1)}}), 10).status == CheckReport::Status::constraint_violation);

    // boundary: ord(abc) = m is admitted unless abc = +q^m
    CHECK(check_identity("1.3", spec(7, {{'a', q(1)}, {'b', q(2)}, {'c', q(4, -1)}}), 40).ok());
    CHECK(check_identity("1.3", spec(7, {{'a', q(1)}, {'b', q(2)}, {'c', q(4)}}), 40).status ==
          CheckReport::Status::constraint_violation);
    CHECK(check_identity("1.2", spec(5, {{'z', q(0, -1)}}), 40).ok());
    CHECK(check_identity("1.2", spec(5, {{'z', q(5, -1)}}), 40).ok());
    CHECK(check_identity("1.1", spec(5, {{'z', q(5)}}), 40).ok());
    CHECK(check_identity("2.6e", spec(5, {{'a', q(1)}, {'b', q(2)}}), 20).status ==
          CheckReport::Status::constraint_violation);
}

TEST_CASE("random specs", "[identities]")
{
    CHECK_THROWS_AS(random_spec("1.3", BaseScale(3), 1), EmptyConstraintSet);
    CHECK_THROWS_AS(random_spec("9.9", BaseScale(5), 1), UnknownIdentity);

    const auto a = random_spec("1.3", BaseScale(9), 12345), b = random_spec("1.3", BaseScale(9), 12345);
    CHECK(a.str() == b.str());

    // Over many seeds every admissible exponent triple at m = 9 shows up,
    // including (1, 2, 3), and nothing else does.
    std::set<std::array<int, 3>> seen;
    std::set<int> signs;
    for (std::uint64_t s = 0; s < 4000; ++s) {
        const auto p = random_spec("1.3", BaseScale(9), s);
        const std::array<int, 3> e{p.at('a').qexp, p.at('b').qexp, p.at('c').qexp};
        REQUIRE(e[0] > 0);
        REQUIRE(e[1] > 0);
        REQUIRE(e[2] > 0);
        REQUIRE(e[0] + e[1] + e[2] < 9);
        seen.insert(e);
        signs.insert(p.at('a').sign);
    }
    CHECK(seen.count({1, 2, 3}) == 1);
    CHECK(seen.size() == 56);  // C(8, 3) positive triples with sum < 9
    CHECK(signs.size() == 2);

    const auto s38 = random_spec("3.8", BaseScale(7), 5);
    CHECK(s38.at('a').qexp + s38.at('b').qexp < 7);
    CHECK(s38.at('c').qexp + s38.at('d').qexp < 7);
    const auto sy = random_spec("2.10", BaseScale(7), 5, true);
    CHECK(sy.symbolic("abc"));
    CHECK(sy.at('a').str().front() == '~');
}

TEST_CASE("every standard identity on random specs", "[identities]")
{
    const std::vector<int> bases{5, 7, 9, 11, 13};
    for (const auto &d : registry()) {
        if (d.mode != Mode::standard || d.params.empty()) {
            continue;
        }
        for (int trial = 0; trial < 6; ++trial) {
            const std::uint64_t seed = trial_seed(2024, d.id, trial);
            const auto p = random_spec(d.id, BaseScale(bases[seed % bases.size()]), seed);
            const auto r = check_identity(d.id, p, 60, seed);
            INFO(report_line(r));
            CHECK(r.ok());
            CHECK(r.order_compared == 60);
        }
        const std::uint64_t seed = trial_seed(2024, d.id, 99);
        const auto p = random_spec(d.id, BaseScale(7), seed, true);
        const auto r = check_identity(d.id, p, 25, seed);
        INFO(report_line(r));
        CHECK(r.ok());
    }
}

TEST_CASE("Euler-operator routes in symbolic mode", "[identities]")
{
    for (const char *id : {"2.6e", "2.12e"}) {
        for (int trial = 0; trial < 3; ++trial) {
            const auto p = random_spec(id, BaseScale(5 + 2 * trial), trial);
            const auto r = check_identity(id, p, 30);
            INFO(report_line(r));
            CHECK(r.ok());
        }
    }
}

TEST_CASE("substitution-derived twins", "[identities]")
{
    for (const auto &d : registry()) {
        if (d.id.find('/') == std::string::npos) {
            continue;
        }
        const auto r = check_identity(d.id, ParamAssignment{}, 80);
        INFO(report_line(r));
        if (d.transcription) {
            REQUIRE(r.first_mismatch);
            CHECK(r.first_mismatch->exponent == 10);
        } else {
            CHECK(r.ok());
        }
    }
    for (const auto &d : registry()) {
        for (const auto &p : d.fixed_specs) {
            const auto r = check_identity(d.id, p, 80);
            INFO(report_line(r));
            CHECK(r.ok());
        }
    }
}

TEST_CASE("printed forms", "[identities]")
{
    for (const char *id : {"3.1", "3.3", "3.6", "3.7", "3.9", "3.2"}) {
        const auto r = check_identity(id, ParamAssignment{}, 120);
        INFO(report_line(r));
        CHECK(r.ok());
    }
    // The last sum of both mod-5 squares is printed without its weight r; the
    // mismatch first shows at q^10, where 2 sum_{r>=1} (r - 1) q^{5r}/(1 - q^{5r}) starts.
    for (const char *id : {"3.4", "3.5"}) {
        const auto r = check_identity(id, ParamAssignment{}, 60);
        INFO(report_line(r));
        REQUIRE(r.status == CheckReport::Status::mismatch);
        CHECK(r.first_mismatch->exponent == 10);
        const auto s = std::get<Sides<Rational>>(build_sides(id, ParamAssignment{}, 60));
        const auto r1 = AffineWeight::linear(Rational(1), Rational(-1));
        QS gap = generalized_lambert<Rational>(SpecMonomial::one(), SpecMonomial::one(), 1, r1, 1, BaseScale(5), 60);
        gap.scale(Rational(2));
        CHECK(qs_eq_upto(s.rhs - s.lhs, gap, 60).equal);
    }
}

TEST_CASE("the two arrangements of the l(b), l(c) product agree", "[identities]")
{
    // {l(bc) - l(b)}{l(bc) - l(c)} = l(bc)^2 - l(bc){l(b) + l(c)} + l(b) l(c)
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = random_spec("1.4", BaseScale(9), trial);
        const BaseScale B = p.base;
        const int N = 60;
        const auto b = p.at('b'), c = p.at('c');
        const QS lb = l_func<Rational>(b, B, N), lc = l_func<Rational>(c, B, N), lbc = l_func<Rational>(b * c, B, N);
        const QS lhs = (lbc - lb) * (lbc - lc);
        const QS rhs = lbc * lbc - lbc * (lb + lc) + lb * lc;
        CHECK(qs_eq_upto(lhs, rhs, N).equal);
        const auto s14 = std::get<Sides<Rational>>(build_sides("1.4", p, N));
        const auto s211 = std::get<Sides<Rational>>(build_sides("2.11", p, N));
        CHECK(qs_eq_upto(s14.lhs, lhs, N).equal);
        CHECK(check_identity("1.4", p, N).ok() == check_identity("2.11", p, N).ok());
        CHECK(qs_eq_upto(s211.lhs, lb * lc, N).equal);
    }
}

TEST_CASE("scale covariance q -> q^2", "[identities]")
{
    for (const char *id : {"1.3", "2.10", "1.4"}) {
        for (int trial = 0; trial < 3; ++trial) {
            const auto p = random_spec(id, BaseScale(7), trial);
            const auto p2 = scaled(p, 2);
            INFO(id << " " << p.str() << " -> " << p2.str());
            const int N = 40;
            const auto s = std::get<Sides<Rational>>(build_sides(id, p, N));
            const auto s2 = std::get<Sides<Rational>>(build_sides(id, p2, 2 * N));
            CHECK(qs_eq_upto(dilate(s.lhs, 2), s2.lhs, 2 * N).equal);
            CHECK(qs_eq_upto(dilate(s.rhs, 2), s2.rhs, 2 * N).equal);
            CHECK(check_identity(id, p2, 2 * N).ok());
        }
    }
}

TEST_CASE("mismatches are reported with their first exponent", "[identities]")
{
    const auto p = spec(5, {{'a', q(1)}, {'b', q(2)}});
    const QS x = jordan_kronecker<Rational>(q(1), q(2), BaseScale(5), 30);
    const QS y = jordan_kronecker<Rational>(q(2), q(1), BaseScale(5), 30);
    CHECK(qs_eq_upto(x, y, 30).equal);
    const QS wrong = jordan_kronecker<Rational>(q(2), q(2), BaseScale(5), 30);
    const auto eq = qs_eq_upto(x, wrong, 30);
    REQUIRE_FALSE(eq.equal);
    CHECK(eq.mismatch->exponent >= 0);
    CHECK(check_identity("2.5", p, 30).ok());
}

TEST_CASE("suite plumbing is deterministic", "[identities]")
{
    SuiteConfig cfg;
    cfg.order = 20;
    cfg.symbolic_order = 10;
    cfg.trials = 2;
    cfg.symbolic_trials = 1;
    const auto t1 = suite_tasks(cfg), t2 = suite_tasks(cfg);
    REQUIRE(t1.size() == t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].id == t2[i].id);
        CHECK(t1[i].spec.str() == t2[i].spec.str());
        CHECK(t1[i].seed == t2[i].seed);
    }
    const auto r1 = run_checks(t1, 1), r2 = run_checks(t1, 3);
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].identity == r2[i].identity);
        CHECK(r1[i].status == r2[i].status);
        CHECK(r1[i].spec == r2[i].spec);
    }
}
