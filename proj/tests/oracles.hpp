#pragma once

// Brute-force reference computations. Everything here works on plain dense
// coefficient vectors c[0..N] and expands each object from its defining sum
// or product, sharing no code with the engine's window logic.

#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include <qidx/qseries.hpp>
#include <qidx/rational.hpp>

namespace oracle
{

using qidx::Rational;
using Poly = std::vector<Rational>;

inline Poly zero(int N) { return Poly(static_cast<std::size_t>(N + 1), Rational(0)); }

inline Poly one(int N)
{
    Poly p = zero(N);
    p[0] = Rational(1);
    return p;
}

inline Poly mul(const Poly &a, const Poly &b)
{
    const std::size_t n = std::min(a.size(), b.size());
    Poly c(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; i + j < n; ++j) {
            c[i + j] += a[i] * b[j];
        }
    }
    return c;
}

inline void add_at(Poly &p, long e, const Rational &c)
{
    if (e >= 0 && e < static_cast<long>(p.size())) {
        p[static_cast<std::size_t>(e)] += c;
    }
}

inline int sgn_pow(int sign, long k) { return (sign < 0 && (k % 2 != 0)) ? -1 : 1; }

// Coefficients 0..N of a series with nonnegative offset.
template <typename S>
Poly dense(const S &s, int N)
{
    Poly p = zero(N);
    for (int n = 0; n <= N; ++n) {
        p[static_cast<std::size_t>(n)] = s.coeff(n);
    }
    return p;
}

// prod_{k >= 0} (1 - sign q^{e + mk}), e >= 0, by multiplying binomials.
inline Poly poch(int sign, int e, int m, int N)
{
    Poly p = one(N);
    for (long k = e; k <= N; k += m) {
        Poly f = one(N);
        if (k == 0) {
            f[0] = Rational(1 - sign);
        } else {
            f[static_cast<std::size_t>(k)] = Rational(-sign);
        }
        p = mul(p, f);
        if (m == 0) {
            break;
        }
    }
    return p;
}

// sum_n (-1)^n z^n q^{m(n^2-n)/2} over a generous window.
inline Poly theta(int sign, int e, int m, int N)
{
    Poly p = zero(N);
    const long B = 4L * (N + std::abs(e) + m) + 8;
    for (long n = -B; n <= B; ++n) {
        const long k = m * (n * n - n) / 2 + n * e;
        add_at(p, k, Rational(sgn_pow(-1, n) * sgn_pow(sign, n)));
    }
    return p;
}

// f(a, b) = sum_n a^n/(1 - b q^{mn}) for a = sa q^al, b = sb q^be with
// 0 < al, be < m, from the region-wise double sum
//   sum_{n,k >= 0} a^n b^k q^{mnk} - sum_{n,k >= 1} a^-n b^-k q^{mnk}.
inline Poly jk(int sa, int al, int sb, int be, int m, int N)
{
    // index i holds the coefficient of q^{i - m}; exponents start above -m
    Poly p = zero(N + m);
    for (long n = 0; n <= N; ++n) {
        for (long k = 0; al * n + be * k + m * n * k <= N; ++k) {
            add_at(p, al * n + be * k + m * n * k + m, Rational(sgn_pow(sa, n) * sgn_pow(sb, k)));
        }
    }
    for (long n = 1; (m - al) * n - be <= N; ++n) {
        for (long k = 1;; ++k) {
            const long e = m * n * k - al * n - be * k;
            if (e > N) {
                break;
            }
            add_at(p, e + m, Rational(-sgn_pow(sa, n) * sgn_pow(sb, k)));
        }
    }
    return p;
}

// sum_{r >= r0} (u r + v) M^r X q^{mr}/(1 - X q^{mr})^s with M = sM q^mu,
// X = sx q^j, j + m r0 > 0 and mu >= 0: sum_r sum_{k >= 1} k^{s-1} ... expanded term by term.
inline Poly lambert(int sM, int mu, int sx, int j, int s, const Rational &u, const Rational &v, int r0, int m, int N)
{
    Poly p = zero(N);
    for (long r = r0;; ++r) {
        const long g = j + m * r;
        if (g <= 0) {
            continue;
        }
        if (mu * r + g > N) {
            break;
        }
        const Rational w = u * Rational(r) + v;
        for (long k = 1; mu * r + g * k <= N; ++k) {
            const Rational mult = s == 2 ? Rational(k) : Rational(1);
            add_at(p, mu * r + g * k, w * mult * Rational(sgn_pow(sM, r) * sgn_pow(sx, k)));
        }
    }
    return p;
}

// l(b) for b = sb q^be, 0 < be < m:
//   sum_{r>=0} sum_{k>=1} b^k q^{(be+mr)k} - sum_{r>=1} sum_{k>=1} b^-k q^{(mr-be)k}.
inline Poly l(int sb, int be, int m, int N)
{
    Poly p = lambert(1, 0, sb, be, 1, Rational(0), Rational(1), 0, m, N);
    const Poly t = lambert(1, 0, sb, -be, 1, Rational(0), Rational(1), 1, m, N);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] -= t[i];
    }
    return p;
}

// sum_k (-1)^k q^{k(3k-1)/2}
inline Poly pentagonal(int N)
{
    Poly p = zero(N);
    for (long k = -N - 1; k <= N + 1; ++k) {
        add_at(p, k * (3 * k - 1) / 2, Rational(sgn_pow(-1, k)));
    }
    return p;
}

inline std::string str(const Poly &p)
{
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!p[i].is_zero()) {
            out += (out.empty() ? "" : " ") + p[i].str() + "q" + std::to_string(i);
        }
    }
    return out.empty() ? "0" : out;
}

} // namespace oracle
