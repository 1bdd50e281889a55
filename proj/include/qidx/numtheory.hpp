#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "constructors.hpp"
#include "errors.hpp"
#include "qseries.hpp"

// Integer-side oracles for the representation counts by 7a^2 + b^2 and for
// the mod-13 character identity.

namespace qidx::numtheory
{

// Residue-class function with values in {-1, 0, +1}; values[r] is the value
// on n = r (mod modulus).
struct CharTable {
    int modulus;
    std::vector<int> values;

    int operator()(long n) const
    {
        long r = n % modulus;
        if (r < 0) {
            r += modulus;
        }
        return values[static_cast<std::size_t>(r)];
    }
    std::span<const int> span() const { return values; }
};

namespace detail
{

inline CharTable make_table(std::initializer_list<int> plus, std::initializer_list<int> minus)
{
    CharTable t{13, std::vector<int>(13, 0)};
    for (int r : plus) {
        t.values[static_cast<std::size_t>(r)] = 1;
    }
    for (int r : minus) {
        t.values[static_cast<std::size_t>(r)] = -1;
    }
    return t;
}

} // namespace detail

// The three tables mod 13, entered verbatim.
inline const CharTable &chi_table(int which)
{
    static const std::array<CharTable, 3> tables = {
        detail::make_table({1, 3, 7, 8, 9, 11}, {2, 4, 5, 6, 10, 12}),
        detail::make_table({1, 2, 3, 5, 6, 9}, {4, 7, 8, 10, 11, 12}),
        detail::make_table({1, 3, 4, 9, 10, 12}, {2, 5, 6, 7, 8, 11}),
    };
    if (which < 1 || which > 3) {
        throw std::out_of_range("character index must be 1, 2 or 3");
    }
    return tables[static_cast<std::size_t>(which - 1)];
}

inline int chi_value(int which, long n) { return chi_table(which)(n); }

inline int neg_one_pow(long n) { return (n % 2 == 0) ? 1 : -1; }

inline long isqrt(long n)
{
    if (n < 0) {
        return -1;
    }
    auto r = static_cast<long>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) {
        --r;
    }
    while ((r + 1) * (r + 1) <= n) {
        ++r;
    }
    return r;
}

inline bool is_square(long n)
{
    const long r = isqrt(n);
    return r >= 0 && r * r == n;
}

// C(N): sum over divisors d of N of s(d) (-1)^{N/d}, with s = +1 on
// d = 1, 2, 4 (mod 7), -1 on d = 3, 5, 6 (mod 7), 0 on multiples of 7.
inline long divisor_sum_C(long N)
{
    if (N < 1) {
        throw std::invalid_argument("divisor_sum_C requires N >= 1");
    }
    static constexpr std::array<int, 7> weight = {0, 1, 1, -1, 1, -1, -1};
    long total = 0;
    for (long d = 1; d * d <= N; ++d) {
        if (N % d != 0) {
            continue;
        }
        const long e = N / d;
        total += weight[static_cast<std::size_t>(d % 7)] * neg_one_pow(e);
        if (e != d) {
            total += weight[static_cast<std::size_t>(e % 7)] * neg_one_pow(d);
        }
    }
    return total;
}

// Whether a and b range over nonnegative (true) or positive (false) integers.
struct RepCountConvention {
    bool include_zero = false;
};

// Number of pairs (a, b) with 7a^2 + b^2 = N, by exhaustive enumeration.
inline long rep_count(long N, RepCountConvention conv = {})
{
    if (N < 1) {
        throw std::invalid_argument("rep_count requires N >= 1");
    }
    const long lo = conv.include_zero ? 0 : 1;
    long count = 0;
    for (long a = lo; 7 * a * a <= N; ++a) {
        const long rest = N - 7 * a * a;
        const long b = isqrt(rest);
        if (b * b == rest && b >= lo) {
            ++count;
        }
    }
    return count;
}

// (-1)^N/2 {C(N) + (-1)^{N-1}} when N or N/7 is a square, (-1)^N/2 C(N) otherwise.
inline long corollary2_predict(long N)
{
    const bool square_case = is_square(N) || (N % 7 == 0 && is_square(N / 7));
    long twice = divisor_sum_C(N);
    if (square_case) {
        twice += neg_one_pow(N - 1);
    }
    twice *= neg_one_pow(N);
    if (twice % 2 != 0) {
        throw NonIntegerResult("prediction for N = " + std::to_string(N) + " is " + std::to_string(twice) + "/2");
    }
    return twice / 2;
}

// sum over all integer pairs with 7a^2 + b^2 = N of (-1)^{a+b}.
inline long signed_lattice_sum(long N)
{
    long total = 0;
    for (long a = -isqrt(N / 7); 7 * a * a <= N; ++a) {
        const long rest = N - 7 * a * a;
        const long b = isqrt(rest);
        if (b * b != rest) {
            continue;
        }
        total += (b == 0 ? 1 : 2) * neg_one_pow(a + b);
    }
    return total;
}

struct Corollary2Row {
    long N;
    long reps;
    long C;
    long prediction;
    bool match;
};

inline Corollary2Row corollary2_row(long N)
{
    const long reps = rep_count(N);
    const long pred = corollary2_predict(N);
    return {N, reps, divisor_sum_C(N), pred, reps == pred};
}

struct Corollary2Report {
    long n_max = 0;
    // N where the count disagrees with the prediction.
    std::vector<long> mismatches;
    // N where the coefficient of phi(q) phi(q^7) disagrees with the lattice sum.
    std::vector<long> theta_mismatches;

    bool ok() const { return mismatches.empty() && theta_mismatches.empty(); }
};

inline Corollary2Report verify_corollary2_range(long n_max)
{
    if (n_max < 1) {
        throw std::invalid_argument("verify_corollary2_range requires N_max >= 1");
    }
    Corollary2Report rep;
    rep.n_max = n_max;
    const int order = static_cast<int>(n_max);
    const auto theta = phi_minus<Rational>(BaseScale(1), order) * phi_minus<Rational>(BaseScale(7), order);
    for (long N = 1; N <= n_max; ++N) {
        if (!corollary2_row(N).match) {
            rep.mismatches.push_back(N);
        }
        if (theta.coeff(static_cast<int>(N)) != Rational(signed_lattice_sum(N))) {
            rep.theta_mismatches.push_back(N);
        }
    }
    return rep;
}

} // namespace qidx::numtheory
