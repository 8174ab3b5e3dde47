#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "cyclebound/log_value.hpp"

namespace cyclebound {

// nu(n,r) is the probability that a uniform random permutation of n elements
// has every cycle length <= r. This module is the ground truth: exact
// arbitrary-precision counts n!*nu(n,r), a float recurrence for log nu scaling
// to n ~ 10^6, a brute-force enumerator for tiny n, and an independent
// high-precision series-coefficient oracle. The routes check one another.

struct CycleBoundCount {
    std::int64_t n;
    std::int64_t r;
    mpz_class count; // = n! * nu(n,r), so count(n,n) = n! and count(n,1) = 1
};

// Hard caps; requests beyond them raise std::invalid_argument.
inline constexpr std::int64_t kMaxExactCountN = 2000;
inline constexpr std::int64_t kMaxNuLogN = 1'000'000;
inline constexpr std::int64_t kMaxBruteForceN = 10;
inline constexpr std::int64_t kMaxCoefficientOracleN = 5000;

// Exact count of permutations of n elements with all cycles <= r, via the
// recurrence a(m) = sum_{j=1..min(r,m)} (m-1)!/(m-j)! * a(m-j), a(0) = 1.
// The falling-factorial weight is grown one factor per step.
CycleBoundCount exact_count(std::int64_t n, std::int64_t r);

// Row a(0..n) for fixed r; exact_count(m, r) == row[m] for every m <= n.
std::vector<mpz_class> exact_count_table(std::int64_t n, std::int64_t r);

// Enumerates all n! permutations and decomposes each into cycles by index
// chasing. Cost guard refuses n > 10.
std::uint64_t brute_force_count(std::int64_t n, std::int64_t r);

// log nu(n,r) from the float recurrence nu(m) = (1/m) sum_{j<=min(r,m)} nu(m-j)
// over a rolling window of min(r,n)+1 values, rescaled by the running maximum
// so nothing underflows on the way to n = 10^6. Accumulated relative error
// grows like a small multiple of n ulp; it is tested against exact_count to
// 1e-10 for n <= 2000.
LogValue nu_log(std::int64_t n, std::int64_t r);

// log P(l_r(Z) = n) = log nu(n,r) - H_r for independent Poisson Z_j with
// mean 1/j: the local probability that sum j*Z_j hits n exactly.
LogValue poisson_local_prob_log(std::int64_t n, std::int64_t r);

// [z^n] exp{sum_{j<=r} z^j/j} evaluated with `digits` decimal digits of
// working precision (15..50). Mathematically equal to nu(n,r); computed in
// MPFR so it serves as an independent oracle for the double-precision route.
LogValue coefficient_oracle(std::int64_t n, std::int64_t r, int digits);

// log(count) for a big integer, exact to a few ulp.
double mpz_log(const mpz_class& v);

} // namespace cyclebound
