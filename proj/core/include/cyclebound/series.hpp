#pragma once

#include <cstdint>
#include <vector>

#include "cyclebound/log_value.hpp"

namespace cyclebound {

// Coefficient families attached to the implicit series y(z) solving
// y = z * ((1 - y^r)/(1 - y))^{1/r}, which inverts the saddle equation:
// x(n) = 1/y(n^{-1/r}). All of them reduce to coefficients of powers of the
// truncated geometric polynomial 1 + y + ... + y^{r-1}, extracted by
// Lagrange-Buermann inversion.
//
//   g_N      : [z^N] z/y(z)
//   b_N      : [z^N] log(z/y(z))
//   h_N      : [z^N] sum_{j<=r} 1/(j y(z)^j), a Laurent series from z^{-r}
//   Lambda_N : [z^N] (z^r sum_{j<=r} j y(z)^{-j})^{-1}
//   d_rN     : exponent-polynomial coefficients of the small-r count
//              asymptotics, d_r0 = -1 + 1/r, interior via a Gamma ratio,
//              d_rr = -(1/r) sum_{j=2..r} 1/j
struct CoeffTable {
    std::int64_t r;
    std::int64_t nmax;
    std::vector<double> g;       // index N = 0..nmax
    std::vector<double> b;       // index N = 0..nmax (b[0] = 0 placeholder)
    std::vector<double> h;       // h[N + r] holds h_N, N = -r..nmax
    std::vector<double> lambda;  // index N = 0..nmax
    std::vector<double> d;       // index N = 0..r

    double h_at(std::int64_t N) const { return h[static_cast<std::size_t>(N + r)]; }
};

// [y^N] ((1 - y^r)/(1 - y))^alpha = sum over r*l + m = N of
// C(alpha, l) (-1)^l C(m-1+alpha, m). The alternating sum cancels to many
// orders of magnitude below its largest term (for r = 2, N = 40 the terms
// reach ~3e17 while the sum is 0), so it is accumulated in multiprecision
// and rounded once at the end.
double geometric_power_coeff(std::int64_t r, double alpha, std::int64_t N);

// [z^N] (z/y(z))^j: j/(j-N) * geometric_power_coeff(r, (N-j)/r, N) off the
// diagonal; 1{j = 0 mod r} - 1/r on it.
double g_coeff(std::int64_t r, std::int64_t j, std::int64_t N);

// [z^N] log(z/y(z)): closed Gamma form for N <= r-1, zero at N = r, the
// double-binomial sum beyond.
double b_coeff(std::int64_t r, std::int64_t N);

// d_rN for 0 <= N <= r (range error outside).
double d_coeff(std::int64_t r, std::int64_t N);

// Populates all families; nmax < 0 means the default 4r. Requires r >= 2,
// nmax >= r.
CoeffTable build_coeff_table(std::int64_t r, std::int64_t nmax = -1);

// Truncated expansion of the saddle root for small r:
// x ~ n^{1/r} - 1/r - sum_{N=2..r} Gamma(N+(N-1)/r) /
//     ((N-1) Gamma(N+1) Gamma((N-1)/r)) n^{-(N-1)/r} + (1/r) n^{-1+1/r};
// the dropped remainder is O(1/n). Proven for r <= log n; computed (without
// complaint) outside that range too.
double saddle_root_expansion(std::int64_t n, std::int64_t r);

// log(n! nu(n,r)) ~ -(1/2) log r + n(1-1/r) log n + sum_{N=0..r} d_rN
// n^{(r-N)/r}; relative error O(n^{-1/r}) for 2 <= r <= log n. r = 1
// degenerates to the exact value 0 = log 1.
LogValue small_r_count_estimate(std::int64_t n, std::int64_t r);

} // namespace cyclebound
