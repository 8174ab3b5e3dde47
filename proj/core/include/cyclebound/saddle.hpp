#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "cyclebound/log_value.hpp"

namespace cyclebound {

// Saddle-point machinery for P(l_r(Z) = n): the unique positive root x of
// sum_{j=1..r} x^j = n, the weighted power sums lambda_k = sum j^{k-1} x^j,
// and log Q(x) = -n log x + sum (x^j - 1)/j. The local estimate
// Q(x)/sqrt(2 pi lambda_2) covers every 1 <= r <= n with relative error
// O(r/n).

struct SaddleSolution {
    std::int64_t n;
    std::int64_t r;
    double u;                     // n / r
    double x;                     // root of the saddle equation; 1 when n == r
    double residual;              // |sum x^j - n| / n at the accepted iterate
    std::array<double, 4> lambda; // lambda_1 .. lambda_4
    double log_q;
    int iterations;
};

struct SaddleConvergenceError : std::runtime_error {
    SaddleConvergenceError(const std::string& what, double last_x_, double residual_)
        : std::runtime_error(what), last_x(last_x_), residual(residual_) {}
    double last_x;
    double residual;
};

// Newton on f(x) = sum_{j<=r} x^j - n with f' = lambda_2 / x, started at
// max(u^{1/r}, 1 + log(u)/r) and safeguarded by bisection inside the bracket
// (1, u^{2/(r+1)}]. The iteration runs in d = x - 1 so near-degenerate roots
// (u -> 1) keep full relative accuracy. tol is relative on the residual and
// must lie in [1e-15, 1e-6].
SaddleSolution solve_saddle(std::int64_t n, std::int64_t r, double tol = 1e-13);

// sum_{j=1..r} j^{k-1} x^j, compensated; k in [1,4]. For |x-1| < 1e-8 the
// polynomial limit sum j^{k-1} is used.
double lambda_k(double x, std::int64_t r, int k);

// -n log x + sum_{j=1..r} (x^j - 1)/j; powers go through exp(j log x) so
// large x^r cannot overflow intermediate products.
double log_q(double x, std::int64_t n, std::int64_t r);

// log of the local estimate Q(x)/sqrt(2 pi lambda_2) at the solved saddle;
// the universal fallback estimate, relative error O(r/n).
LogValue saddle_estimate(std::int64_t n, std::int64_t r);

// T(z) = integral_0^z (e^t - 1)/t * ((t/r) e^{t/r}/(e^{t/r} - 1) - 1) dt,
// the correction linking log Q to I: log Q(x) = -n log x + I(r log x)
// + T(r log x). Evaluated from the Bernoulli/zeta expansion, valid for
// |Re z| <= pi r, |Im z| <= pi r (range error outside).
double sum_integral_correction(double z, std::int64_t r);
std::complex<double> sum_integral_correction(std::complex<double> z, std::int64_t r);

// |log Q(x) - (-n log x + I(r log x) + T(r log x))| at the solved saddle.
// Contract: <= 1e-9 for n <= 10^6. Outside the Bernoulli domain (r log x
// > pi r, reached for very small r) T falls back to direct quadrature so the
// check stays independent of the identity it verifies.
double log_q_decomposition_defect(std::int64_t n, std::int64_t r);

} // namespace cyclebound
