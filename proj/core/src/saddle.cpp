#include "cyclebound/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cyclebound/dickman.hpp"

namespace cyclebound {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

// Compensated long double accumulator (local; hot loops want it inlined).
struct Acc {
    long double sum = 0.0L, comp = 0.0L;
    void add(long double x) {
        const long double t = sum + x;
        comp += (std::fabs(sum) >= std::fabs(x)) ? ((sum - t) + x) : ((x - t) + sum);
        sum = t;
    }
    long double value() const { return sum + comp; }
};

// sum x^j and sum j x^j for x = 1 + d, evaluated term by term through
// exp(j log1p(d)).
void power_sums(long double d, std::int64_t r, long double& s1, long double& lam2) {
    const long double t = std::log1p(d);
    Acc a1, a2;
    for (std::int64_t j = 1; j <= r; ++j) {
        const long double p = std::exp(static_cast<long double>(j) * t);
        a1.add(p);
        a2.add(static_cast<long double>(j) * p);
    }
    s1 = a1.value();
    lam2 = a2.value();
}

struct SaddleInternal {
    long double d;  // x - 1
    long double t;  // log x
    int iterations;
    long double residual_rel;
};

SaddleInternal solve_internal(std::int64_t n, std::int64_t r, double tol) {
    const long double nn = static_cast<long double>(n);
    const long double u = nn / static_cast<long double>(r);
    // bracket (1, u^{2/(r+1)}] in d-space
    long double d_lo = 0.0L;
    long double d_hi = std::expm1(2.0L * std::log(u) / static_cast<long double>(r + 1));
    long double d = std::max(std::expm1(std::log(u) / static_cast<long double>(r)),
                             std::log(u) / static_cast<long double>(r));
    d = std::min(std::max(d, d_hi * 1e-6L), d_hi);
    long double s1 = 0.0L, lam2 = 0.0L;
    int it = 0;
    long double f = 0.0L;
    for (; it < 200; ++it) {
        power_sums(d, r, s1, lam2);
        f = s1 - nn;
        if (std::fabs(f) <= static_cast<long double>(tol) * nn) {
            return SaddleInternal{d, std::log1p(d), it + 1, std::fabs(f) / nn};
        }
        if (f > 0.0L) d_hi = std::min(d_hi, d);
        else d_lo = std::max(d_lo, d);
        // f'(x) = lambda_2 / x, step in d is the same as in x
        long double next = d - f * (1.0L + d) / lam2;
        if (!(next > d_lo && next <= d_hi)) next = 0.5L * (d_lo + d_hi);
        d = next;
    }
    throw SaddleConvergenceError(
        "solve_saddle: no convergence in 200 iterations (n=" + std::to_string(n) +
            ", r=" + std::to_string(r) + ")",
        static_cast<double>(1.0L + d), static_cast<double>(std::fabs(f) / nn));
}

long double log_q_from(long double t, std::int64_t n, std::int64_t r) {
    Acc s;
    for (std::int64_t j = 1; j <= r; ++j) {
        s.add(std::expm1(static_cast<long double>(j) * t) / static_cast<long double>(j));
    }
    return -static_cast<long double>(n) * t + s.value();
}

// zeta(2k) for k = 1..64.
const std::array<long double, 65>& zeta_even_table() {
    static const std::array<long double, 65> table = [] {
        std::array<long double, 65> z{};
        const long double pi2 = kPi * kPi;
        z[1] = pi2 / 6.0L;
        z[2] = pi2 * pi2 / 90.0L;
        z[3] = pi2 * pi2 * pi2 / 945.0L;
        for (int k = 4; k <= 64; ++k) {
            Acc s;
            s.add(1.0L);
            for (int m = 2; m <= 600; ++m) {
                const long double term = std::pow(static_cast<long double>(m), -2.0L * k);
                s.add(term);
                if (term < 1e-24L) break;
            }
            z[static_cast<std::size_t>(k)] = s.value();
        }
        return z;
    }();
    return table;
}

// Generic T(z) series over real or complex scalars:
// T(z) = (e^z - z - 1)/(2r) + 2 sum_k (-1)^{k+1} zeta(2k)/(2 pi r)^{2k} J_k,
// J_k = integral_0^z (e^t - 1) t^{2k-1} dt = sum_{m>=1} z^{2k+m}/(m! (2k+m)).
template <typename Scalar>
Scalar t_correction_series(Scalar z, std::int64_t r) {
    const auto& zeta = zeta_even_table();
    const long double zabs = static_cast<long double>(std::abs(z));
    const long double base = zabs / (2.0L * kPi * static_cast<long double>(r));
    Scalar result = (std::exp(z) - z - Scalar(1)) / Scalar(2 * static_cast<long double>(r));
    long double fac_ld = 1.0L;
    Scalar zpow2k(1);
    const Scalar z2 = z * z;
    for (int k = 1; k <= 64; ++k) {
        fac_ld *= base * base;
        zpow2k = zpow2k * z2;
        // J_k by ascending series; terms of a fixed sign for real z > 0.
        Scalar jk(0);
        Scalar term = zpow2k; // z^{2k+m} / m! at m = 0 -> start with m = 1
        long double mfact = 1.0L;
        for (int m = 1; m <= 2000; ++m) {
            term = term * z;
            mfact *= m;
            const Scalar contrib = term / Scalar(mfact * (2.0L * k + m));
            jk = jk + contrib;
            if (static_cast<long double>(std::abs(contrib)) <
                1e-21L * (static_cast<long double>(std::abs(jk)) + 1e-300L) && m > 4) {
                break;
            }
        }
        const Scalar contrib = Scalar(2.0L * zeta[static_cast<std::size_t>(k)] *
                                      ((k % 2) ? 1.0L : -1.0L)) *
                               jk / Scalar(std::pow(2.0L * kPi * static_cast<long double>(r),
                                                    2.0L * k));
        result = result + contrib;
        if (zeta[static_cast<std::size_t>(k)] * fac_ld < 1e-18L) break;
    }
    return result;
}

// 32-node Gauss-Legendre rule on [-1, 1], long double, built once by Newton
// on the Legendre recurrence.
struct GaussLegendre32 {
    std::array<long double, 32> x{}, w{};
    GaussLegendre32() {
        const int n = 32;
        for (int i = 1; i <= n / 2; ++i) {
            long double xi = std::cos(kPi * (i - 0.25L) / (n + 0.5L));
            long double dp = 0.0L;
            for (int iter = 0; iter < 100; ++iter) {
                long double p0 = 1.0L, p1 = xi;
                for (int j = 2; j <= n; ++j) {
                    const long double p2 = ((2.0L * j - 1.0L) * xi * p1 - (j - 1.0L) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (xi * p1 - p0) / (xi * xi - 1.0L);
                const long double dx = p1 / dp;
                xi -= dx;
                if (std::fabs(dx) < 1e-21L) break;
            }
            x[static_cast<std::size_t>(i - 1)] = -xi;
            x[static_cast<std::size_t>(n - i)] = xi;
            const long double wi = 2.0L / ((1.0L - xi * xi) * dp * dp);
            w[static_cast<std::size_t>(i - 1)] = wi;
            w[static_cast<std::size_t>(n - i)] = wi;
        }
    }
};

// (w/(1 - e^{-w})) - 1, stable near w = 0.
long double bernoulli_kernel_minus_one(long double w) {
    if (std::fabs(w) < 0.25L) {
        const long double w2 = w * w;
        // 1 + w/2 + w^2/12 - w^4/720 + w^6/30240 - w^8/1209600, minus the 1
        return w / 2.0L + w2 / 12.0L - w2 * w2 / 720.0L + w2 * w2 * w2 / 30240.0L -
               w2 * w2 * w2 * w2 / 1209600.0L;
    }
    return (w - 1.0L + std::exp(-w)) / (-std::expm1(-w));
}

// T(z) for real z of any size by composite quadrature of the defining
// integrand; keeps the decomposition defect meaningful when the series
// domain |z| <= pi r does not hold.
long double t_correction_quadrature(long double z, std::int64_t r) {
    static const GaussLegendre32 gl;
    const int panels = std::max(8, static_cast<int>(std::ceil(std::fabs(z))));
    Acc total;
    for (int p = 0; p < panels; ++p) {
        const long double a = z * p / panels;
        const long double b = z * (p + 1) / panels;
        const long double half = 0.5L * (b - a);
        const long double mid = 0.5L * (a + b);
        Acc panel;
        for (int i = 0; i < 32; ++i) {
            const long double t = mid + half * gl.x[static_cast<std::size_t>(i)];
            const long double lead = (std::fabs(t) < 1e-30L) ? 1.0L : std::expm1(t) / t;
            panel.add(gl.w[static_cast<std::size_t>(i)] * lead *
                      bernoulli_kernel_minus_one(t / static_cast<long double>(r)));
        }
        total.add(half * panel.value());
    }
    return total.value();
}

} // namespace

SaddleSolution solve_saddle(std::int64_t n, std::int64_t r, double tol) {
    if (n < 1 || r < 1 || r > n) throw std::invalid_argument("solve_saddle: require 1 <= r <= n");
    if (!(tol >= 1e-15 && tol <= 1e-6)) {
        throw std::invalid_argument("solve_saddle: tol must lie in [1e-15, 1e-6]");
    }
    SaddleSolution sol;
    sol.n = n;
    sol.r = r;
    sol.u = static_cast<double>(n) / static_cast<double>(r);

    long double t = 0.0L;
    if (n == r) {
        sol.x = 1.0;
        sol.residual = 0.0;
        sol.iterations = 0;
    } else if (r == 1) {
        t = std::log(static_cast<long double>(n));
        sol.x = static_cast<double>(n);
        sol.residual = 0.0;
        sol.iterations = 0;
    } else {
        const SaddleInternal si = solve_internal(n, r, tol);
        t = si.t;
        sol.x = static_cast<double>(1.0L + si.d);
        sol.residual = static_cast<double>(si.residual_rel);
        sol.iterations = si.iterations;
    }

    Acc l1, l2, l3, l4, q;
    for (std::int64_t j = 1; j <= r; ++j) {
        const long double jj = static_cast<long double>(j);
        const long double p = std::exp(jj * t);
        l1.add(p);
        l2.add(jj * p);
        l3.add(jj * jj * p);
        l4.add(jj * jj * jj * p);
        q.add(std::expm1(jj * t) / jj);
    }
    sol.lambda = {static_cast<double>(l1.value()), static_cast<double>(l2.value()),
                  static_cast<double>(l3.value()), static_cast<double>(l4.value())};
    sol.log_q = static_cast<double>(-static_cast<long double>(n) * t + q.value());
    return sol;
}

double lambda_k(double x, std::int64_t r, int k) {
    if (k < 1 || k > 4) throw std::invalid_argument("lambda_k: k must lie in [1,4]");
    if (!(x > 0.0)) throw std::invalid_argument("lambda_k: require x > 0");
    if (r < 1) throw std::invalid_argument("lambda_k: require r >= 1");
    Acc s;
    if (std::abs(x - 1.0) < 1e-8) {
        for (std::int64_t j = 1; j <= r; ++j) {
            s.add(std::pow(static_cast<long double>(j), static_cast<long double>(k - 1)));
        }
        return static_cast<double>(s.value());
    }
    const long double t = std::log(static_cast<long double>(x));
    for (std::int64_t j = 1; j <= r; ++j) {
        const long double jj = static_cast<long double>(j);
        s.add(std::pow(jj, static_cast<long double>(k - 1)) * std::exp(jj * t));
    }
    return static_cast<double>(s.value());
}

double log_q(double x, std::int64_t n, std::int64_t r) {
    if (!(x > 0.0)) throw std::invalid_argument("log_q: require x > 0");
    if (r < 1 || n < 0) throw std::invalid_argument("log_q: require r >= 1, n >= 0");
    return static_cast<double>(log_q_from(std::log(static_cast<long double>(x)), n, r));
}

LogValue saddle_estimate(std::int64_t n, std::int64_t r) {
    const SaddleSolution sol = solve_saddle(n, r);
    const double lam2 = sol.lambda[1];
    return LogValue::from_log(sol.log_q -
                              0.5 * std::log(2.0 * std::numbers::pi * lam2));
}

double sum_integral_correction(double z, std::int64_t r) {
    if (r < 1) throw std::invalid_argument("sum_integral_correction: require r >= 1");
    if (std::abs(z) > std::numbers::pi * static_cast<double>(r)) {
        throw std::invalid_argument("sum_integral_correction: |z| > pi*r outside series domain");
    }
    return static_cast<double>(t_correction_series<long double>(z, r));
}

std::complex<double> sum_integral_correction(std::complex<double> z, std::int64_t r) {
    if (r < 1) throw std::invalid_argument("sum_integral_correction: require r >= 1");
    const double bound = std::numbers::pi * static_cast<double>(r);
    if (std::abs(z.real()) > bound || std::abs(z.imag()) > bound) {
        throw std::invalid_argument(
            "sum_integral_correction: z outside |Re z|, |Im z| <= pi*r domain");
    }
    const std::complex<long double> zl(z.real(), z.imag());
    const auto res = t_correction_series<std::complex<long double>>(zl, r);
    return {static_cast<double>(res.real()), static_cast<double>(res.imag())};
}

double log_q_decomposition_defect(std::int64_t n, std::int64_t r) {
    if (n < 1 || r < 1 || r > n) {
        throw std::invalid_argument("log_q_decomposition_defect: require 1 <= r <= n");
    }
    if (n == r) return 0.0; // x = 1: every term vanishes identically
    long double t;
    if (r == 1) {
        t = std::log(static_cast<long double>(n));
    } else {
        t = solve_internal(n, r, 1e-14).t;
    }
    const long double z = static_cast<long double>(r) * t;
    // Both sides share the -n log x term, which cancels algebraically; what
    // remains is sum (x^j - 1)/j versus I(z) + T(z).
    Acc s;
    for (std::int64_t j = 1; j <= r; ++j) {
        s.add(std::expm1(static_cast<long double>(j) * t) / static_cast<long double>(j));
    }
    const long double tz = (z <= kPi * static_cast<long double>(r))
                               ? t_correction_series<long double>(z, r)
                               : t_correction_quadrature(z, r);
    const long double iz = static_cast<long double>(i_integral(static_cast<double>(z)));
    return static_cast<double>(std::fabs(s.value() - (iz + tz)));
}

} // namespace cyclebound
