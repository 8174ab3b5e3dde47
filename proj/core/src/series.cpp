#include "cyclebound/series.hpp"

#include <cmath>
#include <stdexcept>

#include "cyclebound/log_value.hpp"
#include "mp_float.hpp"

namespace cyclebound {

namespace {

constexpr mpfr_prec_t kPhiPrec = 384;

// C(alpha, l) = prod_{i=0..l-1} (alpha - i) / l!, by direct product so poles
// of the Gamma route at nonpositive integers never appear.
void binom_alpha_choose_l(detail::MpFloat& out, const detail::MpFloat& alpha, long l) {
    detail::MpFloat f(kPhiPrec);
    out.set_ui(1);
    for (long i = 0; i < l; ++i) {
        mpfr_sub_ui(f.get(), alpha.get(), static_cast<unsigned long>(i), MPFR_RNDN);
        detail::mul(out, out, f);
    }
    detail::MpFloat fact(kPhiPrec);
    mpfr_fac_ui(fact.get(), static_cast<unsigned long>(l), MPFR_RNDN);
    detail::div(out, out, fact);
}

// C(m-1+alpha, m) = prod_{i=0..m-1} (alpha + i) / m!
void binom_rising_choose_m(detail::MpFloat& out, const detail::MpFloat& alpha, long m) {
    detail::MpFloat f(kPhiPrec);
    out.set_ui(1);
    for (long i = 0; i < m; ++i) {
        mpfr_add_ui(f.get(), alpha.get(), static_cast<unsigned long>(i), MPFR_RNDN);
        detail::mul(out, out, f);
    }
    detail::MpFloat fact(kPhiPrec);
    mpfr_fac_ui(fact.get(), static_cast<unsigned long>(m), MPFR_RNDN);
    detail::div(out, out, fact);
}

double harmonic_tail(std::int64_t r) {
    // sum_{j=2..r} 1/j
    long double s = 0.0L;
    for (std::int64_t j = 2; j <= r; ++j) s += 1.0L / static_cast<long double>(j);
    return static_cast<double>(s);
}

} // namespace

double geometric_power_coeff(std::int64_t r, double alpha, std::int64_t N) {
    if (r < 1 || N < 0) throw std::invalid_argument("geometric_power_coeff: require r >= 1, N >= 0");
    if (N == 0) return 1.0;
    detail::MpFloat a(kPhiPrec), c1(kPhiPrec), c2(kPhiPrec), term(kPhiPrec), acc(kPhiPrec);
    a.set(alpha);
    acc.set_ui(0);
    for (std::int64_t l = 0; r * l <= N; ++l) {
        const std::int64_t m = N - r * l;
        binom_alpha_choose_l(c1, a, static_cast<long>(l));
        binom_rising_choose_m(c2, a, static_cast<long>(m));
        detail::mul(term, c1, c2);
        if (l % 2 != 0) detail::neg(term, term);
        detail::add(acc, acc, term);
    }
    return acc.to_double();
}

double g_coeff(std::int64_t r, std::int64_t j, std::int64_t N) {
    if (r < 1 || j < 1 || N < 0) {
        throw std::invalid_argument("g_coeff: require r >= 1, j >= 1, N >= 0");
    }
    if (N == j) return (j % r == 0 ? 1.0 : 0.0) - 1.0 / static_cast<double>(r);
    const double alpha = static_cast<double>(N - j) / static_cast<double>(r);
    return static_cast<double>(j) / static_cast<double>(j - N) *
           geometric_power_coeff(r, alpha, N);
}

double b_coeff(std::int64_t r, std::int64_t N) {
    if (r < 1 || N < 1) throw std::invalid_argument("b_coeff: require r >= 1, N >= 1");
    if (N == r) return 0.0;
    if (N <= r - 1) {
        // -Gamma(N + N/r) / (N Gamma(N+1) Gamma(N/r)) with
        // Gamma(N + N/r)/Gamma(N/r) = prod_{i=0..N-1} (N/r + i)
        const long double alpha = static_cast<long double>(N) / static_cast<long double>(r);
        long double p = 1.0L, fact = 1.0L;
        for (std::int64_t i = 0; i < N; ++i) {
            p *= alpha + static_cast<long double>(i);
            fact *= static_cast<long double>(i + 1);
        }
        return static_cast<double>(-p / (static_cast<long double>(N) * fact));
    }
    const double alpha = static_cast<double>(N) / static_cast<double>(r);
    return -geometric_power_coeff(r, alpha, N) / static_cast<double>(N);
}

double d_coeff(std::int64_t r, std::int64_t N) {
    if (r < 1) throw std::invalid_argument("d_coeff: require r >= 1");
    if (N < 0 || N > r) throw std::invalid_argument("d_coeff: require 0 <= N <= r");
    if (N == 0) return -1.0 + 1.0 / static_cast<double>(r);
    if (N == r) return -harmonic_tail(r) / static_cast<double>(r);
    // Gamma(N + N/r) / ((r - N) Gamma(N+1) Gamma(1 + N/r)) via log-Gamma;
    // all arguments positive.
    const double nr = static_cast<double>(N) / static_cast<double>(r);
    const double lg = std::lgamma(static_cast<double>(N) + nr) -
                      std::lgamma(static_cast<double>(N) + 1.0) - std::lgamma(1.0 + nr);
    return std::exp(lg) / static_cast<double>(r - N);
}

CoeffTable build_coeff_table(std::int64_t r, std::int64_t nmax) {
    if (r < 2) throw std::invalid_argument("build_coeff_table: require r >= 2");
    if (nmax < 0) nmax = 4 * r;
    if (nmax < r) throw std::invalid_argument("build_coeff_table: require nmax >= r");

    CoeffTable t;
    t.r = r;
    t.nmax = nmax;
    t.g.resize(static_cast<std::size_t>(nmax) + 1);
    t.b.resize(static_cast<std::size_t>(nmax) + 1, 0.0);
    t.lambda.resize(static_cast<std::size_t>(nmax) + 1);
    t.h.resize(static_cast<std::size_t>(nmax + r) + 1);
    t.d.resize(static_cast<std::size_t>(r) + 1);

    // b is needed up to nmax + r by the h linkage.
    std::vector<double> b_ext(static_cast<std::size_t>(nmax + r) + 1, 0.0);
    for (std::int64_t N = 1; N <= nmax + r; ++N) {
        b_ext[static_cast<std::size_t>(N)] = b_coeff(r, N);
    }

    for (std::int64_t N = 0; N <= nmax; ++N) {
        t.g[static_cast<std::size_t>(N)] = g_coeff(r, 1, N);
        if (N >= 1) t.b[static_cast<std::size_t>(N)] = b_ext[static_cast<std::size_t>(N)];
        t.lambda[static_cast<std::size_t>(N)] =
            (N == 0) ? 1.0 / static_cast<double>(r)
                     : -static_cast<double>(N) * b_ext[static_cast<std::size_t>(N)] /
                           static_cast<double>(r);
    }
    for (std::int64_t N = -r; N <= nmax; ++N) {
        double v;
        if (N == -r) v = 1.0 / static_cast<double>(r);
        else if (N == 0) v = -harmonic_tail(r) / static_cast<double>(r);
        else v = static_cast<double>(N + r) / static_cast<double>(N) *
                 b_ext[static_cast<std::size_t>(N + r)];
        t.h[static_cast<std::size_t>(N + r)] = v;
    }
    for (std::int64_t N = 0; N <= r; ++N) {
        t.d[static_cast<std::size_t>(N)] = d_coeff(r, N);
    }
    return t;
}

double saddle_root_expansion(std::int64_t n, std::int64_t r) {
    if (r < 2 || n < 2) throw std::invalid_argument("saddle_root_expansion: require r >= 2, n >= 2");
    const long double ln = std::log(static_cast<long double>(n));
    long double x = std::exp(ln / static_cast<long double>(r)) - 1.0L / static_cast<long double>(r);
    for (std::int64_t N = 2; N <= r; ++N) {
        // Gamma(N + (N-1)/r)/Gamma((N-1)/r) = prod_{i=0..N-1} ((N-1)/r + i)
        const long double beta = static_cast<long double>(N - 1) / static_cast<long double>(r);
        long double p = 1.0L, fact = 1.0L;
        for (std::int64_t i = 0; i < N; ++i) {
            p *= beta + static_cast<long double>(i);
            fact *= static_cast<long double>(i + 1);
        }
        const long double coef = p / (static_cast<long double>(N - 1) * fact);
        x -= coef * std::exp(-beta * ln);
    }
    x += std::exp((1.0L / static_cast<long double>(r) - 1.0L) * ln) / static_cast<long double>(r);
    return static_cast<double>(x);
}

LogValue small_r_count_estimate(std::int64_t n, std::int64_t r) {
    if (r < 1 || n < 1) throw std::invalid_argument("small_r_count_estimate: require n, r >= 1");
    const long double ln = std::log(static_cast<long double>(n));
    long double acc = -0.5L * std::log(static_cast<long double>(r)) +
                      static_cast<long double>(n) *
                          (1.0L - 1.0L / static_cast<long double>(r)) * ln;
    for (std::int64_t N = 0; N <= r; ++N) {
        const long double expo = static_cast<long double>(r - N) / static_cast<long double>(r);
        acc += static_cast<long double>(d_coeff(r, N)) * std::exp(expo * ln);
    }
    return LogValue::from_log(static_cast<double>(acc));
}

} // namespace cyclebound
