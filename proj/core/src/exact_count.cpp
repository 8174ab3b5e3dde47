#include "cyclebound/exact_count.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cyclebound/numeric.hpp"
#include "mp_float.hpp"

namespace cyclebound {

namespace {

void check_range(std::int64_t n, std::int64_t r, std::int64_t max_n, const char* who) {
    if (n < 1 || n > max_n || r < 1 || r > n) {
        throw std::invalid_argument(std::string(who) + ": require 1 <= r <= n <= " +
                                    std::to_string(max_n));
    }
}

} // namespace

std::vector<mpz_class> exact_count_table(std::int64_t n, std::int64_t r) {
    check_range(n, r, kMaxExactCountN, "exact_count");
    std::vector<mpz_class> a(static_cast<std::size_t>(n) + 1);
    a[0] = 1;
    mpz_class w, term, acc;
    for (std::int64_t m = 1; m <= n; ++m) {
        acc = 0;
        w = 1; // (m-1)!/(m-j)! built incrementally, no factorial table
        const std::int64_t jmax = std::min(r, m);
        for (std::int64_t j = 1; j <= jmax; ++j) {
            term = w * a[static_cast<std::size_t>(m - j)];
            acc += term;
            w *= (m - j);
        }
        a[static_cast<std::size_t>(m)] = acc;
    }
    return a;
}

CycleBoundCount exact_count(std::int64_t n, std::int64_t r) {
    check_range(n, r, kMaxExactCountN, "exact_count");
    if (r >= n) {
        // all cycles fit: the count is n!
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
        return CycleBoundCount{n, r, std::move(f)};
    }
    auto row = exact_count_table(n, r);
    return CycleBoundCount{n, r, std::move(row.back())};
}

std::uint64_t brute_force_count(std::int64_t n, std::int64_t r) {
    if (n > kMaxBruteForceN) {
        throw std::invalid_argument("brute_force_count: n > 10 refused (cost guard)");
    }
    check_range(n, r, kMaxBruteForceN, "brute_force_count");
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t count = 0;
    do {
        bool ok = true;
        unsigned visited = 0;
        for (int i = 0; i < n && ok; ++i) {
            if (visited & (1u << i)) continue;
            int len = 0, j = i;
            while (!(visited & (1u << j))) {
                visited |= 1u << j;
                j = perm[static_cast<std::size_t>(j)];
                ++len;
            }
            if (len > r) ok = false;
        }
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

LogValue nu_log(std::int64_t n, std::int64_t r) {
    check_range(n, r, kMaxNuLogN, "nu_log");
    if (r >= n) return LogValue::from_log(0.0); // nu(n,n) = 1
    if (2 * r >= n) {
        // At most one cycle can be longer than r, and a cycle of length
        // exactly j appears with probability 1/j, so
        // nu(n,r) = 1 - (H_n - H_r). The difference runs on the hi/lo pairs.
        const HarmonicFactor hn = harmonic_factor(n);
        const HarmonicFactor hr = harmonic_factor(r);
        const double tail = (hn.hi - hr.hi) + (hn.lo - hr.lo);
        return LogValue::from_log(std::log1p(-tail));
    }
    const std::size_t w = static_cast<std::size_t>(r) + 1;
    // win[i] holds the scaled nu(m-i); scale tracks the log of the factor
    // divided out so far.
    std::vector<double> win(w, 0.0);
    win[0] = 1.0;
    double scale = 0.0;
    std::size_t head = 0; // index of nu(m-1) after each step
    for (std::int64_t m = 1; m <= n; ++m) {
        const std::int64_t jmax = std::min(r, m);
        CompensatedSum<double> s;
        for (std::int64_t j = 1; j <= jmax; ++j) {
            s.add(win[(head + static_cast<std::size_t>(j) - 1) % w]);
        }
        const double v = s.value() / static_cast<double>(m);
        head = (head + w - 1) % w;
        win[head] = v;
        if (v > 0.0 && v < 1e-260) {
            const double mx = *std::max_element(win.begin(), win.end());
            const double f = 1.0 / mx;
            for (double& x : win) x *= f;
            scale += std::log(mx);
        } else if (v == 0.0) {
            throw std::runtime_error("nu_log: workspace underflowed to zero");
        }
    }
    return LogValue::from_log(std::log(win[head]) + scale);
}

LogValue poisson_local_prob_log(std::int64_t n, std::int64_t r) {
    LogValue nu = nu_log(n, r);
    return LogValue::from_log(nu.log() - harmonic_number(r));
}

LogValue coefficient_oracle(std::int64_t n, std::int64_t r, int digits) {
    if (digits < 15 || digits > 50) {
        throw std::invalid_argument("coefficient_oracle: digits must lie in [15, 50]");
    }
    if (n == 0) return LogValue::from_log(0.0); // constant term of exp is 1
    check_range(n, r, kMaxCoefficientOracleN, "coefficient_oracle");
    const auto prec = static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
    // c_m = (1/m) sum_{j<=min(r,m)} c_{m-j}, c_0 = 1: the log-derivative
    // convolution for exponentiating the truncated series sum_{j<=r} z^j/j.
    std::vector<detail::MpFloat> c;
    c.reserve(static_cast<std::size_t>(n) + 1);
    for (std::int64_t i = 0; i <= n; ++i) c.emplace_back(prec);
    c[0].set_ui(1);
    detail::MpFloat acc(prec);
    for (std::int64_t m = 1; m <= n; ++m) {
        acc.set_ui(0);
        const std::int64_t jmax = std::min(r, m);
        for (std::int64_t j = 1; j <= jmax; ++j) {
            detail::add(acc, acc, c[static_cast<std::size_t>(m - j)]);
        }
        detail::div_ui(c[static_cast<std::size_t>(m)], acc, static_cast<unsigned long>(m));
    }
    detail::MpFloat lg(prec);
    detail::log(lg, c[static_cast<std::size_t>(n)]);
    return LogValue::from_log(lg.to_double());
}

double mpz_log(const mpz_class& v) {
    if (sgn(v) <= 0) throw std::domain_error("mpz_log: value must be positive");
    signed long e = 0;
    const double d = mpz_get_d_2exp(&e, v.get_mpz_t());
    return std::log(d) + static_cast<double>(e) * 0.6931471805599453094172321214581766L;
}

} // namespace cyclebound
