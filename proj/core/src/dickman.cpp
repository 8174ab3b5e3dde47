#include "cyclebound/dickman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mp_float.hpp"

namespace cyclebound {

// ---------------------------------------------------------------------------
// xi and I
// ---------------------------------------------------------------------------

namespace {

// e^xi - 1 - u*xi, computed through expm1 so the u -> 1+ regime (xi -> 0)
// keeps full relative accuracy.
double xi_residual(double xi, double u) { return std::expm1(xi) - u * xi; }

double xi_prime_from(double u, double xi) {
    if (xi < 1e-8) {
        // xi' = xi^2 / (xi e^xi - e^xi + 1); the denominator is
        // sum_{m>=2} (m-1) xi^m / m!, summed directly to dodge the 0/0 as
        // xi -> 0 (limit 2).
        if (xi == 0.0) return 2.0;
        long double den = 0.0L, fact = 1.0L;
        const long double x = xi;
        long double xp = x;
        for (int m = 2; m <= 48; ++m) {
            fact *= m;
            xp *= x;
            den += (m - 1) * xp / fact;
        }
        return static_cast<double>(x * x / den);
    }
    // (1/u) xi / (xi - 1 + 1/u) rearranged as xi / (u xi - (u - 1)): near
    // u = 1 the textbook form cancels catastrophically, this one does not.
    const long double ul = u, xl = xi;
    return static_cast<double>(xl / (ul * xl - (ul - 1.0L)));
}

} // namespace

XiValue solve_xi(double u, double tol) {
    if (!(u >= 1.0)) throw std::invalid_argument("solve_xi: require u >= 1");
    if (u == 1.0) return XiValue{1.0, 0.0, 2.0};
    double lo = std::log(u);
    double hi = 2.0 * std::log(u);
    double xi = std::log(u) + std::log(std::log(u + 2.0));
    xi = std::min(std::max(xi, std::nextafter(lo, hi)), hi);
    for (int it = 0; it < 200; ++it) {
        const double g = xi_residual(xi, u);
        if (g > 0.0) hi = std::min(hi, xi);
        else lo = std::max(lo, xi);
        const double gp = std::exp(xi) - u;
        double next = xi - g / gp;
        if (!(next > lo && next <= hi)) next = 0.5 * (lo + hi); // bisection fallback
        const double step = std::abs(next - xi);
        xi = next;
        if (step <= tol * (1.0 + std::abs(xi))) break;
    }
    return XiValue{u, xi, xi_prime_from(u, xi)};
}

double i_integral(double s) {
    if (std::abs(s) > 300.0) {
        throw std::invalid_argument("i_integral: |s| > 300 (overflow guard)");
    }
    if (s == 0.0) return 0.0;
    long double sum = 0.0L, comp = 0.0L;
    long double term = 1.0L; // s^k / k!
    const long double x = s;
    for (int k = 1; k <= 1200; ++k) {
        term *= x / k;
        const long double t = term / k;
        // compensated accumulation
        const long double v = sum + t;
        comp += (std::fabs(sum) >= std::fabs(t)) ? ((sum - v) + t) : ((t - v) + sum);
        sum = v;
        if (std::fabs(t) < 1e-17L * std::fabs(sum + comp) && k > 4) break;
    }
    return static_cast<double>(sum + comp);
}

// ---------------------------------------------------------------------------
// Piecewise rho table.
//
// On [k, k+1] write rho(c + s), c = k + 1/2, as a power series sum a_j s^j.
// The delay equation u rho'(u) = -rho(u-1) turns into the coefficient
// recurrence
//     a_{j+1} = -(b_j + j a_j) / (c (j+1)),
// where b is the series of the previous interval at center c - 1, and a_0 is
// fixed afterwards by continuity at the left edge. Each interval therefore
// follows from the previous one in a single pass.
//
// Accuracy forces multiprecision: an absolute perturbation injected near
// u ~ 3 decays only polynomially under the delay equation while rho itself
// falls below 1e-1500 by u = 500, so the working precision (and the series
// truncation threshold) must track log(rho(k)/rho(horizon)). With double
// arithmetic the relative error already exceeds 1 near u ~ 20.
// ---------------------------------------------------------------------------

namespace {

using detail::MpFloat;

constexpr int kServeDegree = 16;

struct Segment {
    // log rho on [k, k+1]: offset + Chebyshev series in t = 2(u-k) - 1.
    long double offset; // log rho(k)
    std::array<long double, kServeDegree + 1> coef;
};

struct RhoTable {
    int horizon = 2;               // serves u <= horizon
    std::vector<Segment> segs;     // segs[i] covers [i+2, i+3]
};

// Crude -log rho(u) from the asymptotic form, used only to size precision.
double neg_log_rho_estimate(double u) {
    if (u <= 2.0) return 2.0;
    const XiValue xv = solve_xi(u, 1e-12);
    const double ixi = i_integral(xv.xi);
    return u * xv.xi - ixi - euler_gamma - 0.5 * std::log(xv.xi_prime / (2.0 * M_PI)) + 2.0;
}

mpfr_prec_t interval_precision(double target_nln, double here_nln) {
    const double bits = std::max(target_nln - here_nln, 0.0) * 1.4426950408889634 + 128.0;
    return static_cast<mpfr_prec_t>(bits);
}

std::shared_ptr<const RhoTable> build_table(int horizon) {
    auto table = std::make_shared<RhoTable>();
    table->horizon = horizon;
    table->segs.reserve(static_cast<std::size_t>(horizon) - 2);

    const double target_nln = neg_log_rho_estimate(horizon);
    // |a_j| 2^{-j} below this binary exponent cannot move any served value.
    const mpfr_exp_t stop_exp =
        static_cast<mpfr_exp_t>(std::llround(-target_nln * 1.4426950408889634)) - 64;

    // Serving nodes: s_i = cos(i pi / 16) / 2 relative to the center.
    constexpr mpfr_prec_t serve_prec = 256;
    std::array<MpFloat, kServeDegree + 1> snode{
        MpFloat(serve_prec), MpFloat(serve_prec), MpFloat(serve_prec), MpFloat(serve_prec),
        MpFloat(serve_prec), MpFloat(serve_prec), MpFloat(serve_prec), MpFloat(serve_prec),
        MpFloat(serve_prec), MpFloat(serve_prec), MpFloat(serve_prec), MpFloat(serve_prec),
        MpFloat(serve_prec), MpFloat(serve_prec), MpFloat(serve_prec), MpFloat(serve_prec),
        MpFloat(serve_prec)};
    {
        MpFloat pi(serve_prec), ang(serve_prec);
        mpfr_const_pi(pi.get(), MPFR_RNDN);
        for (int i = 0; i <= kServeDegree; ++i) {
            mpfr_mul_si(ang.get(), pi.get(), i, MPFR_RNDN);
            mpfr_div_ui(ang.get(), ang.get(), kServeDegree, MPFR_RNDN);
            mpfr_cos(snode[i].get(), ang.get(), MPFR_RNDN);
            mpfr_div_2si(snode[i].get(), snode[i].get(), 1, MPFR_RNDN);
        }
    }

    std::vector<MpFloat> prev; // series of rho(c_{k-1} + s)
    prev.emplace_back(128);
    prev[0].set_ui(1); // rho == 1 on [0, 1]

    MpFloat log_rho_k(serve_prec); // log rho(k)
    mpfr_set_zero(log_rho_k.get(), 1);
    MpFloat rho_k(128);
    rho_k.set_ui(1); // rho(1)

    for (int k = 1; k + 1 <= horizon; ++k) {
        const mpfr_prec_t prec = interval_precision(target_nln, neg_log_rho_estimate(k + 1));
        MpFloat c(prec), tmp(prec), tmp2(prec);
        mpfr_set_si(c.get(), 2 * k + 1, MPFR_RNDN);
        mpfr_div_2si(c.get(), c.get(), 1, MPFR_RNDN); // c = k + 1/2

        std::vector<MpFloat> a;
        a.reserve(prev.size() + 16);
        a.emplace_back(prec); // a_0 placeholder, fixed by continuity below
        int low_run = 0;
        for (std::size_t j = 0;; ++j) {
            // a_{j+1} = -(b_j + j a_j) / (c (j+1))
            if (j < prev.size()) tmp.set(prev[j]);
            else tmp.set_ui(0);
            if (j > 0) {
                detail::mul_si(tmp2, a[j], static_cast<long>(j));
                detail::add(tmp, tmp, tmp2);
            }
            mpfr_div_ui(tmp.get(), tmp.get(), static_cast<unsigned long>(j + 1), MPFR_RNDN);
            detail::div(tmp, tmp, c);
            detail::neg(tmp, tmp);
            a.emplace_back(prec);
            a.back().set(tmp);

            const bool a_low = a.back().is_zero() ||
                               a.back().exp2() - static_cast<mpfr_exp_t>(j + 1) < stop_exp;
            const bool b_low = j + 1 >= prev.size() || prev[j + 1].is_zero() ||
                               prev[j + 1].exp2() - static_cast<mpfr_exp_t>(j + 1) < stop_exp;
            low_run = (a_low && b_low) ? low_run + 1 : 0;
            if (j >= 8 && low_run >= 3) break;
            if (j > 30000) throw std::runtime_error("rho table: series did not truncate");
        }

        // Continuity at the left edge: rho(k) = sum_j a_j (-1/2)^j.
        tmp.set_ui(0);
        for (std::size_t j = a.size() - 1; j >= 1; --j) {
            detail::add(tmp, tmp, a[j]);
            mpfr_div_2si(tmp.get(), tmp.get(), 1, MPFR_RNDN);
            detail::neg(tmp, tmp);
        }
        detail::sub(a[0], rho_k, tmp);

        // Right edge: rho(k+1) = sum_j a_j (1/2)^j.
        tmp.set_ui(0);
        for (std::size_t j = a.size(); j-- > 0;) {
            detail::add(tmp, tmp, a[j]);
            if (j > 0) mpfr_div_2si(tmp.get(), tmp.get(), 1, MPFR_RNDN);
        }
        MpFloat rho_next(prec);
        rho_next.set(tmp);

        if (k >= 2) {
            // Serve log rho on [k, k+1] as a Chebyshev interpolant.
            Segment seg;
            seg.offset = log_rho_k.to_long_double();
            std::array<long double, kServeDegree + 1> phi{};
            MpFloat val(serve_prec), lg(serve_prec);
            for (int i = 0; i <= kServeDegree; ++i) {
                // Ascending evaluation of the series at s_i; terms fade fast.
                val.set_ui(0);
                MpFloat pw(serve_prec), term(serve_prec);
                pw.set_ui(1);
                const mpfr_exp_t scale = rho_k.exp2();
                for (std::size_t j = 0; j < a.size(); ++j) {
                    detail::mul(term, a[j], pw);
                    detail::add(val, val, term);
                    detail::mul(pw, pw, snode[i]);
                    if (j > 8 && !term.is_zero() && term.exp2() < scale - 120) break;
                    if (j > 8 && term.is_zero()) break;
                }
                detail::log(lg, val);
                detail::sub(lg, lg, log_rho_k);
                phi[i] = lg.to_long_double();
            }
            for (int m = 0; m <= kServeDegree; ++m) {
                long double sum = 0.0L;
                for (int i = 0; i <= kServeDegree; ++i) {
                    const long double ang = static_cast<long double>(m) *
                                            static_cast<long double>(i) *
                                            std::numbers::pi_v<long double> / kServeDegree;
                    long double f = phi[i] * std::cos(ang);
                    if (i == 0 || i == kServeDegree) f *= 0.5L;
                    sum += f;
                }
                seg.coef[m] = 2.0L * sum / kServeDegree;
            }
            seg.coef[0] *= 0.5L;
            seg.coef[kServeDegree] *= 0.5L;
            table->segs.push_back(seg);
        }

        // log rho(k+1) = log rho_next
        MpFloat lg(serve_prec);
        detail::log(lg, rho_next);
        log_rho_k.set(lg);
        rho_k = std::move(rho_next);
        prev = std::move(a);
    }
    return table;
}

class RhoTableHolder {
  public:
    std::shared_ptr<const RhoTable> acquire(double u) {
        const int needed = std::min(static_cast<int>(std::ceil(u)), 500);
        std::lock_guard<std::mutex> lk(mu_);
        if (!table_ || table_->horizon < std::max(needed, 3)) {
            static constexpr int kSchedule[] = {8, 16, 32, 64, 128, 256, 500};
            int h = 500;
            for (int s : kSchedule) {
                if (s >= needed) { h = s; break; }
            }
            table_ = build_table(h);
        }
        return table_;
    }

  private:
    std::mutex mu_;
    std::shared_ptr<const RhoTable> table_;
};

RhoTableHolder& rho_tables() {
    static RhoTableHolder holder;
    return holder;
}

long double eval_segment(const Segment& seg, long double t) {
    long double b1 = 0.0L, b2 = 0.0L;
    for (int m = kServeDegree; m >= 1; --m) {
        const long double b0 = 2.0L * t * b1 - b2 + seg.coef[m];
        b2 = b1;
        b1 = b0;
    }
    return seg.offset + (t * b1 - b2 + seg.coef[0]);
}

} // namespace

double log_rho(double u) {
    if (!(u >= 0.0)) throw std::invalid_argument("log_rho: require u >= 0");
    if (u > kMaxRhoU) throw std::invalid_argument("log_rho: u > 500 not tabulated");
    if (u <= 1.0) return 0.0;
    if (u <= 2.0) return static_cast<double>(std::log1p(-std::log(static_cast<long double>(u))));
    auto table = rho_tables().acquire(u);
    int k = static_cast<int>(std::floor(u));
    k = std::min(k, table->horizon - 1);
    const Segment& seg = table->segs[static_cast<std::size_t>(k - 2)];
    const long double t = 2.0L * (static_cast<long double>(u) - k) - 1.0L;
    return static_cast<double>(eval_segment(seg, t));
}

DickmanContext rho(double u) {
    const double lr = log_rho(u);
    const double ixi = (u >= 1.0) ? i_integral(solve_xi(u).xi) : 0.0;
    return DickmanContext{u, lr, ixi, RhoMethod::piecewise_dde};
}

DickmanContext rho_alladi(double u) {
    if (!(u >= 1.0)) throw std::invalid_argument("rho_alladi: require u >= 1");
    const XiValue xv = solve_xi(u);
    const double ixi = i_integral(xv.xi);
    const double lr = 0.5 * std::log(xv.xi_prime / (2.0 * M_PI)) + euler_gamma - u * xv.xi + ixi;
    return DickmanContext{u, lr, ixi, RhoMethod::alladi_asymptotic};
}

LogValue dickman_estimate(std::int64_t n, std::int64_t r) {
    if (n < 1 || r < 1 || r > n) {
        throw std::invalid_argument("dickman_estimate: require 1 <= r <= n");
    }
    const double u = static_cast<double>(n) / static_cast<double>(r);
    return LogValue::from_log(-euler_gamma - std::log(static_cast<double>(r)) + log_rho(u));
}

LogValue dickman_xi_estimate(std::int64_t n, std::int64_t r) {
    if (r < 2 || n < 1 || r > n) {
        throw std::invalid_argument("dickman_xi_estimate: require 2 <= r <= n");
    }
    const double u = static_cast<double>(n) / static_cast<double>(r);
    if (!(u > 1.0)) {
        throw std::invalid_argument("dickman_xi_estimate: require n/r > 1");
    }
    const XiValue xv = solve_xi(u);
    const double est = -0.5 * std::log(2.0 * M_PI * static_cast<double>(r) * static_cast<double>(n)) +
                       i_integral(xv.xi) - u * xv.xi;
    return LogValue::from_log(est);
}

} // namespace cyclebound
