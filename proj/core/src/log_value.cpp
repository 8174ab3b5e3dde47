#include "cyclebound/log_value.hpp"

#include <cmath>
#include <stdexcept>

namespace cyclebound {

LogValue LogValue::from_value(double x) {
    if (x < 0.0 || std::isnan(x)) {
        throw std::invalid_argument("LogValue::from_value: negative or NaN input");
    }
    if (x == 0.0) return LogValue::zero();
    return LogValue::from_log(std::log(x));
}

double LogValue::value() const {
    if (is_zero_) return 0.0;
    return std::exp(log_magnitude_);
}

LogValue operator*(LogValue a, LogValue b) {
    if (a.is_zero_ || b.is_zero_) return LogValue::zero();
    return LogValue::from_log(a.log_magnitude_ + b.log_magnitude_);
}

LogValue operator/(LogValue a, LogValue b) {
    if (b.is_zero_) throw std::domain_error("LogValue: division by zero");
    if (a.is_zero_) return LogValue::zero();
    return LogValue::from_log(a.log_magnitude_ - b.log_magnitude_);
}

LogValue operator+(LogValue a, LogValue b) {
    if (a.is_zero_) return b;
    if (b.is_zero_) return a;
    double hi = a.log_magnitude_, lo = b.log_magnitude_;
    if (hi < lo) std::swap(hi, lo);
    return LogValue::from_log(hi + std::log1p(std::exp(lo - hi)));
}

HarmonicFactor harmonic_factor(std::int64_t r) {
    if (r < 1) throw std::invalid_argument("harmonic_factor: r must be >= 1");
    double hi = 0.0, lo = 0.0;
    for (std::int64_t j = 1; j <= r; ++j) {
        const double x = 1.0 / static_cast<double>(j);
        // TwoSum: hi + x = s + err exactly
        const double s = hi + x;
        const double b = s - hi;
        const double err = (hi - (s - b)) + (x - b);
        hi = s;
        lo += err;
    }
    // renormalize into a proper hi/lo pair
    const double v = hi + lo;
    const double vlo = lo - (v - hi);
    return HarmonicFactor{r, v, v, vlo};
}

double harmonic_number(std::int64_t r) { return harmonic_factor(r).value; }

} // namespace cyclebound
