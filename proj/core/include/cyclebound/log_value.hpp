#pragma once

#include <cstdint>
#include <limits>

namespace cyclebound {

// Nonnegative real carried as the natural log of its magnitude. Probabilities
// and counts in this library underflow a double well before n reaches
// interesting sizes (nu(n,1) = 1/n! dies near n = 171), so everything that can
// get small lives in log space.
class LogValue {
  public:
    LogValue() : log_magnitude_(0.0), is_zero_(true) {}

    static LogValue zero() { return LogValue(); }
    static LogValue from_log(double lm) {
        LogValue v;
        v.log_magnitude_ = lm;
        v.is_zero_ = false;
        return v;
    }
    static LogValue from_value(double x); // requires x >= 0

    bool is_zero() const { return is_zero_; }

    // Natural log of the magnitude; -inf for zero.
    double log() const {
        return is_zero_ ? -std::numeric_limits<double>::infinity() : log_magnitude_;
    }

    // Round-trips through exp(); underflows to 0.0 for very negative logs.
    double value() const;

    // multiply = add logs
    friend LogValue operator*(LogValue a, LogValue b);
    // add = log-sum-exp
    friend LogValue operator+(LogValue a, LogValue b);
    friend LogValue operator/(LogValue a, LogValue b);

  private:
    double log_magnitude_;
    bool is_zero_;
};

// H_r = sum_{j=1..r} 1/j, accumulated as an unevaluated double-double pair
// (value = hi + lo exactly to ~32 digits) so that consecutive factors still
// differ by 1/r to a relative 1e-15 even when H_r itself has few spare bits.
struct HarmonicFactor {
    std::int64_t r;
    double value; // rounded hi + lo
    double hi;
    double lo;
};

HarmonicFactor harmonic_factor(std::int64_t r);
double harmonic_number(std::int64_t r);

} // namespace cyclebound
