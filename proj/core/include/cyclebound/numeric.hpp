#pragma once

#include <cmath>
#include <cstddef>

namespace cyclebound {

// Neumaier-compensated accumulator. The running error term recovers the low
// bits lost by each addition, so long sums stay within a few ulp of exact.
template <typename T = double>
struct CompensatedSum {
    T sum{0};
    T comp{0};

    void add(T x) {
        T t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    T value() const { return sum + comp; }
};

template <typename T, typename It>
T compensated_sum(It first, It last) {
    CompensatedSum<T> acc;
    for (; first != last; ++first) acc.add(static_cast<T>(*first));
    return acc.value();
}

} // namespace cyclebound
