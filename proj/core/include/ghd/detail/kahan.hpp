#pragma once

#include <cmath>

namespace ghd::detail {

// Neumaier-compensated accumulator; moment sums run through this so the
// closed-form/exhaustive comparisons are not limited by naive summation.
struct Kahan {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

} // namespace ghd::detail
