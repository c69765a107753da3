#pragma once

#include <cmath>

namespace entlab {

// Neumaier compensated summation.
template <class T = double>
class CompensatedSum {
public:
    void add(T x)
    {
        T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    T sum_ = 0;
    T comp_ = 0;
};

}  // namespace entlab
