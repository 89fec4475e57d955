#pragma once

#include <cmath>
#include <cstdint>

namespace mpdesign {

// Welford accumulator: running mean and the standard error of that mean.
class RunningMean {
public:
    void add(double x) noexcept {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    std::uint64_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    double standard_error() const noexcept {
        if (count_ < 2) return 0.0;
        const double n = static_cast<double>(count_);
        return std::sqrt(m2_ / (n - 1.0) / n);
    }

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace mpdesign
