#pragma once

#include <cmath>
#include <cstdint>

namespace asymlink {

/// A Monte Carlo / quadrature result with a one-sigma error proxy.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;

    bool agrees(const Estimate& o, double n_sigma = 2.0) const {
        const double s = std::sqrt(std_error * std_error + o.std_error * o.std_error);
        return std::abs(value - o.value) <= n_sigma * s;
    }
};

/// Welford accumulator for mean / standard error of the mean.
class MeanAccumulator {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }

    void merge(const MeanAccumulator& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
        const double d = o.mean_ - mean_;
        mean_ += d * nb / (na + nb);
        m2_ += o.m2_ + d * d * na * nb / (na + nb);
        n_ += o.n_;
    }

    std::int64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double std_error_of_mean() const {
        return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }

    /// Estimate of `scale * mean`.
    Estimate estimate(double scale = 1.0) const {
        return Estimate{scale * mean(), std::abs(scale) * std_error_of_mean(), n_};
    }

private:
    std::int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace asymlink
