// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace supergauss {

/// One-pass mean/variance (Welford) with the pairwise combination rule of
/// Chan, Golub and LeVeque, so chunked partial results merge associatively.
class RunningStats {
  public:
    void push(double x) noexcept {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    void merge(const RunningStats& other) noexcept {
        if (other.n_ == 0) return;
        if (n_ == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(n_);
        const double nb = static_cast<double>(other.n_);
        const double total = na + nb;
        const double delta = other.mean_ - mean_;
        mean_ += delta * (nb / total);
        m2_ += other.m2_ + delta * delta * (na * nb / total);
        n_ += other.n_;
    }

    [[nodiscard]] std::uint64_t count() const noexcept { return n_; }
    [[nodiscard]] double mean() const noexcept { return mean_; }
    /// Unbiased sample variance; 0 for fewer than two samples.
    [[nodiscard]] double variance() const noexcept { return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1); }
    [[nodiscard]] double stderr_of_mean() const noexcept {
        return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
    }

  private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace supergauss
