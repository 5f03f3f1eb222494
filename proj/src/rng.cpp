// SPDX-License-Identifier: Apache-2.0
#include "supergauss/rng.hpp"

#include <cmath>
#include <numbers>

namespace supergauss {
namespace {

constexpr std::uint32_t kW32A = 0x9E3779B9;
constexpr std::uint32_t kW32B = 0xBB67AE85;
constexpr std::uint32_t kM4x32A = 0xD2511F53;
constexpr std::uint32_t kM4x32B = 0xCD9E8D57;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(product);
    hi = static_cast<std::uint32_t>(product >> 32);
}

// 53 random bits mapped to the open interval (0, 1).
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
    return (static_cast<double>(bits & ((1ULL << 53) - 1)) + 0.5) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Philox4x32(StreamKey key) noexcept
    : key_{static_cast<std::uint32_t>(key.seed), static_cast<std::uint32_t>(key.seed >> 32)},
      chunk_lo_(static_cast<std::uint32_t>(key.chunk)),
      chunk_hi_(static_cast<std::uint32_t>(key.chunk >> 32)) {}

Philox4x32::Block Philox4x32::operator()(std::uint64_t counter) const noexcept {
    Block ctr{static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
              chunk_lo_, chunk_hi_};
    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        std::uint32_t lo0, hi0, lo1, hi1;
        mulhilo(kM4x32A, ctr[0], lo0, hi0);
        mulhilo(kM4x32B, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        k0 += kW32A;
        k1 += kW32B;
    }
    return ctr;
}

void NormalStream::refill() noexcept {
    const auto block = gen_(counter_++);
    const double u1 = to_unit(block[0], block[1]);
    const double u2 = to_unit(block[2], block[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    buf_[0] = radius * std::cos(angle);
    buf_[1] = radius * std::sin(angle);
    avail_ = 2;
}

double NormalStream::next() noexcept {
    if (avail_ == 0) refill();
    return buf_[2 - avail_--];
}

void NormalStream::fill(Eigen::Ref<Vector> out) noexcept {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = next();
}

double NormalStream::uniform() noexcept {
    const auto block = gen_(counter_++);
    return to_unit(block[0], block[1]);
}

Vector sample_standard(Eigen::Index n, StreamKey key) {
    Vector out(n);
    NormalStream stream(key);
    stream.fill(out);
    return out;
}

}  // namespace supergauss
