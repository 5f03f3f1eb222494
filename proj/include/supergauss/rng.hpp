// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

#include "supergauss/linalg.hpp"

namespace supergauss {

/// Identifies one independent random stream: a user seed plus a chunk index.
/// Parallel work is split into chunks, each with its own key, so results do
/// not depend on which thread runs which chunk.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t chunk = 0;

    friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32 {
  public:
    using Block = std::array<std::uint32_t, 4>;

    explicit Philox4x32(StreamKey key) noexcept;

    /// Bijection of the 128-bit counter under the stream key.
    [[nodiscard]] Block operator()(std::uint64_t counter) const noexcept;

  private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t chunk_lo_;
    std::uint32_t chunk_hi_;
};

/// Sequential standard normals drawn from one stream (Box-Muller on Philox blocks).
class NormalStream {
  public:
    explicit NormalStream(StreamKey key) noexcept : gen_(key) {}

    double next() noexcept;
    void fill(Eigen::Ref<Vector> out) noexcept;
    /// Uniform on (0, 1).
    double uniform() noexcept;

  private:
    void refill() noexcept;

    Philox4x32 gen_;
    std::uint64_t counter_ = 0;
    std::array<double, 2> buf_{};
    int avail_ = 0;
};

/// n i.i.d. standard normals; bit-identical for a fixed key.
[[nodiscard]] Vector sample_standard(Eigen::Index n, StreamKey key);

/// SplitMix64 finalizer, used to derive sub-seeds.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace supergauss
