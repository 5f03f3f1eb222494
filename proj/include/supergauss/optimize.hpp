// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "supergauss/linalg.hpp"

namespace supergauss {

using Objective = std::function<double(const Vector&)>;

struct MaximizeOptions {
    /// Random unit directions searched in addition to the coordinate rays.
    int random_directions = 16;
    /// Coordinate rays are taken along the first min(dim, max_coordinate_rays) axes.
    int max_coordinate_rays = 64;
    /// Radii probed along every ray before bracketing.
    std::vector<double> ray_radii{0.5, 1.0, 2.0, 4.0};
    /// Number of best ray maxima refined by a local simplex search.
    int refine_starts = 4;
    int max_local_evaluations = 20000;
    /// Simplex refinement is skipped above this dimension.
    Eigen::Index max_refine_dim = 64;
    std::uint64_t seed = 0x5EED;
};

struct MaximizeResult {
    Vector argmax;
    double value = 0.0;
    /// Set when some ray kept increasing past radius 2^40.
    bool unbounded = false;
    long evaluations = 0;
};

/// Derivative-free multi-start maximization of g over R^dim: the origin,
/// coordinate and random rays refined by golden-section search, then
/// Nelder-Mead from the best ray maxima. Starts run concurrently and are merged
/// by max with index tie-breaking, so the result does not depend on scheduling.
/// The objective must be safe to call concurrently.
[[nodiscard]] MaximizeResult maximize(const Objective& g, Eigen::Index dim, const MaximizeOptions& options = {});

/// Maximizer of a unimodal h on [lo, hi].
[[nodiscard]] double golden_section_max(const std::function<double(double)>& h, double lo, double hi,
                                        double tol = 1e-12);

/// Nelder-Mead with adaptive coefficients, maximizing g from `start`.
[[nodiscard]] MaximizeResult nelder_mead_max(const Objective& g, const Vector& start, double step,
                                             int max_evaluations);

}  // namespace supergauss
