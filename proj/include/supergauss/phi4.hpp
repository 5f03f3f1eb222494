// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "supergauss/estimator.hpp"

namespace supergauss {

/// Free scalar field on a 1-D periodic lattice with a quartic self-interaction
/// lambda_c dx sum phi^4 and counterterm alpha dx sum phi^2.
struct LatticeConfig {
    Eigen::Index sites = 8;
    double mass = 1.0;
    double spacing = 1.0;
    double coupling = 1.0;  // 0 switches the quartic term off
    std::vector<double> alpha_grid{0.5, 2.0, 8.0};
};

/// Throws std::invalid_argument for N < 2, m <= 0, dx <= 0, lambda_c < 0 or a non-positive alpha.
void validate(const LatticeConfig& cfg);

/// omega_k^2 = (2 / dx^2)(1 - cos(2 pi k / N)) + m^2, k = 0..N-1.
[[nodiscard]] std::vector<double> lattice_frequencies_squared(const LatticeConfig& cfg);

/// Model with eigenvalues 1/omega_k sorted descending and uniformly capped at 0.7,
/// K the matching real Fourier synthesis (columns permuted, scaled by 1/t).
[[nodiscard]] SpectralModel build_phi4_model(const LatticeConfig& cfg, double alpha);

struct SweepOptions {
    ConvergenceOptions convergence;
    SweepOptions() { convergence.estimator.proposal = Proposal::laplace; }
};

struct SweepEntry {
    double alpha = 0.0;
    ConvergenceReport report;
};

/// convergence_run for every alpha on the grid, in grid order.
[[nodiscard]] std::vector<SweepEntry> counterterm_sweep(const LatticeConfig& cfg, std::uint64_t samples,
                                                        std::uint64_t seed, const SweepOptions& options = {});

}  // namespace supergauss
