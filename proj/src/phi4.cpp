// SPDX-License-Identifier: Apache-2.0
#include "supergauss/phi4.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace supergauss {

void validate(const LatticeConfig& cfg) {
    if (cfg.sites < 2) throw std::invalid_argument("lattice needs at least 2 sites");
    if (!(cfg.mass > 0.0)) throw std::invalid_argument("mass must be > 0");
    if (!(cfg.spacing > 0.0)) throw std::invalid_argument("spacing must be > 0");
    if (!(cfg.coupling >= 0.0)) throw std::invalid_argument("coupling must be >= 0");
    for (double a : cfg.alpha_grid) {
        if (!(a > 0.0)) throw std::invalid_argument("alpha must be > 0");
    }
}

std::vector<double> lattice_frequencies_squared(const LatticeConfig& cfg) {
    std::vector<double> w(static_cast<std::size_t>(cfg.sites));
    const double n = static_cast<double>(cfg.sites);
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / n;
        w[k] = 2.0 / (cfg.spacing * cfg.spacing) * (1.0 - std::cos(theta)) + cfg.mass * cfg.mass;
    }
    return w;
}

SpectralModel build_phi4_model(const LatticeConfig& cfg, double alpha) {
    validate(cfg);
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    const auto w2 = lattice_frequencies_squared(cfg);
    std::vector<Eigen::Index> order(w2.size());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    // Ties (the +-k modes) keep Fourier column order.
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return w2[static_cast<std::size_t>(a)] < w2[static_cast<std::size_t>(b)];
    });
    std::vector<double> raw;
    for (auto k : order) raw.push_back(1.0 / std::sqrt(w2[static_cast<std::size_t>(k)]));

    const CompactMap k = CompactMap::fourier(cfg.sites).with_permuted_columns(order);
    SpectralModel m;
    std::tie(m.lambda, m.K) = rescale_half_cap(EigenSequence(std::move(raw)), k, CapMode::uniform);
    if (cfg.coupling > 0.0) {
        m.p = Seminorm::lattice_power(4.0, cfg.spacing, cfg.sites, std::pow(cfg.coupling, 0.25));
        m.f = GrowthFunction::power(2.0);
    } else {
        m.p = Seminorm::lattice_power(4.0, cfg.spacing, cfg.sites);
        m.f = GrowthFunction::none();
    }
    m.q = Seminorm::lattice_power(2.0, cfg.spacing, cfg.sites);
    m.alpha = alpha;
    return m;
}

std::vector<SweepEntry> counterterm_sweep(const LatticeConfig& cfg, std::uint64_t samples, std::uint64_t seed,
                                          const SweepOptions& options) {
    validate(cfg);
    std::vector<SweepEntry> out;
    for (double a : cfg.alpha_grid) {
        out.push_back({a, convergence_run(build_phi4_model(cfg, a), samples, seed, options.convergence)});
    }
    return out;
}

}  // namespace supergauss
