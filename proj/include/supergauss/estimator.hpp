// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "supergauss/certificates.hpp"
#include "supergauss/running_stats.hpp"
#include "supergauss/spectral.hpp"

namespace supergauss {

/// Sampling distribution for x in R^n.
///   standard  x ~ N(0, I); the estimator averages the integrand directly.
///   laplace   defensive mixture w N(0, I) + (1 - w) (Gaussians at the modes of
///             the log integrand), reweighted exactly by the likelihood ratio.
enum class Proposal { standard, laplace };

[[nodiscard]] const char* to_string(Proposal p) noexcept;

struct EstimatorOptions {
    /// Samples per independent stream. Part of the result's identity: changing
    /// it changes the random draws, changing the thread count does not.
    std::uint64_t chunk_size = 4096;
    Proposal proposal = Proposal::standard;
    /// Weight of N(0, I) in the laplace mixture.
    double defensive_weight = 0.25;
};

/// Log-weights above this are clamped and counted as overflow.
inline constexpr double kOverflowExponent = 700.0;

struct EstimateRecord {
    Eigen::Index n = 0;
    std::uint64_t samples = 0;
    double mean = 0.0;
    double variance = 0.0;
    double stderr_ = 0.0;
    std::uint64_t seed = 0;
    /// Samples whose exponent exceeded kOverflowExponent.
    std::uint64_t overflow_count = 0;
    Proposal proposal = Proposal::standard;

    [[nodiscard]] bool overflowed() const noexcept { return overflow_count > 0; }
};

/// MC estimate of E exp(-f(p(v)) + alpha q(v)^2), v = K(lambda (.) x), x ~ N(0, I_n).
/// Chunks run in parallel; per-chunk statistics merge in chunk order.
[[nodiscard]] EstimateRecord integrate_projected(const SpectralModel& model, Eigen::Index n, std::uint64_t samples,
                                                 std::uint64_t seed, const EstimatorOptions& options = {});

/// Single-threaded reference for integrate_projected: same draws, one accumulator.
[[nodiscard]] EstimateRecord integrate_projected_serial(const SpectralModel& model, Eigen::Index n,
                                                        std::uint64_t samples, std::uint64_t seed,
                                                        const EstimatorOptions& options = {});

/// I_n(R) = prod_{a<=n} (1 - l_a^2)^-1/2 P[ sum l_a^2 z_a^2 / (1 - l_a^2) >= R ].
[[nodiscard]] EstimateRecord tail_mass_mc(const EigenSequence& lambda, std::size_t n, double r,
                                          std::uint64_t samples, std::uint64_t seed,
                                          std::uint64_t chunk_size = 4096);
[[nodiscard]] EstimateRecord tail_mass_mc_serial(const EigenSequence& lambda, std::size_t n, double r,
                                                 std::uint64_t samples, std::uint64_t seed,
                                                 std::uint64_t chunk_size = 4096);

/// Tensor Gauss-Hermite value of the projected integral, n <= 3.
[[nodiscard]] double quadrature_oracle(const SpectralModel& model, Eigen::Index n, int nodes_per_dim = 64);

/// Exact value for f == 0 and quadratic q: prod (1 - 2 alpha mu_k)^-1/2 over the
/// eigenvalues mu_k of A^T G A, A = K diag(lambda) on the first n coordinates.
/// Infinity when some 2 alpha mu_k >= 1. Throws std::invalid_argument otherwise.
[[nodiscard]] double gaussian_closed_form(const SpectralModel& model, Eigen::Index n);

/// Whether exp(-f(p) + alpha q^2) is integrable against N(0, I_n), decided from
/// the directions where the growth term cannot compete with alpha q^2.
struct Integrability {
    enum class Status { integrable, divergent, unknown };
    Status status = Status::unknown;
    /// 2 alpha sup q(A d)^2 over unit d in the relevant subspace; divergence iff >= 1.
    double threshold = 0.0;
    std::string detail;
};

[[nodiscard]] Integrability integrability_check(const SpectralModel& model, Eigen::Index n);
[[nodiscard]] const char* to_string(Integrability::Status s) noexcept;

enum class Verdict { converged, budget_exhausted, bound_violated };
[[nodiscard]] const char* to_string(Verdict v) noexcept;

struct Plateau {
    enum class Kind {
        pairwise,         // consecutive schedule points agree within the 2-sigma rule
        full_truncation,  // n reached N for a finite model, so the record is the full integral
    };
    Eigen::Index n = 0;
    double value = 0.0;
    Kind kind = Kind::pairwise;
};

struct ConvergenceOptions {
    /// Empty means 1, 2, 4, ..., N.
    std::vector<Eigen::Index> schedule;
    double atol = 1e-4;
    BalancingOptions balancing;
    EstimatorOptions estimator;
};

struct ConvergenceReport {
    std::vector<EstimateRecord> records;
    /// Per record: mean <= global bound + 3 stderr.
    std::vector<bool> within_bound;
    std::optional<Plateau> plateau;
    Certificate certificate;
    Verdict verdict = Verdict::budget_exhausted;
    /// Some record overflowed or the integrand is provably non-integrable.
    bool divergence_flagged = false;
    std::vector<std::string> annotations;
};

[[nodiscard]] std::vector<Eigen::Index> doubling_schedule(Eigen::Index n);

[[nodiscard]] ConvergenceReport convergence_run(const SpectralModel& model, std::uint64_t samples,
                                                std::uint64_t seed, const ConvergenceOptions& options = {});

}  // namespace supergauss
