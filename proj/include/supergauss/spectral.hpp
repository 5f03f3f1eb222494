// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "supergauss/linalg.hpp"
#include "supergauss/rng.hpp"
#include "supergauss/seminorm.hpp"

namespace supergauss {

/// Declared asymptotic behaviour of the eigenvalues beyond the listed ones.
///   power        lambda_n = c * n^-gamma
///   exponential  lambda_n = c * exp(-rate * n)
///   none         the listed values are the whole (finite) sequence
struct DecayFamily {
    enum class Kind { none, power, exponential };
    Kind kind = Kind::none;
    double c = 0.0;
    double rate = 0.0;  // gamma for power, r for exponential

    static DecayFamily none() { return {}; }
    static DecayFamily power(double c, double gamma) { return {Kind::power, c, gamma}; }
    static DecayFamily exponential(double c, double r) { return {Kind::exponential, c, r}; }

    [[nodiscard]] double value(double n) const noexcept;
    [[nodiscard]] std::string describe() const;
};

/// Eigenvalues of the Hilbert-Schmidt factor, listed in 1-based order n = 1..N.
class EigenSequence {
  public:
    EigenSequence() = default;
    explicit EigenSequence(std::vector<double> values, DecayFamily decay = DecayFamily::none())
        : values_(std::move(values)), decay_(decay) {}

    /// lambda_n = c n^-gamma for n = 1..count, with the same family declared for the tail.
    static EigenSequence power(double c, double gamma, std::size_t count);
    static EigenSequence exponential(double c, double rate, std::size_t count);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    /// 1-based access: lambda(1) is the largest.
    [[nodiscard]] double lambda(std::size_t n) const { return values_.at(n - 1); }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] const DecayFamily& decay() const noexcept { return decay_; }

    [[nodiscard]] bool descending() const noexcept;
    [[nodiscard]] EigenSequence truncated(std::size_t n) const;
    [[nodiscard]] EigenSequence without_zeros() const;

  private:
    std::vector<double> values_;
    DecayFamily decay_;
};

/// A finite sum split into its listed part and a rigorous upper bound on the
/// declared tail. `divergent` is set when the declared family makes the series diverge.
struct SeriesSum {
    double truncated = 0.0;
    double tail = 0.0;
    bool divergent = false;

    [[nodiscard]] double total() const noexcept;
};

/// sum lambda_n^2 (plus declared tail).
[[nodiscard]] SeriesSum hs_series(const EigenSequence& lambda);
/// sum lambda_n^2 ln(n + 1) (plus declared tail).
[[nodiscard]] SeriesSum log_weighted_series(const EigenSequence& lambda);

[[nodiscard]] inline double hs_sum(const EigenSequence& lambda) { return hs_series(lambda).total(); }
[[nodiscard]] inline double log_weighted_sum(const EigenSequence& lambda) { return log_weighted_series(lambda).total(); }

/// The compact factor K mapping J-coordinates (length N) to the seminorm domain.
/// Stored as a base map times a diagonal column scaling.
class CompactMap {
  public:
    enum class Kind { identity, dense, fourier };

    static CompactMap identity(Eigen::Index n);
    /// Dense m x n matrix. When `declared_norm` is negative the spectral norm is computed.
    static CompactMap dense(Matrix m, double declared_norm = -1.0);
    /// Orthonormal real Fourier synthesis on N sites; column k is mode k.
    static CompactMap fourier(Eigen::Index n);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] Eigen::Index in_dim() const noexcept { return in_dim_; }
    [[nodiscard]] Eigen::Index out_dim() const noexcept { return out_dim_; }
    [[nodiscard]] const Vector& column_scale() const noexcept { return col_scale_; }
    /// Upper bound on ||K||_{2->2}.
    [[nodiscard]] double op_norm() const noexcept;
    [[nodiscard]] bool orthogonal() const noexcept;

    /// K x for x of length <= in_dim (shorter vectors are zero-padded).
    [[nodiscard]] Vector apply(const Vector& x) const;
    /// Dense matrix of the first n columns of K.
    [[nodiscard]] Matrix leading_columns(Eigen::Index n) const;

    [[nodiscard]] CompactMap with_column_scale(const Vector& scale) const;
    [[nodiscard]] CompactMap with_permuted_columns(const std::vector<Eigen::Index>& order) const;
    [[nodiscard]] std::string describe() const;

  private:
    Kind kind_ = Kind::identity;
    Eigen::Index in_dim_ = 0;
    Eigen::Index out_dim_ = 0;
    Matrix base_;  // empty for identity
    Vector col_scale_;
    double base_norm_ = 1.0;
};

struct SpectralModel {
    EigenSequence lambda;
    CompactMap K = CompactMap::identity(0);
    Seminorm p = Seminorm::l2(0);
    Seminorm q = Seminorm::l2(0);
    GrowthFunction f = GrowthFunction::none();
    double alpha = 1.0;

    [[nodiscard]] Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(lambda.size()); }
};

enum class CapMode {
    per_coordinate,  // t_n = min(1, 0.7 / |lambda_n|)
    uniform,         // one factor t = min(1, 0.7 / max |lambda_n|) for every n
};

inline constexpr double kHalfCap = 0.7;

/// Caps eigenvalues at 0.7 and moves the compensating factor 1/t_n into K,
/// so K~ diag(lambda~) = K diag(lambda).
[[nodiscard]] std::pair<EigenSequence, CompactMap> rescale_half_cap(const EigenSequence& lambda, const CompactMap& k,
                                                                    CapMode mode = CapMode::per_coordinate);

/// The linear map x -> K(lambda (.) x) restricted to the first n coordinates.
class Embedding {
  public:
    Embedding(const SpectralModel& model, Eigen::Index n);

    [[nodiscard]] Eigen::Index in_dim() const noexcept { return n_; }
    [[nodiscard]] Eigen::Index out_dim() const noexcept { return out_; }
    void apply(const Vector& x, Vector& out) const;
    [[nodiscard]] const Matrix& matrix() const noexcept { return a_; }

  private:
    Eigen::Index n_;
    Eigen::Index out_;
    Matrix a_;
};

/// v = K(lambda (.) x); x may be shorter than N.
[[nodiscard]] Vector embed(const SpectralModel& model, const Vector& x);

struct ValidationCheck {
    enum class Severity { error, warning };
    std::string name;
    bool passed = true;
    Severity severity = Severity::error;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    KernelCompatibility compatibility;

    /// No failed check of error severity.
    [[nodiscard]] bool ok() const noexcept;
    [[nodiscard]] bool passed(const std::string& name) const;
    [[nodiscard]] const ValidationCheck* find(const std::string& name) const;
    /// Whether the log-weighted eigenvalue summability needed for convergence holds.
    [[nodiscard]] bool convergence_hypothesis() const { return passed("log-weighted summability"); }
};

/// Hypothesis checks at finite truncation. Throws DimensionError on structural
/// mismatches; property failures are recorded in the report.
[[nodiscard]] ValidationReport validate_model(const SpectralModel& model, StreamKey key = {});

/// Drops zero eigenvalues together with the matching columns of K.
[[nodiscard]] SpectralModel drop_zero_eigenvalues(const SpectralModel& model);

}  // namespace supergauss
