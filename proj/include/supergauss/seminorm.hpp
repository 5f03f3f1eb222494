// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "supergauss/linalg.hpp"
#include "supergauss/rng.hpp"

namespace supergauss {

/// A seminorm on finite coordinate vectors.
///
/// Every kind carries a positive `scale` multiplier, so `p(v) = scale * base(v)`:
///   matrix          base(v) = ||A v||_2
///   lattice_power   base(v) = (dx * sum_i |v_i|^s)^(1/s),  s >= 1
///   custom          base(v) = user evaluator (axioms are checked, not assumed)
class Seminorm {
  public:
    enum class Kind { matrix, lattice_power, custom };
    using Evaluator = std::function<double(const Vector&)>;

    static Seminorm matrix(Matrix a, double scale = 1.0);
    static Seminorm l2(Eigen::Index dim) { return matrix(Matrix::Identity(dim, dim)); }
    static Seminorm lattice_power(double s, double dx, Eigen::Index sites, double scale = 1.0);
    static Seminorm custom(Evaluator eval, Eigen::Index dim, double lipschitz, std::string name);

    double operator()(const Vector& v) const;

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return dim_; }
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] double exponent() const noexcept { return s_; }
    [[nodiscard]] double spacing() const noexcept { return dx_; }
    [[nodiscard]] const Matrix& matrix() const noexcept { return a_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    /// L with p(v) <= L ||v||_2.
    [[nodiscard]] double lipschitz() const noexcept { return lipschitz_; }

    /// True when p(v)^2 = v^T G v for a symmetric G (matrix kind, or lattice with s = 2).
    [[nodiscard]] bool is_quadratic() const noexcept;
    /// The Gram matrix G of a quadratic seminorm.
    [[nodiscard]] Matrix gram() const;

    [[nodiscard]] Seminorm scaled(double factor) const;
    [[nodiscard]] std::string describe() const;

  private:
    Seminorm() = default;

    Kind kind_ = Kind::matrix;
    Eigen::Index dim_ = 0;
    double scale_ = 1.0;
    Matrix a_;
    double s_ = 2.0;
    double dx_ = 1.0;
    Evaluator eval_;
    double lipschitz_ = 0.0;
    std::string name_;
};

/// Scalar growth function f : [0, inf) -> [0, inf).
class GrowthFunction {
  public:
    enum class Kind { none, power, log_power, custom };
    using Evaluator = std::function<double(double)>;

    /// f == 0: growth disabled (the pure Gaussian case).
    static GrowthFunction none();
    /// f(x) = x^(2 + eps), eps > 0.
    static GrowthFunction power(double eps);
    /// f(x) = x^2 ln(a + x), a >= e.
    static GrowthFunction log_power(double a);
    static GrowthFunction custom(Evaluator eval, std::string name);

    double operator()(double x) const;

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double epsilon() const noexcept { return param_; }
    [[nodiscard]] double log_offset() const noexcept { return param_; }
    [[nodiscard]] std::string describe() const;

  private:
    GrowthFunction() = default;

    Kind kind_ = Kind::none;
    double param_ = 0.0;
    Evaluator eval_;
    std::string name_;
};

/// Outcome of a randomized or grid-based property check.
struct PropertyReport {
    std::string property;
    bool passed = true;
    std::string detail;
    std::vector<double> witness;
};

[[nodiscard]] PropertyReport check_seminorm_axioms(const Seminorm& p, int probes, StreamKey key);

/// Default grid: 0, powers of two from 2^-6 to 2^4, plus 3 and 5.
[[nodiscard]] std::vector<double> default_growth_grid();

/// Checks f(xy) <= f(x) f(y) (1 + 1e-9). Diagonal pairs (x, x) are visited
/// first in ascending order, then the remaining pairs row by row.
[[nodiscard]] PropertyReport check_submultiplicative(const GrowthFunction& f,
                                                     const std::vector<double>& grid = default_growth_grid());

/// Evaluates f(x)/x^2 on x = 2^-k, k = 1..40. Requires f(2^-k) > 0 throughout and
/// either a final ratio <= 1e-6 or a geometric decay of the ratios over the last ten
/// points (successive ratio quotient <= 1 - 1e-3), which extrapolates to zero.
/// This is a heuristic for the limit f(x)/x^2 -> 0.
[[nodiscard]] PropertyReport check_superquadratic(const GrowthFunction& f);

struct KernelCompatibility {
    enum class Status { compatible, incompatible, undecidable };
    Status status = Status::undecidable;
    Vector witness;
    std::string detail;
};

/// Finite-dimensional surrogate of the injectivity hypothesis: ker p subset of ker q.
[[nodiscard]] KernelCompatibility kernel_compatibility(const Seminorm& p, const Seminorm& q);

/// Orthonormal basis (as columns) of ker A, relative singular-value cutoff 1e-10.
[[nodiscard]] Matrix kernel_basis(const Matrix& a);

[[nodiscard]] const char* to_string(KernelCompatibility::Status s) noexcept;

}  // namespace supergauss
