// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "supergauss/optimize.hpp"
#include "supergauss/spectral.hpp"

namespace supergauss {

enum class ConstantStatus {
    closed_form,         // matched a registered analytic case
    optimizer_estimate,  // lower estimate of the supremum from multi-start search
    unbounded,           // the supremum is +infinity
};

[[nodiscard]] const char* to_string(ConstantStatus s) noexcept;

struct BalancingConstant {
    double value = 0.0;
    ConstantStatus status = ConstantStatus::optimizer_estimate;
    Vector argmax;
};

struct BalancingOptions {
    /// Number of random search directions.
    int budget = 32;
    /// Use the registered closed forms when the model matches one.
    bool allow_closed_form = true;
    std::uint64_t seed = 0x5EED;
};

/// sup over z in R^N of  -f(p(K z)) + alpha q(K z)^2 - |z|^2 / 2.
/// Throws IncompatibleKernels when ker p is not contained in ker q.
///
/// Registered closed forms:
///  - one-dimensional models with f = x^(2+eps) and p, q both multiples of |.|;
///  - f == 0 with quadratic q: 0 when 2 alpha ||q K||^2 <= 1, +infinity otherwise.
[[nodiscard]] BalancingConstant balancing_constant(const SpectralModel& model, const BalancingOptions& options = {});

/// c_n = 1 + 1 / (lambda_n^2 ln(n + 1)).
[[nodiscard]] double c_n(const EigenSequence& lambda, std::size_t n);

struct RhoBeta {
    double rho = 1.0;        // exp(-sum lambda_m^2 ln(m + 1))
    double rho_exact = 1.0;  // prod 1 / (1 + lambda_m^2 ln(m + 1)), tail bounded below
    double beta = 1.0;       // inf_b (1 - lambda_b^2) / (1 + lambda_b^2 ln(b + 1))
    double r_star = 2.0;     // 2 / (rho beta)
    /// True when the infimum defining beta covers only the listed indices
    /// because no decay family was declared beyond them.
    bool beta_finite_only = false;
};

/// Throws std::domain_error when the log-weighted sum diverges.
[[nodiscard]] RhoBeta rho_beta(const EigenSequence& lambda);

struct ProductBound {
    double product = 1.0;    // prod (1 - lambda_a^2)^-1/2 over the listed values
    double exp_bound = 1.0;  // exp(sum lambda_a^2) including the declared tail
};

/// Throws std::domain_error when some lambda^2 >= 1.
[[nodiscard]] ProductBound product_bound(const EigenSequence& lambda);

/// All analytic constants for one model.
struct Certificate {
    double hs = 0.0;
    double hs_tail = 0.0;
    double logw = 0.0;
    double logw_tail = 0.0;
    bool logw_divergent = false;
    double C = 0.0;
    ConstantStatus C_status = ConstantStatus::optimizer_estimate;
    double rho = 1.0;
    double rho_exact = 1.0;
    double beta = 1.0;
    bool beta_finite_only = false;
    double R_star = 2.0;
    double product = 1.0;
    double exp_bound = 1.0;
    /// Tail factor exp(sum over the declared tail of lambda^2) for the infinite product.
    double tail_factor = 1.0;
    double global_bound = 1.0;
    /// Whether global_bound is proven (closed-form C) or empirical (optimizer C).
    bool global_bound_certified = false;
};

/// Builds the full certificate for a (capped) model.
[[nodiscard]] Certificate certify(const SpectralModel& model, const BalancingOptions& options = {});

/// e^C prod (1 - lambda_a^2)^-1/2 (times the declared tail factor).
[[nodiscard]] double global_upper_bound(const Certificate& cert);

/// I_1(R) = (1 - l^2)^-1/2 Erfc(sqrt(R (1 - l^2) / (2 l^2))).
[[nodiscard]] double i1_closed_form(double lambda1, double r);

/// Iterated Erfc bound on I_n(R) built from the c_n recursion.
[[nodiscard]] double recursion_tail_bound(const EigenSequence& lambda, std::size_t n, double r);

/// exp(sum lambda^2) (zeta(rho beta R / 2) - 1), valid for R > R*.
/// Throws std::domain_error for R <= R*.
[[nodiscard]] double zeta_tail_bound(const Certificate& cert, double r);

/// Flat key/value rendering of a certificate.
[[nodiscard]] std::string certificate_json(const Certificate& cert, int indent = 2);
[[nodiscard]] std::string certificate_text(const Certificate& cert);

}  // namespace supergauss
