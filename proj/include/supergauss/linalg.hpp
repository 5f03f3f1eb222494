// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace supergauss {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Structural mismatch between vector lengths and operator shapes.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// ker p is not contained in ker q, so the balancing supremum is infinite.
class IncompatibleKernels : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
    if (got != want) {
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(want) +
                             ", got " + std::to_string(got));
    }
}

}  // namespace supergauss
