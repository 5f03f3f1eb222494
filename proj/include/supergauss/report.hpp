// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "supergauss/phi4.hpp"

namespace supergauss {

/// %.17g, with "inf" / "-inf" / "nan" spelled out.
[[nodiscard]] std::string format_number(double x);

/// `# supergauss v1`, then n,samples,mean,stderr,bound,verdict and a trailing summary comment.
[[nodiscard]] std::string convergence_csv(const ConvergenceReport& report);
[[nodiscard]] std::string convergence_json(const ConvergenceReport& report, int indent = 2);

/// One block per alpha followed by an alpha,n0,value,stderr,bound,verdict summary table.
[[nodiscard]] std::string sweep_csv(const std::vector<SweepEntry>& sweep);
[[nodiscard]] std::string sweep_json(const std::vector<SweepEntry>& sweep, int indent = 2);

/// MC tail mass against the recursion and zeta bounds on an (n, R) grid.
struct TailRow {
    std::size_t n = 0;
    double r = 0.0;
    EstimateRecord mc;
    double recursion = 0.0;
    double zeta = 0.0;  // NaN where R <= R*
    bool violated = false;
};

[[nodiscard]] std::vector<TailRow> tail_table(const EigenSequence& lambda, const Certificate& cert,
                                              const std::vector<std::size_t>& ns, const std::vector<double>& rs,
                                              std::uint64_t samples, std::uint64_t seed);
[[nodiscard]] std::string tail_csv(const std::vector<TailRow>& rows);
[[nodiscard]] std::string tail_json(const std::vector<TailRow>& rows, int indent = 2);

/// MC at each n <= min(N, 3) against the quadrature oracle.
struct OracleRow {
    EstimateRecord mc;
    double oracle = 0.0;
    double z = 0.0;  // (mean - oracle) / stderr, 0 when both agree exactly
};

[[nodiscard]] std::string oracle_csv(const std::vector<OracleRow>& rows);
[[nodiscard]] std::string oracle_json(const std::vector<OracleRow>& rows, int indent = 2);

}  // namespace supergauss
