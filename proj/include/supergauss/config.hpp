// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "supergauss/phi4.hpp"

namespace supergauss {

enum class OutputFormat { csv, json };

struct RunSettings {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    std::vector<Eigen::Index> schedule;  // empty: doubling
    double atol = 1e-4;
    int budget = 32;
    Proposal proposal = Proposal::standard;
    bool proposal_set = false;  // given explicitly in the config
    std::uint64_t chunk_size = 4096;
};

struct OutputSettings {
    std::string path;  // empty: stdout
    OutputFormat format = OutputFormat::csv;
};

/// Grid for the tail-bound comparison.
struct TailGrid {
    std::vector<std::size_t> n;
    std::vector<double> r{0.0, 1.0, 2.0, 5.0, 10.0};
};

struct RunConfig {
    std::optional<SpectralModel> model;
    std::optional<LatticeConfig> phi4;
    RunSettings run;
    OutputSettings output;
    TailGrid tail;
};

/// Every problem found while parsing, one "path: reason" entry each.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> errors);
    [[nodiscard]] const std::vector<std::string>& errors() const noexcept { return errors_; }

  private:
    std::vector<std::string> errors_;
};

/// Strict parse: unknown keys are errors. `base_dir` resolves relative matrix_file paths.
[[nodiscard]] RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
[[nodiscard]] RunConfig load_config(const std::string& path);

[[nodiscard]] ConvergenceOptions convergence_options(const RunSettings& run);

}  // namespace supergauss
