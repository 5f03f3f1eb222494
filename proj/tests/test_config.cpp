// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "supergauss/config.hpp"
#include "supergauss/report.hpp"

using namespace supergauss;

namespace {

bool mentions(const ConfigError& e, const std::string& needle) {
    for (const auto& s : e.errors()) {
        if (s.find(needle) != std::string::npos) return true;
    }
    return false;
}

std::vector<std::string> errors_of(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.errors();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal document gets defaults") {
    const auto cfg = parse_config(R"({"model": {"lambda": [0.5]}})");
    REQUIRE(cfg.model.has_value());
    CHECK(cfg.model->dim() == 1);
    CHECK(cfg.model->alpha == 1.0);
    CHECK(cfg.model->f.kind() == GrowthFunction::Kind::power);
    CHECK(cfg.run.samples == 100000);
    CHECK(cfg.run.seed == 0);
    CHECK(cfg.run.schedule.empty());
    CHECK(cfg.run.atol == 1e-4);
    CHECK(cfg.output.format == OutputFormat::csv);
    CHECK(validate_model(*cfg.model).ok());
}

TEST_CASE("power family with gamma 0.4 parses but fails the hypothesis") {
    const auto cfg = parse_config(R"({"model": {"lambda": {"power": {"c": 0.5, "gamma": 0.4, "N": 4}}}})");
    REQUIRE(cfg.model.has_value());
    CHECK(cfg.model->dim() == 4);
    const auto v = validate_model(*cfg.model);
    CHECK(v.ok());
    CHECK_FALSE(v.passed("log-weighted summability"));
}

TEST_CASE("negative alpha is rejected with a path") {
    try {
        (void)parse_config(R"({"model": {"lambda": [0.5], "alpha": -1}})");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "model.alpha"));
        CHECK(mentions(e, "alpha must be > 0"));
    }
}

TEST_CASE("strict mode rejects unknown keys everywhere") {
    CHECK_FALSE(errors_of(R"({"model": {"lambda": [0.5]}, "extra": 1})").empty());
    CHECK_FALSE(errors_of(R"({"model": {"lambda": [0.5], "alpah": 2}})").empty());
    CHECK_FALSE(errors_of(R"({"model": {"lambda": [0.5]}, "run": {"atoll": 1e-3}})").empty());
    const auto e = errors_of(R"({"model": {"lambda": [0.5]}, "run": {"samples": 10, "sead": 3}})");
    REQUIRE(e.size() == 1);
    CHECK(e[0] == "run.sead: unknown field");
}

TEST_CASE("all errors are reported at once") {
    const auto e = errors_of(R"({"model": {"lambda": [0.5], "alpha": 0, "f": {"power": {"eps": -1}}},
                                 "run": {"samples": 0, "proposal": "fancy"}, "output": {"format": "xml"}})");
    CHECK(e.size() == 5);
}

TEST_CASE("invalid json") {
    const auto e = errors_of("{ not json");
    REQUIRE(e.size() == 1);
    CHECK(e[0].rfind("$: invalid JSON", 0) == 0);
}

TEST_CASE("full document") {
    const auto cfg = parse_config(R"({
      "model": {
        "lambda": {"values": [0.6, 0.3], "decay": {"power": {"c": 0.6, "gamma": 1.0}}},
        "K": {"matrix": [[1, 0], [0, 1], [1, 1]]},
        "p": {"lattice": {"s": 4, "dx": 0.5}, "scale": 2},
        "q": {"matrix": [[1, 0, 0]]},
        "f": {"log_power": {"a": 3}},
        "alpha": 2.5
      },
      "run": {"samples": 1234, "seed": 18446744073709551615, "schedule": [1, 2], "atol": 0.01,
              "budget": 8, "proposal": "laplace", "chunk_size": 100},
      "tail": {"n": [1, 2], "R": [0, 3]},
      "output": {"path": "out.csv", "format": "json"}
    })");
    REQUIRE(cfg.model.has_value());
    const auto& m = *cfg.model;
    CHECK(m.K.out_dim() == 3);
    CHECK(m.p.kind() == Seminorm::Kind::lattice_power);
    CHECK(m.p.scale() == 2.0);
    CHECK(m.f.kind() == GrowthFunction::Kind::log_power);
    CHECK(m.lambda.decay().kind == DecayFamily::Kind::power);
    CHECK(m.alpha == 2.5);
    CHECK(cfg.run.seed == 18446744073709551615ULL);
    CHECK(cfg.run.schedule == std::vector<Eigen::Index>{1, 2});
    CHECK(cfg.run.proposal == Proposal::laplace);
    CHECK(cfg.run.proposal_set);
    CHECK(cfg.tail.r == std::vector<double>{0, 3});
    CHECK(cfg.output.format == OutputFormat::json);
    const auto opts = convergence_options(cfg.run);
    CHECK(opts.estimator.chunk_size == 100);
    CHECK(opts.balancing.budget == 8);
}

TEST_CASE("shape mismatches are config errors") {
    CHECK_FALSE(errors_of(R"({"model": {"lambda": [0.5, 0.2], "K": {"matrix": [[1, 0, 0]]}}})").empty());
    CHECK_FALSE(errors_of(R"({"model": {"lambda": [0.5], "q": {"matrix": [[1, 2]]}}})").empty());
    CHECK_FALSE(errors_of(R"({"model": {"lambda": [0.5], "K": {"matrix": [[1], [2, 3]]}}})").empty());
    CHECK_FALSE(errors_of(R"({"model": {"lambda": [0.5], "K": {"fourier": 3}}})").empty());
    CHECK_FALSE(errors_of(R"({"run": {"samples": 3}})").empty());
}

TEST_CASE("matrix files resolve relative to the config") {
    const auto dir = std::filesystem::temp_directory_path() / "supergauss_cfg_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "k.txt") << "# K\n1 0\n0.5 1\n";
        std::ofstream(dir / "run.json") << R"({"model": {"lambda": [0.5, 0.3], "K": {"matrix_file": "k.txt"}}})";
    }
    const auto cfg = load_config((dir / "run.json").string());
    REQUIRE(cfg.model.has_value());
    CHECK(cfg.model->K.leading_columns(2)(1, 0) == 0.5);
    std::filesystem::remove_all(dir);
}

TEST_CASE("phi4 section") {
    const auto cfg = parse_config(R"({"phi4": {"sites": 4, "mass": 2, "alpha_grid": [1, 3]}})");
    REQUIRE(cfg.phi4.has_value());
    CHECK(cfg.phi4->sites == 4);
    CHECK(cfg.phi4->alpha_grid == std::vector<double>{1, 3});
    CHECK_FALSE(errors_of(R"({"phi4": {"sites": 1}})").empty());
    CHECK_FALSE(errors_of(R"({"phi4": {"alpha_grid": [1, -1]}})").empty());
}

TEST_CASE("csv output is versioned and stable") {
    const auto cfg = parse_config(R"({"model": {"lambda": [0.5, 0.25]}})");
    const auto a = convergence_run(*cfg.model, 3000, 9);
    const auto b = convergence_run(*cfg.model, 3000, 9);
    const auto csv = convergence_csv(a);
    CHECK(csv == convergence_csv(b));
    CHECK(csv.rfind("# supergauss v1\nn,samples,mean,stderr,bound,verdict\n", 0) == 0);
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(convergence_json(a).find("\"verdict\"") != std::string::npos);
}
