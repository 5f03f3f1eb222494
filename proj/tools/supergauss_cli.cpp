// SPDX-License-Identifier: Apache-2.0
// supergauss: batch front-end for certificates, projected integrals and tail bounds.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "supergauss/config.hpp"
#include "supergauss/report.hpp"

namespace sg = supergauss;

namespace {

constexpr int kOk = 0;
constexpr int kConfigInvalid = 2;
constexpr int kViolation = 3;
constexpr int kDivergence = 4;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::string out;
    std::string format;
    int threads = 0;
};

void emit(const std::string& text, const sg::OutputSettings& o) {
    if (o.path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(o.path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + o.path);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

// Errors stop the run; warnings go to stderr.
bool check_model(const sg::SpectralModel& m, std::uint64_t seed) {
    const auto report = sg::validate_model(m, {seed, 0});
    for (const auto& c : report.checks) {
        if (c.passed) continue;
        const bool err = c.severity == sg::ValidationCheck::Severity::error;
        std::cerr << (err ? "error: " : "warning: ") << c.name << ": " << c.detail << "\n";
    }
    return report.ok();
}

std::string certificate_csv(const sg::Certificate& c) {
    const auto j = nlohmann::ordered_json::parse(sg::certificate_json(c, -1));
    std::string s = "# supergauss v1\nfield,value\n";
    for (const auto& item : j.items()) {
        const auto& v = item.value();
        std::string text;
        if (v.is_string()) text = v.get<std::string>();
        else if (v.is_boolean()) text = v.get<bool>() ? "true" : "false";
        else text = sg::format_number(v.get<double>());
        s += item.key() + "," + text + "\n";
    }
    return s;
}

int run_certify(const sg::RunConfig& cfg) {
    const auto opts = sg::convergence_options(cfg.run);
    const auto cert = sg::certify(*cfg.model, opts.balancing);
    emit(cfg.output.format == sg::OutputFormat::json ? sg::certificate_json(cert) : certificate_csv(cert), cfg.output);
    return kOk;
}

int report_code(const sg::ConvergenceReport& r) {
    if (r.verdict == sg::Verdict::bound_violated) return kViolation;
    if (r.divergence_flagged) return kDivergence;
    return kOk;
}

int run_integrate(const sg::RunConfig& cfg) {
    const auto r = sg::convergence_run(*cfg.model, cfg.run.samples, cfg.run.seed, sg::convergence_options(cfg.run));
    emit(cfg.output.format == sg::OutputFormat::json ? sg::convergence_json(r) : sg::convergence_csv(r), cfg.output);
    for (const auto& a : r.annotations) std::cerr << "note: " << a << "\n";
    return report_code(r);
}

int run_tailbound(const sg::RunConfig& cfg) {
    const auto& lambda = cfg.model->lambda;
    auto ns = cfg.tail.n;
    if (ns.empty()) {
        for (auto n : sg::doubling_schedule(cfg.model->dim())) ns.push_back(static_cast<std::size_t>(n));
    }
    for (auto n : ns) {
        if (n > lambda.size()) throw sg::ConfigError({"tail.n: " + std::to_string(n) + " exceeds N"});
    }
    const auto cert = sg::certify(*cfg.model, sg::convergence_options(cfg.run).balancing);
    const auto rows = sg::tail_table(lambda, cert, ns, cfg.tail.r, cfg.run.samples, cfg.run.seed);
    emit(cfg.output.format == sg::OutputFormat::json ? sg::tail_json(rows) : sg::tail_csv(rows), cfg.output);
    for (const auto& t : rows) {
        if (t.violated) return kViolation;
    }
    return kOk;
}

int run_phi4(const sg::RunConfig& cfg) {
    const sg::LatticeConfig lattice = cfg.phi4.value_or(sg::LatticeConfig{});
    sg::SweepOptions opts;
    opts.convergence = sg::convergence_options(cfg.run);
    // The lattice demo samples from the Laplace mixture unless told otherwise.
    if (!cfg.run.proposal_set) opts.convergence.estimator.proposal = sg::Proposal::laplace;
    const auto sweep = sg::counterterm_sweep(lattice, cfg.run.samples, cfg.run.seed, opts);
    emit(cfg.output.format == sg::OutputFormat::json ? sg::sweep_json(sweep) : sg::sweep_csv(sweep), cfg.output);
    int code = kOk;
    for (const auto& e : sweep) {
        for (const auto& a : e.report.annotations) std::cerr << "note: alpha=" << e.alpha << ": " << a << "\n";
        const int c = report_code(e.report);
        if (c == kViolation || (c == kDivergence && code == kOk)) code = c;
    }
    return code;
}

int run_oracle(const sg::RunConfig& cfg) {
    const auto& m = *cfg.model;
    const Eigen::Index top = std::min<Eigen::Index>(m.dim(), 3);
    const auto opts = sg::convergence_options(cfg.run);
    std::vector<sg::OracleRow> rows;
    int code = kOk;
    for (Eigen::Index n = 1; n <= top; ++n) {
        sg::OracleRow o;
        o.mc = sg::integrate_projected(m, n, cfg.run.samples, cfg.run.seed, opts.estimator);
        o.oracle = sg::quadrature_oracle(m, n);
        const double diff = o.mc.mean - o.oracle;
        o.z = o.mc.stderr_ > 0 ? diff / o.mc.stderr_ : (diff == 0 ? 0.0 : std::copysign(INFINITY, diff));
        if (std::abs(o.z) > 3.0) code = kViolation;
        rows.push_back(o);
    }
    emit(cfg.output.format == sg::OutputFormat::json ? sg::oracle_json(rows) : sg::oracle_csv(rows), cfg.output);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified Monte Carlo for Gaussian integrals with super-quadratic damping"};
    app.require_subcommand(1);
    Flags flags;
    auto add_common = [&flags](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", flags.config, "RunConfig JSON file")->check(CLI::ExistingFile);
        if (config_required) c->required();
        sub->add_option("--seed", flags.seed, "Override run.seed");
        sub->add_option("--samples", flags.samples, "Override run.samples")->check(CLI::PositiveNumber);
        sub->add_option("--out", flags.out, "Write the report here instead of stdout");
        sub->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", flags.threads, "Worker threads (results do not depend on it)")
            ->check(CLI::NonNegativeNumber);
    };
    auto* certify = app.add_subcommand("certify", "Analytic constants and the global upper bound");
    auto* integrate = app.add_subcommand("integrate", "Projected integrals over the n-schedule");
    auto* tailbound = app.add_subcommand("tailbound", "MC tail mass against the recursion and zeta bounds");
    auto* phi4 = app.add_subcommand("phi4", "Counterterm sweep for the lattice phi^4 model");
    auto* oracle = app.add_subcommand("oracle", "MC against tensor Gauss-Hermite for n <= 3");
    for (auto* s : {certify, integrate, tailbound, oracle}) add_common(s, true);
    add_common(phi4, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigInvalid;
    }

    if (flags.threads > 0) omp_set_num_threads(flags.threads);

    try {
        sg::RunConfig cfg;
        if (!flags.config.empty()) cfg = sg::load_config(flags.config);
        else cfg.phi4 = sg::LatticeConfig{};
        if (flags.seed) cfg.run.seed = *flags.seed;
        if (flags.samples) cfg.run.samples = *flags.samples;
        if (!flags.out.empty()) cfg.output.path = flags.out;
        if (!flags.format.empty()) cfg.output.format = flags.format == "json" ? sg::OutputFormat::json : sg::OutputFormat::csv;

        if (phi4->parsed()) return run_phi4(cfg);
        if (!cfg.model) throw sg::ConfigError({"model: missing"});
        if (!check_model(*cfg.model, cfg.run.seed)) return kConfigInvalid;
        if (certify->parsed()) return run_certify(cfg);
        if (integrate->parsed()) return run_integrate(cfg);
        if (tailbound->parsed()) return run_tailbound(cfg);
        return run_oracle(cfg);
    } catch (const sg::ConfigError& e) {
        for (const auto& err : e.errors()) std::cerr << "config error: " << err << "\n";
        return kConfigInvalid;
    } catch (const sg::DimensionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
