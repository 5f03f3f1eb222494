// SPDX-License-Identifier: Apache-2.0
#include "supergauss/config.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <type_traits>

#include <json.hpp>

namespace supergauss {
namespace {

using json = nlohmann::json;

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : "\n") + e;
    return s;
}

class Parser {
  public:
    explicit Parser(std::string base_dir) : base_dir_(std::move(base_dir)) {}

    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& why) { errors.push_back(path + ": " + why); }

    bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        for (const auto& item : j.items()) {
            bool known = false;
            for (const char* a : allowed) known = known || item.key() == a;
            if (!known) fail(path + "." + item.key(), "unknown field");
        }
        return true;
    }

    std::optional<double> number(const json& j, const std::string& path) {
        if (!j.is_number()) {
            fail(path, "expected a number");
            return std::nullopt;
        }
        return j.get<double>();
    }

    std::optional<std::uint64_t> count(const json& j, const std::string& path) {
        if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
            fail(path, "expected a non-negative integer");
            return std::nullopt;
        }
        return j.get<std::uint64_t>();
    }

    // Reads an optional numeric field and checks a predicate.
    template <class T, class Pred>
    void field(const json& parent, const char* key, const std::string& path, T& out, Pred ok, const char* why) {
        if (!parent.contains(key)) return;
        const std::string p = path + "." + key;
        if constexpr (std::is_same_v<T, double>) {
            if (auto v = number(parent[key], p)) {
                if (ok(*v)) out = *v;
                else fail(p, why);
            }
        } else {
            if (auto v = count(parent[key], p)) {
                if (ok(*v)) out = static_cast<T>(*v);
                else fail(p, why);
            }
        }
    }

    std::optional<std::vector<double>> numbers(const json& j, const std::string& path) {
        if (!j.is_array()) {
            fail(path, "expected an array of numbers");
            return std::nullopt;
        }
        std::vector<double> v;
        bool good = true;
        for (std::size_t i = 0; i < j.size(); ++i) {
            auto x = number(j[i], path + "[" + std::to_string(i) + "]");
            good = good && x.has_value();
            if (x) v.push_back(*x);
        }
        if (!good) return std::nullopt;
        return v;
    }

    std::optional<Matrix> matrix(const json& j, const std::string& path) {
        if (!j.is_array() || j.empty()) {
            fail(path, "expected a non-empty array of rows");
            return std::nullopt;
        }
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < j.size(); ++i) {
            auto r = numbers(j[i], path + "[" + std::to_string(i) + "]");
            if (!r) return std::nullopt;
            rows.push_back(std::move(*r));
        }
        return to_matrix(rows, path);
    }

    std::optional<Matrix> to_matrix(const std::vector<std::vector<double>>& rows, const std::string& path) {
        const std::size_t cols = rows.front().size();
        Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) {
                fail(path, "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) + " entries, expected " +
                               std::to_string(cols));
                return std::nullopt;
            }
            for (std::size_t c = 0; c < cols; ++c) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
            }
        }
        return m;
    }

    // Whitespace-separated numbers, one matrix row per line; '#' starts a comment.
    std::optional<Matrix> matrix_file(const json& j, const std::string& path) {
        if (!j.is_string()) {
            fail(path, "expected a file path");
            return std::nullopt;
        }
        std::filesystem::path file(j.get<std::string>());
        if (file.is_relative()) file = std::filesystem::path(base_dir_) / file;
        std::ifstream in(file);
        if (!in) {
            fail(path, "cannot open " + file.string());
            return std::nullopt;
        }
        std::vector<std::vector<double>> rows;
        std::string line;
        while (std::getline(in, line)) {
            line = line.substr(0, line.find('#'));
            std::istringstream ls(line);
            std::vector<double> row;
            std::string tok;
            while (ls >> tok) {
                try {
                    std::size_t used = 0;
                    row.push_back(std::stod(tok, &used));
                    if (used != tok.size()) throw std::invalid_argument(tok);
                } catch (const std::exception&) {
                    fail(path, "bad number '" + tok + "' in " + file.string());
                    return std::nullopt;
                }
            }
            if (!row.empty()) rows.push_back(std::move(row));
        }
        if (rows.empty()) {
            fail(path, file.string() + " holds no matrix");
            return std::nullopt;
        }
        return to_matrix(rows, path);
    }

    std::optional<EigenSequence> lambda(const json& j, const std::string& path) {
        if (j.is_array()) {
            auto v = numbers(j, path);
            if (!v) return std::nullopt;
            return EigenSequence(std::move(*v));
        }
        if (!object(j, path, {"values", "decay", "power", "exponential"})) return std::nullopt;
        const int forms = static_cast<int>(j.contains("values")) + static_cast<int>(j.contains("power")) +
                          static_cast<int>(j.contains("exponential"));
        if (forms != 1) {
            fail(path, "give exactly one of values, power, exponential");
            return std::nullopt;
        }
        if (j.contains("power") || j.contains("exponential")) {
            if (j.contains("decay")) fail(path + ".decay", "only allowed together with values");
            const bool pw = j.contains("power");
            const std::string p = path + (pw ? ".power" : ".exponential");
            const json& b = pw ? j["power"] : j["exponential"];
            const char* rate_key = pw ? "gamma" : "rate";
            if (!object(b, p, {"c", rate_key, "N"})) return std::nullopt;
            double c = -1, rate = -1;
            std::size_t n = 0;
            bool present = true;
            for (const char* k : {"c", rate_key, "N"}) {
                if (!b.contains(k)) {
                    fail(p + "." + k, "missing");
                    present = false;
                }
            }
            if (!present) return std::nullopt;
            const auto before = errors.size();
            field(b, "c", p, c, [](double x) { return x > 0; }, "c must be > 0");
            field(b, rate_key, p, rate, [](double x) { return x > 0; }, pw ? "gamma must be > 0" : "rate must be > 0");
            field(b, "N", p, n, [](std::uint64_t x) { return x > 0; }, "N must be > 0");
            if (errors.size() != before) return std::nullopt;
            return pw ? EigenSequence::power(c, rate, n) : EigenSequence::exponential(c, rate, n);
        }
        auto v = numbers(j["values"], path + ".values");
        if (!v) return std::nullopt;
        DecayFamily decay;
        if (j.contains("decay")) {
            const json& d = j["decay"];
            const std::string p = path + ".decay";
            if (!object(d, p, {"power", "exponential"}) || d.size() != 1) {
                if (d.is_object()) fail(p, "give exactly one of power, exponential");
                return std::nullopt;
            }
            const bool pw = d.contains("power");
            const char* rate_key = pw ? "gamma" : "rate";
            const std::string pp = p + (pw ? ".power" : ".exponential");
            const json& b = pw ? d["power"] : d["exponential"];
            if (!object(b, pp, {"c", rate_key})) return std::nullopt;
            double c = -1, rate = -1;
            const auto before = errors.size();
            if (!b.contains("c") || !b.contains(rate_key)) fail(pp, std::string("needs c and ") + rate_key);
            field(b, "c", pp, c, [](double x) { return x > 0; }, "c must be > 0");
            field(b, rate_key, pp, rate, [](double x) { return x > 0; }, "rate must be > 0");
            if (errors.size() != before) return std::nullopt;
            decay = pw ? DecayFamily::power(c, rate) : DecayFamily::exponential(c, rate);
        }
        return EigenSequence(std::move(*v), decay);
    }

    std::optional<CompactMap> kmap(const json& j, const std::string& path, Eigen::Index n) {
        std::optional<CompactMap> k;
        if (j.is_string()) {
            if (j.get<std::string>() == "identity") k = CompactMap::identity(n);
            else fail(path, "unknown map '" + j.get<std::string>() + "'");
        } else if (object(j, path, {"matrix", "matrix_file", "fourier", "norm"})) {
            double norm = -1.0;
            field(j, "norm", path, norm, [](double x) { return x >= 0; }, "norm must be >= 0");
            if (j.contains("matrix")) {
                if (auto m = matrix(j["matrix"], path + ".matrix")) k = CompactMap::dense(std::move(*m), norm);
            } else if (j.contains("matrix_file")) {
                if (auto m = matrix_file(j["matrix_file"], path + ".matrix_file")) k = CompactMap::dense(std::move(*m), norm);
            } else if (j.contains("fourier")) {
                if (auto s = count(j["fourier"], path + ".fourier")) k = CompactMap::fourier(static_cast<Eigen::Index>(*s));
            } else {
                fail(path, "give one of matrix, matrix_file, fourier");
            }
        }
        if (k && k->in_dim() != n) {
            fail(path, "has " + std::to_string(k->in_dim()) + " columns but lambda lists " + std::to_string(n) + " values");
            return std::nullopt;
        }
        return k;
    }

    std::optional<Seminorm> seminorm(const json& j, const std::string& path, Eigen::Index dim) {
        try {
            if (j.is_string()) {
                const auto s = j.get<std::string>();
                if (s == "l2") return Seminorm::l2(dim);
                if (s == "zero") return Seminorm::matrix(Matrix::Zero(1, dim));
                fail(path, "unknown seminorm '" + s + "'");
                return std::nullopt;
            }
            if (!object(j, path, {"l2", "matrix", "lattice", "scale"})) return std::nullopt;
            double scale = 1.0;
            field(j, "scale", path, scale, [](double x) { return x >= 0; }, "scale must be >= 0");
            const int forms = static_cast<int>(j.contains("l2")) + static_cast<int>(j.contains("matrix")) +
                              static_cast<int>(j.contains("lattice"));
            if (forms != 1) {
                fail(path, "give exactly one of l2, matrix, lattice");
                return std::nullopt;
            }
            if (j.contains("l2")) {
                if (!j["l2"].is_boolean() || !j["l2"].get<bool>()) fail(path + ".l2", "expected true");
                return Seminorm::matrix(Matrix::Identity(dim, dim), scale);
            }
            if (j.contains("matrix")) {
                auto m = matrix(j["matrix"], path + ".matrix");
                if (!m) return std::nullopt;
                if (m->cols() != dim) {
                    fail(path + ".matrix", "has " + std::to_string(m->cols()) + " columns, K outputs " + std::to_string(dim));
                    return std::nullopt;
                }
                return Seminorm::matrix(std::move(*m), scale);
            }
            const json& l = j["lattice"];
            const std::string lp = path + ".lattice";
            if (!object(l, lp, {"s", "dx"})) return std::nullopt;
            double s = 2.0, dx = 1.0;
            const auto before = errors.size();
            field(l, "s", lp, s, [](double x) { return x >= 1; }, "s must be >= 1");
            field(l, "dx", lp, dx, [](double x) { return x > 0; }, "dx must be > 0");
            if (errors.size() != before) return std::nullopt;
            if (!(scale > 0)) {
                fail(path + ".scale", "lattice seminorm needs scale > 0");
                return std::nullopt;
            }
            return Seminorm::lattice_power(s, dx, dim, scale);
        } catch (const std::exception& e) {
            fail(path, e.what());
            return std::nullopt;
        }
    }

    std::optional<GrowthFunction> growth(const json& j, const std::string& path) {
        if (j.is_string()) {
            if (j.get<std::string>() == "none") return GrowthFunction::none();
            fail(path, "unknown growth function '" + j.get<std::string>() + "'");
            return std::nullopt;
        }
        if (!object(j, path, {"power", "log_power"}) || j.size() != 1) {
            if (j.is_object()) fail(path, "give exactly one of power, log_power");
            return std::nullopt;
        }
        if (j.contains("power")) {
            const std::string p = path + ".power";
            if (!object(j["power"], p, {"eps"})) return std::nullopt;
            double eps = 2.0;
            const auto before = errors.size();
            field(j["power"], "eps", p, eps, [](double x) { return x > 0; }, "eps must be > 0");
            if (errors.size() != before) return std::nullopt;
            return GrowthFunction::power(eps);
        }
        const std::string p = path + ".log_power";
        if (!object(j["log_power"], p, {"a"})) return std::nullopt;
        double a = std::numbers::e;
        const auto before = errors.size();
        field(j["log_power"], "a", p, a, [](double x) { return x >= std::numbers::e; }, "a must be >= e");
        if (errors.size() != before) return std::nullopt;
        return GrowthFunction::log_power(a);
    }

    std::optional<SpectralModel> model(const json& j, const std::string& path) {
        if (!object(j, path, {"lambda", "K", "p", "q", "f", "alpha"})) return std::nullopt;
        if (!j.contains("lambda")) {
            fail(path + ".lambda", "missing");
            return std::nullopt;
        }
        const auto before = errors.size();
        SpectralModel m;
        if (auto l = lambda(j["lambda"], path + ".lambda")) m.lambda = std::move(*l);
        const Eigen::Index n = m.dim();
        m.K = CompactMap::identity(n);
        if (j.contains("K")) {
            if (auto k = kmap(j["K"], path + ".K", n)) m.K = std::move(*k);
        }
        const Eigen::Index out = m.K.out_dim();
        m.p = Seminorm::l2(out);
        m.q = Seminorm::l2(out);
        if (j.contains("p")) {
            if (auto s = seminorm(j["p"], path + ".p", out)) m.p = std::move(*s);
        }
        if (j.contains("q")) {
            if (auto s = seminorm(j["q"], path + ".q", out)) m.q = std::move(*s);
        }
        m.f = GrowthFunction::power(2.0);
        if (j.contains("f")) {
            if (auto g = growth(j["f"], path + ".f")) m.f = std::move(*g);
        }
        m.alpha = 1.0;
        field(j, "alpha", path, m.alpha, [](double x) { return x > 0; }, "alpha must be > 0");
        if (errors.size() != before) return std::nullopt;
        return m;
    }

    LatticeConfig phi4(const json& j, const std::string& path) {
        LatticeConfig c;
        if (!object(j, path, {"sites", "mass", "spacing", "coupling", "alpha_grid"})) return c;
        field(j, "sites", path, c.sites, [](std::uint64_t x) { return x >= 2; }, "sites must be >= 2");
        field(j, "mass", path, c.mass, [](double x) { return x > 0; }, "mass must be > 0");
        field(j, "spacing", path, c.spacing, [](double x) { return x > 0; }, "spacing must be > 0");
        field(j, "coupling", path, c.coupling, [](double x) { return x >= 0; }, "coupling must be >= 0");
        if (j.contains("alpha_grid")) {
            if (auto g = numbers(j["alpha_grid"], path + ".alpha_grid")) {
                for (double a : *g) {
                    if (!(a > 0)) fail(path + ".alpha_grid", "alpha must be > 0");
                }
                if (g->empty()) fail(path + ".alpha_grid", "must not be empty");
                c.alpha_grid = std::move(*g);
            }
        }
        return c;
    }

    void run(const json& j, const std::string& path, RunSettings& r) {
        if (!object(j, path, {"samples", "seed", "schedule", "atol", "budget", "proposal", "chunk_size"})) return;
        field(j, "samples", path, r.samples, [](std::uint64_t x) { return x > 0; }, "samples must be > 0");
        field(j, "seed", path, r.seed, [](std::uint64_t) { return true; }, "");
        field(j, "atol", path, r.atol, [](double x) { return x >= 0; }, "atol must be >= 0");
        field(j, "budget", path, r.budget, [](std::uint64_t x) { return x > 0 && x < (1u << 20); },
              "budget must be in [1, 2^20)");
        field(j, "chunk_size", path, r.chunk_size, [](std::uint64_t x) { return x > 0; }, "chunk_size must be > 0");
        if (j.contains("schedule")) {
            const json& s = j["schedule"];
            if (!s.is_array()) {
                fail(path + ".schedule", "expected an array of dimensions");
            } else {
                for (std::size_t i = 0; i < s.size(); ++i) {
                    if (auto v = count(s[i], path + ".schedule[" + std::to_string(i) + "]")) {
                        if (!r.schedule.empty() && static_cast<Eigen::Index>(*v) <= r.schedule.back()) {
                            fail(path + ".schedule", "must be strictly increasing");
                        }
                        r.schedule.push_back(static_cast<Eigen::Index>(*v));
                    }
                }
            }
        }
        if (j.contains("proposal")) {
            const json& p = j["proposal"];
            r.proposal_set = true;
            if (p == "standard") r.proposal = Proposal::standard;
            else if (p == "laplace") r.proposal = Proposal::laplace;
            else fail(path + ".proposal", "expected \"standard\" or \"laplace\"");
        }
    }

    void output(const json& j, const std::string& path, OutputSettings& o) {
        if (!object(j, path, {"path", "format"})) return;
        if (j.contains("path")) {
            if (j["path"].is_string()) o.path = j["path"].get<std::string>();
            else fail(path + ".path", "expected a string");
        }
        if (j.contains("format")) {
            const json& f = j["format"];
            if (f == "csv") o.format = OutputFormat::csv;
            else if (f == "json") o.format = OutputFormat::json;
            else fail(path + ".format", "expected \"csv\" or \"json\"");
        }
    }

    void tail(const json& j, const std::string& path, TailGrid& t) {
        if (!object(j, path, {"n", "R"})) return;
        if (j.contains("n")) {
            t.n.clear();
            if (!j["n"].is_array()) fail(path + ".n", "expected an array of dimensions");
            else
                for (std::size_t i = 0; i < j["n"].size(); ++i) {
                    if (auto v = count(j["n"][i], path + ".n[" + std::to_string(i) + "]")) t.n.push_back(*v);
                }
        }
        if (j.contains("R")) {
            if (auto r = numbers(j["R"], path + ".R")) {
                for (double x : *r) {
                    if (!(x >= 0)) fail(path + ".R", "R must be >= 0");
                }
                t.r = std::move(*r);
            }
        }
    }

  private:
    std::string base_dir_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("$: invalid JSON: ") + e.what()});
    }
    Parser p(base_dir);
    RunConfig cfg;
    if (p.object(doc, "$", {"model", "phi4", "run", "output", "tail"})) {
        if (doc.contains("model")) cfg.model = p.model(doc["model"], "model");
        if (doc.contains("phi4")) cfg.phi4 = p.phi4(doc["phi4"], "phi4");
        if (doc.contains("run")) p.run(doc["run"], "run", cfg.run);
        if (doc.contains("output")) p.output(doc["output"], "output", cfg.output);
        if (doc.contains("tail")) p.tail(doc["tail"], "tail", cfg.tail);
        if (!doc.contains("model") && !doc.contains("phi4")) p.fail("$", "needs a model or a phi4 section");
    }
    if (!p.errors.empty()) throw ConfigError(std::move(p.errors));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path + ": cannot open"});
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_config(ss.str(), dir.empty() ? "." : dir.string());
}

ConvergenceOptions convergence_options(const RunSettings& run) {
    ConvergenceOptions o;
    o.schedule = run.schedule;
    o.atol = run.atol;
    o.balancing.budget = run.budget;
    o.balancing.seed = mix64(run.seed);
    o.estimator.proposal = run.proposal;
    o.estimator.chunk_size = run.chunk_size;
    return o;
}

}  // namespace supergauss
