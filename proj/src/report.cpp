// SPDX-License-Identifier: Apache-2.0
#include "supergauss/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace supergauss {
namespace {

using ojson = nlohmann::ordered_json;

ojson num(double x) {
    if (std::isfinite(x)) return x;
    return format_number(x);
}

std::string row_verdict(const ConvergenceReport& r, std::size_t i) {
    return r.within_bound[i] ? to_string(r.verdict) : to_string(Verdict::bound_violated);
}

ojson record_json(const EstimateRecord& e) {
    ojson j;
    j["n"] = e.n;
    j["samples"] = e.samples;
    j["mean"] = num(e.mean);
    j["variance"] = num(e.variance);
    j["stderr"] = num(e.stderr_);
    j["seed"] = e.seed;
    j["overflow_count"] = e.overflow_count;
    j["proposal"] = to_string(e.proposal);
    return j;
}

ojson report_json(const ConvergenceReport& r) {
    ojson j;
    j["format"] = "supergauss v1";
    j["verdict"] = to_string(r.verdict);
    j["divergence_flagged"] = r.divergence_flagged;
    if (r.plateau) {
        j["plateau"] = {{"n", r.plateau->n},
                        {"value", num(r.plateau->value)},
                        {"kind", r.plateau->kind == Plateau::Kind::pairwise ? "pairwise" : "full_truncation"}};
    } else {
        j["plateau"] = nullptr;
    }
    ojson recs = ojson::array();
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        ojson e = record_json(r.records[i]);
        e["bound"] = num(r.certificate.global_bound);
        e["within_bound"] = static_cast<bool>(r.within_bound[i]);
        recs.push_back(e);
    }
    j["records"] = recs;
    j["certificate"] = ojson::parse(certificate_json(r.certificate, -1));
    j["annotations"] = r.annotations;
    return j;
}

std::string plateau_summary(const ConvergenceReport& r) {
    std::string s = "# verdict=" + std::string(to_string(r.verdict));
    if (r.plateau) {
        s += " plateau_n=" + std::to_string(r.plateau->n) + " plateau_value=" + format_number(r.plateau->value) +
             " plateau_kind=" + (r.plateau->kind == Plateau::Kind::pairwise ? "pairwise" : "full_truncation");
    } else {
        s += " plateau_n=none";
    }
    s += std::string(" divergence_flagged=") + (r.divergence_flagged ? "true" : "false") + "\n";
    return s;
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string convergence_csv(const ConvergenceReport& r) {
    std::string s = "# supergauss v1\nn,samples,mean,stderr,bound,verdict\n";
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        const auto& e = r.records[i];
        s += std::to_string(e.n) + "," + std::to_string(e.samples) + "," + format_number(e.mean) + "," +
             format_number(e.stderr_) + "," + format_number(r.certificate.global_bound) + "," + row_verdict(r, i) + "\n";
    }
    return s + plateau_summary(r);
}

std::string convergence_json(const ConvergenceReport& r, int indent) { return report_json(r).dump(indent); }

std::string sweep_csv(const std::vector<SweepEntry>& sweep) {
    std::string s = "# supergauss v1\n";
    for (const auto& e : sweep) {
        s += "# alpha=" + format_number(e.alpha) + "\n";
        s += convergence_csv(e.report).substr(std::string("# supergauss v1\n").size());
    }
    s += "# summary\nalpha,n,mean,stderr,bound,verdict\n";
    for (const auto& e : sweep) {
        const auto& r = e.report;
        const auto& last = r.records.back();
        const Eigen::Index n = r.plateau ? r.plateau->n : last.n;
        const double value = r.plateau ? r.plateau->value : last.mean;
        s += format_number(e.alpha) + "," + std::to_string(n) + "," + format_number(value) + "," +
             format_number(last.stderr_) + "," + format_number(r.certificate.global_bound) + "," +
             to_string(r.verdict) + "\n";
    }
    return s;
}

std::string sweep_json(const std::vector<SweepEntry>& sweep, int indent) {
    ojson j = ojson::array();
    for (const auto& e : sweep) {
        ojson x;
        x["alpha"] = e.alpha;
        x["report"] = report_json(e.report);
        j.push_back(x);
    }
    return j.dump(indent);
}

std::vector<TailRow> tail_table(const EigenSequence& lambda, const Certificate& cert, const std::vector<std::size_t>& ns,
                                const std::vector<double>& rs, std::uint64_t samples, std::uint64_t seed) {
    std::vector<TailRow> rows;
    for (std::size_t n : ns) {
        for (double r : rs) {
            TailRow t;
            t.n = n;
            t.r = r;
            t.mc = tail_mass_mc(lambda, n, r, samples, seed);
            t.recursion = recursion_tail_bound(lambda, n, r);
            t.zeta = r > cert.R_star ? zeta_tail_bound(cert, r) : std::numeric_limits<double>::quiet_NaN();
            const double slack = 3.0 * t.mc.stderr_;
            t.violated = t.mc.mean > t.recursion + slack || (!std::isnan(t.zeta) && t.mc.mean > t.zeta + slack);
            rows.push_back(t);
        }
    }
    return rows;
}

std::string tail_csv(const std::vector<TailRow>& rows) {
    std::string s = "# supergauss v1\nn,R,samples,mean,stderr,recursion_bound,zeta_bound,status\n";
    for (const auto& t : rows) {
        s += std::to_string(t.n) + "," + format_number(t.r) + "," + std::to_string(t.mc.samples) + "," +
             format_number(t.mc.mean) + "," + format_number(t.mc.stderr_) + "," + format_number(t.recursion) + "," +
             format_number(t.zeta) + "," + (t.violated ? "bound_violated" : "ok") + "\n";
    }
    return s;
}

std::string tail_json(const std::vector<TailRow>& rows, int indent) {
    ojson j = ojson::array();
    for (const auto& t : rows) {
        ojson x = record_json(t.mc);
        x["R"] = t.r;
        x["recursion_bound"] = num(t.recursion);
        x["zeta_bound"] = num(t.zeta);
        x["violated"] = t.violated;
        j.push_back(x);
    }
    return j.dump(indent);
}

std::string oracle_csv(const std::vector<OracleRow>& rows) {
    std::string s = "# supergauss v1\nn,samples,mean,stderr,oracle,z\n";
    for (const auto& o : rows) {
        s += std::to_string(o.mc.n) + "," + std::to_string(o.mc.samples) + "," + format_number(o.mc.mean) + "," +
             format_number(o.mc.stderr_) + "," + format_number(o.oracle) + "," + format_number(o.z) + "\n";
    }
    return s;
}

std::string oracle_json(const std::vector<OracleRow>& rows, int indent) {
    ojson j = ojson::array();
    for (const auto& o : rows) {
        ojson x = record_json(o.mc);
        x["oracle"] = num(o.oracle);
        x["z"] = num(o.z);
        j.push_back(x);
    }
    return j.dump(indent);
}

}  // namespace supergauss
