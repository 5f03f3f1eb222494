// SPDX-License-Identifier: Apache-2.0
#include "supergauss/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "supergauss/special.hpp"

namespace supergauss {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBetaScanLimit = 1e7;

// |v| multiplier of a seminorm on R^1, or a negative value when p is not of that form.
double scalar_multiple(const Seminorm& p) {
    if (p.dim() != 1) return -1.0;
    switch (p.kind()) {
        case Seminorm::Kind::matrix:
            if (p.matrix().rows() == 0) return 0.0;
            return p.scale() * p.matrix().col(0).norm();
        case Seminorm::Kind::lattice_power:
            return p.scale() * std::pow(p.spacing(), 1.0 / p.exponent());
        case Seminorm::Kind::custom:
            return -1.0;
    }
    return -1.0;
}

// Smallest (1 - u^2) / (1 + u^2 ln(b + 1)) over b > N with u_b = min(0.7, tail value).
// Past the cap region and the peak of u_b^2 ln(b + 1) the ratio increases towards 1.
double tail_beta(const DecayFamily& d, std::size_t count, bool& complete) {
    complete = true;
    double end = 0.0;
    switch (d.kind) {
        case DecayFamily::Kind::none:
            return 1.0;
        case DecayFamily::Kind::power: {
            const double peak = std::exp(1.0 / (2.0 * d.rate));
            const double cap = d.c > kHalfCap ? std::pow(d.c / kHalfCap, 1.0 / d.rate) : 0.0;
            end = std::max(peak, cap) + 2.0;
            break;
        }
        case DecayFamily::Kind::exponential: {
            const double peak = std::exp(1.0 / (2.0 * d.rate));
            const double cap = d.c > kHalfCap ? std::log(d.c / kHalfCap) / d.rate : 0.0;
            end = std::max(peak, cap) + 2.0;
            break;
        }
    }
    if (end > kBetaScanLimit) {
        end = kBetaScanLimit;
        complete = false;
    }
    double best = 1.0;
    for (double b = static_cast<double>(count) + 1.0; b <= std::max(end, static_cast<double>(count) + 1.0); b += 1.0) {
        const double u = std::min(kHalfCap, d.value(b));
        const double u2 = u * u;
        best = std::min(best, (1.0 - u2) / (1.0 + u2 * std::log(b + 1.0)));
    }
    return best;
}

nlohmann::json num(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

}  // namespace

const char* to_string(ConstantStatus s) noexcept {
    switch (s) {
        case ConstantStatus::closed_form: return "closed_form";
        case ConstantStatus::optimizer_estimate: return "optimizer_estimate";
        case ConstantStatus::unbounded: return "unbounded";
    }
    return "?";
}

BalancingConstant balancing_constant(const SpectralModel& model, const BalancingOptions& options) {
    const auto compat = kernel_compatibility(model.p, model.q);
    if (compat.status == KernelCompatibility::Status::incompatible) {
        throw IncompatibleKernels("balancing constant is infinite: " + compat.detail);
    }
    const Eigen::Index n = model.dim();
    require_dim(model.K.in_dim(), n, "K input");
    BalancingConstant out;
    out.argmax = Vector::Zero(n);

    if (options.allow_closed_form && model.f.kind() == GrowthFunction::Kind::none && model.q.is_quadratic()) {
        const Matrix kd = model.K.leading_columns(n);
        const Matrix m = kd.transpose() * model.q.gram() * kd;
        const double top = n ? Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff() : 0.0;
        out.value = 2.0 * model.alpha * top <= 1.0 ? 0.0 : kInf;
        out.status = std::isfinite(out.value) ? ConstantStatus::closed_form : ConstantStatus::unbounded;
        return out;
    }

    if (options.allow_closed_form && n == 1 && model.K.out_dim() == 1 && model.f.kind() == GrowthFunction::Kind::power) {
        const double ap = scalar_multiple(model.p);
        const double aq = scalar_multiple(model.q);
        if (ap >= 0.0 && aq >= 0.0) {
            const double kappa = std::abs(model.K.apply(Vector::Ones(1))(0));
            const double eps = model.f.epsilon();
            const double a = std::pow(ap * kappa, 2.0 + eps);
            const double b = model.alpha * aq * aq * kappa * kappa - 0.5;
            out.status = ConstantStatus::closed_form;
            if (b <= 0.0) {
                out.value = 0.0;
            } else if (a == 0.0) {
                out.value = kInf;
                out.status = ConstantStatus::unbounded;
            } else {
                const double t = std::pow(2.0 * b / ((2.0 + eps) * a), 1.0 / eps);
                out.value = b * t * t * eps / (2.0 + eps);
                out.argmax(0) = t;
            }
            return out;
        }
    }

    const SpectralModel& m = model;
    auto g = [&m](const Vector& z) {
        const Vector v = m.K.apply(z);
        const double qv = m.q(v);
        return -m.f(m.p(v)) + m.alpha * qv * qv - 0.5 * z.squaredNorm();
    };
    MaximizeOptions mo;
    mo.random_directions = options.budget;
    mo.seed = options.seed;
    const auto res = maximize(g, n, mo);
    out.value = res.value;
    out.argmax = res.argmax;
    out.status = res.unbounded ? ConstantStatus::unbounded : ConstantStatus::optimizer_estimate;
    return out;
}

double c_n(const EigenSequence& lambda, std::size_t n) {
    const double l = lambda.lambda(n);
    if (l == 0.0) throw std::domain_error("c_n undefined for a zero eigenvalue");
    return 1.0 + 1.0 / (l * l * std::log(static_cast<double>(n) + 1.0));
}

RhoBeta rho_beta(const EigenSequence& lambda) {
    const SeriesSum lw = log_weighted_series(lambda);
    if (lw.divergent) {
        throw std::domain_error("sum lambda^2 ln(n+1) diverges for " + lambda.decay().describe());
    }
    RhoBeta out;
    out.rho = std::exp(-lw.total());
    double log_exact = -lw.tail;
    double beta = 1.0;
    const auto& v = lambda.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double l2 = v[i] * v[i];
        const double w = l2 * std::log(static_cast<double>(i) + 2.0);
        log_exact -= std::log1p(w);
        beta = std::min(beta, (1.0 - l2) / (1.0 + w));
    }
    out.rho_exact = std::exp(log_exact);
    bool complete = true;
    beta = std::min(beta, tail_beta(lambda.decay(), v.size(), complete));
    out.beta_finite_only = lambda.decay().kind == DecayFamily::Kind::none || !complete;
    out.beta = beta;
    out.r_star = 2.0 / (out.rho * out.beta);
    return out;
}

ProductBound product_bound(const EigenSequence& lambda) {
    double log_prod = 0.0;
    for (double l : lambda.values()) {
        if (!(l * l < 1.0)) throw std::domain_error("product bound requires lambda^2 < 1");
        log_prod -= 0.5 * std::log1p(-l * l);
    }
    return {std::exp(log_prod), std::exp(hs_sum(lambda))};
}

Certificate certify(const SpectralModel& input, const BalancingOptions& options) {
    bool needs_cap = false;
    for (double l : input.lambda.values()) needs_cap = needs_cap || std::abs(l) > kHalfCap;
    SpectralModel model = input;
    if (needs_cap) std::tie(model.lambda, model.K) = rescale_half_cap(input.lambda, input.K);

    Certificate c;
    const SeriesSum hs = hs_series(model.lambda);
    const SeriesSum lw = log_weighted_series(model.lambda);
    c.hs = hs.total();
    c.hs_tail = hs.divergent ? kInf : hs.tail;
    c.logw = lw.total();
    c.logw_tail = lw.divergent ? kInf : lw.tail;
    c.logw_divergent = lw.divergent;

    const auto bc = balancing_constant(model, options);
    c.C = bc.value;
    c.C_status = bc.status;

    if (lw.divergent) {
        c.rho = c.rho_exact = 0.0;
        c.beta = 0.0;
        c.beta_finite_only = true;
        c.R_star = kInf;
    } else {
        const auto rb = rho_beta(model.lambda);
        c.rho = rb.rho;
        c.rho_exact = rb.rho_exact;
        c.beta = rb.beta;
        c.beta_finite_only = rb.beta_finite_only;
        c.R_star = rb.r_star;
    }

    const auto pb = product_bound(model.lambda);
    c.product = pb.product;
    c.exp_bound = pb.exp_bound;
    c.tail_factor = hs.divergent ? kInf : std::exp(hs.tail);
    c.global_bound = global_upper_bound(c);
    c.global_bound_certified = c.C_status == ConstantStatus::closed_form;
    return c;
}

double global_upper_bound(const Certificate& cert) {
    if (cert.C == kInf || cert.tail_factor == kInf) return kInf;
    return std::exp(cert.C) * cert.product * cert.tail_factor;
}

double i1_closed_form(double lambda1, double r) {
    const double l2 = lambda1 * lambda1;
    if (l2 == 0.0) throw std::domain_error("i1_closed_form requires lambda_1 != 0");
    if (!(l2 < 1.0)) throw std::domain_error("i1_closed_form requires lambda_1^2 < 1");
    if (r < 0.0) throw std::domain_error("i1_closed_form requires R >= 0");
    return erfc(std::sqrt(r * (1.0 - l2) / (2.0 * l2))) / std::sqrt(1.0 - l2);
}

double recursion_tail_bound(const EigenSequence& lambda, std::size_t n, double r) {
    if (n > lambda.size()) throw DimensionError("recursion_tail_bound: n exceeds the listed eigenvalues");
    if (n == 0) return r <= 0.0 ? 1.0 : 0.0;
    const auto& v = lambda.values();
    double log_prefactor = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        if (!(v[a] * v[a] < 1.0)) throw std::domain_error("recursion_tail_bound requires lambda^2 < 1");
        log_prefactor -= 0.5 * std::log1p(-v[a] * v[a]);
    }
    // suffix[b] = sum_{m = b+1}^{n} ln((c_m - 1)/c_m) = -sum log1p(lambda_m^2 ln(m + 1)).
    double suffix = 0.0;
    double sum = 0.0;
    for (std::size_t b = n; b >= 1; --b) {
        const double l2 = v[b - 1] * v[b - 1];
        const double w = l2 * std::log(static_cast<double>(b) + 1.0);
        // (1 - l^2) / (l^2 c_b) = (1 - l^2) ln(b + 1) / (1 + l^2 ln(b + 1))
        const double ratio = (1.0 - l2) * std::log(static_cast<double>(b) + 1.0) / (1.0 + w);
        sum += erfc(std::sqrt(0.5 * r * std::exp(suffix) * ratio));
        suffix -= std::log1p(w);
    }
    return std::exp(log_prefactor) * sum;
}

double zeta_tail_bound(const Certificate& cert, double r) {
    if (!(r > cert.R_star)) {
        std::ostringstream os;
        os << "zeta tail bound requires R > R* = " << cert.R_star << " (got " << r << ")";
        throw std::domain_error(os.str());
    }
    const double s = cert.rho * cert.beta * r / 2.0;
    return cert.exp_bound * zeta_minus_one(s);
}

std::string certificate_json(const Certificate& c, int indent) {
    nlohmann::ordered_json j;
    j["hs"] = num(c.hs);
    j["hs_tail"] = num(c.hs_tail);
    j["logw"] = num(c.logw);
    j["logw_tail"] = num(c.logw_tail);
    j["logw_divergent"] = c.logw_divergent;
    j["C"] = num(c.C);
    j["C_status"] = to_string(c.C_status);
    j["rho"] = num(c.rho);
    j["rho_exact"] = num(c.rho_exact);
    j["beta"] = num(c.beta);
    j["beta_finite_only"] = c.beta_finite_only;
    j["R_star"] = num(c.R_star);
    j["product"] = num(c.product);
    j["exp_bound"] = num(c.exp_bound);
    j["tail_factor"] = num(c.tail_factor);
    j["global_bound"] = num(c.global_bound);
    j["global_bound_status"] = c.global_bound_certified ? "certified" : "empirical";
    return j.dump(indent);
}

std::string certificate_text(const Certificate& c) {
    std::ostringstream os;
    os.precision(17);
    os << "hs = " << c.hs << "\n"
       << "hs_tail = " << c.hs_tail << "\n"
       << "logw = " << c.logw << "\n"
       << "logw_tail = " << c.logw_tail << "\n"
       << "logw_divergent = " << (c.logw_divergent ? "true" : "false") << "\n"
       << "C = " << c.C << "\n"
       << "C_status = " << to_string(c.C_status) << "\n"
       << "rho = " << c.rho << "\n"
       << "rho_exact = " << c.rho_exact << "\n"
       << "beta = " << c.beta << "\n"
       << "beta_finite_only = " << (c.beta_finite_only ? "true" : "false") << "\n"
       << "R_star = " << c.R_star << "\n"
       << "product = " << c.product << "\n"
       << "exp_bound = " << c.exp_bound << "\n"
       << "tail_factor = " << c.tail_factor << "\n"
       << "global_bound = " << c.global_bound << "\n"
       << "global_bound_status = " << (c.global_bound_certified ? "certified" : "empirical") << "\n";
    return os.str();
}

}  // namespace supergauss
