// SPDX-License-Identifier: Apache-2.0
#include "supergauss/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace supergauss {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Upper bound on sum_{n > N} n^-a, a > 1.
double power_tail(double a, std::size_t count) {
    if (count == 0) return 1.0 + 1.0 / (a - 1.0);
    const double n = static_cast<double>(count);
    return std::pow(n, 1.0 - a) / (a - 1.0);
}

// Upper bound on sum_{n > N} n^-a ln(n + 1), a > 1.
// Each term is below the integral of x^-a ln(x + 2) over [n - 1, n], and
// ln(x + 2) <= ln x + 2/x.
double power_log_tail(double a, std::size_t count) {
    if (count == 0) return std::log(2.0) + power_log_tail(a, 1);
    const double n = static_cast<double>(count);
    const double am1 = a - 1.0;
    return std::pow(n, 1.0 - a) * (std::log(n) / am1 + 1.0 / (am1 * am1)) + 2.0 * std::pow(n, -a) / a;
}

}  // namespace

double DecayFamily::value(double n) const noexcept {
    switch (kind) {
        case Kind::none: return 0.0;
        case Kind::power: return c * std::pow(n, -rate);
        case Kind::exponential: return c * std::exp(-rate * n);
    }
    return 0.0;
}

std::string DecayFamily::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::none: os << "none"; break;
        case Kind::power: os << "power(c=" << c << ", gamma=" << rate << ")"; break;
        case Kind::exponential: os << "exponential(c=" << c << ", r=" << rate << ")"; break;
    }
    return os.str();
}

EigenSequence EigenSequence::power(double c, double gamma, std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t n = 1; n <= count; ++n) v[n - 1] = c * std::pow(static_cast<double>(n), -gamma);
    return EigenSequence(std::move(v), DecayFamily::power(c, gamma));
}

EigenSequence EigenSequence::exponential(double c, double rate, std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t n = 1; n <= count; ++n) v[n - 1] = c * std::exp(-rate * static_cast<double>(n));
    return EigenSequence(std::move(v), DecayFamily::exponential(c, rate));
}

bool EigenSequence::descending() const noexcept {
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (std::abs(values_[i]) > std::abs(values_[i - 1])) return false;
    }
    return true;
}

EigenSequence EigenSequence::truncated(std::size_t n) const {
    n = std::min(n, values_.size());
    return EigenSequence(std::vector<double>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n)),
                         DecayFamily::none());
}

EigenSequence EigenSequence::without_zeros() const {
    std::vector<double> kept;
    for (double v : values_) {
        if (v != 0.0) kept.push_back(v);
    }
    return EigenSequence(std::move(kept), decay_);
}

double SeriesSum::total() const noexcept { return divergent ? kInf : truncated + tail; }

SeriesSum hs_series(const EigenSequence& lambda) {
    SeriesSum s;
    for (double v : lambda.values()) s.truncated += v * v;
    const auto& d = lambda.decay();
    const std::size_t count = lambda.size();
    switch (d.kind) {
        case DecayFamily::Kind::none:
            break;
        case DecayFamily::Kind::power: {
            const double a = 2.0 * d.rate;
            if (a <= 1.0) {
                s.divergent = true;
            } else {
                s.tail = d.c * d.c * power_tail(a, count);
            }
            break;
        }
        case DecayFamily::Kind::exponential: {
            if (d.rate <= 0.0) {
                s.divergent = true;
            } else {
                const double q = std::exp(-2.0 * d.rate);
                s.tail = d.c * d.c * std::pow(q, static_cast<double>(count + 1)) / (1.0 - q);
            }
            break;
        }
    }
    return s;
}

SeriesSum log_weighted_series(const EigenSequence& lambda) {
    SeriesSum s;
    const auto& v = lambda.values();
    for (std::size_t i = 0; i < v.size(); ++i) s.truncated += v[i] * v[i] * std::log(static_cast<double>(i) + 2.0);
    const auto& d = lambda.decay();
    const std::size_t count = lambda.size();
    switch (d.kind) {
        case DecayFamily::Kind::none:
            break;
        case DecayFamily::Kind::power: {
            const double a = 2.0 * d.rate;
            if (a <= 1.0) {
                s.divergent = true;
            } else {
                s.tail = d.c * d.c * power_log_tail(a, count);
            }
            break;
        }
        case DecayFamily::Kind::exponential: {
            if (d.rate <= 0.0) {
                s.divergent = true;
            } else {
                // ln(n + 1) <= ln(N + 2) + (n - N - 1)/(N + 2) for n > N (concavity).
                const double q = std::exp(-2.0 * d.rate);
                const double n2 = static_cast<double>(count) + 2.0;
                const double lead = std::pow(q, static_cast<double>(count + 1));
                s.tail = d.c * d.c * lead * (std::log(n2) / (1.0 - q) + q / ((1.0 - q) * (1.0 - q) * n2));
            }
            break;
        }
    }
    return s;
}

CompactMap CompactMap::identity(Eigen::Index n) {
    CompactMap k;
    k.kind_ = Kind::identity;
    k.in_dim_ = n;
    k.out_dim_ = n;
    k.col_scale_ = Vector::Ones(n);
    k.base_norm_ = 1.0;
    return k;
}

CompactMap CompactMap::dense(Matrix m, double declared_norm) {
    CompactMap k;
    k.kind_ = Kind::dense;
    k.in_dim_ = m.cols();
    k.out_dim_ = m.rows();
    k.col_scale_ = Vector::Ones(m.cols());
    if (declared_norm >= 0.0) {
        k.base_norm_ = declared_norm;
    } else if (m.size() == 0) {
        k.base_norm_ = 0.0;
    } else {
        Eigen::JacobiSVD<Matrix> svd(m);
        k.base_norm_ = svd.singularValues()(0);
    }
    k.base_ = std::move(m);
    return k;
}

CompactMap CompactMap::fourier(Eigen::Index n) {
    if (n < 1) throw std::invalid_argument("fourier map needs at least one site");
    Matrix u(n, n);
    const double dn = static_cast<double>(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(k * i) / dn;
            if (k == 0) {
                u(i, k) = 1.0 / std::sqrt(dn);
            } else if (2 * k == n) {
                u(i, k) = (i % 2 == 0 ? 1.0 : -1.0) / std::sqrt(dn);
            } else if (2 * k < n) {
                u(i, k) = std::sqrt(2.0 / dn) * std::cos(phase);
            } else {
                u(i, k) = std::sqrt(2.0 / dn) * std::sin(phase);
            }
        }
    }
    CompactMap k = dense(std::move(u), 1.0);
    k.kind_ = Kind::fourier;
    return k;
}

double CompactMap::op_norm() const noexcept {
    return col_scale_.size() ? base_norm_ * col_scale_.cwiseAbs().maxCoeff() : 0.0;
}

bool CompactMap::orthogonal() const noexcept {
    if (kind_ == Kind::dense) return false;
    return in_dim_ == out_dim_ && (col_scale_.array() == 1.0).all();
}

Vector CompactMap::apply(const Vector& x) const {
    if (x.size() > in_dim_) {
        throw DimensionError("CompactMap::apply: input length " + std::to_string(x.size()) +
                             " exceeds " + std::to_string(in_dim_));
    }
    const Eigen::Index len = x.size();
    const Vector scaled = col_scale_.head(len).cwiseProduct(x);
    if (kind_ == Kind::identity) {
        Vector out = Vector::Zero(out_dim_);
        out.head(len) = scaled;
        return out;
    }
    return base_.leftCols(len) * scaled;
}

Matrix CompactMap::leading_columns(Eigen::Index n) const {
    if (n > in_dim_) throw DimensionError("CompactMap::leading_columns: n exceeds input dimension");
    if (kind_ == Kind::identity) {
        Matrix out = Matrix::Zero(out_dim_, n);
        for (Eigen::Index i = 0; i < n; ++i) out(i, i) = col_scale_(i);
        return out;
    }
    return base_.leftCols(n) * col_scale_.head(n).asDiagonal();
}

CompactMap CompactMap::with_column_scale(const Vector& scale) const {
    require_dim(scale.size(), in_dim_, "column scale");
    CompactMap k = *this;
    k.col_scale_ = col_scale_.cwiseProduct(scale);
    return k;
}

CompactMap CompactMap::with_permuted_columns(const std::vector<Eigen::Index>& order) const {
    CompactMap k;
    k.kind_ = kind_ == Kind::identity ? Kind::dense : kind_;
    k.in_dim_ = static_cast<Eigen::Index>(order.size());
    k.out_dim_ = out_dim_;
    k.base_.resize(out_dim_, k.in_dim_);
    k.col_scale_.resize(k.in_dim_);
    for (Eigen::Index c = 0; c < k.in_dim_; ++c) {
        const Eigen::Index src = order[static_cast<std::size_t>(c)];
        if (src < 0 || src >= in_dim_) throw DimensionError("column index out of range");
        if (kind_ == Kind::identity) {
            k.base_.col(c) = Vector::Unit(out_dim_, src);
        } else {
            k.base_.col(c) = base_.col(src);
        }
        k.col_scale_(c) = col_scale_(src);
    }
    // A column subset has norm at most that of the full map.
    k.base_norm_ = base_norm_;
    return k;
}

std::string CompactMap::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::identity: os << "identity(" << in_dim_ << ")"; break;
        case Kind::dense: os << "dense(" << out_dim_ << "x" << in_dim_ << ")"; break;
        case Kind::fourier: os << "fourier(" << in_dim_ << ")"; break;
    }
    return os.str();
}

std::pair<EigenSequence, CompactMap> rescale_half_cap(const EigenSequence& lambda, const CompactMap& k, CapMode mode) {
    const auto& v = lambda.values();
    require_dim(k.in_dim(), static_cast<Eigen::Index>(v.size()), "rescale_half_cap: K input");
    std::vector<double> capped(v.size());
    Vector inv_t = Vector::Ones(static_cast<Eigen::Index>(v.size()));

    double global_t = 1.0;
    if (mode == CapMode::uniform) {
        double largest = 0.0;
        for (double x : v) largest = std::max(largest, std::abs(x));
        if (largest > kHalfCap) global_t = kHalfCap / largest;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        double t = global_t;
        if (mode == CapMode::per_coordinate) t = mag > kHalfCap ? kHalfCap / mag : 1.0;
        if (t == 1.0) {
            capped[i] = v[i];
        } else {
            capped[i] = mode == CapMode::per_coordinate ? std::copysign(kHalfCap, v[i]) : v[i] * t;
            inv_t(static_cast<Eigen::Index>(i)) = 1.0 / t;
        }
    }
    return {EigenSequence(std::move(capped), lambda.decay()), k.with_column_scale(inv_t)};
}

Embedding::Embedding(const SpectralModel& model, Eigen::Index n) : n_(n), out_(model.K.out_dim()) {
    if (n < 0 || n > model.dim()) {
        throw DimensionError("embedding dimension " + std::to_string(n) + " exceeds N = " + std::to_string(model.dim()));
    }
    require_dim(model.K.in_dim(), model.dim(), "K input");
    a_ = model.K.leading_columns(n);
    for (Eigen::Index c = 0; c < n; ++c) a_.col(c) *= model.lambda.values()[static_cast<std::size_t>(c)];
}

void Embedding::apply(const Vector& x, Vector& out) const {
    require_dim(x.size(), n_, "embedding input");
    out.noalias() = a_ * x;
}

Vector embed(const SpectralModel& model, const Vector& x) {
    Embedding e(model, x.size());
    Vector out(e.out_dim());
    e.apply(x, out);
    return out;
}

bool ValidationReport::ok() const noexcept {
    return std::none_of(checks.begin(), checks.end(), [](const ValidationCheck& c) {
        return !c.passed && c.severity == ValidationCheck::Severity::error;
    });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

bool ValidationReport::passed(const std::string& name) const {
    const auto* c = find(name);
    return c != nullptr && c->passed;
}

ValidationReport validate_model(const SpectralModel& model, StreamKey key) {
    const Eigen::Index n = model.dim();
    require_dim(model.K.in_dim(), n, "K input (eigenvalue count)");
    require_dim(model.p.dim(), model.K.out_dim(), "p domain (K output)");
    require_dim(model.q.dim(), model.K.out_dim(), "q domain (K output)");
    if (!(model.alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");

    using Severity = ValidationCheck::Severity;
    ValidationReport report;
    auto add = [&](std::string name, bool ok, Severity sev, std::string detail) {
        report.checks.push_back({std::move(name), ok, sev, std::move(detail)});
    };

    const auto& lam = model.lambda;
    add("descending order", lam.descending(), Severity::error,
        lam.descending() ? "" : "eigenvalues must be sorted by decreasing magnitude");

    std::size_t zeros = 0;
    bool finite = true;
    double largest = 0.0;
    for (double v : lam.values()) {
        zeros += v == 0.0;
        finite = finite && std::isfinite(v);
        largest = std::max(largest, std::abs(v));
    }
    add("finite eigenvalues", finite, Severity::error, "");
    add("no zero eigenvalues", zeros == 0, Severity::warning,
        zeros ? std::to_string(zeros) + " zero eigenvalue(s) are dropped" : "");
    {
        std::ostringstream os;
        os << "max |lambda| = " << largest << (largest * largest < 0.5 ? "" : "; normalizable by rescaling K");
        add("half cap", finite, Severity::warning, os.str());
    }

    const SeriesSum hs = hs_series(lam);
    const SeriesSum lw = log_weighted_series(lam);
    add("hs summability", !hs.divergent, Severity::warning,
        hs.divergent ? "sum lambda^2 diverges for " + lam.decay().describe() : "");
    add("log-weighted summability", !lw.divergent, Severity::warning,
        lw.divergent ? "sum lambda^2 ln(n+1) diverges for " + lam.decay().describe() : "");

    const auto pa = check_seminorm_axioms(model.p, 64, {key.seed, 0x5EA1});
    add("seminorm axioms (p)", pa.passed, Severity::error, pa.detail);
    const auto qa = check_seminorm_axioms(model.q, 64, {key.seed, 0x5EA2});
    add("seminorm axioms (q)", qa.passed, Severity::error, qa.detail);

    report.compatibility = kernel_compatibility(model.p, model.q);
    add("kernel compatibility",
        report.compatibility.status != KernelCompatibility::Status::incompatible, Severity::error,
        std::string(to_string(report.compatibility.status)) +
            (report.compatibility.detail.empty() ? "" : ": " + report.compatibility.detail));

    if (model.f.kind() == GrowthFunction::Kind::none) {
        // Pure Gaussian case: nothing to balance, both conditions are vacuous.
        add("f submultiplicative", true, Severity::warning, "growth disabled");
        add("f super-quadratic gap", true, Severity::warning, "growth disabled");
        return report;
    }
    const auto sub = check_submultiplicative(model.f);
    add("f submultiplicative", sub.passed, Severity::warning, sub.detail);
    const auto gap = check_superquadratic(model.f);
    add("f super-quadratic gap", gap.passed, Severity::warning, gap.detail);
    return report;
}

SpectralModel drop_zero_eigenvalues(const SpectralModel& model) {
    std::vector<Eigen::Index> keep;
    std::vector<double> values;
    const auto& v = model.lambda.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0.0) {
            keep.push_back(static_cast<Eigen::Index>(i));
            values.push_back(v[i]);
        }
    }
    if (keep.size() == v.size()) return model;
    SpectralModel out = model;
    out.lambda = EigenSequence(std::move(values), model.lambda.decay());
    out.K = model.K.with_permuted_columns(keep);
    return out;
}

}  // namespace supergauss
