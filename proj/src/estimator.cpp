// SPDX-License-Identifier: Apache-2.0
#include "supergauss/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "supergauss/optimize.hpp"
#include "supergauss/special.hpp"

namespace supergauss {
namespace {

constexpr std::uint64_t kIntegrateTag = 1;
constexpr std::uint64_t kTailTag = 2;
// Floor on the precision of a Laplace component; keeps its spread at most ~3
// in directions where the log integrand is flat or convex.
constexpr double kMinPrecision = 0.1;

std::uint64_t chunk_key(std::uint64_t tag, std::uint64_t n, std::uint64_t chunk) {
    return (tag << 56) ^ (n << 40) ^ chunk;
}

std::uint64_t chunk_count(std::uint64_t samples, std::uint64_t chunk_size) {
    if (chunk_size == 0) throw std::invalid_argument("chunk_size must be > 0");
    return (samples + chunk_size - 1) / chunk_size;
}

double log_sum_exp(const std::vector<double>& xs) {
    const double m = *std::max_element(xs.begin(), xs.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

class Sampler {
  public:
    Sampler(const SpectralModel& model, Eigen::Index n, std::uint64_t seed, const EstimatorOptions& opt)
        : model_(model), emb_(model, n), n_(n), kind_(opt.proposal), w0_(opt.defensive_weight) {
        if (kind_ == Proposal::laplace && n_ > 0) build_laplace(seed);
        else kind_ = Proposal::standard;
    }

    [[nodiscard]] Proposal kind() const noexcept { return kind_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return n_; }
    [[nodiscard]] Eigen::Index out_dim() const noexcept { return emb_.out_dim(); }

    double log_integrand(const Vector& x, Vector& v) const {
        emb_.apply(x, v);
        const double qv = model_.q(v);
        const double fp = model_.f.kind() == GrowthFunction::Kind::none ? 0.0 : model_.f(model_.p(v));
        return -fp + model_.alpha * qv * qv;
    }

    // Log of integrand times the likelihood ratio N(0, I) / proposal at a fresh draw.
    double draw(NormalStream& rng, Vector& x, Vector& z, Vector& v) const {
        if (kind_ == Proposal::standard) {
            rng.fill(x);
            return log_integrand(x, v);
        }
        const double u = rng.uniform();
        rng.fill(z);
        if (u < w0_) {
            x = z;
        } else {
            const auto k = centers_.size();
            auto idx = static_cast<std::size_t>((u - w0_) / (1.0 - w0_) * static_cast<double>(k));
            idx = std::min(idx, k - 1);
            x = centers_[idx] + factor_ * z;
        }
        // Normalizing constants (2 pi)^(-n/2) cancel between target and proposal.
        const double log_std = -0.5 * x.squaredNorm();
        auto& terms = terms_buffer();
        terms.clear();
        terms.push_back(std::log(w0_) + log_std);
        const double wc = std::log((1.0 - w0_) / static_cast<double>(centers_.size())) + half_log_det_precision_;
        for (const auto& c : centers_) {
            const Vector d = x - c;
            terms.push_back(wc - 0.5 * d.dot(precision_ * d));
        }
        return log_integrand(x, v) + log_std - log_sum_exp(terms);
    }

  private:
    static std::vector<double>& terms_buffer() {
        thread_local std::vector<double> t;
        return t;
    }

    void build_laplace(std::uint64_t seed) {
        auto objective = [this](const Vector& x) {
            Vector v(emb_.out_dim());
            return log_integrand(x, v) - 0.5 * x.squaredNorm();
        };
        MaximizeOptions mo;
        mo.seed = mix64(seed ^ 0x1A91ACEULL);
        const auto mode = maximize(objective, n_, mo);
        if (mode.unbounded || !std::isfinite(mode.value)) {
            kind_ = Proposal::standard;
            return;
        }
        const Vector& xs = mode.argmax;
        const double h = 1e-4 * (1.0 + xs.cwiseAbs().maxCoeff());
        Matrix hess(n_, n_);
        const double f0 = objective(xs);
        for (Eigen::Index i = 0; i < n_; ++i) {
            const Vector ei = h * Vector::Unit(n_, i);
            hess(i, i) = (objective(xs + ei) - 2.0 * f0 + objective(xs - ei)) / (h * h);
            for (Eigen::Index j = 0; j < i; ++j) {
                const Vector ej = h * Vector::Unit(n_, j);
                const double d = objective(xs + ei + ej) - objective(xs + ei - ej) - objective(xs - ei + ej) +
                                 objective(xs - ei - ej);
                hess(i, j) = hess(j, i) = d / (4.0 * h * h);
            }
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(-hess);
        Vector ev = es.eigenvalues().cwiseMax(kMinPrecision);
        precision_ = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
        factor_ = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal();
        half_log_det_precision_ = 0.5 * ev.array().log().sum();
        // The integrand is even in x, so its modes come in +- pairs.
        centers_.push_back(xs);
        if (xs.norm() > 1e-8) centers_.push_back(-xs);
    }

    const SpectralModel& model_;
    Embedding emb_;
    Eigen::Index n_;
    Proposal kind_;
    double w0_;
    std::vector<Vector> centers_;
    Matrix precision_;
    Matrix factor_;
    double half_log_det_precision_ = 0.0;
};

struct ChunkResult {
    RunningStats stats;
    std::uint64_t overflow = 0;
};

template <class Accumulate>
void run_chunk(const Sampler& s, std::uint64_t seed, std::uint64_t chunk, std::uint64_t count, Accumulate&& acc) {
    NormalStream rng({seed, chunk_key(kIntegrateTag, static_cast<std::uint64_t>(s.dim()), chunk)});
    Vector x(s.dim()), z(s.dim()), v(s.out_dim());
    for (std::uint64_t i = 0; i < count; ++i) {
        double lw = s.draw(rng, x, z, v);
        bool clamped = false;
        if (std::isnan(lw) || lw > kOverflowExponent) {
            lw = kOverflowExponent;
            clamped = true;
        }
        acc(std::exp(lw), clamped);
    }
}

EstimateRecord finish(const RunningStats& st, Eigen::Index n, std::uint64_t seed, std::uint64_t overflow,
                      Proposal p) {
    EstimateRecord r;
    r.n = n;
    r.samples = st.count();
    r.mean = st.mean();
    r.variance = st.variance();
    r.stderr_ = st.stderr_of_mean();
    r.seed = seed;
    r.overflow_count = overflow;
    r.proposal = p;
    return r;
}

void check_samples(std::uint64_t samples) {
    if (samples == 0) throw std::invalid_argument("samples must be > 0");
}

struct TailSetup {
    double prefactor = 1.0;
    std::vector<double> weights;  // l^2 / (1 - l^2)
};

TailSetup tail_setup(const EigenSequence& lambda, std::size_t n) {
    if (n > lambda.size()) throw DimensionError("tail_mass_mc: n exceeds the listed eigenvalues");
    TailSetup t;
    double log_pref = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        const double l2 = lambda.values()[a] * lambda.values()[a];
        if (!(l2 < 1.0)) throw std::domain_error("tail_mass_mc requires lambda^2 < 1");
        log_pref -= 0.5 * std::log1p(-l2);
        t.weights.push_back(l2 / (1.0 - l2));
    }
    t.prefactor = std::exp(log_pref);
    return t;
}

template <class Accumulate>
void tail_chunk(const TailSetup& t, double r, std::uint64_t seed, std::uint64_t chunk, std::uint64_t count,
                Accumulate&& acc) {
    const auto n = t.weights.size();
    NormalStream rng({seed, chunk_key(kTailTag, n, chunk)});
    for (std::uint64_t i = 0; i < count; ++i) {
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            const double z = rng.next();
            s += t.weights[a] * z * z;
        }
        acc(s >= r ? 1.0 : 0.0);
    }
}

EstimateRecord scale_tail(EstimateRecord r, double prefactor) {
    r.mean *= prefactor;
    r.variance *= prefactor * prefactor;
    r.stderr_ *= prefactor;
    return r;
}

double top_eigenvalue(const Matrix& m) {
    if (m.rows() == 0) return 0.0;
    return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

// 2 alpha sup_{|d| = 1} q(A Z d)^2 with Z an orthonormal basis of the subspace.
Integrability quadratic_threshold(const SpectralModel& model, const Matrix& az, const std::string& where) {
    Integrability out;
    std::ostringstream os;
    if (model.q.is_quadratic()) {
        out.threshold = 2.0 * model.alpha * top_eigenvalue(az.transpose() * model.q.gram() * az);
        out.status = out.threshold < 1.0 ? Integrability::Status::integrable : Integrability::Status::divergent;
        os << "2 alpha sup q^2 on " << where << " = " << out.threshold;
    } else {
        const double bound = model.q.lipschitz() * (az.cols() ? az.norm() : 0.0);
        out.threshold = 2.0 * model.alpha * bound * bound;
        out.status = out.threshold < 1.0 ? Integrability::Status::integrable : Integrability::Status::unknown;
        os << "Lipschitz bound on 2 alpha sup q^2 on " << where << " = " << out.threshold;
    }
    out.detail = os.str();
    return out;
}

}  // namespace

const char* to_string(Proposal p) noexcept {
    switch (p) {
        case Proposal::standard: return "standard";
        case Proposal::laplace: return "laplace";
    }
    return "?";
}

const char* to_string(Integrability::Status s) noexcept {
    switch (s) {
        case Integrability::Status::integrable: return "integrable";
        case Integrability::Status::divergent: return "divergent";
        case Integrability::Status::unknown: return "unknown";
    }
    return "?";
}

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::converged: return "converged";
        case Verdict::budget_exhausted: return "budget_exhausted";
        case Verdict::bound_violated: return "bound_violated";
    }
    return "?";
}

EstimateRecord integrate_projected(const SpectralModel& model, Eigen::Index n, std::uint64_t samples,
                                   std::uint64_t seed, const EstimatorOptions& options) {
    check_samples(samples);
    const Sampler sampler(model, n, seed, options);
    const std::uint64_t chunks = chunk_count(samples, options.chunk_size);
    std::vector<ChunkResult> parts(chunks);
    const auto nc = static_cast<std::int64_t>(chunks);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < nc; ++c) {
        const auto uc = static_cast<std::uint64_t>(c);
        const std::uint64_t count = std::min(options.chunk_size, samples - uc * options.chunk_size);
        ChunkResult& part = parts[uc];
        run_chunk(sampler, seed, uc, count, [&part](double w, bool clamped) {
            part.stats.push(w);
            part.overflow += clamped ? 1 : 0;
        });
    }
    RunningStats total;
    std::uint64_t overflow = 0;
    for (const auto& p : parts) {
        total.merge(p.stats);
        overflow += p.overflow;
    }
    return finish(total, n, seed, overflow, sampler.kind());
}

EstimateRecord integrate_projected_serial(const SpectralModel& model, Eigen::Index n, std::uint64_t samples,
                                          std::uint64_t seed, const EstimatorOptions& options) {
    check_samples(samples);
    const Sampler sampler(model, n, seed, options);
    const std::uint64_t chunks = chunk_count(samples, options.chunk_size);
    RunningStats total;
    std::uint64_t overflow = 0;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        const std::uint64_t count = std::min(options.chunk_size, samples - c * options.chunk_size);
        run_chunk(sampler, seed, c, count, [&](double w, bool clamped) {
            total.push(w);
            overflow += clamped ? 1 : 0;
        });
    }
    return finish(total, n, seed, overflow, sampler.kind());
}

EstimateRecord tail_mass_mc(const EigenSequence& lambda, std::size_t n, double r, std::uint64_t samples,
                            std::uint64_t seed, std::uint64_t chunk_size) {
    check_samples(samples);
    const TailSetup t = tail_setup(lambda, n);
    const std::uint64_t chunks = chunk_count(samples, chunk_size);
    std::vector<RunningStats> parts(chunks);
    const auto nc = static_cast<std::int64_t>(chunks);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nc; ++c) {
        const auto uc = static_cast<std::uint64_t>(c);
        const std::uint64_t count = std::min(chunk_size, samples - uc * chunk_size);
        RunningStats& part = parts[uc];
        tail_chunk(t, r, seed, uc, count, [&part](double x) { part.push(x); });
    }
    RunningStats total;
    for (const auto& p : parts) total.merge(p);
    return scale_tail(finish(total, static_cast<Eigen::Index>(n), seed, 0, Proposal::standard), t.prefactor);
}

EstimateRecord tail_mass_mc_serial(const EigenSequence& lambda, std::size_t n, double r, std::uint64_t samples,
                                   std::uint64_t seed, std::uint64_t chunk_size) {
    check_samples(samples);
    const TailSetup t = tail_setup(lambda, n);
    const std::uint64_t chunks = chunk_count(samples, chunk_size);
    RunningStats total;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        const std::uint64_t count = std::min(chunk_size, samples - c * chunk_size);
        tail_chunk(t, r, seed, c, count, [&total](double x) { total.push(x); });
    }
    return scale_tail(finish(total, static_cast<Eigen::Index>(n), seed, 0, Proposal::standard), t.prefactor);
}

double quadrature_oracle(const SpectralModel& model, Eigen::Index n, int nodes_per_dim) {
    if (n > 3) throw std::invalid_argument("quadrature_oracle supports n <= 3 (got " + std::to_string(n) + ")");
    if (n < 0) throw DimensionError("quadrature_oracle: negative dimension");
    const Sampler s(model, n, 0, {});
    const QuadratureRule rule = gauss_hermite(nodes_per_dim);
    const auto m = static_cast<std::size_t>(nodes_per_dim);
    std::size_t total = 1;
    for (Eigen::Index d = 0; d < n; ++d) total *= m;

    Vector x(n), v(s.out_dim());
    double sum = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        double w = 1.0;
        for (Eigen::Index d = 0; d < n; ++d) {
            const std::size_t k = rest % m;
            rest /= m;
            x(d) = rule.nodes[k];
            w *= rule.weights[k];
        }
        sum += w * std::exp(s.log_integrand(x, v));
    }
    return sum;
}

double gaussian_closed_form(const SpectralModel& model, Eigen::Index n) {
    if (model.f.kind() != GrowthFunction::Kind::none || !model.q.is_quadratic()) {
        throw std::invalid_argument("gaussian_closed_form needs f == 0 and a quadratic q");
    }
    const Embedding e(model, n);
    const Matrix m = e.matrix().transpose() * model.q.gram() * e.matrix();
    if (n == 0) return 1.0;
    const Vector mu = Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
    double log_value = 0.0;
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
        const double t = 2.0 * model.alpha * mu(k);
        if (!(t < 1.0)) return std::numeric_limits<double>::infinity();
        log_value -= 0.5 * std::log1p(-t);
    }
    return std::exp(log_value);
}

Integrability integrability_check(const SpectralModel& model, Eigen::Index n) {
    Integrability out;
    if (n == 0) {
        out.status = Integrability::Status::integrable;
        out.detail = "n = 0";
        return out;
    }
    const Embedding e(model, n);
    const Matrix& a = e.matrix();
    switch (model.f.kind()) {
        case GrowthFunction::Kind::none:
            return quadratic_threshold(model, a, "R^n");
        case GrowthFunction::Kind::custom:
            out.detail = "custom growth function";
            return out;
        case GrowthFunction::Kind::power:
        case GrowthFunction::Kind::log_power:
            break;
    }
    // Off ker(p A) the super-quadratic growth term dominates alpha q^2.
    Matrix z;
    switch (model.p.kind()) {
        case Seminorm::Kind::lattice_power:
            z = kernel_basis(a);
            break;
        case Seminorm::Kind::matrix:
            z = model.p.scale() == 0.0 ? Matrix(Matrix::Identity(n, n)) : kernel_basis(model.p.matrix() * a);
            break;
        case Seminorm::Kind::custom:
            out.detail = "custom seminorm p";
            return out;
    }
    if (z.cols() == 0) {
        out.status = Integrability::Status::integrable;
        out.detail = "p is definite on the embedded range";
        return out;
    }
    return quadratic_threshold(model, a * z, "ker p");
}

std::vector<Eigen::Index> doubling_schedule(Eigen::Index n) {
    std::vector<Eigen::Index> s;
    for (Eigen::Index k = 1; k < n; k *= 2) s.push_back(k);
    if (n >= 1) s.push_back(n);
    if (s.empty()) s.push_back(0);
    return s;
}

ConvergenceReport convergence_run(const SpectralModel& model, std::uint64_t samples, std::uint64_t seed,
                                  const ConvergenceOptions& options) {
    ConvergenceReport rep;
    const ValidationReport val = validate_model(model, {seed, 0});
    for (const auto& c : val.checks) {
        if (!c.passed && c.severity == ValidationCheck::Severity::error) {
            rep.annotations.push_back("validation failed: " + c.name + ": " + c.detail);
        }
    }
    const bool hypothesis = val.convergence_hypothesis();
    if (!hypothesis) {
        rep.annotations.push_back("log-weighted eigenvalue sum diverges for " + model.lambda.decay().describe() +
                                  "; convergence of the projected integrals is not guaranteed");
    }
    // Column scaling (the half cap) keeps the basis; only mixed columns matter here.
    const Matrix kk = model.K.leading_columns(model.dim());
    const Matrix gram = kk.transpose() * kk;
    const Matrix off = gram - Matrix(gram.diagonal().asDiagonal());
    if (off.norm() > 1e-10 * gram.norm()) {
        rep.annotations.push_back("K has non-orthogonal columns; the schedule need not follow the diagonalizing basis");
    }

    try {
        rep.certificate = certify(model, options.balancing);
    } catch (const IncompatibleKernels& e) {
        rep.certificate.C = std::numeric_limits<double>::infinity();
        rep.certificate.C_status = ConstantStatus::unbounded;
        rep.certificate.global_bound = std::numeric_limits<double>::infinity();
        rep.annotations.push_back(e.what());
    }
    const double bound = rep.certificate.global_bound;

    const auto schedule = options.schedule.empty() ? doubling_schedule(model.dim()) : options.schedule;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] < 0 || schedule[i] > model.dim() || (i > 0 && schedule[i] <= schedule[i - 1])) {
            throw std::invalid_argument("schedule must be strictly increasing within [0, N]");
        }
    }

    bool violated = false;
    for (const Eigen::Index n : schedule) {
        const EstimateRecord rec = integrate_projected(model, n, samples, seed, options.estimator);
        const bool ok = !(rec.mean > bound + 3.0 * rec.stderr_);
        violated = violated || !ok;
        if (rec.overflowed()) {
            rep.divergence_flagged = true;
            rep.annotations.push_back("n = " + std::to_string(n) + ": " + std::to_string(rec.overflow_count) +
                                      " samples overflowed the exponent limit");
        }
        const Integrability integ = integrability_check(model, n);
        if (integ.status == Integrability::Status::divergent) {
            rep.divergence_flagged = true;
            rep.annotations.push_back("n = " + std::to_string(n) + ": not integrable, " + integ.detail);
        }
        rep.records.push_back(rec);
        rep.within_bound.push_back(ok);
    }

    for (std::size_t i = 0; i + 1 < rep.records.size(); ++i) {
        const auto& a = rep.records[i];
        const auto& b = rep.records[i + 1];
        if (std::abs(a.mean - b.mean) <= std::max(options.atol, 2.0 * (a.stderr_ + b.stderr_))) {
            rep.plateau = Plateau{a.n, b.mean, Plateau::Kind::pairwise};
            break;
        }
    }
    const bool finite = model.lambda.decay().kind == DecayFamily::Kind::none;
    if (!rep.plateau && finite && !rep.records.empty() && rep.records.back().n == model.dim()) {
        rep.plateau = Plateau{model.dim(), rep.records.back().mean, Plateau::Kind::full_truncation};
    }

    if (violated) {
        rep.verdict = Verdict::bound_violated;
    } else if (rep.divergence_flagged || !hypothesis || !val.ok() || !rep.plateau) {
        rep.verdict = Verdict::budget_exhausted;
    } else {
        rep.verdict = Verdict::converged;
    }
    return rep;
}

}  // namespace supergauss
