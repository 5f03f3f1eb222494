// SPDX-License-Identifier: Apache-2.0
#include "supergauss/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace supergauss {
namespace {

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

std::string vec_str(const Vector& v) {
    std::ostringstream os;
    os << '(';
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ')';
    return os.str();
}

}  // namespace

Seminorm Seminorm::matrix(Matrix a, double scale) {
    if (!(scale >= 0.0)) throw std::invalid_argument("seminorm scale must be >= 0");
    Seminorm p;
    p.kind_ = Kind::matrix;
    p.dim_ = a.cols();
    p.scale_ = scale;
    p.lipschitz_ = scale * spectral_norm(a);
    p.a_ = std::move(a);
    p.name_ = "matrix";
    return p;
}

Seminorm Seminorm::lattice_power(double s, double dx, Eigen::Index sites, double scale) {
    if (!(s >= 1.0)) throw std::invalid_argument("lattice_power requires s >= 1 (got " + std::to_string(s) + ")");
    if (!(dx > 0.0)) throw std::invalid_argument("lattice_power requires dx > 0");
    if (sites < 1) throw std::invalid_argument("lattice_power requires at least one site");
    if (!(scale > 0.0)) throw std::invalid_argument("lattice_power requires scale > 0");
    Seminorm p;
    p.kind_ = Kind::lattice_power;
    p.dim_ = sites;
    p.scale_ = scale;
    p.s_ = s;
    p.dx_ = dx;
    // ||v||_s <= ||v||_2 for s >= 2, and <= d^(1/s - 1/2) ||v||_2 otherwise.
    const double norm_ratio = s >= 2.0 ? 1.0 : std::pow(static_cast<double>(sites), 1.0 / s - 0.5);
    p.lipschitz_ = scale * std::pow(dx, 1.0 / s) * norm_ratio;
    p.name_ = "lattice_power";
    return p;
}

Seminorm Seminorm::custom(Evaluator eval, Eigen::Index dim, double lipschitz, std::string name) {
    if (!eval) throw std::invalid_argument("custom seminorm needs an evaluator");
    Seminorm p;
    p.kind_ = Kind::custom;
    p.dim_ = dim;
    p.eval_ = std::move(eval);
    p.lipschitz_ = lipschitz;
    p.name_ = std::move(name);
    return p;
}

double Seminorm::operator()(const Vector& v) const {
    require_dim(v.size(), dim_, "seminorm argument");
    switch (kind_) {
        case Kind::matrix:
            return scale_ * (a_ * v).norm();
        case Kind::lattice_power: {
            if (s_ == 2.0) return scale_ * std::sqrt(dx_ * v.squaredNorm());
            double acc = 0.0;
            if (s_ == 4.0) {
                for (Eigen::Index i = 0; i < v.size(); ++i) {
                    const double sq = v[i] * v[i];
                    acc += sq * sq;
                }
                return scale_ * std::sqrt(std::sqrt(dx_ * acc));
            }
            for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]), s_);
            return scale_ * std::pow(dx_ * acc, 1.0 / s_);
        }
        case Kind::custom:
            return scale_ * eval_(v);
    }
    return 0.0;
}

bool Seminorm::is_quadratic() const noexcept {
    return kind_ == Kind::matrix || (kind_ == Kind::lattice_power && s_ == 2.0);
}

Matrix Seminorm::gram() const {
    if (kind_ == Kind::matrix) return scale_ * scale_ * (a_.transpose() * a_);
    if (kind_ == Kind::lattice_power && s_ == 2.0) {
        return Matrix::Identity(dim_, dim_) * (scale_ * scale_ * dx_);
    }
    throw std::logic_error("gram(): seminorm '" + name_ + "' is not quadratic");
}

Seminorm Seminorm::scaled(double factor) const {
    if (!(factor >= 0.0)) throw std::invalid_argument("seminorm scale factor must be >= 0");
    Seminorm p = *this;
    p.scale_ *= factor;
    p.lipschitz_ *= factor;
    return p;
}

std::string Seminorm::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::matrix:
            os << "matrix(" << a_.rows() << "x" << a_.cols() << ")";
            break;
        case Kind::lattice_power:
            os << "lattice_power(s=" << s_ << ", dx=" << dx_ << ", sites=" << dim_ << ")";
            break;
        case Kind::custom:
            os << "custom(" << name_ << ")";
            break;
    }
    if (scale_ != 1.0) os << "*" << scale_;
    return os.str();
}

GrowthFunction GrowthFunction::none() {
    GrowthFunction f;
    f.kind_ = Kind::none;
    f.name_ = "none";
    return f;
}

GrowthFunction GrowthFunction::power(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("power growth requires eps > 0");
    GrowthFunction f;
    f.kind_ = Kind::power;
    f.param_ = eps;
    f.name_ = "power";
    return f;
}

GrowthFunction GrowthFunction::log_power(double a) {
    if (!(a >= std::numbers::e)) throw std::invalid_argument("log_power requires a >= e");
    GrowthFunction f;
    f.kind_ = Kind::log_power;
    f.param_ = a;
    f.name_ = "log_power";
    return f;
}

GrowthFunction GrowthFunction::custom(Evaluator eval, std::string name) {
    if (!eval) throw std::invalid_argument("custom growth function needs an evaluator");
    GrowthFunction f;
    f.kind_ = Kind::custom;
    f.eval_ = std::move(eval);
    f.name_ = std::move(name);
    return f;
}

double GrowthFunction::operator()(double x) const {
    switch (kind_) {
        case Kind::none:
            return 0.0;
        case Kind::power:
            if (param_ == 2.0) {
                const double sq = x * x;
                return sq * sq;
            }
            return std::pow(x, 2.0 + param_);
        case Kind::log_power:
            return x * x * std::log(param_ + x);
        case Kind::custom:
            return eval_(x);
    }
    return 0.0;
}

std::string GrowthFunction::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::none: os << "none"; break;
        case Kind::power: os << "x^" << 2.0 + param_; break;
        case Kind::log_power: os << "x^2*ln(" << param_ << "+x)"; break;
        case Kind::custom: os << "custom(" << name_ << ")"; break;
    }
    return os.str();
}

PropertyReport check_seminorm_axioms(const Seminorm& p, int probes, StreamKey key) {
    PropertyReport report{"seminorm axioms", true, "", {}};
    const Eigen::Index d = p.dim();
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)) + 1e-12; };

    const double at_zero = p(Vector::Zero(d));
    if (!close(at_zero, 0.0)) {
        report.passed = false;
        report.detail = "p(0) = " + std::to_string(at_zero);
        return report;
    }

    NormalStream rng(key);
    const double fixed_t[] = {2.0, -1.0, 0.5, -3.7};
    Vector v(d), w(d);
    for (int i = 0; i < probes; ++i) {
        rng.fill(v);
        rng.fill(w);
        const double t = i < 4 ? fixed_t[i] : 4.0 * (rng.uniform() - 0.5) * std::exp2(static_cast<int>(8 * rng.uniform()) - 4);
        const double pv = p(v);
        const double ptv = p(t * v);
        if (!(pv >= 0.0) || !close(ptv, std::abs(t) * pv)) {
            report.passed = false;
            report.detail = "homogeneity fails: p(t v) = " + std::to_string(ptv) + " but |t| p(v) = " +
                            std::to_string(std::abs(t) * pv) + " at t = " + std::to_string(t) + ", v = " + vec_str(v);
            report.witness = {t};
            return report;
        }
        const double lhs = p(v + w);
        const double rhs = pv + p(w);
        if (lhs > rhs * (1.0 + 1e-9) + 1e-12) {
            report.passed = false;
            report.detail = "triangle inequality fails: p(v+w) = " + std::to_string(lhs) +
                            " > p(v)+p(w) = " + std::to_string(rhs);
            report.witness.assign(v.data(), v.data() + d);
            report.witness.insert(report.witness.end(), w.data(), w.data() + d);
            return report;
        }
    }
    report.detail = std::to_string(probes) + " probes";
    return report;
}

std::vector<double> default_growth_grid() {
    std::vector<double> grid{0.0};
    for (int k = -6; k <= 4; ++k) grid.push_back(std::exp2(k));
    grid.push_back(3.0);
    grid.push_back(5.0);
    std::sort(grid.begin(), grid.end());
    return grid;
}

PropertyReport check_submultiplicative(const GrowthFunction& f, const std::vector<double>& grid) {
    PropertyReport report{"submultiplicativity", true, "", {}};
    auto violates = [&](double x, double y) {
        const double lhs = f(x * y);
        const double rhs = f(x) * f(y);
        if (std::isnan(lhs) || std::isnan(rhs)) return true;
        return lhs > rhs * (1.0 + 1e-9);
    };
    auto fail = [&](double x, double y) {
        report.passed = false;
        report.witness = {x, y};
        std::ostringstream os;
        os << "f(" << x * y << ") = " << f(x * y) << " > f(" << x << ") f(" << y << ") = " << f(x) * f(y);
        report.detail = os.str();
    };
    for (double x : grid) {
        if (violates(x, x)) {
            fail(x, x);
            return report;
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (i != j && violates(grid[i], grid[j])) {
                fail(grid[i], grid[j]);
                return report;
            }
        }
    }
    report.detail = std::to_string(grid.size() * grid.size()) + " pairs";
    return report;
}

PropertyReport check_superquadratic(const GrowthFunction& f) {
    PropertyReport report{"super-quadratic gap", true, "", {}};
    constexpr int kMax = 40;
    std::vector<double> ratio(kMax + 1, 0.0);
    for (int k = 1; k <= kMax; ++k) {
        const double x = std::exp2(-k);
        const double fx = f(x);
        if (!(fx > 0.0)) {
            report.passed = false;
            report.witness = {x};
            report.detail = "f(2^-" + std::to_string(k) + ") = " + std::to_string(fx) + " is not positive";
            return report;
        }
        ratio[k] = fx / (x * x);
    }
    const double last = ratio[kMax];
    bool geometric = true;
    for (int k = kMax - 9; k < kMax; ++k) {
        if (ratio[k + 1] > ratio[k] * (1.0 - 1e-3)) {
            geometric = false;
            break;
        }
    }
    std::ostringstream os;
    os << "f(x)/x^2 at 2^-40 = " << last;
    if (last <= 1e-6 || geometric) {
        os << (last <= 1e-6 ? " (below 1e-6)" : " (geometric decay)");
        report.detail = os.str();
        return report;
    }
    report.passed = false;
    report.witness = {std::exp2(-kMax), last};
    os << " does not tend to 0";
    report.detail = os.str();
    return report;
}

Matrix kernel_basis(const Matrix& a) {
    const Eigen::Index cols = a.cols();
    if (a.rows() == 0) return Matrix::Identity(cols, cols);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    const double cutoff = s.size() ? 1e-10 * s(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) ++rank;
    }
    return svd.matrixV().rightCols(cols - rank);
}

KernelCompatibility kernel_compatibility(const Seminorm& p, const Seminorm& q) {
    require_dim(q.dim(), p.dim(), "kernel_compatibility: q domain");
    KernelCompatibility out;
    switch (p.kind()) {
        case Seminorm::Kind::lattice_power:
            out.status = KernelCompatibility::Status::compatible;
            out.detail = "p has trivial kernel";
            return out;
        case Seminorm::Kind::custom:
            out.status = KernelCompatibility::Status::undecidable;
            out.detail = "kernel of a custom seminorm is not computable";
            return out;
        case Seminorm::Kind::matrix:
            break;
    }
    if (p.scale() == 0.0) {
        // p == 0: the kernel is the whole space.
        Matrix basis = Matrix::Identity(p.dim(), p.dim());
        for (Eigen::Index c = 0; c < basis.cols(); ++c) {
            if (q(basis.col(c)) > 1e-8) {
                out.status = KernelCompatibility::Status::incompatible;
                out.witness = basis.col(c);
                out.detail = "p vanishes identically but q does not";
                return out;
            }
        }
        out.status = KernelCompatibility::Status::compatible;
        return out;
    }
    const Matrix basis = kernel_basis(p.matrix());
    // q vanishing on a basis of ker p vanishes on all of ker p (triangle inequality).
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
        Vector b = basis.col(c);
        Eigen::Index lead = 0;
        b.cwiseAbs().maxCoeff(&lead);
        if (b(lead) < 0) b = -b;
        const double qb = q(b);
        if (qb > 1e-8) {
            out.status = KernelCompatibility::Status::incompatible;
            out.witness = b;
            out.detail = "q(" + vec_str(b) + ") = " + std::to_string(qb) + " on ker p";
            return out;
        }
    }
    out.status = KernelCompatibility::Status::compatible;
    out.detail = "dim ker p = " + std::to_string(basis.cols());
    return out;
}

const char* to_string(KernelCompatibility::Status s) noexcept {
    switch (s) {
        case KernelCompatibility::Status::compatible: return "compatible";
        case KernelCompatibility::Status::incompatible: return "incompatible";
        case KernelCompatibility::Status::undecidable: return "undecidable";
    }
    return "?";
}

}  // namespace supergauss
