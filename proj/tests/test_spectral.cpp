// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "supergauss/running_stats.hpp"
#include "supergauss/spectral.hpp"

using namespace supergauss;

namespace {

SpectralModel simple(std::vector<double> lam, DecayFamily decay = DecayFamily::none()) {
    SpectralModel m;
    const auto n = static_cast<Eigen::Index>(lam.size());
    m.lambda = EigenSequence(std::move(lam), decay);
    m.K = CompactMap::identity(n);
    m.p = Seminorm::l2(n);
    m.q = Seminorm::l2(n);
    m.f = GrowthFunction::power(2.0);
    m.alpha = 1.0;
    return m;
}

}  // namespace

TEST_CASE("validation flags unsorted eigenvalues") {
    const auto r = validate_model(simple({0.3, 0.7}));
    CHECK_FALSE(r.passed("descending order"));
    CHECK_FALSE(r.ok());
}

TEST_CASE("well-formed model passes every check") {
    const auto r = validate_model(simple({0.5, 0.25}, DecayFamily::power(1, 1)));
    for (const auto& c : r.checks) {
        CAPTURE(c.name);
        CAPTURE(c.detail);
        CHECK(c.passed);
    }
    CHECK(r.ok());
    CHECK(r.convergence_hypothesis());
}

TEST_CASE("slow power decay fails log-weighted summability") {
    const auto r = validate_model(simple({0.5}, DecayFamily::power(1, 0.4)));
    CHECK_FALSE(r.passed("log-weighted summability"));
    CHECK_FALSE(r.convergence_hypothesis());
    // A warning, not a structural failure.
    CHECK(r.ok());
}

TEST_CASE("validation hard failures") {
    auto m = simple({0.5, 0.25});
    m.p = Seminorm::l2(3);
    CHECK_THROWS_AS((void)validate_model(m), DimensionError);
    auto a = simple({0.5});
    a.alpha = 0.0;
    CHECK_THROWS_AS((void)validate_model(a), std::invalid_argument);
}

TEST_CASE("validation reports incompatible kernels") {
    auto m = simple({0.5, 0.25});
    Matrix ap(1, 2), aq(1, 2);
    ap << 1, 0;
    aq << 1, 1;
    m.p = Seminorm::matrix(ap);
    m.q = Seminorm::matrix(aq);
    const auto r = validate_model(m);
    CHECK_FALSE(r.passed("kernel compatibility"));
    CHECK_FALSE(r.ok());
}

TEST_CASE("half cap rescaling") {
    auto [l, k] = rescale_half_cap(EigenSequence({0.9, 0.3}), CompactMap::identity(2));
    CHECK(l.lambda(1) == doctest::Approx(0.7));
    CHECK(l.lambda(2) == doctest::Approx(0.3));
    const Matrix kd = k.leading_columns(2);
    CHECK(kd(0, 0) == doctest::Approx(9.0 / 7.0));
    CHECK(kd(1, 1) == doctest::Approx(1.0));
    CHECK(kd(0, 1) == 0.0);

    auto [l2, k2] = rescale_half_cap(EigenSequence({0.5}), CompactMap::identity(1));
    CHECK(l2.values() == std::vector<double>{0.5});
    CHECK(k2.leading_columns(1)(0, 0) == 1.0);

    Matrix m(2, 2);
    m << 1, 2, 3, 4;
    auto [l3, k3] = rescale_half_cap(EigenSequence({0.7, 0.7}), CompactMap::dense(m));
    CHECK(l3.values() == std::vector<double>{0.7, 0.7});
    CHECK((k3.leading_columns(2) - m).norm() == 0.0);
}

TEST_CASE("capping preserves the embedded point and shrinks the sums") {
    for (auto mode : {CapMode::per_coordinate, CapMode::uniform}) {
        auto m = simple({2.0, 1.1, 0.8, 0.3}, DecayFamily::power(0.3, 1.0));
        Matrix a(3, 4);
        a << 1, 2, 0, -1, 0.5, 0, 3, 1, 0, 1, 1, 1;
        m.K = CompactMap::dense(a);
        m.p = m.q = Seminorm::l2(3);
        SpectralModel c = m;
        std::tie(c.lambda, c.K) = rescale_half_cap(m.lambda, m.K, mode);
        for (double v : c.lambda.values()) CHECK(v * v <= 0.49 + 1e-15);
        for (std::uint64_t s = 0; s < 50; ++s) {
            const Vector x = sample_standard(4, {5, s});
            const Vector a0 = embed(m, x), a1 = embed(c, x);
            CHECK((a0 - a1).norm() <= 1e-12 * a0.norm());
        }
        CHECK(hs_sum(c.lambda) <= hs_sum(m.lambda));
        CHECK(log_weighted_sum(c.lambda) <= log_weighted_sum(m.lambda));
    }
}

TEST_CASE("series sums") {
    CHECK(hs_sum(EigenSequence({0.5, 0.5})) == doctest::Approx(0.5));
    CHECK(hs_sum(EigenSequence()) == 0.0);
    CHECK(hs_sum(EigenSequence({1.0, 0.5})) == doctest::Approx(1.25));
    CHECK(log_weighted_sum(EigenSequence({1.0, 0.5})) == doctest::Approx(0.96780).epsilon(1e-5));
    CHECK(log_weighted_sum(EigenSequence({1.0, 0.5})) == doctest::Approx(std::log(2.0) + 0.25 * std::log(3.0)));
    CHECK(log_weighted_sum(EigenSequence()) == 0.0);
    CHECK(log_weighted_sum(EigenSequence({0.5})) == doctest::Approx(0.17329).epsilon(1e-5));

    CHECK(log_weighted_series(EigenSequence({0.5}, DecayFamily::power(1, 0.4))).divergent);
    CHECK(hs_series(EigenSequence({0.5}, DecayFamily::power(1, 0.5))).divergent);
    CHECK_FALSE(hs_series(EigenSequence({0.5}, DecayFamily::power(1, 0.6))).divergent);
}

TEST_CASE("declared tails bound the true remainder") {
    using boost::math::quadrature::exp_sinh;
    for (double gamma : {0.6, 1.0, 2.0}) {
        const std::size_t n = 20;
        const auto seq = EigenSequence::power(1.0, gamma, n);
        const auto hs = hs_series(seq);
        const auto lw = log_weighted_series(seq);
        double hs_true = 0, lw_true = 0;
        for (std::size_t k = n + 1; k < 4000000; ++k) {
            const double l2 = std::pow(static_cast<double>(k), -2 * gamma);
            hs_true += l2;
            lw_true += l2 * std::log(static_cast<double>(k) + 1);
        }
        // Remaining sum past 4e6 by the integral test.
        exp_sinh<double> es;
        const double a = 2 * gamma;
        hs_true += std::pow(4e6, 1 - a) / (a - 1);
        lw_true += es.integrate([a](double x) { return std::pow(x, -a) * std::log(x + 1); }, 4e6 - 1,
                                std::numeric_limits<double>::infinity());
        CAPTURE(gamma);
        CHECK(hs.tail >= hs_true * (1 - 1e-9));
        CHECK(lw.tail >= lw_true * (1 - 1e-9));
        CHECK(hs.tail <= 1.5 * hs_true);
        CHECK(lw.tail <= 1.5 * lw_true);
    }
    const auto ex = EigenSequence::exponential(1.0, 0.3, 5);
    double hs_true = 0, lw_true = 0;
    for (int k = 6; k < 2000; ++k) {
        const double l2 = std::exp(-0.6 * k);
        hs_true += l2;
        lw_true += l2 * std::log(k + 1.0);
    }
    CHECK(hs_series(ex).tail == doctest::Approx(hs_true).epsilon(1e-12));
    CHECK(log_weighted_series(ex).tail >= lw_true);
    CHECK(log_weighted_series(ex).tail <= 1.2 * lw_true);
}

TEST_CASE("embedding") {
    auto m = simple({0.7});
    CHECK(embed(m, Vector::Constant(1, 2.0))(0) == doctest::Approx(1.4));
    auto m2 = simple({0.5, 0.25});
    Matrix k(2, 2);
    k << 1, 1, 0, 1;
    m2.K = CompactMap::dense(k);
    Vector x(2);
    x << 1, 2;
    const Vector v = embed(m2, x);
    CHECK(v(0) == doctest::Approx(1.0));
    CHECK(v(1) == doctest::Approx(0.5));
    CHECK(embed(m2, Vector::Zero(2)).norm() == 0.0);
    // Shorter inputs use the leading coordinates.
    CHECK(embed(m2, Vector::Ones(1))(0) == doctest::Approx(0.5));
    CHECK_THROWS_AS((void)embed(m2, Vector::Ones(3)), DimensionError);

    for (std::uint64_t s = 0; s < 30; ++s) {
        const Vector a = sample_standard(2, {8, s}), b = sample_standard(2, {9, s});
        const Vector sum = embed(m2, a + b);
        CHECK((sum - embed(m2, a) - embed(m2, b)).norm() <= 1e-12 * (1 + sum.norm()));
    }
}

TEST_CASE("compact maps") {
    for (Eigen::Index n : {2, 5, 8}) {
        const auto f = CompactMap::fourier(n);
        const Matrix m = f.leading_columns(n);
        CHECK((m.transpose() * m - Matrix::Identity(n, n)).norm() < 1e-12);
        CHECK(f.orthogonal());
        CHECK(f.apply(Vector::Zero(n)).norm() == 0.0);
    }
    Matrix a(2, 3);
    a << 1, -2, 0.5, 3, 1, 1;
    const auto k = CompactMap::dense(a);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Vector x = sample_standard(3, {4, s});
        CHECK(k.apply(x).norm() <= k.op_norm() * x.norm() * (1 + 1e-12));
    }
}

TEST_CASE("standard samples") {
    CHECK(sample_standard(0, {1, 1}).size() == 0);
    const Vector a = sample_standard(16, {1, 2});
    CHECK((a.array() == sample_standard(16, {1, 2}).array()).all());

    RunningStats mean_a, mean_b, var;
    const std::size_t m = 1000000;
    NormalStream s1({77, 0}), s2({77, 1});
    for (std::size_t i = 0; i < m; ++i) {
        const double x = s1.next(), y = s2.next();
        mean_a.push(x);
        mean_b.push(y);
        var.push(x);
    }
    CHECK(std::abs(mean_a.mean()) < 4e-3);
    CHECK(std::abs(mean_b.mean()) < 4e-3);
    CHECK(std::abs(var.variance() - 1.0) < 5e-3);
}

TEST_CASE("zero eigenvalues are dropped") {
    auto m = simple({0.5, 0.0, 0.0});
    const auto d = drop_zero_eigenvalues(m);
    CHECK(d.dim() == 1);
    CHECK(d.K.in_dim() == 1);
    CHECK_FALSE(validate_model(m).passed("no zero eigenvalues"));
}
