// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "supergauss/phi4.hpp"

using namespace supergauss;

TEST_CASE("two-site lattice spectrum and cap") {
    LatticeConfig cfg;
    cfg.sites = 2;
    const auto w2 = lattice_frequencies_squared(cfg);
    CHECK(w2[0] == doctest::Approx(1.0));
    CHECK(w2[1] == doctest::Approx(5.0));

    const auto m = build_phi4_model(cfg, 1.0);
    CHECK(m.lambda.lambda(1) == doctest::Approx(0.7));
    CHECK(m.lambda.lambda(2) == doctest::Approx(0.7 / std::sqrt(5.0)).epsilon(1e-12));
    CHECK(m.lambda.lambda(2) == doctest::Approx(0.31305).epsilon(1e-5));

    // K~ diag(lambda~) equals the raw Fourier synthesis times diag(1/omega).
    const Matrix embedded = Embedding(m, 2).matrix();
    const Matrix f = CompactMap::fourier(2).leading_columns(2);
    Matrix raw = f;
    raw.col(0) *= 1.0;
    raw.col(1) *= 1.0 / std::sqrt(5.0);
    CHECK((embedded - raw).norm() < 1e-14);
}

TEST_CASE("eight-site spectrum is sorted and capped") {
    const auto m = build_phi4_model(LatticeConfig{}, 0.5);
    CHECK(m.dim() == 8);
    CHECK(m.lambda.descending());
    for (double l : m.lambda.values()) CHECK(l * l <= 0.49 + 1e-15);
    CHECK(m.K.orthogonal() == false);  // the cap scales the orthogonal synthesis by 1/t
    const Matrix a = Embedding(m, 8).matrix();
    // A^T A = diag(1 / omega^2) for the sorted frequencies.
    const Matrix g = a.transpose() * a;
    CHECK((g - Matrix(g.diagonal().asDiagonal())).norm() < 1e-12);
    CHECK(g(0, 0) == doctest::Approx(1.0));
    CHECK(validate_model(m).ok());
}

TEST_CASE("interaction and counterterm seminorms") {
    LatticeConfig cfg;
    cfg.coupling = 2.0;
    cfg.spacing = 0.5;
    const auto m = build_phi4_model(cfg, 3.0);
    const Vector phi = Vector::LinSpaced(8, -1.0, 2.0);
    const double quartic = cfg.coupling * cfg.spacing * phi.array().pow(4).sum();
    CHECK(m.f(m.p(phi)) == doctest::Approx(quartic).epsilon(1e-12));
    const double q = m.q(phi);
    CHECK(m.alpha * q * q == doctest::Approx(3.0 * cfg.spacing * phi.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("free field matches the gaussian closed form") {
    LatticeConfig cfg;
    cfg.coupling = 0.0;
    const double alpha = 0.35;
    const auto m = build_phi4_model(cfg, alpha);
    const auto w2 = lattice_frequencies_squared(cfg);
    double exact = 1.0;
    for (double w : w2) exact /= std::sqrt(1.0 - 2.0 * alpha / w);
    CHECK(gaussian_closed_form(m, 8) == doctest::Approx(exact).epsilon(1e-12));
    const auto r = integrate_projected(m, 8, 200000, 4);
    CHECK(std::abs(r.mean - exact) <= 3 * r.stderr_);

    const auto above = build_phi4_model(cfg, 0.6);
    CHECK(integrability_check(above, 8).status == Integrability::Status::divergent);
    const auto rep = convergence_run(above, 5000, 1);
    CHECK(rep.divergence_flagged);
}

TEST_CASE("heavy mass concentrates the field at zero") {
    LatticeConfig cfg;
    cfg.mass = 1e4;
    const auto m = build_phi4_model(cfg, 5.0);
    for (double l : m.lambda.values()) CHECK(l < 1e-3);
    const auto r = integrate_projected(m, 8, 20000, 2);
    CHECK(r.mean == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("counterterm sweep is monotone in alpha on shared sample paths") {
    LatticeConfig cfg;
    cfg.alpha_grid = {0.25, 0.5, 1.0, 2.0};
    SweepOptions o;
    o.convergence.estimator.proposal = Proposal::standard;
    o.convergence.schedule = {8};
    const auto sweep = counterterm_sweep(cfg, 20000, 6, o);
    REQUIRE(sweep.size() == 4);
    for (std::size_t i = 0; i + 1 < sweep.size(); ++i) {
        CHECK(sweep[i].report.records.back().mean <= sweep[i + 1].report.records.back().mean);
    }
    for (const auto& e : sweep) {
        CHECK_FALSE(e.report.divergence_flagged);
        CHECK(e.report.verdict != Verdict::bound_violated);
    }
}

TEST_CASE("lattice config validation") {
    LatticeConfig bad;
    bad.sites = 1;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    LatticeConfig neg;
    neg.alpha_grid = {1.0, -2.0};
    CHECK_THROWS_AS(validate(neg), std::invalid_argument);
    CHECK_THROWS_AS((void)build_phi4_model(LatticeConfig{}, 0.0), std::invalid_argument);
}
