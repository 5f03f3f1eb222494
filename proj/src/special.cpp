// SPDX-License-Identifier: Apache-2.0
#include "supergauss/special.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace supergauss {

double erfc(double x) noexcept { return std::erfc(x); }

double zeta_minus_one(double s) {
    if (!(s > 1.0)) throw std::domain_error("zeta requires s > 1");
    // B_2k / (2k)! for k = 1..8.
    static constexpr double kBernoulliOverFactorial[] = {
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
    };
    constexpr int kDirect = 64;
    double sum = 0.0;
    for (int n = kDirect - 1; n >= 2; --n) sum += std::pow(static_cast<double>(n), -s);

    // sum_{n >= M} n^-s = M^(1-s)/(s-1) + M^-s/2 + sum_k B_2k/(2k)! (s)_(2k-1) M^(-s-2k+1) + R
    const double m = kDirect;
    const double m_pow = std::pow(m, -s);
    double tail = m * m_pow / (s - 1.0) + 0.5 * m_pow;
    double rising = s;            // s (s+1) ... (s + 2k - 2)
    double m_term = m_pow / m;    // M^(-s - 2k + 1)
    for (int k = 1; k <= 8; ++k) {
        tail += kBernoulliOverFactorial[k - 1] * rising * m_term;
        rising *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
        m_term /= m * m;
    }
    return sum + tail;
}

QuadratureRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite needs n >= 1");
    // Golub-Welsch eigenvalues for the starting nodes, then Newton polishing on
    // the orthonormal recurrence p_{k+1} = (x p_k - sqrt(k) p_{k-1}) / sqrt(k+1).
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);

    auto recurrence = [n](double x, double& pn, double& pn1, double& christoffel) {
        double prev = 0.0;
        double cur = 1.0;
        christoffel = 1.0;
        for (int k = 0; k < n; ++k) {
            const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) / std::sqrt(k + 1.0);
            prev = cur;
            cur = next;
            if (k + 1 < n) christoffel += cur * cur;
        }
        pn = cur;
        pn1 = prev;
    };

    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = eig.eigenvalues()(i);
        double pn = 0.0, pn1 = 0.0, ch = 0.0;
        for (int iter = 0; iter < 8; ++iter) {
            recurrence(x, pn, pn1, ch);
            const double dx = pn / (std::sqrt(static_cast<double>(n)) * pn1);
            x -= dx;
            if (std::abs(dx) <= 1e-15 * (1.0 + std::abs(x))) break;
        }
        recurrence(x, pn, pn1, ch);
        rule.nodes[static_cast<std::size_t>(i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = 1.0 / ch;
    }
    // Symmetrize: the rule is exactly symmetric about 0.
    for (int i = 0; i < n / 2; ++i) {
        const auto a = static_cast<std::size_t>(i);
        const auto b = static_cast<std::size_t>(n - 1 - i);
        const double x = 0.5 * (rule.nodes[b] - rule.nodes[a]);
        const double w = 0.5 * (rule.weights[a] + rule.weights[b]);
        rule.nodes[a] = -x;
        rule.nodes[b] = x;
        rule.weights[a] = rule.weights[b] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

}  // namespace supergauss
