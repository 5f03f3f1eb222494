// SPDX-License-Identifier: Apache-2.0
// Wall-clock comparison of the chunked OpenMP kernels against their serial references.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "supergauss/estimator.hpp"
#include "supergauss/phi4.hpp"

namespace sg = supergauss;

namespace {

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel, double a, double b) {
    std::printf("%-28s serial %8.3f s  omp %8.3f s  speedup %5.2fx  |diff| %.3g\n", name, serial, parallel,
                serial / parallel, std::abs(a - b));
}

}  // namespace

int main(int argc, char** argv) {
    const std::uint64_t samples = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1000000;
    std::printf("samples %llu, threads %d\n", static_cast<unsigned long long>(samples), omp_get_max_threads());

    const auto phi4 = sg::build_phi4_model(sg::LatticeConfig{}, 2.0);
    sg::EstimateRecord s, p;
    double ts = seconds([&] { s = sg::integrate_projected_serial(phi4, 8, samples, 1); });
    double tp = seconds([&] { p = sg::integrate_projected(phi4, 8, samples, 1); });
    row("phi4 N=8 standard", ts, tp, s.mean, p.mean);

    sg::EstimatorOptions lap;
    lap.proposal = sg::Proposal::laplace;
    ts = seconds([&] { s = sg::integrate_projected_serial(phi4, 8, samples, 1, lap); });
    tp = seconds([&] { p = sg::integrate_projected(phi4, 8, samples, 1, lap); });
    row("phi4 N=8 laplace", ts, tp, s.mean, p.mean);

    const auto lambda = sg::EigenSequence::power(0.7, 1.0, 50);
    ts = seconds([&] { s = sg::tail_mass_mc_serial(lambda, 50, 2.0, samples, 1); });
    tp = seconds([&] { p = sg::tail_mass_mc(lambda, 50, 2.0, samples, 1); });
    row("tail mass n=50", ts, tp, s.mean, p.mean);
    return 0;
}
