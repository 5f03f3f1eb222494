// SPDX-License-Identifier: Apache-2.0
#include "supergauss/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "supergauss/rng.hpp"

namespace supergauss {
namespace {

constexpr double kRayLimit = 0x1.0p40;

struct RayResult {
    double t = 0.0;
    double value = -std::numeric_limits<double>::infinity();
    bool unbounded = false;
    long evaluations = 0;
};

RayResult search_ray(const Objective& g, const Vector& dir, const std::vector<double>& radii) {
    RayResult r;
    auto h = [&](double t) {
        ++r.evaluations;
        const double v = g(t * dir);
        return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
    };
    std::vector<double> ts{0.0};
    ts.insert(ts.end(), radii.begin(), radii.end());
    std::vector<double> hs;
    for (double t : ts) hs.push_back(h(t));

    auto best = static_cast<std::size_t>(std::max_element(hs.begin(), hs.end()) - hs.begin());
    while (best + 1 == ts.size()) {
        const double next = 2.0 * ts.back();
        if (next > kRayLimit || hs.back() == std::numeric_limits<double>::infinity()) {
            r.unbounded = true;
            r.t = ts.back();
            r.value = std::numeric_limits<double>::infinity();
            return r;
        }
        ts.push_back(next);
        hs.push_back(h(next));
        if (hs.back() <= hs[best]) break;
        best = ts.size() - 1;
    }
    const double lo = best == 0 ? 0.0 : ts[best - 1];
    const double hi = best + 1 < ts.size() ? ts[best + 1] : ts[best];
    double t = ts[best];
    double val = hs[best];
    if (hi > lo) {
        const double cand = golden_section_max(h, lo, hi);
        const double cv = h(cand);
        if (cv >= val) {
            t = cand;
            val = cv;
        }
    }
    r.t = t;
    r.value = val;
    return r;
}

}  // namespace

double golden_section_max(const std::function<double(double)>& h, double lo, double hi, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double hc = h(c), hd = h(d);
    for (int it = 0; it < 200 && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (hc >= hd) {
            b = d;
            d = c;
            hd = hc;
            c = b - invphi * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + invphi * (b - a);
            hd = h(d);
        }
    }
    return hc >= hd ? c : d;
}

MaximizeResult nelder_mead_max(const Objective& g, const Vector& start, double step, int max_evaluations) {
    const Eigen::Index n = start.size();
    MaximizeResult out;
    out.argmax = start;
    if (n == 0) {
        out.value = g(start);
        out.evaluations = 1;
        return out;
    }
    const double dn = static_cast<double>(n);
    // Gao & Han adaptive coefficients.
    const double reflect = 1.0;
    const double expand = 1.0 + 2.0 / dn;
    const double contract = 0.75 - 1.0 / (2.0 * dn);
    const double shrink = 1.0 - 1.0 / dn;

    auto cost = [&](const Vector& x) {
        ++out.evaluations;
        const double v = g(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : -v;
    };

    std::vector<Vector> simplex(static_cast<std::size_t>(n + 1), start);
    std::vector<double> f(static_cast<std::size_t>(n + 1));
    for (Eigen::Index i = 0; i < n; ++i) simplex[static_cast<std::size_t>(i + 1)](i) += step;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) f[i] = cost(simplex[i]);

    std::vector<std::size_t> order(f.size());
    while (out.evaluations < max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];

        double size = 0.0;
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            size = std::max(size, (simplex[i] - simplex[best]).cwiseAbs().maxCoeff());
        }
        if (std::abs(f[worst] - f[best]) <= 1e-15 * (std::abs(f[best]) + 1e-300) && size <= 1e-10) break;
        if (size <= 1e-13 * (1.0 + simplex[best].cwiseAbs().maxCoeff())) break;

        Vector centroid = Vector::Zero(n);
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i != worst) centroid += simplex[i];
        }
        centroid /= dn;

        const Vector xr = centroid + reflect * (centroid - simplex[worst]);
        const double fr = cost(xr);
        if (fr < f[best]) {
            const Vector xe = centroid + expand * (xr - centroid);
            const double fe = cost(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                f[worst] = fe;
            } else {
                simplex[worst] = xr;
                f[worst] = fr;
            }
            continue;
        }
        if (fr < f[second]) {
            simplex[worst] = xr;
            f[worst] = fr;
            continue;
        }
        const bool outside = fr < f[worst];
        const Vector xc = outside ? Vector(centroid + contract * (xr - centroid))
                                  : Vector(centroid + contract * (simplex[worst] - centroid));
        const double fc = cost(xc);
        if (fc < (outside ? fr : f[worst])) {
            simplex[worst] = xc;
            f[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i == best) continue;
            simplex[i] = simplex[best] + shrink * (simplex[i] - simplex[best]);
            f[i] = cost(simplex[i]);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
    out.argmax = simplex[best];
    out.value = -f[best];
    return out;
}

MaximizeResult maximize(const Objective& g, Eigen::Index dim, const MaximizeOptions& options) {
    MaximizeResult result;
    result.argmax = Vector::Zero(dim);
    result.value = g(result.argmax);
    result.evaluations = 1;
    if (dim == 0) return result;

    std::vector<Vector> dirs;
    const Eigen::Index coord = std::min<Eigen::Index>(dim, options.max_coordinate_rays);
    for (Eigen::Index i = 0; i < coord; ++i) dirs.push_back(Vector::Unit(dim, i));
    NormalStream rng({options.seed, 0xD1EC});
    for (int i = 0; i < options.random_directions; ++i) {
        Vector d(dim);
        rng.fill(d);
        dirs.push_back(d / d.norm());
    }

    const auto nd = static_cast<std::ptrdiff_t>(dirs.size());
    std::vector<RayResult> rays(dirs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < nd; ++i) {
        rays[static_cast<std::size_t>(i)] = search_ray(g, dirs[static_cast<std::size_t>(i)], options.ray_radii);
    }

    for (std::size_t i = 0; i < rays.size(); ++i) {
        result.evaluations += rays[i].evaluations;
        if (rays[i].unbounded) {
            result.unbounded = true;
            result.value = std::numeric_limits<double>::infinity();
            result.argmax = rays[i].t * dirs[i];
            return result;
        }
    }

    std::vector<std::size_t> order(rays.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rays[a].value > rays[b].value; });
    if (rays[order.front()].value > result.value) {
        result.value = rays[order.front()].value;
        result.argmax = rays[order.front()].t * dirs[order.front()];
    }

    const auto refine = dim > options.max_refine_dim
                            ? std::ptrdiff_t{0}
                            : static_cast<std::ptrdiff_t>(std::min<std::size_t>(
                                  static_cast<std::size_t>(options.refine_starts), order.size()));
    std::vector<MaximizeResult> local(static_cast<std::size_t>(refine));
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < refine; ++i) {
        const std::size_t r = order[static_cast<std::size_t>(i)];
        const Vector start = rays[r].t * dirs[r];
        const double step = 0.1 * std::max(1.0, rays[r].t);
        local[static_cast<std::size_t>(i)] = nelder_mead_max(g, start, step, options.max_local_evaluations);
    }
    for (const auto& l : local) {
        result.evaluations += l.evaluations;
        if (l.value > result.value) {
            result.value = l.value;
            result.argmax = l.argmax;
        }
    }
    return result;
}

}  // namespace supergauss
