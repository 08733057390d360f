// SPDX-License-Identifier: Apache-2.0
#include "passlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "passlab/rng.hpp"

namespace passlab {

void OutageSpec::validate() const {
    if (!(rate_floor > 0)) throw ConfigError("outage: rate_floor must be > 0");
    if (blockage_density < 0) throw ConfigError("outage: blockage_density must be >= 0");
    if (!(power_watt > 0)) throw ConfigError("outage: power_watt must be > 0");
    if (!(noise_watt > 0)) throw ConfigError("outage: noise_watt must be > 0");
    if (!(eta > 0)) throw ConfigError("outage: eta must be > 0");
}

double OutageSpec::snr_threshold() const { return std::exp2(rate_floor) - 1.0; }

double OutageSpec::critical_distance() const {
    return eta * std::sqrt(power_watt / (snr_threshold() * noise_watt));
}

DistanceFn pass_distance(const SystemGeometry& g) {
    std::vector<double> wy(g.num_waveguides);
    for (int n = 0; n < g.num_waveguides; ++n) wy[n] = g.waveguide_y(n);
    const double h2 = g.mount_height * g.mount_height;
    return [wy = std::move(wy), h2](double y) {
        double best = std::numeric_limits<double>::infinity();
        for (double yn : wy) best = std::min(best, (y - yn) * (y - yn) + h2);
        return std::sqrt(best);
    };
}

DistanceFn fixed_layout_distance(const SystemGeometry& g, const PaLayout& layout, double user_x) {
    return [g, layout, user_x](double y) {
        return min_user_pa_distance(g, layout, Vec3{user_x, y, 0.0});
    };
}

DistanceFn conventional_distance(const SystemGeometry& g, double user_x) {
    const double cx = 0.5 * g.waveguide_length;
    const double cy = 0.5 * g.region_depth;
    const double h2 = g.mount_height * g.mount_height;
    const double dx2 = (user_x - cx) * (user_x - cx);
    return [cy, h2, dx2](double y) { return std::sqrt(dx2 + (y - cy) * (y - cy) + h2); };
}

OutageEstimate outage_monte_carlo(const OutageSpec& spec, const SystemGeometry& g,
                                  const DistanceFn& dist, std::size_t trials, std::uint64_t seed) {
    spec.validate();
    if (trials == 0) throw std::invalid_argument("outage_monte_carlo: trials must be > 0");
    const double tau1 = spec.critical_distance();
    Rng rng(seed);
    std::size_t events = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const double y = rng.uniform(0.0, g.region_depth);
        const double d = dist(y);
        const bool los = rng.bernoulli(std::exp(-spec.blockage_density * d));
        if (!los || d > tau1) ++events;
    }
    OutageEstimate est;
    est.trials = trials;
    est.events = events;
    est.p_hat = static_cast<double>(events) / static_cast<double>(trials);
    est.ci_halfwidth =
        1.96 * std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trials));
    return est;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    return adaptive(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, 50);
}

double outage_high_snr(const OutageSpec& spec, const SystemGeometry& g, const DistanceFn& dist,
                       double tol) {
    spec.validate();
    if (spec.blockage_density == 0.0) return 0.0;
    const double survive = integrate_adaptive_simpson(
        [&](double y) { return std::exp(-spec.blockage_density * dist(y)); }, 0.0, g.region_depth,
        tol);
    return 1.0 - survive / g.region_depth;
}

double outage_full(const OutageSpec& spec, const SystemGeometry& g, const DistanceFn& dist,
                   double tol) {
    spec.validate();
    const double tau1 = spec.critical_distance();
    // locate the sub-ranges of y where the distance stays within tau1, then
    // integrate the line-of-sight probability over just those
    const int grid = 2048;
    const double y_max = g.region_depth;
    std::vector<double> cuts{0.0};
    double prev_y = 0.0;
    double prev_s = tau1 - dist(0.0);
    for (int i = 1; i <= grid; ++i) {
        const double y = y_max * i / grid;
        const double s = tau1 - dist(y);
        if ((prev_s > 0) != (s > 0)) {
            double lo = prev_y, hi = y, slo = prev_s;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double sm = tau1 - dist(mid);
                if ((slo > 0) == (sm > 0)) {
                    lo = mid;
                    slo = sm;
                } else {
                    hi = mid;
                }
            }
            cuts.push_back(0.5 * (lo + hi));
        }
        prev_y = y;
        prev_s = s;
    }
    cuts.push_back(y_max);

    double survive = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        if (dist(mid) > tau1) continue;
        survive += integrate_adaptive_simpson(
            [&](double y) { return std::exp(-spec.blockage_density * dist(y)); }, cuts[i],
            cuts[i + 1], tol);
    }
    return 1.0 - survive / y_max;
}

double threshold_critical_power(const OutageSpec& spec, const SystemGeometry& g,
                                const DistanceFn& dist) {
    const int grid = 1 << 16;
    double dmax = 0.0;
    for (int i = 0; i <= grid; ++i) dmax = std::max(dmax, dist(g.region_depth * i / grid));
    const double ratio = dmax / spec.eta;
    return ratio * ratio * spec.snr_threshold() * spec.noise_watt;
}

bool outage_dominates(std::span<const double> a, std::span<const double> b, double tol) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("outage_dominates: curves must be equal-length and non-empty");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i] + tol) return false;
        if (a[i] < b[i] - tol) strict = true;
    }
    return strict;
}

}  // namespace passlab
