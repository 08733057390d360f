// SPDX-License-Identifier: Apache-2.0
#ifndef PASSLAB_ANALYSIS_HPP
#define PASSLAB_ANALYSIS_HPP

#include <cstdint>
#include <functional>
#include <span>

#include "passlab/core.hpp"
#include "passlab/geometry.hpp"

namespace passlab {

// Single-user outage study: the user's y is drawn uniformly over the region
// depth at a fixed x, a link is line-of-sight with probability
// exp(-density * distance), and outage is declared when the link is blocked or
// the received SNR falls below the rate floor.
struct OutageSpec {
    double rate_floor = 0;        // bits/s/Hz
    double blockage_density = 0;  // per metre
    double power_watt = 0;
    double noise_watt = 0;
    double eta = 0;               // free-space gain numerator, metres

    void validate() const;
    double snr_threshold() const;     // 2^rate_floor - 1
    double critical_distance() const; // largest distance that still meets the floor
};

// Distance to the serving element as a function of the drawn user y.
using DistanceFn = std::function<double(double)>;

// Element slides along its waveguide to the user's x, so only the cross-plane
// offset remains; minimum over waveguides.
DistanceFn pass_distance(const SystemGeometry& g);

// Frozen element positions at a fixed user x.
DistanceFn fixed_layout_distance(const SystemGeometry& g, const PaLayout& layout, double user_x);

// One antenna at the region centre at mount height.
DistanceFn conventional_distance(const SystemGeometry& g, double user_x);

struct OutageEstimate {
    double p_hat = 0;
    double ci_halfwidth = 0;  // normal-approximation 95% interval
    std::size_t trials = 0;
    std::size_t events = 0;
};

OutageEstimate outage_monte_carlo(const OutageSpec& spec, const SystemGeometry& g,
                                  const DistanceFn& dist, std::size_t trials, std::uint64_t seed);

double integrate_adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol = 1e-8);

// Blockage-limited regime: 1 - (1/y_max) * int exp(-density * d(y)) dy.
double outage_high_snr(const OutageSpec& spec, const SystemGeometry& g, const DistanceFn& dist,
                       double tol = 1e-8);

// Finite-power regime: the integrand additionally requires d(y) to stay within
// the critical distance.
double outage_full(const OutageSpec& spec, const SystemGeometry& g, const DistanceFn& dist,
                   double tol = 1e-8);

// Power at which the critical distance equals the largest d(y) in the region;
// above it the SNR condition never trips.
double threshold_critical_power(const OutageSpec& spec, const SystemGeometry& g,
                                const DistanceFn& dist);

// True when curve a sits at or below curve b pointwise (tol slack) and
// strictly below somewhere.
bool outage_dominates(std::span<const double> a, std::span<const double> b, double tol);

}  // namespace passlab

#endif
