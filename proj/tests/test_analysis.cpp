#include <doctest.h>

#include <cmath>

#include "passlab/analysis.hpp"
#include "passlab/channel.hpp"

using namespace passlab;

namespace {

SystemGeometry desk() {
    SystemGeometry g;
    g.num_waveguides = 4;
    g.pas_per_waveguide = 16;
    g.waveguide_length = 30.0;
    g.region_depth = 12.0;
    g.mount_height = 10.0;
    g.waveguide_spacing = 3.0;
    g.min_pa_spacing = 0.5;
    return g;
}

OutageSpec base_spec() {
    OutageSpec s;
    s.rate_floor = 1.0;
    s.blockage_density = 0.05;
    s.power_watt = 0.1;
    s.noise_watt = 1e-11;
    RadioConfig r;
    r.carrier_freq_hz = 15e9;
    r.lightspeed = 3e8;
    s.eta = r.eta();
    return s;
}

}  // namespace

TEST_CASE("adaptive quadrature nails smooth integrals") {
    const double a = integrate_adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(a == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    const double b =
        integrate_adaptive_simpson([](double x) { return std::sin(x); }, 0.0, 3.14159265358979);
    CHECK(b == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("constant-distance outage matches the exponential") {
    SystemGeometry g = desk();
    g.num_waveguides = 1;
    g.waveguide_spacing = 0;
    g.region_depth = 1e-6;  // the draw barely moves, distance pins to the height
    const OutageSpec spec = base_spec();
    const double out = outage_high_snr(spec, g, pass_distance(g));
    CHECK(out == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-9));

    OutageSpec clear = spec;
    clear.blockage_density = 0.0;
    CHECK(outage_high_snr(clear, g, pass_distance(g)) == 0.0);
}

TEST_CASE("monte carlo sits inside its own interval around the closed form") {
    const SystemGeometry g = desk();
    const DistanceFn d = pass_distance(g);
    OutageSpec spec = base_spec();
    for (double density : {0.01, 0.05, 0.1, 0.5}) {
        spec.blockage_density = density;
        const double closed = outage_full(spec, g, d);
        const auto mc = outage_monte_carlo(spec, g, d, 200000, 2000 + (int)(density * 1000));
        CHECK(std::abs(mc.p_hat - closed) <= mc.ci_halfwidth);
    }
    const auto r1 = outage_monte_carlo(spec, g, d, 1000, 5);
    const auto r2 = outage_monte_carlo(spec, g, d, 1000, 5);
    CHECK(r1.p_hat == r2.p_hat);
}

TEST_CASE("snr events appear only below the critical power") {
    const SystemGeometry g = desk();
    const DistanceFn d = pass_distance(g);
    OutageSpec spec = base_spec();
    const double p_crit = threshold_critical_power(spec, g, d);
    // largest distance in the region: deepest y against the outer waveguide row
    const double dmax = d(g.region_depth);
    CHECK(spec.eta * std::sqrt(p_crit / (spec.snr_threshold() * spec.noise_watt)) ==
          doctest::Approx(dmax).epsilon(1e-6));

    spec.power_watt = 0.25 * p_crit;  // critical distance halves, some y draws now fail
    const double full = outage_full(spec, g, d);
    const double high = outage_high_snr(spec, g, d);
    CHECK(full > high + 1e-6);

    spec.power_watt = 1000.0 * p_crit;
    CHECK(outage_full(spec, g, d) ==
          doctest::Approx(outage_high_snr(spec, g, d)).epsilon(1e-12));
}

TEST_CASE("sliding elements dominate the centre-mounted antenna") {
    const SystemGeometry g = desk();
    const DistanceFn pd = pass_distance(g);
    const DistanceFn cd = conventional_distance(g, 15.0);
    OutageSpec spec = base_spec();
    std::vector<double> pass_curve, conv_curve;
    for (double density : {0.01, 0.05, 0.1, 0.5}) {
        spec.blockage_density = density;
        pass_curve.push_back(outage_high_snr(spec, g, pd));
        conv_curve.push_back(outage_high_snr(spec, g, cd));
    }
    CHECK(outage_dominates(pass_curve, conv_curve, 1e-12));
    CHECK_FALSE(outage_dominates(conv_curve, pass_curve, 1e-12));
}

TEST_CASE("fixed layouts cannot beat the sliding bound") {
    const SystemGeometry g = desk();
    const PaLayout lay = PaLayout::uniform_grid(g);
    const DistanceFn fd = fixed_layout_distance(g, lay, 15.1);
    const DistanceFn pd = pass_distance(g);
    for (double y : {0.0, 2.7, 6.3, 11.9}) CHECK(fd(y) >= pd(y) - 1e-12);
}
