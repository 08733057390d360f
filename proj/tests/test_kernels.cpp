#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "passlab/kernels.hpp"
#include "passlab/rng.hpp"

using namespace passlab;

namespace {

struct Case {
    std::vector<double> x, mask;
    double ux, cross2, kappa, beta, amp;
};

Case random_case(Rng& rng, std::size_t n) {
    Case c;
    for (std::size_t i = 0; i < n; ++i) {
        c.x.push_back(rng.uniform(0.0, 30.0));
        c.mask.push_back(rng.bernoulli(0.8) ? 1.0 : 0.0);
    }
    c.ux = rng.uniform(0.0, 30.0);
    c.cross2 = rng.uniform(100.0, 130.0);
    c.kappa = 2.0 * 3.14159265358979 / 0.02;
    c.beta = c.kappa * 1.4;
    c.amp = rng.uniform(1e-4, 1e-2);
    return c;
}

}  // namespace

TEST_CASE("scalar channel sum matches a naive complex loop") {
    const auto& ops = kernels::scalar_ops();
    Rng rng(7);
    const Case c = random_case(rng, 16);
    double re = 0, im = 0;
    ops.waveguide_channel_sum(c.x.data(), c.mask.data(), c.x.size(), c.ux, c.cross2, c.kappa,
                              c.beta, c.amp, &re, &im);
    std::complex<double> ref = 0;
    for (std::size_t i = 0; i < c.x.size(); ++i) {
        const double d = std::sqrt((c.x[i] - c.ux) * (c.x[i] - c.ux) + c.cross2);
        ref += c.mask[i] * (c.amp / d) *
               std::exp(std::complex<double>(0, -(c.kappa * d + c.beta * c.x[i])));
    }
    CHECK(re == doctest::Approx(ref.real()).epsilon(1e-12));
    CHECK(im == doctest::Approx(ref.imag()).epsilon(1e-12));
}

TEST_CASE("avx2 kernels agree with scalar") {
    const kernels::Ops* vec = kernels::avx2_ops();
    if (vec == nullptr) return;  // hardware without AVX2
    const auto& ref = kernels::scalar_ops();
    Rng rng(11);
    for (std::size_t n : {1u, 3u, 4u, 7u, 16u, 33u, 128u}) {
        const Case c = random_case(rng, n);
        double re_s = 0, im_s = 0, re_v = 0, im_v = 0;
        ref.waveguide_channel_sum(c.x.data(), c.mask.data(), n, c.ux, c.cross2, c.kappa, c.beta,
                                  c.amp, &re_s, &im_s);
        vec->waveguide_channel_sum(c.x.data(), c.mask.data(), n, c.ux, c.cross2, c.kappa, c.beta,
                                   c.amp, &re_v, &im_v);
        // phases are large (kappa*d ~ 1e4), so compare against the magnitude scale
        const double scale = c.amp * n / std::sqrt(c.cross2);
        CHECK(std::abs(re_s - re_v) <= 1e-9 * scale);
        CHECK(std::abs(im_s - im_v) <= 1e-9 * scale);

        CHECK(ref.min_distance_sq(c.x.data(), n, c.ux, c.cross2) ==
              doctest::Approx(vec->min_distance_sq(c.x.data(), n, c.ux, c.cross2))
                  .epsilon(1e-14));

        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.uniform(-1.0, 1.0);
            b[i] = rng.uniform(-1.0, 1.0);
        }
        CHECK(ref.dot(a.data(), b.data(), n) ==
              doctest::Approx(vec->dot(a.data(), b.data(), n)).epsilon(1e-12));

        std::vector<double> ys = b, yv = b;
        ref.axpy(0.37, a.data(), ys.data(), n);
        vec->axpy(0.37, a.data(), yv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(ys[i] == doctest::Approx(yv[i]).epsilon(1e-13));
    }
}

TEST_CASE("vector trig stays accurate across the phase range") {
    const kernels::Ops* vec = kernels::avx2_ops();
    if (vec == nullptr) return;
    const auto& ref = kernels::scalar_ops();
    // single-element sums isolate sincos of kappa*d + beta*x
    for (double x : {0.0, 0.1, 1.0, 5.0, 12.3, 29.9}) {
        for (double cross2 : {100.0, 109.0, 125.0}) {
            const double mask = 1.0;
            double re_s, im_s, re_v, im_v;
            ref.waveguide_channel_sum(&x, &mask, 1, 15.0, cross2, 314.159, 440.0, 1.0, &re_s,
                                      &im_s);
            vec->waveguide_channel_sum(&x, &mask, 1, 15.0, cross2, 314.159, 440.0, 1.0, &re_v,
                                       &im_v);
            CHECK(std::abs(re_s - re_v) <= 1e-11);
            CHECK(std::abs(im_s - im_v) <= 1e-11);
        }
    }
}

TEST_CASE("dispatch honours the environment override") {
    const auto& act = kernels::active();
    CHECK((std::string(act.name) == "scalar" || std::string(act.name) == "avx2"));
}
