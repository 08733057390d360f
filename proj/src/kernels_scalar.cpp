// SPDX-License-Identifier: Apache-2.0
#include "passlab/kernels.hpp"

#include <cmath>
#include <limits>

namespace passlab::kernels {
namespace {

void waveguide_channel_sum_scalar(const double* pa_x, const double* mask, std::size_t n,
                                  double ux, double cross2, double kappa, double beta,
                                  double amp, double* re_out, double* im_out) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = pa_x[i] - ux;
        const double d = std::sqrt(dx * dx + cross2);
        const double theta = kappa * d + beta * pa_x[i];
        const double a = mask[i] * amp / d;
        re += a * std::cos(theta);
        im -= a * std::sin(theta);
    }
    *re_out = re;
    *im_out = im;
}

double min_distance_sq_scalar(const double* pa_x, std::size_t n, double ux, double cross2) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = pa_x[i] - ux;
        const double d2 = dx * dx + cross2;
        if (d2 < best) best = d2;
    }
    return best;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", waveguide_channel_sum_scalar, min_distance_sq_scalar,
                         dot_scalar, axpy_scalar};
    return ops;
}

}  // namespace passlab::kernels
