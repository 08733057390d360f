// SPDX-License-Identifier: Apache-2.0
#ifndef PASSLAB_KERNELS_HPP
#define PASSLAB_KERNELS_HPP

#include <cstddef>

namespace passlab::kernels {

// Hot inner loops, provided as scalar reference implementations plus AVX2
// variants selected once at startup. The scalar versions are the semantic
// reference; the vector versions must agree within the tolerances checked by
// the equivalence tests. Selection honours PASSLAB_KERNELS=scalar|avx2.

struct Ops {
    const char* name;

    // Accumulates sum_i mask[i] * (amp / d_i) * exp(-j*(kappa*d_i + beta*x[i]))
    // with d_i = sqrt((x[i] - ux)^2 + cross2). Writes real and imaginary parts.
    void (*waveguide_channel_sum)(const double* pa_x, const double* mask, std::size_t n,
                                  double ux, double cross2, double kappa, double beta,
                                  double amp, double* re_out, double* im_out);

    // min_i (x[i] - ux)^2 + cross2
    double (*min_distance_sq)(const double* pa_x, std::size_t n, double ux, double cross2);

    double (*dot)(const double* a, const double* b, std::size_t n);

    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
};

const Ops& scalar_ops();

// Null when the binary or the CPU lacks AVX2+FMA.
const Ops* avx2_ops();

// Active implementation after dispatch.
const Ops& active();

}  // namespace passlab::kernels

#endif
