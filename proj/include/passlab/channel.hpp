// SPDX-License-Identifier: Apache-2.0
#ifndef PASSLAB_CHANNEL_HPP
#define PASSLAB_CHANNEL_HPP

#include <span>
#include <vector>

#include "passlab/core.hpp"
#include "passlab/geometry.hpp"
#include "passlab/rng.hpp"

namespace passlab {

struct RadioConfig {
    double carrier_freq_hz = 0;
    double lightspeed = 2.998e8;
    double n_eff = 1.4;          // effective refractive index inside the waveguide
    double freespace_gain = 0;   // eta; <= 0 selects wavelength/(4*pi)

    void validate() const;
    double wavelength() const { return lightspeed / carrier_freq_hz; }
    double guided_wavelength() const { return wavelength() / n_eff; }
    double kappa() const;  // free-space wavenumber 2*pi/lambda
    double beta() const;   // guided wavenumber 2*pi/lambda_g
    double eta() const;
};

struct BlockageModel {
    enum class Mode { distance_exponential, fixed };
    Mode mode = Mode::distance_exponential;
    double density_per_m = 0.0;  // phi; 0 keeps every link line-of-sight
    RMat fixed_mask;             // L x K, used in fixed mode

    void validate() const;
};

// Response accumulated from the feed to an element at in-waveguide distance x,
// amplitude split evenly over the waveguide's L active elements.
cplx inwaveguide_response(const RadioConfig& radio, int pas_per_waveguide, double x);

// Block-diagonal M x N in-waveguide matrix, M = N*L, rows ordered waveguide-major.
CMat build_waveguide_matrix(const RadioConfig& radio, const PaLayout& layout);

// Single element-to-user line-of-sight coefficient.
cplx freespace_channel(const RadioConfig& radio, const Vec3& pa, const Vec3& user);

// Conjugated downlink row h^H for one user over all M elements, waveguide-major.
CMat user_channel_row(const RadioConfig& radio, const SystemGeometry& g, const PaLayout& layout,
                      const Vec3& user);

// L x K of 0/1 line-of-sight indicators. Element row l's distance is taken to
// the nearest waveguide; one Bernoulli draw per (l, k) in row-major order.
RMat sample_blockage(const BlockageModel& model, const SystemGeometry& g, const PaLayout& layout,
                     const UserState& users, Rng& rng);

std::vector<double> blockage_column(const RMat& mask, int k);

// 1 x N effective channel for one user: blockage-masked h^H composed with the
// in-waveguide matrix. Empty mask keeps all links. Kernel-accelerated.
std::vector<cplx> effective_channel(const RadioConfig& radio, const SystemGeometry& g,
                                    const PaLayout& layout, const Vec3& user,
                                    std::span<const double> mask_col = {});

// Smallest x' >= nominal_x on waveguide n whose total (guided plus free-space)
// phase at `target` is a multiple of 2*pi. Requires n_eff > 1.
double phase_align_position(const RadioConfig& radio, const SystemGeometry& g, int n,
                            double nominal_x, const Vec3& target);

}  // namespace passlab

#endif
