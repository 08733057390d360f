// SPDX-License-Identifier: Apache-2.0
#ifndef PASSLAB_BEAMFORMING_HPP
#define PASSLAB_BEAMFORMING_HPP

#include <span>
#include <vector>

#include "passlab/core.hpp"

namespace passlab {

struct PowerConfig {
    double max_dbm = 0;           // total transmit budget
    double noise_dbm = -80;       // receiver noise power
    double min_sinr_db = 0;       // feasibility floor, checked after the fact
    std::vector<double> alpha;    // per-user power fractions, sum to 1

    double max_watt() const { return dbm_to_watt(max_dbm); }
    double noise_watt() const { return dbm_to_watt(noise_dbm); }
    double min_rate() const;      // log2(1 + min SINR)
    void validate(int num_users) const;
    static std::vector<double> uniform_alpha(int num_users);
};

// Matched transmission for a single user's 1 x N effective channel:
// w = sqrt(p_max) * e^H / ||e||. Throws std::domain_error on a zero channel.
std::vector<cplx> mrt_weights(std::span<const cplx> e, double p_max);

// Regularised inverse beamformer for K users. H is K x N with row k holding
// user k's effective channel. Columns are scaled by sqrt(p_max * alpha_k) and
// the whole matrix is then rescaled so total transmit power equals p_max.
// A fully dead channel matrix yields an all-zero W.
CMat mmse_weights(const CMat& H, double sigma2, double p_max, std::span<const double> alpha);

double beamforming_gain(std::span<const cplx> e, std::span<const cplx> w);

// Post-combining ratios, interference summed over the other users' columns.
std::vector<double> sinr_all(const CMat& H, const CMat& W, std::span<const double> alpha,
                             double sigma2);

inline double rate_from_sinr(double s) { return std::log2(1.0 + s); }

struct RateSummary {
    std::vector<double> rate;
    double sum_rate = 0;
};
RateSummary rates(std::span<const double> sinr);

// Per-user feasibility of a minimum rate, reported rather than enforced.
std::vector<bool> check_rate_floor(std::span<const double> rate, double min_rate);

}  // namespace passlab

#endif
