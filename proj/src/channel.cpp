// SPDX-License-Identifier: Apache-2.0
#include "passlab/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "passlab/kernels.hpp"

namespace passlab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void RadioConfig::validate() const {
    if (!(carrier_freq_hz > 0)) throw ConfigError("radio: carrier_freq_hz must be > 0");
    if (!(lightspeed > 0)) throw ConfigError("radio: lightspeed must be > 0");
    if (!(n_eff > 0)) throw ConfigError("radio: n_eff must be > 0");
}

double RadioConfig::kappa() const { return kTwoPi / wavelength(); }
double RadioConfig::beta() const { return kTwoPi / guided_wavelength(); }

double RadioConfig::eta() const {
    if (freespace_gain > 0) return freespace_gain;
    return wavelength() / (4.0 * std::numbers::pi);
}

void BlockageModel::validate() const {
    if (density_per_m < 0) throw ConfigError("blockage: density_per_m must be >= 0");
}

cplx inwaveguide_response(const RadioConfig& radio, int pas_per_waveguide, double x) {
    if (pas_per_waveguide < 1) throw std::invalid_argument("inwaveguide_response: L must be >= 1");
    if (x < 0) throw std::invalid_argument("inwaveguide_response: negative in-waveguide distance");
    const double phase = -radio.beta() * x;
    return std::polar(1.0 / std::sqrt(static_cast<double>(pas_per_waveguide)), phase);
}

CMat build_waveguide_matrix(const RadioConfig& radio, const PaLayout& layout) {
    const int L = layout.pas_per_waveguide;
    const int N = layout.num_waveguides;
    CMat G(static_cast<std::size_t>(L) * N, N);
    for (int n = 0; n < N; ++n)
        for (int l = 0; l < L; ++l)
            G.at(static_cast<std::size_t>(n) * L + l, n) = inwaveguide_response(radio, L, layout.at(l, n));
    return G;
}

cplx freespace_channel(const RadioConfig& radio, const Vec3& pa, const Vec3& user) {
    const double d = distance(pa, user);
    if (!(d > 0)) throw std::invalid_argument("freespace_channel: coincident element and user");
    return std::polar(radio.eta() / d, -radio.kappa() * d);
}

CMat user_channel_row(const RadioConfig& radio, const SystemGeometry& g, const PaLayout& layout,
                      const Vec3& user) {
    const int L = layout.pas_per_waveguide;
    const int N = layout.num_waveguides;
    CMat h(1, static_cast<std::size_t>(L) * N);
    for (int n = 0; n < N; ++n)
        for (int l = 0; l < L; ++l)
            h.at(0, static_cast<std::size_t>(n) * L + l) =
                freespace_channel(radio, pa_coords(g, layout, n, l), user);
    return h;
}

RMat sample_blockage(const BlockageModel& model, const SystemGeometry& g, const PaLayout& layout,
                     const UserState& users, Rng& rng) {
    model.validate();
    const int L = layout.pas_per_waveguide;
    const int K = static_cast<int>(users.positions.size());
    if (model.mode == BlockageModel::Mode::fixed) {
        if (model.fixed_mask.rows != static_cast<std::size_t>(L) ||
            model.fixed_mask.cols != static_cast<std::size_t>(K))
            throw ConfigError("blockage: fixed mask shape does not match L x K");
        return model.fixed_mask;
    }
    RMat mask(L, K);
    for (int l = 0; l < L; ++l) {
        for (int k = 0; k < K; ++k) {
            double dmin = std::numeric_limits<double>::infinity();
            for (int n = 0; n < layout.num_waveguides; ++n) {
                const double d = distance(pa_coords(g, layout, n, l), users.positions[k]);
                if (d < dmin) dmin = d;
            }
            const double p_los = std::exp(-model.density_per_m * dmin);
            mask.at(l, k) = rng.bernoulli(p_los) ? 1.0 : 0.0;
        }
    }
    return mask;
}

std::vector<double> blockage_column(const RMat& mask, int k) {
    std::vector<double> col(mask.rows);
    for (std::size_t l = 0; l < mask.rows; ++l) col[l] = mask.at(l, k);
    return col;
}

std::vector<cplx> effective_channel(const RadioConfig& radio, const SystemGeometry& g,
                                    const PaLayout& layout, const Vec3& user,
                                    std::span<const double> mask_col) {
    const int L = layout.pas_per_waveguide;
    const int N = layout.num_waveguides;
    if (!mask_col.empty() && mask_col.size() != static_cast<std::size_t>(L))
        throw std::invalid_argument("effective_channel: mask length must equal L");

    static thread_local std::vector<double> ones;
    if (mask_col.empty()) {
        if (ones.size() < static_cast<std::size_t>(L)) ones.assign(L, 1.0);
        mask_col = std::span<const double>(ones.data(), L);
    }

    const auto& ops = kernels::active();
    const double amp = radio.eta() / std::sqrt(static_cast<double>(L));
    const double kappa = radio.kappa();
    const double beta = radio.beta();

    std::vector<cplx> e(N);
    for (int n = 0; n < N; ++n) {
        const double dy = user.y - g.waveguide_y(n);
        const double dz = user.z - g.mount_height;
        double re = 0.0, im = 0.0;
        ops.waveguide_channel_sum(layout.col(n), mask_col.data(), L, user.x, dy * dy + dz * dz,
                                  kappa, beta, amp, &re, &im);
        e[n] = {re, im};
    }
    return e;
}

double phase_align_position(const RadioConfig& radio, const SystemGeometry& g, int n,
                            double nominal_x, const Vec3& target) {
    if (!(radio.n_eff > 1.0))
        throw std::invalid_argument("phase_align_position: requires n_eff > 1");
    const double kappa = radio.kappa();
    const double beta = radio.beta();
    const double yn = g.waveguide_y(n);
    const double dy = target.y - yn;
    const double dz = target.z - g.mount_height;
    const double cross2 = dy * dy + dz * dz;

    const auto dist = [&](double x) {
        const double dx = x - target.x;
        return std::sqrt(dx * dx + cross2);
    };
    const auto phase = [&](double x) { return kappa * dist(x) + beta * x; };

    const double base = phase(nominal_x);
    const double goal = kTwoPi * std::ceil(base / kTwoPi);
    // Total phase is strictly increasing in x (beta > kappa), so Newton from a
    // linear guess converges in a handful of steps.
    double x = nominal_x + (goal - base) / beta;
    for (int it = 0; it < 50; ++it) {
        const double f = phase(x) - goal;
        if (std::abs(f) < 1e-12) break;
        const double slope = beta + kappa * (x - target.x) / dist(x);
        x -= f / slope;
        if (x < nominal_x) x = nominal_x;
    }
    return x;
}

}  // namespace passlab
