// SPDX-License-Identifier: Apache-2.0
#include "passlab/beamforming.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace passlab {

CMat solve_linear(CMat A, CMat B) {
    if (A.rows != A.cols || A.rows != B.rows)
        throw std::invalid_argument("solve_linear: shape mismatch");
    const std::size_t n = A.rows;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(A.at(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(A.at(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (!(best > 0)) throw std::domain_error("solve_linear: singular matrix");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A.at(col, c), A.at(pivot, c));
            for (std::size_t c = 0; c < B.cols; ++c) std::swap(B.at(col, c), B.at(pivot, c));
        }
        const cplx inv = 1.0 / A.at(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const cplx f = A.at(r, col) * inv;
            if (f == cplx{}) continue;
            for (std::size_t c = col + 1; c < n; ++c) A.at(r, c) -= f * A.at(col, c);
            for (std::size_t c = 0; c < B.cols; ++c) B.at(r, c) -= f * B.at(col, c);
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        const cplx inv = 1.0 / A.at(col, col);
        for (std::size_t c = 0; c < B.cols; ++c) {
            cplx v = B.at(col, c);
            for (std::size_t r = col + 1; r < n; ++r) v -= A.at(col, r) * B.at(r, c);
            B.at(col, c) = v * inv;
        }
    }
    return B;
}

double PowerConfig::min_rate() const {
    return std::log2(1.0 + std::pow(10.0, min_sinr_db / 10.0));
}

void PowerConfig::validate(int num_users) const {
    if (alpha.size() != static_cast<std::size_t>(num_users))
        throw ConfigError("power: alpha length must equal the user count");
    double sum = 0;
    for (double a : alpha) {
        if (!(a > 0) || a > 1.0) throw ConfigError("power: alpha entries must lie in (0, 1]");
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("power: alpha must sum to 1");
}

std::vector<double> PowerConfig::uniform_alpha(int num_users) {
    return std::vector<double>(num_users, 1.0 / num_users);
}

std::vector<cplx> mrt_weights(std::span<const cplx> e, double p_max) {
    if (!(p_max >= 0)) throw std::invalid_argument("mrt_weights: negative power");
    double norm2 = 0;
    for (const cplx& v : e) norm2 += std::norm(v);
    if (!(norm2 > 0)) throw std::domain_error("mrt_weights: zero effective channel");
    const double scale = std::sqrt(p_max / norm2);
    std::vector<cplx> w(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) w[i] = scale * std::conj(e[i]);
    return w;
}

CMat mmse_weights(const CMat& H, double sigma2, double p_max, std::span<const double> alpha) {
    const std::size_t K = H.rows;
    const std::size_t N = H.cols;
    if (alpha.size() != K) throw std::invalid_argument("mmse_weights: alpha length mismatch");
    if (!(sigma2 >= 0) || !(p_max > 0)) throw std::invalid_argument("mmse_weights: bad powers");
    for (const cplx& v : H.a)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::domain_error("mmse_weights: non-finite channel entry");

    // A = H H^H + sigma2 I, then W0 = H^H A^{-1} diag(sqrt(p_max*alpha))
    CMat A(K, K);
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) {
            cplx s = 0;
            for (std::size_t c = 0; c < N; ++c) s += H.at(i, c) * std::conj(H.at(j, c));
            A.at(i, j) = s;
        }
    bool dead = true;
    for (std::size_t i = 0; i < K; ++i) {
        if (std::abs(A.at(i, i)) > 0) dead = false;
        A.at(i, i) += sigma2;
    }
    if (dead) return CMat(N, K);

    CMat rhs(K, K);
    for (std::size_t k = 0; k < K; ++k) rhs.at(k, k) = std::sqrt(p_max * alpha[k]);
    const CMat Z = solve_linear(A, rhs);
    CMat W0 = matmul(hermitian(H), Z);

    double total = 0;
    for (const cplx& v : W0.a) total += std::norm(v);
    if (!(total > 0)) return CMat(N, K);
    const double scale = std::sqrt(p_max / total);
    for (cplx& v : W0.a) v *= scale;
    return W0;
}

double beamforming_gain(std::span<const cplx> e, std::span<const cplx> w) {
    if (e.size() != w.size()) throw std::invalid_argument("beamforming_gain: length mismatch");
    cplx s = 0;
    for (std::size_t i = 0; i < e.size(); ++i) s += e[i] * w[i];
    return std::norm(s);
}

std::vector<double> sinr_all(const CMat& H, const CMat& W, std::span<const double> alpha,
                             double sigma2) {
    const std::size_t K = H.rows;
    if (W.cols != K || W.rows != H.cols) throw std::invalid_argument("sinr_all: shape mismatch");
    if (alpha.size() != K) throw std::invalid_argument("sinr_all: alpha length mismatch");
    std::vector<double> out(K);
    for (std::size_t k = 0; k < K; ++k) {
        double signal = 0;
        double interference = 0;
        for (std::size_t i = 0; i < K; ++i) {
            cplx s = 0;
            for (std::size_t c = 0; c < H.cols; ++c) s += H.at(k, c) * W.at(c, i);
            const double p = alpha[i] * std::norm(s);
            if (i == k)
                signal = p;
            else
                interference += p;
        }
        const double denom = interference + sigma2;
        if (denom > 0)
            out[k] = signal / denom;
        else
            out[k] = signal > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return out;
}

RateSummary rates(std::span<const double> sinr) {
    RateSummary r;
    r.rate.reserve(sinr.size());
    for (double s : sinr) {
        const double v = rate_from_sinr(s);
        r.rate.push_back(v);
        r.sum_rate += v;
    }
    return r;
}

std::vector<bool> check_rate_floor(std::span<const double> rate, double min_rate) {
    std::vector<bool> ok(rate.size());
    for (std::size_t i = 0; i < rate.size(); ++i) ok[i] = rate[i] >= min_rate;
    return ok;
}

}  // namespace passlab
