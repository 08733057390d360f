// SPDX-License-Identifier: Apache-2.0
#ifndef PASSLAB_RNG_HPP
#define PASSLAB_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace passlab {

// All randomness flows from one 64-bit master seed. Substreams are derived by
// hashing (master, domain tag, index); every consumer owns its own substream so
// adding draws in one place never perturbs another. Distribution sampling is
// implemented here rather than with std::uniform_real_distribution so that the
// byte-level output contract does not depend on the standard library build.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t substream_seed(std::uint64_t master, std::string_view domain, std::uint64_t index) {
    std::uint64_t s = master ^ fnv1a64(domain);
    (void)splitmix64(s);
    s ^= index * 0x9e3779b97f4a7c15ULL;
    std::uint64_t mixed = splitmix64(s);
    return mixed;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so nearby seeds decorrelate immediately
        (void)splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // index uniform on [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // standard normal, Box-Muller with cached second value
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // circularly symmetric complex normal with total variance sigma2
    std::complex<double> cnormal(double sigma2) {
        const double s = std::sqrt(sigma2 / 2.0);
        return {s * normal(), s * normal()};
    }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline Rng substream(std::uint64_t master, std::string_view domain, std::uint64_t index) {
    return Rng(substream_seed(master, domain, index));
}

}  // namespace passlab

#endif
