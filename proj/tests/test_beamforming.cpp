#include <doctest.h>

#include <cmath>

#include "passlab/beamforming.hpp"
#include "passlab/rng.hpp"

using namespace passlab;

namespace {

CMat random_channel(Rng& rng, int K, int N) {
    CMat H(K, N);
    for (auto& v : H.a) v = rng.cnormal(1.0);
    return H;
}

}  // namespace

TEST_CASE("matched weights on a single-entry channel") {
    const std::vector<cplx> e{{3.0, 4.0}};
    const auto w = mrt_weights(e, 4.0);
    REQUIRE(w.size() == 1);
    CHECK(w[0].real() == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(w[0].imag() == doctest::Approx(-1.6).epsilon(1e-12));
    CHECK(beamforming_gain(e, w) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK_THROWS(mrt_weights(std::vector<cplx>{{0.0, 0.0}}, 1.0));
}

TEST_CASE("no unit-power vector beats matched transmission") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<cplx> e(4);
        for (auto& v : e) v = rng.cnormal(1.0);
        const double p = 2.0;
        const auto best = mrt_weights(e, p);
        const double top = beamforming_gain(e, best);
        for (int probe = 0; probe < 20; ++probe) {
            std::vector<cplx> w(4);
            double norm2 = 0;
            for (auto& v : w) {
                v = rng.cnormal(1.0);
                norm2 += std::norm(v);
            }
            const double scale = std::sqrt(p / norm2);
            for (auto& v : w) v *= scale;
            CHECK(beamforming_gain(e, w) <= top * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("regularised inverse on the identity channel") {
    const CMat H = CMat::identity(2);
    const std::vector<double> alpha{0.5, 0.5};
    const CMat W = mmse_weights(H, 1.0, 2.0, alpha);
    REQUIRE(W.rows == 2);
    REQUIRE(W.cols == 2);
    CHECK(W.at(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(W.at(1, 1).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(W.at(0, 1)) == doctest::Approx(0.0));
    double total = 0;
    for (const auto& v : W.a) total += std::norm(v);
    CHECK(total == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("vanishing noise turns the inverse into zero forcing") {
    Rng rng(33);
    const CMat H = random_channel(rng, 3, 4);
    const std::vector<double> alpha{0.3, 0.3, 0.4};
    const CMat W = mmse_weights(H, 1e-9, 1.0, alpha);
    const CMat HW = matmul(H, W);
    double min_diag = 1e300;
    for (int k = 0; k < 3; ++k) min_diag = std::min(min_diag, std::abs(HW.at(k, k)));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(std::abs(HW.at(i, j)) < 1e-4 * min_diag);
}

TEST_CASE("linear solver round-trips and flags singular input") {
    Rng rng(44);
    CMat A(4, 4);
    for (auto& v : A.a) v = rng.cnormal(1.0);
    CMat X(4, 2);
    for (auto& v : X.a) v = rng.cnormal(1.0);
    const CMat B = matmul(A, X);
    const CMat Y = solve_linear(A, B);
    for (std::size_t i = 0; i < X.a.size(); ++i) CHECK(std::abs(Y.a[i] - X.a[i]) < 1e-10);

    CMat S(2, 2);
    S.at(0, 0) = 1.0;
    S.at(0, 1) = 2.0;
    S.at(1, 0) = 2.0;
    S.at(1, 1) = 4.0;
    CHECK_THROWS(solve_linear(S, CMat::identity(2)));
}

TEST_CASE("per-user ratios on a clean diagonal system") {
    const CMat H = CMat::identity(2);
    const CMat W = CMat::identity(2);
    const std::vector<double> alpha{0.5, 0.5};
    const auto sinr = sinr_all(H, W, alpha, 1.0);
    CHECK(sinr[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sinr[1] == doctest::Approx(0.5).epsilon(1e-12));
    const auto rs = rates(sinr);
    CHECK(rs.rate[0] == doctest::Approx(std::log2(1.5)).epsilon(1e-12));
    CHECK(rs.sum_rate == doctest::Approx(2.0 * std::log2(1.5)).epsilon(1e-12));
    const auto ok = check_rate_floor(rs.rate, std::log2(1.5));
    CHECK(ok[0]);
    const auto bad = check_rate_floor(rs.rate, std::log2(1.5) + 0.01);
    CHECK_FALSE(bad[0]);
}

TEST_CASE("power sharing validation") {
    PowerConfig p;
    p.alpha = {0.5, 0.5};
    p.min_sinr_db = 20.0;
    CHECK(p.min_rate() == doctest::Approx(std::log2(101.0)).epsilon(1e-12));
    CHECK_NOTHROW(p.validate(2));
    p.alpha = {0.5, 0.6};
    CHECK_THROWS_AS(p.validate(2), ConfigError);
    p.alpha = {1.5, -0.5};
    CHECK_THROWS_AS(p.validate(2), ConfigError);
    const auto u = PowerConfig::uniform_alpha(4);
    CHECK(u[3] == doctest::Approx(0.25));
}
