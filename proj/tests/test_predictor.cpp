#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numeric>

#include "passlab/predictor.hpp"
#include "passlab/rng.hpp"

using namespace passlab;

namespace {

PredictorArch tiny_arch(int experts) {
    PredictorArch a;
    a.users = 2;
    a.codebook_size = 4;
    a.n_patches = 2;
    a.patch_len = 3;
    a.embed_dim = 2;
    a.hidden = 5;
    a.experts = experts;
    a.rho = 0.8;
    return a;
}

std::vector<TrainingSample> tiny_samples(const PredictorArch& a, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<TrainingSample> out;
    for (int i = 0; i < count; ++i) {
        TrainingSample s;
        for (int j = 0; j < a.input_dim(); ++j) s.features.push_back(rng.uniform(-1.0, 1.0));
        for (int u = 0; u < a.users; ++u)
            s.labels.push_back(static_cast<int>(rng.below(a.codebook_size)));
        s.split = "train";
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

TEST_CASE("analytic gradients match finite differences") {
    for (int experts : {0, 2}) {
        const PredictorArch arch = tiny_arch(experts);
        const PredictorParams params = init_params(arch, 42);
        const auto samples = tiny_samples(arch, 3, 7);
        const std::vector<double> w{1.3, 0.7};
        CHECK(finite_difference_check(params, samples, w) < 1e-3);
    }
}

TEST_CASE("initialisation and prediction are deterministic") {
    const PredictorArch arch = tiny_arch(2);
    const PredictorParams a = init_params(arch, 5);
    const PredictorParams b = init_params(arch, 5);
    CHECK(a.theta == b.theta);
    const PredictorParams c = init_params(arch, 6);
    CHECK(a.theta != c.theta);

    const auto samples = tiny_samples(arch, 1, 9);
    const auto p1 = predict(a, samples[0].features);
    const auto p2 = predict(a, samples[0].features);
    REQUIRE(p1.size() == 2);
    CHECK(p1[0].prob == p2[0].prob);
    const double total = std::accumulate(p1[0].prob.begin(), p1[0].prob.end(), 0.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("training is bit-reproducible and can memorise one window") {
    const PredictorArch arch = tiny_arch(2);
    const auto samples = tiny_samples(arch, 1, 11);
    TrainHyper hyper;
    hyper.epochs = 80;
    hyper.batch = 4;
    hyper.learning_rate = 0.1;
    hyper.seed = 3;

    PredictorParams p1 = init_params(arch, 3);
    const TrainReport r1 = train(p1, samples, hyper);
    PredictorParams p2 = init_params(arch, 3);
    const TrainReport r2 = train(p2, samples, hyper);
    CHECK(p1.theta == p2.theta);
    CHECK(r1.total_loss == r2.total_loss);

    CHECK(r1.total_loss.back() < 0.05 * r1.total_loss.front());
    const auto preds = predict(p1, samples[0].features);
    CHECK(preds[0].ranking.front() == samples[0].labels[0]);
    CHECK(preds[1].ranking.front() == samples[0].labels[1]);
}

TEST_CASE("loss weights stay uniform for two epochs then renormalise") {
    const PredictorArch arch = tiny_arch(0);
    const auto samples = tiny_samples(arch, 6, 13);
    TrainHyper hyper;
    hyper.epochs = 6;
    hyper.batch = 3;
    hyper.learning_rate = 0.02;
    hyper.seed = 1;
    PredictorParams params = init_params(arch, 1);
    const TrainReport rep = train(params, samples, hyper);
    for (int e = 0; e < hyper.epochs; ++e) {
        double sum = 0;
        for (int k = 0; k < arch.users; ++k) sum += rep.theta_weights.at(e, k);
        CHECK(sum == doctest::Approx(arch.users).epsilon(1e-9));
    }
    CHECK(rep.theta_weights.at(0, 0) == doctest::Approx(1.0));
    CHECK(rep.theta_weights.at(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("parameters survive a save and load") {
    const PredictorArch arch = tiny_arch(2);
    const PredictorParams params = init_params(arch, 17);
    const std::string path = "/tmp/passlab_test_params.json";
    save_params_json(params, path);
    const PredictorParams back = load_params_json(path);
    CHECK(back.arch.hidden == arch.hidden);
    CHECK(back.arch.rho == doctest::Approx(arch.rho));
    CHECK(back.theta == params.theta);
    std::remove(path.c_str());
}

TEST_CASE("evaluation pools every user instance") {
    const PredictorArch arch = tiny_arch(0);
    PredictorParams params = init_params(arch, 23);
    auto samples = tiny_samples(arch, 4, 29);
    for (auto& s : samples) s.objective = 2.0;
    const std::vector<int> s_values{1, 4};
    const auto table = evaluate(params, samples, s_values,
                                [](const TrainingSample&, const std::vector<int>&) { return 1.0; });
    REQUIRE(table.accuracy.size() == 2);
    CHECK(table.accuracy[1] == doctest::Approx(1.0));  // S = F always hits
    CHECK(table.sum_rate_ratio == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("class-mean baseline separates two blobs") {
    const int F = 3;
    std::vector<TrainingSample> samples;
    Rng rng(31);
    for (int i = 0; i < 40; ++i) {
        TrainingSample s;
        const int label = i % 2;  // class 2 stays empty
        for (int j = 0; j < 5; ++j)
            s.features.push_back((label == 0 ? -2.0 : 2.0) + rng.uniform(-0.3, 0.3));
        s.labels = {label};
        samples.push_back(std::move(s));
    }
    const NearestCentroid nc = NearestCentroid::fit(samples, F);
    const auto pr = nc.predict(samples[0].features);
    CHECK(pr.ranking.front() == 0);
    const auto pr2 = nc.predict(samples[1].features);
    CHECK(pr2.ranking.front() == 1);
}

TEST_CASE("random rankings are permutations") {
    Rng rng(37);
    const Prediction pr = random_prediction(6, rng);
    std::vector<int> sorted = pr.ranking;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 6; ++i) CHECK(sorted[i] == i);
    CHECK(pr.prob[0] == doctest::Approx(1.0 / 6.0));
}
