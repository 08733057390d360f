// SPDX-License-Identifier: Apache-2.0
#ifndef PASSLAB_PREDICTOR_HPP
#define PASSLAB_PREDICTOR_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "passlab/core.hpp"
#include "passlab/rng.hpp"

namespace passlab {

// One supervised instance: per-user feature block (normalised patches plus the
// normalisation stats), one label per user, and enough metadata to rebuild the
// scene that produced it.
struct TrainingSample {
    std::vector<double> features;
    std::vector<int> labels;
    std::uint64_t seed = 0;
    std::vector<Vec3> user_positions;
    double objective = 0;  // value the labels achieve
    std::string split;     // train | val | test
};

struct PredictorArch {
    int users = 1;
    int codebook_size = 16;
    int n_patches = 4;
    int patch_len = 4;
    int embed_dim = 16;
    int hidden = 64;
    int experts = 2;     // 0 keeps only the plain head
    double rho = 1.0;    // layout-rank surrogate over the mixture normaliser

    int tokens_per_user() const { return 4 * n_patches * embed_dim; }
    int features_per_user() const { return 4 * n_patches * patch_len + 8; }
    int input_dim() const { return users * features_per_user(); }
    int trunk_dim() const { return users * (tokens_per_user() + 8); }
    void validate() const;
};

// All weights live in one flat vector; the layout is fixed by the arch. The
// first affine stage is the learnable token projection (one matrix and offset
// per box attribute, shared across users).
struct PredictorParams {
    PredictorArch arch;
    std::vector<double> theta;
};

PredictorParams init_params(const PredictorArch& arch, std::uint64_t seed);
std::size_t param_count(const PredictorArch& arch);

struct Prediction {
    std::vector<double> prob;   // over codewords, sums to 1
    std::vector<int> ranking;   // ids by descending probability, ties by id
};

// One prediction per user. Throws on a feature-length mismatch.
std::vector<Prediction> predict(const PredictorParams& params, std::span<const double> features);

struct TrainHyper {
    int epochs = 60;
    int batch = 32;
    double learning_rate = 0.05;
    double dwa_temp = 2.0;
    std::uint64_t seed = 1;
};

struct TrainReport {
    RMat per_user_loss;  // epochs x users, raw cross entropy
    RMat theta_weights;  // epochs x users
    std::vector<double> total_loss;  // weighted per epoch
};

// Deterministic mini-batch gradient descent on the weighted cross entropy.
// Weights follow loss-ratio dynamics with the given temperature after two
// uniform epochs. Throws PropertyViolation if the loss turns non-finite.
TrainReport train(PredictorParams& params, std::span<const TrainingSample> samples,
                  const TrainHyper& hyper);

// Mean weighted cross entropy and its analytic gradient over a batch.
double loss_and_gradient(const PredictorParams& params, std::span<const TrainingSample> samples,
                         std::span<const double> theta_weights, std::vector<double>* grad);

// Max relative error between analytic and central-difference gradients
// (step 1e-5) over every parameter, on the given samples.
double finite_difference_check(const PredictorParams& params,
                               std::span<const TrainingSample> samples,
                               std::span<const double> theta_weights);

struct EvalTable {
    std::vector<int> s_values;
    std::vector<double> accuracy;       // aligned with s_values
    double sum_rate_ratio = -1;         // mean achieved/label objective; -1 if not computed
};

using ObjectiveFn = std::function<double(const TrainingSample&, const std::vector<int>&)>;

EvalTable evaluate(const PredictorParams& params, std::span<const TrainingSample> samples,
                   std::span<const int> s_values, const ObjectiveFn& objective = {});

void save_params_json(const PredictorParams& params, const std::string& path);
PredictorParams load_params_json(const std::string& path);

// Distance-to-class-mean baseline, single-user only.
struct NearestCentroid {
    int codebook_size = 0;
    std::vector<std::vector<double>> centroids;

    static NearestCentroid fit(std::span<const TrainingSample> samples, int codebook_size);
    Prediction predict(std::span<const double> features) const;
};

// Uniform-random ranking with uniform probabilities.
Prediction random_prediction(int codebook_size, Rng& rng);

}  // namespace passlab

#endif
