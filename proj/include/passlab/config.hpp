// SPDX-License-Identifier: Apache-2.0
#ifndef PASSLAB_CONFIG_HPP
#define PASSLAB_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "passlab/beamforming.hpp"
#include "passlab/channel.hpp"
#include "passlab/codebook.hpp"
#include "passlab/core.hpp"
#include "passlab/geometry.hpp"
#include "passlab/predictor.hpp"
#include "passlab/tokens.hpp"

namespace passlab {

struct TrajectorySpec {
    int count = 8;           // users
    double speed_mps = 0.25;
    double dt_s = 1.0;
};

struct WindowSpec {
    int length = 13;   // observation slots per sample
    int patch_len = 4;
    int stride = 3;
};

struct SelectionSpec {
    int top_s = 4;
    JointMode joint = JointMode::union_set;
};

struct PredictorSpec {
    int embed_dim = 16;
    int hidden = 64;
    int experts = 2;
    double rho = 1.0;
};

struct DatasetSpec {
    int samples = 512;
    double split_train = 0.7;
    double split_val = 0.1;
    double split_test = 0.2;
};

struct OutageStudySpec {
    double rate_floor = 1.0;  // bits/s/Hz
    std::vector<double> densities{0.01, 0.05, 0.1, 0.5};
    long trials = 200000;
    double user_x = 15.0;
};

struct SweepSpec {
    std::string axis = "power";  // power | snr | min_sinr | elements | grid
    std::vector<double> values{10, 15, 20, 25, 30};
    std::vector<std::string> modes{"oracle", "random", "fixed"};
    int scenes = 16;  // evaluation scenes per point
};

// Full run description. Every field has a working default; a config file only
// overrides what it names, and unknown keys are rejected with their path.
struct ScenarioConfig {
    std::uint64_t seed = 1234;
    SystemGeometry geometry;
    RadioConfig radio;
    PowerConfig power;
    BlockageModel blockage;
    TrajectorySpec users;
    CameraModel camera;
    WindowSpec window;
    CodebookOptions codebook;
    double probe_noise_dbm = -80;
    SelectionSpec selection;
    PredictorSpec predictor;
    TrainHyper train;
    DatasetSpec dataset;
    std::vector<int> eval_s{1, 2, 4};
    OutageStudySpec outage;
    SweepSpec sweep;

    void validate() const;
    PredictorArch make_arch(int codebook_size) const;
};

ScenarioConfig default_config();
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

// Sorted-key JSON of every field; equal configs dump identically.
std::string canonical_dump(const ScenarioConfig& cfg);
std::uint64_t config_hash(const ScenarioConfig& cfg);

}  // namespace passlab

#endif
