// SPDX-License-Identifier: Apache-2.0
#ifndef PASSLAB_COMMANDS_HPP
#define PASSLAB_COMMANDS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "passlab/codebook.hpp"
#include "passlab/config.hpp"
#include "passlab/core.hpp"
#include "passlab/predictor.hpp"

namespace passlab {

struct CommandArgs {
    std::string config_path;  // empty keeps defaults
    std::string out_dir;
    bool has_seed = false;
    std::uint64_t seed = 0;            // overrides the config seed
    std::string mode = "oracle";       // eval: oracle | trained | random
};

// One observation window: per-user mobility tracks, their final positions,
// the flattened per-user feature block, and the blockage mask drawn against
// the reference element grid.
struct Scene {
    std::uint64_t seed = 0;
    std::vector<std::vector<Vec3>> tracks;
    UserState users;
    std::vector<double> features;
    RMat mask;  // L x K
};

Scene build_scene(const ScenarioConfig& cfg, std::uint64_t scene_seed);

// Codebook for this scene, phase-aligned at the users' sensed positions.
Codebook scene_codebook(const ScenarioConfig& cfg, const Scene& scene);

struct SceneLabels {
    std::vector<int> ids;  // one per user
    double objective = 0;  // matched-transmission gain (one user) or sum rate
};

SceneLabels label_scene(const ScenarioConfig& cfg, const Scene& scene, const Codebook& cb);

// Objective achieved when the tuple `ids` is applied; same metric family as
// label_scene, and the first id fixes the physical layout.
double scene_objective(const ScenarioConfig& cfg, const Scene& scene, const Codebook& cb,
                       std::span<const int> ids);

struct DatasetFile {
    int codebook_size = 0;
    int users = 0;
    std::size_t feature_len = 0;
    std::vector<TrainingSample> samples;
};

DatasetFile load_dataset_jsonl(const std::string& path);

struct TimingPoint {
    int codebook_size = 0;
    double seconds = 0;
};

// Wall time of one probe sweep plus per-user selection at each codebook size.
std::vector<TimingPoint> probe_selection_timing(const ScenarioConfig& cfg,
                                                std::span<const int> sizes, int repeats);

int cmd_simulate(const CommandArgs& args);
int cmd_dataset(const CommandArgs& args);
int cmd_train(const CommandArgs& args);
int cmd_eval(const CommandArgs& args);
int cmd_outage(const CommandArgs& args);
int cmd_sweep(const CommandArgs& args);

}  // namespace passlab

#endif
