// SPDX-License-Identifier: Apache-2.0
#include "passlab/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "passlab/rng.hpp"

namespace passlab {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("config section " + path + " must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (item.key() == a) {
                known = true;
                break;
            }
        if (!known) throw ConfigError("unknown config key: " + path + "." + item.key());
    }
}

template <typename T>
void read(const json& j, const std::string& path, const char* key, T& target) {
    if (!j.contains(key)) return;
    try {
        target = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key " + path + "." + key + " has the wrong type");
    }
}

}  // namespace

ScenarioConfig default_config() {
    ScenarioConfig cfg;
    cfg.geometry.num_waveguides = 4;
    cfg.geometry.pas_per_waveguide = 16;
    cfg.geometry.waveguide_length = 30.0;
    cfg.geometry.region_depth = 12.0;
    cfg.geometry.mount_height = 10.0;
    cfg.geometry.waveguide_spacing = 3.0;
    cfg.geometry.min_pa_spacing = 0.5;
    cfg.radio.carrier_freq_hz = 15e9;
    cfg.power.max_dbm = 20.0;
    cfg.power.noise_dbm = -80.0;
    cfg.power.min_sinr_db = 20.0;
    cfg.camera.region_x = cfg.geometry.waveguide_length;
    cfg.camera.region_y = cfg.geometry.region_depth;
    return cfg;
}

ScenarioConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ScenarioConfig cfg = default_config();
    check_keys(doc, "config",
               {"seed", "geometry", "radio", "power", "blockage", "users", "camera", "window",
                "codebook", "probe", "selection", "predictor", "train", "dataset", "eval",
                "outage", "sweep"});
    read(doc, "config", "seed", cfg.seed);

    if (doc.contains("geometry")) {
        const json& j = doc.at("geometry");
        check_keys(j, "geometry",
                   {"num_waveguides", "pas_per_waveguide", "waveguide_length", "region_depth",
                    "mount_height", "waveguide_spacing", "min_pa_spacing"});
        read(j, "geometry", "num_waveguides", cfg.geometry.num_waveguides);
        read(j, "geometry", "pas_per_waveguide", cfg.geometry.pas_per_waveguide);
        read(j, "geometry", "waveguide_length", cfg.geometry.waveguide_length);
        read(j, "geometry", "region_depth", cfg.geometry.region_depth);
        read(j, "geometry", "mount_height", cfg.geometry.mount_height);
        read(j, "geometry", "waveguide_spacing", cfg.geometry.waveguide_spacing);
        read(j, "geometry", "min_pa_spacing", cfg.geometry.min_pa_spacing);
        cfg.camera.region_x = cfg.geometry.waveguide_length;
        cfg.camera.region_y = cfg.geometry.region_depth;
    }
    if (doc.contains("radio")) {
        const json& j = doc.at("radio");
        check_keys(j, "radio", {"carrier_freq_hz", "lightspeed", "n_eff", "freespace_gain"});
        read(j, "radio", "carrier_freq_hz", cfg.radio.carrier_freq_hz);
        read(j, "radio", "lightspeed", cfg.radio.lightspeed);
        read(j, "radio", "n_eff", cfg.radio.n_eff);
        read(j, "radio", "freespace_gain", cfg.radio.freespace_gain);
    }
    if (doc.contains("power")) {
        const json& j = doc.at("power");
        check_keys(j, "power", {"max_dbm", "noise_dbm", "min_sinr_db", "alpha"});
        read(j, "power", "max_dbm", cfg.power.max_dbm);
        read(j, "power", "noise_dbm", cfg.power.noise_dbm);
        read(j, "power", "min_sinr_db", cfg.power.min_sinr_db);
        read(j, "power", "alpha", cfg.power.alpha);
    }
    if (doc.contains("blockage")) {
        const json& j = doc.at("blockage");
        check_keys(j, "blockage", {"density_per_m"});
        read(j, "blockage", "density_per_m", cfg.blockage.density_per_m);
    }
    if (doc.contains("users")) {
        const json& j = doc.at("users");
        check_keys(j, "users", {"count", "speed_mps", "dt_s"});
        read(j, "users", "count", cfg.users.count);
        read(j, "users", "speed_mps", cfg.users.speed_mps);
        read(j, "users", "dt_s", cfg.users.dt_s);
    }
    if (doc.contains("camera")) {
        const json& j = doc.at("camera");
        check_keys(j, "camera", {"s_ref", "d_ref"});
        read(j, "camera", "s_ref", cfg.camera.s_ref);
        read(j, "camera", "d_ref", cfg.camera.d_ref);
    }
    if (doc.contains("window")) {
        const json& j = doc.at("window");
        check_keys(j, "window", {"length", "patch_len", "stride"});
        read(j, "window", "length", cfg.window.length);
        read(j, "window", "patch_len", cfg.window.patch_len);
        read(j, "window", "stride", cfg.window.stride);
    }
    if (doc.contains("codebook")) {
        const json& j = doc.at("codebook");
        check_keys(j, "codebook",
                   {"grid_points", "pattern", "cluster_spacing", "phase_align", "size_cap"});
        read(j, "codebook", "grid_points", cfg.codebook.grid_points);
        read(j, "codebook", "cluster_spacing", cfg.codebook.cluster_spacing);
        read(j, "codebook", "phase_align", cfg.codebook.phase_align);
        read(j, "codebook", "size_cap", cfg.codebook.size_cap);
        if (j.contains("pattern")) {
            const std::string p = j.at("pattern").get<std::string>();
            if (p == "uniform_offset")
                cfg.codebook.pattern = CodebookOptions::Pattern::uniform_offset;
            else if (p == "per_waveguide_shift")
                cfg.codebook.pattern = CodebookOptions::Pattern::per_waveguide_shift;
            else
                throw ConfigError("codebook.pattern must be uniform_offset or per_waveguide_shift");
        }
    }
    if (doc.contains("probe")) {
        const json& j = doc.at("probe");
        check_keys(j, "probe", {"noise_dbm"});
        read(j, "probe", "noise_dbm", cfg.probe_noise_dbm);
    }
    if (doc.contains("selection")) {
        const json& j = doc.at("selection");
        check_keys(j, "selection", {"top_s", "joint"});
        read(j, "selection", "top_s", cfg.selection.top_s);
        if (j.contains("joint")) {
            const std::string m = j.at("joint").get<std::string>();
            if (m == "union")
                cfg.selection.joint = JointMode::union_set;
            else if (m == "strict_tuple")
                cfg.selection.joint = JointMode::strict_tuple;
            else
                throw ConfigError("selection.joint must be union or strict_tuple");
        }
    }
    if (doc.contains("predictor")) {
        const json& j = doc.at("predictor");
        check_keys(j, "predictor", {"embed_dim", "hidden", "experts", "rho"});
        read(j, "predictor", "embed_dim", cfg.predictor.embed_dim);
        read(j, "predictor", "hidden", cfg.predictor.hidden);
        read(j, "predictor", "experts", cfg.predictor.experts);
        read(j, "predictor", "rho", cfg.predictor.rho);
    }
    if (doc.contains("train")) {
        const json& j = doc.at("train");
        check_keys(j, "train", {"epochs", "batch", "learning_rate", "dwa_temp"});
        read(j, "train", "epochs", cfg.train.epochs);
        read(j, "train", "batch", cfg.train.batch);
        read(j, "train", "learning_rate", cfg.train.learning_rate);
        read(j, "train", "dwa_temp", cfg.train.dwa_temp);
    }
    if (doc.contains("dataset")) {
        const json& j = doc.at("dataset");
        check_keys(j, "dataset", {"samples", "split"});
        read(j, "dataset", "samples", cfg.dataset.samples);
        if (j.contains("split")) {
            const auto split = j.at("split").get<std::vector<double>>();
            if (split.size() != 3)
                throw ConfigError("dataset.split must hold three fractions");
            cfg.dataset.split_train = split[0];
            cfg.dataset.split_val = split[1];
            cfg.dataset.split_test = split[2];
        }
    }
    if (doc.contains("eval")) {
        const json& j = doc.at("eval");
        check_keys(j, "eval", {"s_values"});
        read(j, "eval", "s_values", cfg.eval_s);
    }
    if (doc.contains("outage")) {
        const json& j = doc.at("outage");
        check_keys(j, "outage", {"rate_floor", "densities", "trials", "user_x"});
        read(j, "outage", "rate_floor", cfg.outage.rate_floor);
        read(j, "outage", "densities", cfg.outage.densities);
        read(j, "outage", "trials", cfg.outage.trials);
        read(j, "outage", "user_x", cfg.outage.user_x);
    }
    if (doc.contains("sweep")) {
        const json& j = doc.at("sweep");
        check_keys(j, "sweep", {"axis", "values", "modes", "scenes"});
        read(j, "sweep", "axis", cfg.sweep.axis);
        read(j, "sweep", "values", cfg.sweep.values);
        read(j, "sweep", "modes", cfg.sweep.modes);
        read(j, "sweep", "scenes", cfg.sweep.scenes);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void ScenarioConfig::validate() const {
    geometry.validate();
    radio.validate();
    if (!power.alpha.empty()) power.validate(users.count);  // empty means uniform
    blockage.validate();
    camera.validate();
    if (users.count < 1) throw ConfigError("users.count must be >= 1");
    if (!(users.speed_mps >= 0)) throw ConfigError("users.speed_mps must be >= 0");
    if (!(users.dt_s > 0)) throw ConfigError("users.dt_s must be > 0");
    if (window.patch_len < 1 || window.stride < 1)
        throw ConfigError("window.patch_len and window.stride must be >= 1");
    if (window.length < window.patch_len)
        throw ConfigError("window.length must be >= window.patch_len");
    if (codebook.grid_points < 2) throw ConfigError("codebook.grid_points must be >= 2");
    if (codebook.size_cap < 2) throw ConfigError("codebook.size_cap must be >= 2");
    if (selection.top_s < 1) throw ConfigError("selection.top_s must be >= 1");
    if (predictor.embed_dim < 1 || predictor.hidden < 1)
        throw ConfigError("predictor.embed_dim and predictor.hidden must be >= 1");
    if (predictor.experts < 0) throw ConfigError("predictor.experts must be >= 0");
    if (!(predictor.rho > 0)) throw ConfigError("predictor.rho must be > 0");
    if (train.epochs < 1 || train.batch < 1)
        throw ConfigError("train.epochs and train.batch must be >= 1");
    if (!(train.learning_rate > 0)) throw ConfigError("train.learning_rate must be > 0");
    if (!(train.dwa_temp > 0)) throw ConfigError("train.dwa_temp must be > 0");
    if (dataset.samples < 1) throw ConfigError("dataset.samples must be >= 1");
    const double split_sum = dataset.split_train + dataset.split_val + dataset.split_test;
    if (dataset.split_train < 0 || dataset.split_val < 0 || dataset.split_test < 0 ||
        std::abs(split_sum - 1.0) > 1e-9)
        throw ConfigError("dataset.split fractions must be non-negative and sum to 1");
    if (eval_s.empty()) throw ConfigError("eval.s_values must be non-empty");
    for (int s : eval_s)
        if (s < 1) throw ConfigError("eval.s_values entries must be >= 1");
    if (!(outage.rate_floor > 0)) throw ConfigError("outage.rate_floor must be > 0");
    if (outage.densities.empty()) throw ConfigError("outage.densities must be non-empty");
    for (double d : outage.densities)
        if (d < 0) throw ConfigError("outage.densities entries must be >= 0");
    if (outage.trials < 1) throw ConfigError("outage.trials must be >= 1");
    if (outage.user_x < 0 || outage.user_x > geometry.waveguide_length)
        throw ConfigError("outage.user_x must lie inside the region");
    if (sweep.axis != "power" && sweep.axis != "snr" && sweep.axis != "min_sinr" &&
        sweep.axis != "elements" && sweep.axis != "grid")
        throw ConfigError("sweep.axis must be one of power, snr, min_sinr, elements, grid");
    if (sweep.values.empty()) throw ConfigError("sweep.values must be non-empty");
    if (sweep.modes.empty()) throw ConfigError("sweep.modes must be non-empty");
    for (const std::string& m : sweep.modes)
        if (m != "oracle" && m != "random" && m != "fixed" && m != "trained")
            throw ConfigError("sweep.modes entries must be oracle, random, fixed or trained");
    if (sweep.scenes < 1) throw ConfigError("sweep.scenes must be >= 1");
}

PredictorArch ScenarioConfig::make_arch(int codebook_size) const {
    PredictorArch arch;
    arch.users = users.count;
    arch.codebook_size = codebook_size;
    arch.n_patches = static_cast<int>(patch_count(window.length, window.patch_len, window.stride));
    arch.patch_len = window.patch_len;
    arch.embed_dim = predictor.embed_dim;
    arch.hidden = predictor.hidden;
    arch.experts = predictor.experts;
    arch.rho = predictor.rho;
    arch.validate();
    return arch;
}

std::string canonical_dump(const ScenarioConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["geometry"] = {{"num_waveguides", cfg.geometry.num_waveguides},
                     {"pas_per_waveguide", cfg.geometry.pas_per_waveguide},
                     {"waveguide_length", cfg.geometry.waveguide_length},
                     {"region_depth", cfg.geometry.region_depth},
                     {"mount_height", cfg.geometry.mount_height},
                     {"waveguide_spacing", cfg.geometry.waveguide_spacing},
                     {"min_pa_spacing", cfg.geometry.min_pa_spacing}};
    j["radio"] = {{"carrier_freq_hz", cfg.radio.carrier_freq_hz},
                  {"lightspeed", cfg.radio.lightspeed},
                  {"n_eff", cfg.radio.n_eff},
                  {"freespace_gain", cfg.radio.freespace_gain}};
    j["power"] = {{"max_dbm", cfg.power.max_dbm},
                  {"noise_dbm", cfg.power.noise_dbm},
                  {"min_sinr_db", cfg.power.min_sinr_db},
                  {"alpha", cfg.power.alpha}};
    j["blockage"] = {{"density_per_m", cfg.blockage.density_per_m}};
    j["users"] = {{"count", cfg.users.count},
                  {"speed_mps", cfg.users.speed_mps},
                  {"dt_s", cfg.users.dt_s}};
    j["camera"] = {{"s_ref", cfg.camera.s_ref}, {"d_ref", cfg.camera.d_ref}};
    j["window"] = {{"length", cfg.window.length},
                   {"patch_len", cfg.window.patch_len},
                   {"stride", cfg.window.stride}};
    j["codebook"] = {{"grid_points", cfg.codebook.grid_points},
                     {"pattern", cfg.codebook.pattern == CodebookOptions::Pattern::uniform_offset
                                     ? "uniform_offset"
                                     : "per_waveguide_shift"},
                     {"cluster_spacing", cfg.codebook.cluster_spacing},
                     {"phase_align", cfg.codebook.phase_align},
                     {"size_cap", cfg.codebook.size_cap}};
    j["probe"] = {{"noise_dbm", cfg.probe_noise_dbm}};
    j["selection"] = {
        {"top_s", cfg.selection.top_s},
        {"joint", cfg.selection.joint == JointMode::union_set ? "union" : "strict_tuple"}};
    j["predictor"] = {{"embed_dim", cfg.predictor.embed_dim},
                      {"hidden", cfg.predictor.hidden},
                      {"experts", cfg.predictor.experts},
                      {"rho", cfg.predictor.rho}};
    j["train"] = {{"epochs", cfg.train.epochs},
                  {"batch", cfg.train.batch},
                  {"learning_rate", cfg.train.learning_rate},
                  {"dwa_temp", cfg.train.dwa_temp}};
    j["dataset"] = {{"samples", cfg.dataset.samples},
                    {"split", {cfg.dataset.split_train, cfg.dataset.split_val,
                               cfg.dataset.split_test}}};
    j["eval"] = {{"s_values", cfg.eval_s}};
    j["outage"] = {{"rate_floor", cfg.outage.rate_floor},
                   {"densities", cfg.outage.densities},
                   {"trials", cfg.outage.trials},
                   {"user_x", cfg.outage.user_x}};
    j["sweep"] = {{"axis", cfg.sweep.axis},
                  {"values", cfg.sweep.values},
                  {"modes", cfg.sweep.modes},
                  {"scenes", cfg.sweep.scenes}};
    return j.dump();
}

std::uint64_t config_hash(const ScenarioConfig& cfg) { return fnv1a64(canonical_dump(cfg)); }

}  // namespace passlab
