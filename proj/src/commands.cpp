// SPDX-License-Identifier: Apache-2.0
#include "passlab/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include <json.hpp>

#include "passlab/analysis.hpp"
#include "passlab/beamforming.hpp"
#include "passlab/channel.hpp"
#include "passlab/io.hpp"
#include "passlab/kernels.hpp"
#include "passlab/rng.hpp"
#include "passlab/tokens.hpp"

namespace passlab {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::vector<double> effective_alpha(const ScenarioConfig& cfg) {
    return cfg.power.alpha.empty() ? PowerConfig::uniform_alpha(cfg.users.count)
                                   : cfg.power.alpha;
}

ScenarioConfig load_cfg(const CommandArgs& args) {
    ScenarioConfig cfg =
        args.config_path.empty() ? default_config() : load_config(args.config_path);
    if (args.has_seed) cfg.seed = args.seed;
    cfg.validate();
    return cfg;
}

struct RunContext {
    ScenarioConfig cfg;
    std::string out;
    Clock::time_point t0;
    std::vector<std::string> outputs;
};

RunContext begin_run(const CommandArgs& args) {
    if (args.out_dir.empty()) throw ConfigError("--out is required");
    RunContext rc{load_cfg(args), args.out_dir, Clock::now(), {}};
    ensure_directory(rc.out);
    return rc;
}

void finish_run(RunContext& rc, const char* command) {
    RunManifest m;
    m.command = command;
    m.seed = rc.cfg.seed;
    m.config_fnv = config_hash(rc.cfg);
    m.kernels = kernels::active().name;
    m.version = kVersion;
    m.outputs = rc.outputs;
    m.wall_seconds = std::chrono::duration<double>(Clock::now() - rc.t0).count();
    write_manifest(m, rc.out);
}

std::vector<Vec3> make_track(const ScenarioConfig& cfg, Rng& rng) {
    const double xmax = cfg.geometry.waveguide_length;
    const double ymax = cfg.geometry.region_depth;
    double x = rng.uniform(0.0, xmax);
    double y = rng.uniform(0.0, ymax);
    const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double vx = std::cos(heading);
    double vy = std::sin(heading);
    const double step = cfg.users.speed_mps * cfg.users.dt_s;
    std::vector<Vec3> track;
    track.reserve(cfg.window.length);
    track.push_back({x, y, 0.0});
    for (int t = 1; t < cfg.window.length; ++t) {
        x += step * vx;
        y += step * vy;
        while (x < 0.0 || x > xmax) {  // reflect at the region walls
            if (x < 0.0) x = -x;
            if (x > xmax) x = 2.0 * xmax - x;
            vx = -vx;
        }
        while (y < 0.0 || y > ymax) {
            if (y < 0.0) y = -y;
            if (y > ymax) y = 2.0 * ymax - y;
            vy = -vy;
        }
        track.push_back({x, y, 0.0});
    }
    return track;
}

// K x N effective-channel matrix for one layout under the scene's blockage.
CMat channel_matrix(const ScenarioConfig& cfg, const Scene& scene, const PaLayout& layout) {
    const int K = cfg.users.count;
    CMat H(K, cfg.geometry.num_waveguides);
    for (int k = 0; k < K; ++k) {
        const auto col = blockage_column(scene.mask, k);
        const auto e = effective_channel(cfg.radio, cfg.geometry, layout,
                                         scene.users.positions[k], col);
        for (std::size_t n = 0; n < e.size(); ++n) H.at(k, n) = e[n];
    }
    return H;
}

CMat weights_for(const ScenarioConfig& cfg, const CMat& H) {
    const double p_max = cfg.power.max_watt();
    if (H.rows == 1) {
        std::vector<cplx> e(H.a.begin(), H.a.end());
        const auto w = mrt_weights(e, p_max);
        CMat W(H.cols, 1);
        for (std::size_t n = 0; n < w.size(); ++n) W.at(n, 0) = w[n];
        return W;
    }
    return mmse_weights(H, cfg.power.noise_watt(), p_max, effective_alpha(cfg));
}

struct LayoutMetric {
    double sum_rate = 0;
    double floor_fraction = 0;
};

LayoutMetric layout_metric(const ScenarioConfig& cfg, const Scene& scene,
                           const PaLayout& layout) {
    const CMat H = channel_matrix(cfg, scene, layout);
    const CMat W = weights_for(cfg, H);
    const auto sinr = sinr_all(H, W, effective_alpha(cfg), cfg.power.noise_watt());
    const auto rs = rates(sinr);
    const auto ok = check_rate_floor(rs.rate, cfg.power.min_rate());
    LayoutMetric m;
    m.sum_rate = rs.sum_rate;
    m.floor_fraction =
        static_cast<double>(std::count(ok.begin(), ok.end(), true)) / ok.size();
    return m;
}

}  // namespace

Scene build_scene(const ScenarioConfig& cfg, std::uint64_t scene_seed) {
    Scene sc;
    sc.seed = scene_seed;
    const int K = cfg.users.count;
    sc.tracks.resize(K);
    sc.users.positions.resize(K);
    for (int k = 0; k < K; ++k) {
        Rng rng = substream(scene_seed, "scene.track", k);
        sc.tracks[k] = make_track(cfg, rng);
        sc.users.positions[k] = sc.tracks[k].back();
    }
    for (int k = 0; k < K; ++k) {
        const auto boxes = synthesize_boxes(sc.tracks[k], cfg.camera);
        RevinStats stats;
        const auto norm = revin_normalize(boxes, stats);
        const auto fv = feature_vector(norm, stats, cfg.window.patch_len, cfg.window.stride);
        sc.features.insert(sc.features.end(), fv.begin(), fv.end());
    }
    const PaLayout reference = PaLayout::uniform_grid(cfg.geometry);
    Rng brng = substream(scene_seed, "scene.blockage", 0);
    sc.mask = sample_blockage(cfg.blockage, cfg.geometry, reference, sc.users, brng);
    return sc;
}

Codebook scene_codebook(const ScenarioConfig& cfg, const Scene& scene) {
    return generate_grid_codebook(cfg.geometry, cfg.radio, cfg.codebook,
                                  scene.users.positions);
}

SceneLabels label_scene(const ScenarioConfig& cfg, const Scene& scene, const Codebook& cb) {
    const double p_max = cfg.power.max_watt();
    SceneLabels out;
    if (cfg.users.count == 1) {
        const auto col = blockage_column(scene.mask, 0);
        const auto res = oracle_best_codeword(cb, cfg.radio, cfg.geometry,
                                              scene.users.positions[0], col,
                                              Objective::gain_mrt, p_max);
        out.ids = {res.id};
        out.objective = res.objective;
        return out;
    }
    const auto cands = top_s_candidates(cb, cfg.radio, cfg.geometry, scene.users, &scene.mask,
                                        cfg.selection.top_s, p_max);
    const auto jr = joint_label_search(cb, cfg.radio, cfg.geometry, scene.users, &scene.mask,
                                       effective_alpha(cfg), p_max, cfg.power.noise_watt(),
                                       cands, cfg.selection.joint);
    out.ids = jr.ids;
    out.objective = jr.sum_rate;
    return out;
}

double scene_objective(const ScenarioConfig& cfg, const Scene& scene, const Codebook& cb,
                       std::span<const int> ids) {
    if (ids.size() != static_cast<std::size_t>(cfg.users.count))
        throw std::invalid_argument("scene_objective: one id per user required");
    for (int id : ids)
        if (id < 0 || id >= cb.size())
            throw std::invalid_argument("scene_objective: id outside the codebook");
    const PaLayout& layout = cb.codewords[ids[0]];
    if (cfg.users.count == 1) {
        const auto col = blockage_column(scene.mask, 0);
        const auto e = effective_channel(cfg.radio, cfg.geometry, layout,
                                         scene.users.positions[0], col);
        double norm2 = 0;
        for (const cplx& v : e) norm2 += std::norm(v);
        return cfg.power.max_watt() * norm2;
    }
    const CMat H = channel_matrix(cfg, scene, layout);
    const CMat W = mmse_weights(H, cfg.power.noise_watt(), cfg.power.max_watt(),
                                effective_alpha(cfg));
    const auto sinr = sinr_all(H, W, effective_alpha(cfg), cfg.power.noise_watt());
    return rates(sinr).sum_rate;
}

DatasetFile load_dataset_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open dataset: " + path);
    DatasetFile df;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ConfigError(strfmt("%s:%zu: %s", path.c_str(), lineno, e.what()));
        }
        try {
            if (!have_header) {
                if (j.value("type", "") != "header" || j.value("v", 0) != 1)
                    throw ConfigError(path + ": first line must be the v1 header");
                df.codebook_size = j.at("codebook_size").get<int>();
                df.users = j.at("users").get<int>();
                df.feature_len = j.at("feature_len").get<std::size_t>();
                have_header = true;
                continue;
            }
            TrainingSample s;
            s.features = j.at("features").get<std::vector<double>>();
            s.labels = j.at("labels").get<std::vector<int>>();
            s.seed = j.at("seed").get<std::uint64_t>();
            s.objective = j.at("objective").get<double>();
            s.split = j.at("split").get<std::string>();
            for (const auto& p : j.at("positions"))
                s.user_positions.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                                            p.at(2).get<double>()});
            if (s.features.size() != df.feature_len)
                throw ConfigError(strfmt("%s:%zu: feature length mismatch", path.c_str(), lineno));
            if (s.labels.size() != static_cast<std::size_t>(df.users))
                throw ConfigError(strfmt("%s:%zu: label count mismatch", path.c_str(), lineno));
            for (int id : s.labels)
                if (id < 0 || id >= df.codebook_size)
                    throw ConfigError(strfmt("%s:%zu: label outside the codebook", path.c_str(),
                                              lineno));
            if (s.split != "train" && s.split != "val" && s.split != "test")
                throw ConfigError(strfmt("%s:%zu: unknown split tag", path.c_str(), lineno));
            df.samples.push_back(std::move(s));
        } catch (const json::exception& e) {
            throw ConfigError(strfmt("%s:%zu: %s", path.c_str(), lineno, e.what()));
        }
    }
    if (!have_header) throw ConfigError(path + ": missing header line");
    return df;
}

std::vector<TimingPoint> probe_selection_timing(const ScenarioConfig& cfg,
                                                std::span<const int> sizes, int repeats) {
    if (repeats < 1) throw std::invalid_argument("probe_selection_timing: repeats must be >= 1");
    const Scene sc = build_scene(cfg, substream_seed(cfg.seed, "timing.scene", 0));
    const auto alpha = effective_alpha(cfg);
    const double p_max = cfg.power.max_watt();
    const double probe_sigma2 = dbm_to_watt(cfg.probe_noise_dbm);
    volatile long sink = 0;
    std::vector<TimingPoint> points;
    for (int g : sizes) {
        CodebookOptions opts = cfg.codebook;
        opts.pattern = CodebookOptions::Pattern::uniform_offset;
        opts.grid_points = g;
        const Codebook cb =
            generate_grid_codebook(cfg.geometry, cfg.radio, opts, sc.users.positions);
        double total = 0;
        for (int r = 0; r < repeats; ++r) {
            const auto t0 = Clock::now();
            const auto rep = probe_sweep(cb, cfg.radio, cfg.geometry, sc.users, &sc.mask, alpha,
                                         p_max, probe_sigma2,
                                         substream_seed(cfg.seed, "timing.noise", r));
            long chosen = 0;
            for (int k = 0; k < rep.num_users; ++k) {
                int best = 0;
                for (int f = 1; f < rep.num_codewords; ++f)
                    if (rep.power.at(f, k) > rep.power.at(best, k)) best = f;
                chosen += best;
            }
            sink = sink + chosen;
            total += std::chrono::duration<double>(Clock::now() - t0).count();
        }
        points.push_back({cb.size(), total / repeats});
    }
    return points;
}

int cmd_simulate(const CommandArgs& args) {
    RunContext rc = begin_run(args);
    const ScenarioConfig& cfg = rc.cfg;
    const Scene sc = build_scene(cfg, substream_seed(cfg.seed, "sample", 0));
    const Codebook cb = scene_codebook(cfg, sc);
    const auto alpha = effective_alpha(cfg);
    const double p_max = cfg.power.max_watt();

    {
        CsvWriter w(rc.out + "/scene.csv");
        w.row({"slot", "user", "x", "y"});
        for (std::size_t k = 0; k < sc.tracks.size(); ++k)
            for (std::size_t t = 0; t < sc.tracks[k].size(); ++t)
                w.row({std::to_string(t), std::to_string(k), format_double(sc.tracks[k][t].x),
                       format_double(sc.tracks[k][t].y)});
        rc.outputs.push_back("scene.csv");
    }

    const auto probe = probe_sweep(cb, cfg.radio, cfg.geometry, sc.users, &sc.mask, alpha, p_max,
                                   dbm_to_watt(cfg.probe_noise_dbm),
                                   substream_seed(sc.seed, "probe", 0));
    {
        CsvWriter w(rc.out + "/probe.csv");
        std::vector<std::string> head{"codeword"};
        for (int k = 0; k < probe.num_users; ++k) head.push_back("user_" + std::to_string(k));
        w.row(head);
        for (int f = 0; f < probe.num_codewords; ++f) {
            std::vector<std::string> cells{std::to_string(f)};
            for (int k = 0; k < probe.num_users; ++k)
                cells.push_back(format_double(probe.power.at(f, k)));
            w.row(cells);
        }
        rc.outputs.push_back("probe.csv");
    }

    const auto cands = top_s_candidates(cb, cfg.radio, cfg.geometry, sc.users, &sc.mask,
                                        cfg.selection.top_s, p_max);
    const SceneLabels labels = label_scene(cfg, sc, cb);
    {
        CsvWriter w(rc.out + "/selection.csv");
        w.row({"user", "x", "y", "chosen", "top_s"});
        for (int k = 0; k < cfg.users.count; ++k) {
            std::string shortlist;
            for (std::size_t i = 0; i < cands[k].size(); ++i)
                shortlist += (i == 0 ? "" : ";") + std::to_string(cands[k][i]);
            w.row({std::to_string(k), format_double(sc.users.positions[k].x),
                   format_double(sc.users.positions[k].y), std::to_string(labels.ids[k]),
                   shortlist});
        }
        rc.outputs.push_back("selection.csv");
    }

    {
        const PaLayout& layout = cb.codewords[labels.ids[0]];
        const CMat H = channel_matrix(cfg, sc, layout);
        const CMat W = weights_for(cfg, H);
        const auto sinr = sinr_all(H, W, alpha, cfg.power.noise_watt());
        const auto rs = rates(sinr);
        const auto ok = check_rate_floor(rs.rate, cfg.power.min_rate());
        CsvWriter w(rc.out + "/rates.csv");
        w.row({"user", "sinr_db", "rate", "meets_floor"});
        for (std::size_t k = 0; k < sinr.size(); ++k)
            w.row({std::to_string(k), format_double(10.0 * std::log10(sinr[k])),
                   format_double(rs.rate[k]), ok[k] ? "1" : "0"});
        w.row({"sum", "", format_double(rs.sum_rate), ""});
        rc.outputs.push_back("rates.csv");
    }

    save_codebook_json(cb, rc.out + "/codebook.json");
    rc.outputs.push_back("codebook.json");
    finish_run(rc, "simulate");
    return 0;
}

int cmd_dataset(const CommandArgs& args) {
    RunContext rc = begin_run(args);
    const ScenarioConfig& cfg = rc.cfg;
    const int n = cfg.dataset.samples;
    const int n_train = static_cast<int>(std::floor(cfg.dataset.split_train * n));
    const int n_val = static_cast<int>(std::floor(cfg.dataset.split_val * n));

    std::ofstream out(rc.out + "/dataset.jsonl", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write dataset in " + rc.out);
    CsvWriter summary(rc.out + "/labels.csv");
    {
        std::vector<std::string> head{"sample", "split", "seed", "objective"};
        for (int k = 0; k < cfg.users.count; ++k) head.push_back("id_" + std::to_string(k));
        summary.row(head);
    }

    bool wrote_header = false;
    for (int i = 0; i < n; ++i) {
        const std::uint64_t scene_seed = substream_seed(cfg.seed, "sample", i);
        const Scene sc = build_scene(cfg, scene_seed);
        const Codebook cb = scene_codebook(cfg, sc);
        const SceneLabels labels = label_scene(cfg, sc, cb);
        if (!wrote_header) {
            json h{{"v", 1},
                   {"type", "header"},
                   {"codebook_size", cb.size()},
                   {"users", cfg.users.count},
                   {"feature_len", sc.features.size()},
                   {"samples", n}};
            out << h.dump() << '\n';
            wrote_header = true;
        }
        const std::string split = i < n_train ? "train" : (i < n_train + n_val ? "val" : "test");
        json positions = json::array();
        for (const Vec3& p : sc.users.positions) positions.push_back({p.x, p.y, p.z});
        json j{{"v", 1},           {"seed", scene_seed},
               {"split", split},   {"labels", labels.ids},
               {"objective", labels.objective}, {"features", sc.features},
               {"positions", positions}};
        out << j.dump() << '\n';

        std::vector<std::string> cells{std::to_string(i), split, std::to_string(scene_seed),
                                       format_double(labels.objective)};
        for (int id : labels.ids) cells.push_back(std::to_string(id));
        summary.row(cells);
    }
    summary.finish();
    rc.outputs.push_back("dataset.jsonl");
    rc.outputs.push_back("labels.csv");
    finish_run(rc, "dataset");
    return 0;
}

int cmd_train(const CommandArgs& args) {
    RunContext rc = begin_run(args);
    const ScenarioConfig& cfg = rc.cfg;
    const DatasetFile df = load_dataset_jsonl(rc.out + "/dataset.jsonl");
    if (df.users != cfg.users.count)
        throw ConfigError("train: dataset user count does not match the config");
    const PredictorArch arch = cfg.make_arch(df.codebook_size);
    if (static_cast<std::size_t>(arch.input_dim()) != df.feature_len)
        throw ConfigError("train: dataset feature length does not match the config window");

    std::vector<TrainingSample> train_set, val_set;
    for (const TrainingSample& s : df.samples) {
        if (s.split == "train") train_set.push_back(s);
        if (s.split == "val") val_set.push_back(s);
    }
    if (train_set.empty()) throw ConfigError("train: dataset has no train split");

    PredictorParams params = init_params(arch, cfg.seed);
    TrainHyper hyper = cfg.train;
    hyper.seed = cfg.seed;
    const TrainReport report = train(params, train_set, hyper);
    save_params_json(params, rc.out + "/params.json");
    rc.outputs.push_back("params.json");

    {
        CsvWriter w(rc.out + "/train_log.csv");
        std::vector<std::string> head{"epoch", "weighted_loss"};
        for (int k = 0; k < arch.users; ++k) head.push_back("loss_" + std::to_string(k));
        for (int k = 0; k < arch.users; ++k) head.push_back("weight_" + std::to_string(k));
        w.row(head);
        for (int e = 0; e < hyper.epochs; ++e) {
            std::vector<std::string> cells{std::to_string(e + 1),
                                           format_double(report.total_loss[e])};
            for (int k = 0; k < arch.users; ++k)
                cells.push_back(format_double(report.per_user_loss.at(e, k)));
            for (int k = 0; k < arch.users; ++k)
                cells.push_back(format_double(report.theta_weights.at(e, k)));
            w.row(cells);
        }
        rc.outputs.push_back("train_log.csv");
    }

    if (!val_set.empty()) {
        const EvalTable table = evaluate(params, val_set, cfg.eval_s);
        CsvWriter w(rc.out + "/val_eval.csv");
        w.row({"s", "accuracy"});
        for (std::size_t i = 0; i < table.s_values.size(); ++i)
            w.row({std::to_string(table.s_values[i]), format_double(table.accuracy[i])});
        rc.outputs.push_back("val_eval.csv");
    }
    finish_run(rc, "train");
    return 0;
}

int cmd_eval(const CommandArgs& args) {
    RunContext rc = begin_run(args);
    const ScenarioConfig& cfg = rc.cfg;
    if (args.mode != "oracle" && args.mode != "trained" && args.mode != "random")
        throw ConfigError("eval: --mode must be oracle, trained or random");
    const DatasetFile df = load_dataset_jsonl(rc.out + "/dataset.jsonl");
    std::vector<TrainingSample> test_set;
    for (const TrainingSample& s : df.samples)
        if (s.split == "test") test_set.push_back(s);
    if (test_set.empty()) throw ConfigError("eval: dataset has no test split");

    PredictorParams params;
    if (args.mode == "trained") {
        params = load_params_json(rc.out + "/params.json");
        if (params.arch.users != df.users || params.arch.codebook_size != df.codebook_size ||
            static_cast<std::size_t>(params.arch.input_dim()) != df.feature_len)
            throw ConfigError("eval: stored parameters do not match the dataset");
    }

    const int K = df.users;
    const int F = df.codebook_size;
    std::vector<std::vector<int>> rankings;
    std::vector<int> truths;
    double ratio_sum = 0;
    std::size_t ratio_n = 0;

    for (std::size_t idx = 0; idx < test_set.size(); ++idx) {
        const TrainingSample& s = test_set[idx];
        const Scene sc = build_scene(cfg, s.seed);
        const Codebook cb = scene_codebook(cfg, sc);
        std::vector<int> top1(K, 0);
        if (args.mode == "oracle") {
            const SceneLabels relabel = label_scene(cfg, sc, cb);
            const double tol = 1e-9 * std::max(1.0, std::abs(s.objective));
            if (relabel.ids != s.labels || std::abs(relabel.objective - s.objective) > tol)
                throw PropertyViolation(strfmt(
                    "eval: stored labels fail to reproduce for sample seed %llu",
                    static_cast<unsigned long long>(s.seed)));
            for (int u = 0; u < K; ++u) {
                std::vector<int> rank{relabel.ids[u]};
                for (int f = 0; f < F; ++f)
                    if (f != relabel.ids[u]) rank.push_back(f);
                rankings.push_back(std::move(rank));
                truths.push_back(s.labels[u]);
                top1[u] = relabel.ids[u];
            }
        } else if (args.mode == "random") {
            for (int u = 0; u < K; ++u) {
                Rng rng = substream(cfg.seed, "eval.random", idx * K + u);
                Prediction pr = random_prediction(F, rng);
                top1[u] = pr.ranking.front();
                rankings.push_back(std::move(pr.ranking));
                truths.push_back(s.labels[u]);
            }
        } else {
            const auto preds = predict(params, s.features);
            for (int u = 0; u < K; ++u) {
                top1[u] = preds[u].ranking.front();
                rankings.push_back(preds[u].ranking);
                truths.push_back(s.labels[u]);
            }
        }
        if (s.objective > 0) {
            ratio_sum += scene_objective(cfg, sc, cb, top1) / s.objective;
            ++ratio_n;
        }
    }

    CsvWriter w(rc.out + "/eval.csv");
    w.row({"mode", "metric", "s", "value"});
    for (int s : cfg.eval_s)
        w.row({args.mode, "top_s_accuracy", std::to_string(s),
               format_double(top_s_accuracy(rankings, truths, s))});
    if (ratio_n > 0)
        w.row({args.mode, "objective_ratio", "",
               format_double(ratio_sum / static_cast<double>(ratio_n))});
    w.finish();
    rc.outputs.push_back("eval.csv");
    finish_run(rc, "eval");
    return 0;
}

int cmd_outage(const CommandArgs& args) {
    RunContext rc = begin_run(args);
    const ScenarioConfig& cfg = rc.cfg;
    OutageSpec spec;
    spec.rate_floor = cfg.outage.rate_floor;
    spec.power_watt = cfg.power.max_watt();
    spec.noise_watt = cfg.power.noise_watt();
    spec.eta = cfg.radio.eta();
    const DistanceFn pass_d = pass_distance(cfg.geometry);
    const DistanceFn conv_d = conventional_distance(cfg.geometry, cfg.outage.user_x);

    std::vector<double> pass_curve, conv_curve;
    CsvWriter w(rc.out + "/outage.csv");
    w.row({"density", "mc_estimate", "mc_ci95", "closed_high_snr", "closed_full",
           "conventional", "mc_within_ci"});
    for (std::size_t i = 0; i < cfg.outage.densities.size(); ++i) {
        spec.blockage_density = cfg.outage.densities[i];
        const auto mc = outage_monte_carlo(spec, cfg.geometry, pass_d, cfg.outage.trials,
                                           substream_seed(cfg.seed, "outage.mc", i));
        const double closed = outage_high_snr(spec, cfg.geometry, pass_d);
        const double full = outage_full(spec, cfg.geometry, pass_d);
        const double conv = outage_high_snr(spec, cfg.geometry, conv_d);
        pass_curve.push_back(closed);
        conv_curve.push_back(conv);
        const bool within = std::abs(mc.p_hat - full) <= mc.ci_halfwidth;
        w.row({format_double(spec.blockage_density), format_double(mc.p_hat),
               format_double(mc.ci_halfwidth), format_double(closed), format_double(full),
               format_double(conv), within ? "1" : "0"});
    }
    w.finish();
    rc.outputs.push_back("outage.csv");

    if (!outage_dominates(pass_curve, conv_curve, 1e-12))
        throw PropertyViolation("outage: sliding elements failed to dominate the fixed antenna");
    finish_run(rc, "outage");
    return 0;
}

int cmd_sweep(const CommandArgs& args) {
    RunContext rc = begin_run(args);
    const ScenarioConfig& cfg = rc.cfg;
    const bool needs_params =
        std::find(cfg.sweep.modes.begin(), cfg.sweep.modes.end(), "trained") !=
        cfg.sweep.modes.end();
    PredictorParams params;
    if (needs_params) params = load_params_json(rc.out + "/params.json");

    CsvWriter w(rc.out + "/sweep.csv");
    w.row({"axis", "value", "mode", "mean_sum_rate", "floor_fraction"});
    for (std::size_t vi = 0; vi < cfg.sweep.values.size(); ++vi) {
        const double v = cfg.sweep.values[vi];
        ScenarioConfig c2 = cfg;
        if (cfg.sweep.axis == "power")
            c2.power.max_dbm = v;
        else if (cfg.sweep.axis == "snr")
            c2.power.noise_dbm = c2.power.max_dbm - v;
        else if (cfg.sweep.axis == "min_sinr")
            c2.power.min_sinr_db = v;
        else if (cfg.sweep.axis == "elements")
            c2.geometry.pas_per_waveguide = static_cast<int>(v);
        else
            c2.codebook.grid_points = static_cast<int>(v);
        c2.validate();

        for (const std::string& mode : cfg.sweep.modes) {
            double sum_rate = 0, floor_frac = 0;
            for (int s = 0; s < cfg.sweep.scenes; ++s) {
                const Scene sc = build_scene(c2, substream_seed(cfg.seed, "sweep.scene", s));
                PaLayout layout;
                if (mode == "fixed") {
                    layout = PaLayout::uniform_grid(c2.geometry);
                } else {
                    const Codebook cb = scene_codebook(c2, sc);
                    if (mode == "oracle") {
                        layout = cb.codewords[label_scene(c2, sc, cb).ids[0]];
                    } else if (mode == "random") {
                        Rng rng = substream(cfg.seed, "sweep.random",
                                            vi * cfg.sweep.scenes + s);
                        layout = cb.codewords[rng.below(cb.size())];
                    } else {
                        if (params.arch.users != c2.users.count ||
                            params.arch.codebook_size != cb.size() ||
                            static_cast<std::size_t>(params.arch.input_dim()) !=
                                sc.features.size())
                            throw ConfigError(
                                "sweep: stored parameters do not match this sweep point");
                        const auto preds = predict(params, sc.features);
                        layout = cb.codewords[preds[0].ranking.front()];
                    }
                }
                const LayoutMetric m = layout_metric(c2, sc, layout);
                sum_rate += m.sum_rate;
                floor_frac += m.floor_fraction;
            }
            w.row({cfg.sweep.axis, format_double(v), mode,
                   format_double(sum_rate / cfg.sweep.scenes),
                   format_double(floor_frac / cfg.sweep.scenes)});
        }
    }
    w.finish();
    rc.outputs.push_back("sweep.csv");
    finish_run(rc, "sweep");
    return 0;
}

}  // namespace passlab
