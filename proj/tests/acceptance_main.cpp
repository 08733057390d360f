// SPDX-License-Identifier: Apache-2.0
// Release gate. Each check prints exactly one [PASS]/[FAIL] line; the process
// exits nonzero if any check fails. Tolerances are pinned here on purpose.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "passlab/analysis.hpp"
#include "passlab/beamforming.hpp"
#include "passlab/channel.hpp"
#include "passlab/codebook.hpp"
#include "passlab/commands.hpp"
#include "passlab/config.hpp"
#include "passlab/io.hpp"
#include "passlab/predictor.hpp"
#include "passlab/rng.hpp"
#include "passlab/tokens.hpp"

using namespace passlab;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(bool ok, const char* name, const std::string& detail) {
    std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    if (!ok) ++failures;
}

void guarded(const char* name, const std::function<void(const char*)>& body) {
    try {
        body(name);
    } catch (const std::exception& e) {
        report(false, name, std::string("exception: ") + e.what());
    }
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

SystemGeometry desk_geometry(int elements = 16) {
    SystemGeometry g;
    g.num_waveguides = 4;
    g.pas_per_waveguide = elements;
    g.waveguide_length = 30.0;
    g.region_depth = 12.0;
    g.mount_height = 10.0;
    g.waveguide_spacing = 3.0;
    g.min_pa_spacing = 0.5;
    return g;
}

RadioConfig desk_radio() {
    RadioConfig r;
    r.carrier_freq_hz = 15e9;
    r.lightspeed = 3e8;
    r.n_eff = 1.4;
    return r;
}

double channel_gain(const RadioConfig& r, const SystemGeometry& g, const PaLayout& lay,
                    const Vec3& user, double p_max) {
    const auto e = effective_channel(r, g, lay, user);
    double n2 = 0;
    for (const auto& v : e) n2 += std::norm(v);
    return p_max * n2;
}

// 1: library exhaustive search against an independent rescan of every codeword
void check_oracle_equivalence(const char* name) {
    const SystemGeometry g = desk_geometry();
    const RadioConfig r = desk_radio();
    CodebookOptions opts;
    opts.grid_points = 16;
    Rng rng(101);
    std::vector<Vec3> targets;
    for (int i = 0; i < 4; ++i)
        targets.push_back({rng.uniform(0.0, 30.0), rng.uniform(0.0, 12.0), 0.0});
    const Codebook cb = generate_grid_codebook(g, r, opts, targets);

    const auto t0 = Clock::now();
    int mismatches = 0;
    const int instances = 120;
    for (int i = 0; i < instances; ++i) {
        const Vec3 user{rng.uniform(0.0, 30.0), rng.uniform(0.0, 12.0), 0.0};
        const auto res = oracle_best_codeword(cb, r, g, user, {}, Objective::gain_mrt, 0.1);
        int best = 0;
        double best_gain = -1;
        for (int f = 0; f < cb.size(); ++f) {
            const double gain = channel_gain(r, g, cb.codewords[f], user, 0.1);
            if (gain > best_gain) {
                best_gain = gain;
                best = f;
            }
        }
        if (res.id != best) ++mismatches;
    }
    const double dt = seconds_since(t0);
    report(mismatches == 0 && dt < 5.0, name,
           strfmt("%d instances, %d mismatches, %.2fs < 5s", instances, mismatches, dt));
}

// 2: no random unit-power vector may beat matched transmission
void check_mrt_optimality(const char* name) {
    Rng rng(202);
    int violations = 0;
    for (int inst = 0; inst < 10; ++inst) {
        std::vector<cplx> e(4);
        for (auto& v : e) v = rng.cnormal(1.0);
        const double p = 0.1;
        const double top = beamforming_gain(e, mrt_weights(e, p));
        for (int probe = 0; probe < 1000; ++probe) {
            std::vector<cplx> w(4);
            double n2 = 0;
            for (auto& v : w) {
                v = rng.cnormal(1.0);
                n2 += std::norm(v);
            }
            const double s = std::sqrt(p / n2);
            for (auto& v : w) v *= s;
            if (beamforming_gain(e, w) > top * (1.0 + 1e-12)) ++violations;
        }
    }
    report(violations == 0, name,
           strfmt("10 channels x 1000 random probes, %d beat the matched beam", violations));
}

// 3: the regularised inverse collapses to zero forcing as noise vanishes
void check_zero_forcing_limit(const char* name) {
    Rng rng(303);
    double worst = 0;
    for (int inst = 0; inst < 20; ++inst) {
        CMat H(4, 4);
        for (auto& v : H.a) v = rng.cnormal(1.0);
        const auto alpha = PowerConfig::uniform_alpha(4);
        const CMat W = mmse_weights(H, 1e-9, 1.0, alpha);
        const CMat HW = matmul(H, W);
        double min_diag = 1e300, max_off = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double m = std::abs(HW.at(i, j));
                if (i == j)
                    min_diag = std::min(min_diag, m);
                else
                    max_off = std::max(max_off, m);
            }
        worst = std::max(worst, max_off / min_diag);
    }
    report(worst < 1e-4, name, strfmt("worst off/diag ratio %.2e < 1e-4", worst));
}

// 4: monte carlo outage stays inside its 95% interval around the closed form
void check_outage_calibration(const char* name) {
    const SystemGeometry g = desk_geometry();
    const DistanceFn d = pass_distance(g);
    OutageSpec spec;
    spec.rate_floor = 1.0;
    spec.power_watt = 0.1;
    spec.noise_watt = 1e-11;
    spec.eta = desk_radio().eta();
    const auto t0 = Clock::now();
    int outside = 0;
    std::string detail;
    const std::vector<double> densities{0.01, 0.05, 0.1, 0.5};
    for (std::size_t i = 0; i < densities.size(); ++i) {
        spec.blockage_density = densities[i];
        const double closed = outage_full(spec, g, d);
        const auto mc =
            outage_monte_carlo(spec, g, d, 200000, substream_seed(4040, "mc", i));
        if (std::abs(mc.p_hat - closed) > mc.ci_halfwidth) ++outside;
    }
    const double dt = seconds_since(t0);
    report(outside == 0 && dt < 30.0, name,
           strfmt("4 densities x 200k trials, %d outside the interval, %.2fs < 30s", outside, dt));
}

// 5: with power far above the distance threshold the regimes coincide
void check_high_snr_agreement(const char* name) {
    const SystemGeometry g = desk_geometry();
    const DistanceFn d = pass_distance(g);
    OutageSpec spec;
    spec.rate_floor = 1.0;
    spec.power_watt = 0.1;
    spec.noise_watt = 1e-11;
    spec.eta = desk_radio().eta();
    spec.blockage_density = 0.1;
    const double p_crit = threshold_critical_power(spec, g, d);
    spec.power_watt = 1000.0 * p_crit;
    const double full = outage_full(spec, g, d);
    const double high = outage_high_snr(spec, g, d);
    const double rel = std::abs(full - high) / high;
    report(rel <= 0.01, name,
           strfmt("relative gap %.2e <= 1%% at 1000x the critical power", rel));
}

// 6: best-codeword gain grows strictly with the element count and beats the
// unselected reference grid
void check_gain_growth(const char* name) {
    const RadioConfig r = desk_radio();
    Rng rng(606);
    std::vector<Vec3> users;
    for (int i = 0; i < 20; ++i)
        users.push_back({rng.uniform(2.0, 28.0), rng.uniform(0.0, 12.0), 0.0});

    std::vector<double> mean_best, mean_fixed;
    for (int L : {4, 8, 16, 32}) {
        const SystemGeometry g = desk_geometry(L);
        const PaLayout grid = PaLayout::uniform_grid(g);
        double sum_best = 0, sum_fixed = 0;
        for (const Vec3& u : users) {
            CodebookOptions opts;
            opts.grid_points = 16;
            const std::vector<Vec3> tgt{u};
            const Codebook cb = generate_grid_codebook(g, r, opts, tgt);
            sum_best += oracle_best_codeword(cb, r, g, u, {}, Objective::gain_mrt, 0.1).objective;
            sum_fixed += channel_gain(r, g, grid, u, 0.1);
        }
        mean_best.push_back(sum_best / users.size());
        mean_fixed.push_back(sum_fixed / users.size());
    }
    bool increasing = true;
    for (std::size_t i = 1; i < mean_best.size(); ++i)
        increasing = increasing && mean_best[i] > mean_best[i - 1];
    bool beats_fixed = true;
    for (std::size_t i = 0; i < mean_best.size(); ++i)
        beats_fixed = beats_fixed && mean_best[i] > mean_fixed[i];
    report(increasing && beats_fixed, name,
           strfmt("mean gains %.3e/%.3e/%.3e/%.3e for 4/8/16/32 elements, fixed grid %.3e at 32",
                  mean_best[0], mean_best[1], mean_best[2], mean_best[3], mean_fixed[3]));
}

// 7: shortlist accuracy is monotone in S and a random ranker sits at chance
void check_shortlist_calibration(const char* name) {
    const int F = 16;
    const int n = 500;
    Rng rng(707);
    std::vector<std::vector<int>> rankings;
    std::vector<int> truths;
    for (int i = 0; i < n; ++i) {
        rankings.push_back(random_prediction(F, rng).ranking);
        truths.push_back(static_cast<int>(rng.below(F)));
    }
    bool monotone = true;
    double prev = -1;
    for (int S : {1, 2, 4, 8, 16}) {
        const double acc = top_s_accuracy(rankings, truths, S);
        monotone = monotone && acc >= prev;
        prev = acc;
    }
    const double top1 = top_s_accuracy(rankings, truths, 1);
    const double p = 1.0 / F;
    const double ci = 1.96 * std::sqrt(p * (1.0 - p) / n);
    const bool at_chance = std::abs(top1 - p) <= ci;
    report(monotone && at_chance, name,
           strfmt("random top-1 %.4f within %.4f of 1/16, accuracy monotone in S", top1, ci));
}

std::vector<TrainingSample> make_learning_set(const ScenarioConfig& cfg, int n) {
    std::vector<TrainingSample> out;
    for (int i = 0; i < n; ++i) {
        const std::uint64_t seed = substream_seed(cfg.seed, "sample", i);
        const Scene sc = build_scene(cfg, seed);
        const Codebook cb = scene_codebook(cfg, sc);
        const SceneLabels lab = label_scene(cfg, sc, cb);
        TrainingSample s;
        s.features = sc.features;
        s.labels = lab.ids;
        s.seed = seed;
        s.objective = lab.objective;
        s.split = i < (n * 8) / 10 ? "train" : "test";
        out.push_back(std::move(s));
    }
    return out;
}

// 8: the trained selector clears 4x the random baseline within the budget
void check_selector_learns(const char* name) {
    ScenarioConfig cfg = parse_config(R"({
        "seed": 808,
        "users": {"count": 1},
        "dataset": {"samples": 320},
        "train": {"epochs": 120, "batch": 32, "learning_rate": 0.1}
    })");
    const auto samples = make_learning_set(cfg, cfg.dataset.samples);
    std::vector<TrainingSample> train_set, test_set;
    for (const auto& s : samples)
        (s.split == "train" ? train_set : test_set).push_back(s);

    const int F = 16;
    const PredictorArch arch = cfg.make_arch(F);
    PredictorParams params = init_params(arch, cfg.seed);
    TrainHyper hyper = cfg.train;
    hyper.seed = cfg.seed;
    const auto t0 = Clock::now();
    const TrainReport rep = train(params, train_set, hyper);
    const double train_s = seconds_since(t0);

    const std::vector<int> s_values{1};
    const EvalTable table = evaluate(params, test_set, s_values);
    const double trained_top1 = table.accuracy[0];

    // random baseline averaged over many rankings per test instance
    Rng rng(substream_seed(cfg.seed, "acceptance.random", 0));
    double random_top1 = 0;
    const int draws = 50;
    for (const auto& s : test_set)
        for (int dIdx = 0; dIdx < draws; ++dIdx)
            random_top1 += random_prediction(F, rng).ranking.front() == s.labels[0];
    random_top1 /= static_cast<double>(test_set.size() * draws);

    const double drop = rep.total_loss.back() / rep.total_loss.front();
    const bool ok = trained_top1 >= 4.0 * random_top1 && drop <= 0.5 && train_s < 60.0;
    report(ok, name,
           strfmt("top-1 %.3f vs random %.3f, loss ratio %.2f <= 0.5, train %.1fs < 60s",
                  trained_top1, random_top1, drop, train_s));
}

// 9: analytic gradients agree with central differences for both head layouts
void check_gradients(const char* name) {
    double worst = 0;
    for (int experts : {0, 2}) {
        PredictorArch a;
        a.users = 2;
        a.codebook_size = 4;
        a.n_patches = 2;
        a.patch_len = 3;
        a.embed_dim = 2;
        a.hidden = 5;
        a.experts = experts;
        a.rho = 0.8;
        const PredictorParams params = init_params(a, 909);
        Rng rng(910);
        std::vector<TrainingSample> samples(3);
        for (auto& s : samples) {
            for (int j = 0; j < a.input_dim(); ++j) s.features.push_back(rng.uniform(-1.0, 1.0));
            for (int u = 0; u < a.users; ++u)
                s.labels.push_back(static_cast<int>(rng.below(a.codebook_size)));
        }
        const std::vector<double> w{1.2, 0.8};
        worst = std::max(worst, finite_difference_check(params, samples, w));
    }
    report(worst < 1e-3, name, strfmt("max relative error %.2e < 1e-3", worst));
}

// 10: normalisation inverts exactly and the patch count formula is exact
void check_window_invariants(const char* name) {
    Rng rng(1010);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        BoundingBoxSeries b;
        b.resize(13);
        for (auto& row : b.rows)
            for (auto& v : row) v = rng.uniform(-10.0, 10.0);
        RevinStats st;
        const auto norm = revin_normalize(b, st);
        const auto back = revin_denormalize(norm, st);
        for (int r = 0; r < 4; ++r)
            for (std::size_t t = 0; t < 13; ++t)
                worst = std::max(worst, std::abs(back.rows[r][t] - b.rows[r][t]));
    }
    const bool counts = patch_count(13, 4, 3) == 4 && patch_count(80, 16, 8) == 9 &&
                        patch_count(7, 4, 3) == 2 && patch_count(4, 4, 1) == 1 &&
                        patch_count(3, 4, 3) == 0;
    report(worst <= 1e-10 && counts, name,
           strfmt("round-trip error %.2e <= 1e-10, counts exact", worst));
}

// 11: identical config and seed give identical bytes on disk
void check_determinism(const char* name) {
    const fs::path root = fs::temp_directory_path() / "passlab_acceptance_det";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::string cfg_path = (root / "cfg.json").string();
    std::ofstream(cfg_path) << R"({
        "users": {"count": 2},
        "codebook": {"grid_points": 8},
        "dataset": {"samples": 12}
    })";
    CommandArgs args;
    args.config_path = cfg_path;
    args.has_seed = true;
    args.seed = 1111;
    args.out_dir = (root / "a").string();
    cmd_dataset(args);
    args.out_dir = (root / "b").string();
    cmd_dataset(args);
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const bool same_data = slurp(root / "a/dataset.jsonl") == slurp(root / "b/dataset.jsonl");
    const bool same_labels = slurp(root / "a/labels.csv") == slurp(root / "b/labels.csv");
    fs::remove_all(root);
    report(same_data && same_labels, name,
           strfmt("dataset bytes equal: %d, label bytes equal: %d", same_data ? 1 : 0,
                  same_labels ? 1 : 0));
}

// 12: probe plus selection cost scales near-linearly with the codebook size
void check_probe_scaling(const char* name) {
    ScenarioConfig cfg = default_config();
    cfg.seed = 1212;
    const std::vector<int> sizes{16, 64, 256, 1024};
    const auto points = probe_selection_timing(cfg, sizes, 3);
    std::vector<double> lx, ly;
    for (const auto& p : points) {
        lx.push_back(std::log(static_cast<double>(p.codebook_size)));
        ly.push_back(std::log(std::max(p.seconds, 1e-9)));
    }
    const std::size_t n = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
        syy += ly[i] * ly[i];
    }
    const double cov = sxy - sx * sy / n;
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    const double slope = cov / vx;
    const double r2 = cov * cov / (vx * vy);
    report(r2 > 0.9, name,
           strfmt("log-log slope %.2f, R^2 %.3f > 0.9 over sizes 16..1024", slope, r2));
}

}  // namespace

int main() {
    guarded("exhaustive search equivalence", check_oracle_equivalence);
    guarded("matched transmission optimality", check_mrt_optimality);
    guarded("zero-forcing limit", check_zero_forcing_limit);
    guarded("outage monte carlo calibration", check_outage_calibration);
    guarded("high-snr regime agreement", check_high_snr_agreement);
    guarded("gain growth with element count", check_gain_growth);
    guarded("shortlist calibration", check_shortlist_calibration);
    guarded("selector learns above chance", check_selector_learns);
    guarded("analytic gradients", check_gradients);
    guarded("window pipeline invariants", check_window_invariants);
    guarded("bitwise determinism", check_determinism);
    guarded("probe cost scaling", check_probe_scaling);
    if (failures > 0) {
        std::printf("%d acceptance check(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance checks passed\n");
    return 0;
}
