// SPDX-License-Identifier: Apache-2.0
#include "passlab/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace passlab {

namespace {

double channel_norm2(const std::vector<cplx>& e) {
    double s = 0;
    for (const cplx& v : e) s += std::norm(v);
    return s;
}

// Largest forward nudge phase alignment can apply to one element.
double alignment_margin(const RadioConfig& radio) {
    return radio.wavelength() / (radio.n_eff - 1.0);
}

}  // namespace

Codebook generate_grid_codebook(const SystemGeometry& g, const RadioConfig& radio,
                                const CodebookOptions& opts,
                                std::span<const Vec3> align_targets) {
    g.validate();
    radio.validate();
    if (opts.grid_points < 1) throw ConfigError("codebook: grid_points must be >= 1");
    if (opts.size_cap < 1) throw ConfigError("codebook: size_cap must be >= 1");
    if (opts.phase_align && !(radio.n_eff > 1.0))
        throw ConfigError("codebook: phase alignment requires n_eff > 1");

    const int L = g.pas_per_waveguide;
    const int N = g.num_waveguides;
    const int G = opts.grid_points;
    const bool align = opts.phase_align && !align_targets.empty();
    const double margin = align ? alignment_margin(radio) : 0.0;

    double spacing = opts.cluster_spacing;
    if (spacing <= 0) spacing = g.min_pa_spacing + margin;
    if (spacing < g.min_pa_spacing)
        throw ConfigError("codebook: cluster_spacing below the geometry minimum");
    if (align && spacing < g.min_pa_spacing + margin)
        throw ConfigError(strfmt(
            "codebook: aligned combs need cluster_spacing >= %g to keep element spacing legal",
            g.min_pa_spacing + margin));

    const double span = (L - 1) * spacing + margin;
    if (span > g.waveguide_length)
        throw ConfigError("codebook: comb span exceeds the waveguide length");
    const double offset_range = g.waveguide_length - span;

    std::vector<double> offsets(G);
    for (int j = 0; j < G; ++j)
        offsets[j] = G == 1 ? 0.0 : offset_range * static_cast<double>(j) / (G - 1);

    long size = 0;
    if (opts.pattern == CodebookOptions::Pattern::uniform_offset) {
        size = G;
    } else {
        size = 1;
        for (int n = 0; n < N; ++n) {
            size *= G;
            if (size > opts.size_cap)
                throw ConfigError(strfmt("codebook: %d^%d codewords exceed the cap of %d", G, N,
                                          opts.size_cap));
        }
    }
    if (size > opts.size_cap)
        throw ConfigError(strfmt("codebook: %lld codewords exceed the cap of %d",
                                  static_cast<long long>(size), opts.size_cap));

    Codebook cb;
    cb.opts = opts;
    cb.opts.cluster_spacing = spacing;
    cb.codewords.reserve(size);

    for (long id = 0; id < size; ++id) {
        PaLayout layout(L, N);
        for (int n = 0; n < N; ++n) {
            int digit;
            if (opts.pattern == CodebookOptions::Pattern::uniform_offset) {
                digit = static_cast<int>(id);
            } else {
                // waveguide 0 owns the most significant digit
                long place = 1;
                for (int m = n + 1; m < N; ++m) place *= G;
                digit = static_cast<int>((id / place) % G);
            }
            const double base = offsets[digit];
            for (int l = 0; l < L; ++l) {
                double x = base + l * spacing;
                if (align) {
                    const Vec3& target = align_targets[id % align_targets.size()];
                    x = phase_align_position(radio, g, n, x, target);
                }
                layout.at(l, n) = x;
            }
        }
        const LayoutCheck check = validate_layout(g, layout);
        if (!check.ok)
            throw PropertyViolation(strfmt("codebook: generated codeword %d invalid: %s", id,
                                            check.message.c_str()));
        cb.codewords.push_back(std::move(layout));
    }
    return cb;
}

void save_codebook_json(const Codebook& cb, const std::string& path) {
    nlohmann::json doc;
    doc["v"] = 1;
    doc["pattern"] = cb.opts.pattern == CodebookOptions::Pattern::uniform_offset
                         ? "uniform-offset"
                         : "per-waveguide-shift";
    doc["grid_points"] = cb.opts.grid_points;
    doc["cluster_spacing"] = cb.opts.cluster_spacing;
    doc["phase_align"] = cb.opts.phase_align;
    doc["size_cap"] = cb.opts.size_cap;
    nlohmann::json words = nlohmann::json::array();
    for (std::size_t id = 0; id < cb.codewords.size(); ++id) {
        const PaLayout& layout = cb.codewords[id];
        nlohmann::json cols = nlohmann::json::array();
        for (int n = 0; n < layout.num_waveguides; ++n) {
            nlohmann::json col = nlohmann::json::array();
            for (int l = 0; l < layout.pas_per_waveguide; ++l) col.push_back(layout.at(l, n));
            cols.push_back(std::move(col));
        }
        words.push_back({{"id", id}, {"x", std::move(cols)}});
    }
    doc["codewords"] = std::move(words);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_codebook_json: cannot open " + path);
    out << doc.dump(2) << '\n';
}

Codebook load_codebook_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("load_codebook_json: cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("load_codebook_json: ") + e.what());
    }
    if (doc.value("v", 0) != 1) throw ConfigError("load_codebook_json: unsupported version");
    Codebook cb;
    const std::string pattern = doc.at("pattern").get<std::string>();
    if (pattern == "uniform-offset")
        cb.opts.pattern = CodebookOptions::Pattern::uniform_offset;
    else if (pattern == "per-waveguide-shift")
        cb.opts.pattern = CodebookOptions::Pattern::per_waveguide_shift;
    else
        throw ConfigError("load_codebook_json: unknown pattern " + pattern);
    cb.opts.grid_points = doc.at("grid_points").get<int>();
    cb.opts.cluster_spacing = doc.at("cluster_spacing").get<double>();
    cb.opts.phase_align = doc.at("phase_align").get<bool>();
    cb.opts.size_cap = doc.at("size_cap").get<int>();
    for (const auto& word : doc.at("codewords")) {
        const auto& cols = word.at("x");
        const int N = static_cast<int>(cols.size());
        const int L = N > 0 ? static_cast<int>(cols[0].size()) : 0;
        PaLayout layout(L, N);
        for (int n = 0; n < N; ++n)
            for (int l = 0; l < L; ++l) layout.at(l, n) = cols[n][l].get<double>();
        cb.codewords.push_back(std::move(layout));
    }
    return cb;
}

ProbeReport probe_sweep(const Codebook& cb, const RadioConfig& radio, const SystemGeometry& g,
                        const UserState& users, const RMat* mask, std::span<const double> alpha,
                        double p_max, double sigma2, std::uint64_t noise_seed) {
    const int F = cb.size();
    const int K = static_cast<int>(users.positions.size());
    if (alpha.size() != static_cast<std::size_t>(K))
        throw std::invalid_argument("probe_sweep: alpha length mismatch");
    if (!(sigma2 >= 0)) throw std::invalid_argument("probe_sweep: negative noise power");

    ProbeReport report;
    report.num_codewords = F;
    report.num_users = K;
    report.noise_seed = noise_seed;
    report.power = RMat(F, K);

    Rng rng(noise_seed);
    for (int t = 0; t < F; ++t) {
        for (int k = 0; k < K; ++k) {
            std::vector<double> col;
            std::span<const double> mask_col;
            if (mask != nullptr) {
                col = blockage_column(*mask, k);
                mask_col = col;
            }
            const auto e = effective_channel(radio, g, cb.codewords[t], users.positions[k], mask_col);
            cplx sum = 0;
            for (const cplx& v : e) sum += v;
            const cplx y = std::sqrt(alpha[k] * p_max) * sum +
                           (sigma2 > 0 ? rng.cnormal(sigma2) : cplx{});
            report.power.at(t, k) = std::norm(y);
        }
    }
    return report;
}

OracleResult oracle_best_codeword(const Codebook& cb, const RadioConfig& radio,
                                  const SystemGeometry& g, const Vec3& user,
                                  std::span<const double> mask_col, Objective objective,
                                  double p_max, double alpha, double sigma2) {
    if (cb.size() == 0) throw std::invalid_argument("oracle_best_codeword: empty codebook");
    OracleResult best{0, -1.0};
    for (int t = 0; t < cb.size(); ++t) {
        const auto e = effective_channel(radio, g, cb.codewords[t], user, mask_col);
        const double gain = p_max * channel_norm2(e);
        const double value = objective == Objective::gain_mrt ? gain : alpha * gain / sigma2;
        if (value > best.objective) best = {t, value};
    }
    return best;
}

std::vector<std::vector<int>> top_s_candidates(const Codebook& cb, const RadioConfig& radio,
                                               const SystemGeometry& g, const UserState& users,
                                               const RMat* mask, int S, double p_max) {
    const int F = cb.size();
    if (S < 1 || S > F) throw std::invalid_argument("top_s_candidates: S out of range");
    const int K = static_cast<int>(users.positions.size());
    std::vector<std::vector<int>> out(K);
    for (int k = 0; k < K; ++k) {
        std::vector<double> col;
        std::span<const double> mask_col;
        if (mask != nullptr) {
            col = blockage_column(*mask, k);
            mask_col = col;
        }
        std::vector<std::pair<double, int>> scored(F);
        for (int t = 0; t < F; ++t) {
            const auto e = effective_channel(radio, g, cb.codewords[t], users.positions[k], mask_col);
            scored[t] = {p_max * channel_norm2(e), t};
        }
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        out[k].reserve(S);
        for (int s = 0; s < S; ++s) out[k].push_back(scored[s].second);
    }
    return out;
}

namespace {

double layout_sum_rate(const Codebook& cb, int id, const RadioConfig& radio,
                       const SystemGeometry& g, const UserState& users, const RMat* mask,
                       std::span<const double> alpha, double p_max, double sigma2) {
    const int K = static_cast<int>(users.positions.size());
    const int N = cb.codewords[id].num_waveguides;
    CMat H(K, N);
    for (int k = 0; k < K; ++k) {
        std::vector<double> col;
        std::span<const double> mask_col;
        if (mask != nullptr) {
            col = blockage_column(*mask, k);
            mask_col = col;
        }
        const auto e = effective_channel(radio, g, cb.codewords[id], users.positions[k], mask_col);
        for (int n = 0; n < N; ++n) H.at(k, n) = e[n];
    }
    const CMat W = mmse_weights(H, sigma2, p_max, alpha);
    const auto s = sinr_all(H, W, alpha, sigma2);
    return rates(s).sum_rate;
}

}  // namespace

JointResult joint_label_search(const Codebook& cb, const RadioConfig& radio,
                               const SystemGeometry& g, const UserState& users, const RMat* mask,
                               std::span<const double> alpha, double p_max, double sigma2,
                               const std::vector<std::vector<int>>& candidates, JointMode mode,
                               long eval_cap) {
    const int K = static_cast<int>(users.positions.size());
    if (candidates.size() != static_cast<std::size_t>(K))
        throw std::invalid_argument("joint_label_search: one candidate list per user required");
    for (const auto& list : candidates)
        if (list.empty()) throw std::invalid_argument("joint_label_search: empty candidate list");

    JointResult best;
    best.sum_rate = -1.0;

    if (mode == JointMode::union_set) {
        std::set<int> pool;
        for (const auto& list : candidates) pool.insert(list.begin(), list.end());
        for (int id : pool) {
            const double sr =
                layout_sum_rate(cb, id, radio, g, users, mask, alpha, p_max, sigma2);
            ++best.evaluations;
            if (sr > best.sum_rate) {
                best.sum_rate = sr;
                best.ids.assign(K, id);
            }
        }
        return best;
    }

    long total = 1;
    for (const auto& list : candidates) {
        total *= static_cast<long>(list.size());
        if (total > eval_cap)
            throw ConfigError(strfmt("joint_label_search: tuple space exceeds cap of %lld",
                                      static_cast<long long>(eval_cap)));
    }

    std::vector<std::size_t> idx(K, 0);
    while (true) {
        std::vector<int> tuple(K);
        for (int k = 0; k < K; ++k) tuple[k] = candidates[k][idx[k]];
        const double sr =
            layout_sum_rate(cb, tuple[0], radio, g, users, mask, alpha, p_max, sigma2);
        ++best.evaluations;
        if (sr > best.sum_rate) {
            best.sum_rate = sr;
            best.ids = tuple;
        }
        int k = K - 1;
        while (k >= 0) {
            if (++idx[k] < candidates[k].size()) break;
            idx[k] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return best;
}

double top_s_accuracy(std::span<const std::vector<int>> rankings, std::span<const int> truths,
                      int S) {
    if (rankings.size() != truths.size() || rankings.empty())
        throw std::invalid_argument("top_s_accuracy: need equal nonzero sample counts");
    if (S < 1) throw std::invalid_argument("top_s_accuracy: S must be >= 1");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < rankings.size(); ++i) {
        const auto& r = rankings[i];
        const int limit = std::min<int>(S, static_cast<int>(r.size()));
        for (int s = 0; s < limit; ++s)
            if (r[s] == truths[i]) {
                ++hits;
                break;
            }
    }
    return static_cast<double>(hits) / static_cast<double>(rankings.size());
}

}  // namespace passlab
