// SPDX-License-Identifier: Apache-2.0
#ifndef PASSLAB_CODEBOOK_HPP
#define PASSLAB_CODEBOOK_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "passlab/beamforming.hpp"
#include "passlab/channel.hpp"
#include "passlab/core.hpp"
#include "passlab/geometry.hpp"
#include "passlab/rng.hpp"

namespace passlab {

// A codeword is a full element layout. Codewords are uniform combs of L
// elements (spacing >= the geometry minimum) shifted across the waveguide;
// uniform-offset mode shares one shift across waveguides (size = grid_points),
// per-waveguide-shift mode takes the N-fold product (size = grid_points^N,
// capped). With phase alignment on, every element is nudged forward by less
// than one beat length so its guided-plus-free-space phase is a multiple of
// 2*pi at a sensed position; codeword j aligns at target (j mod #targets).
struct CodebookOptions {
    enum class Pattern { uniform_offset, per_waveguide_shift };
    Pattern pattern = Pattern::uniform_offset;
    int grid_points = 16;
    double cluster_spacing = 0;  // comb spacing; <= 0 picks the minimum feasible
    bool phase_align = true;
    int size_cap = 4096;
};

struct Codebook {
    CodebookOptions opts;
    std::vector<PaLayout> codewords;  // id = index
    int size() const { return static_cast<int>(codewords.size()); }
};

Codebook generate_grid_codebook(const SystemGeometry& g, const RadioConfig& radio,
                                const CodebookOptions& opts,
                                std::span<const Vec3> align_targets = {});

void save_codebook_json(const Codebook& cb, const std::string& path);
Codebook load_codebook_json(const std::string& path);

// Received power per (codeword, user) when sweeping the codebook with the
// all-ones probing combiner. sigma2 = 0 makes the sweep exact.
struct ProbeReport {
    int num_codewords = 0;
    int num_users = 0;
    RMat power;  // F x K
    std::uint64_t noise_seed = 0;
};

ProbeReport probe_sweep(const Codebook& cb, const RadioConfig& radio, const SystemGeometry& g,
                        const UserState& users, const RMat* mask, std::span<const double> alpha,
                        double p_max, double sigma2, std::uint64_t noise_seed);

enum class Objective { gain_mrt, snr };

struct OracleResult {
    int id = 0;
    double objective = 0;
};

// Exhaustive single-user search; ties resolve to the lowest id.
OracleResult oracle_best_codeword(const Codebook& cb, const RadioConfig& radio,
                                  const SystemGeometry& g, const Vec3& user,
                                  std::span<const double> mask_col, Objective objective,
                                  double p_max, double alpha = 1.0, double sigma2 = 1.0);

// Per-user S best codeword ids by single-user matched-transmission gain,
// descending, ties by id.
std::vector<std::vector<int>> top_s_candidates(const Codebook& cb, const RadioConfig& radio,
                                               const SystemGeometry& g, const UserState& users,
                                               const RMat* mask, int S, double p_max);

enum class JointMode { union_set, strict_tuple };

struct JointResult {
    std::vector<int> ids;  // one per user
    double sum_rate = 0;
    long evaluations = 0;
};

// Picks the layout serving all K users with the best regularised-inverse sum
// rate. union_set scores each distinct candidate id once; strict_tuple walks
// the full candidate product (first element fixes the layout) and is capped.
JointResult joint_label_search(const Codebook& cb, const RadioConfig& radio,
                               const SystemGeometry& g, const UserState& users, const RMat* mask,
                               std::span<const double> alpha, double p_max, double sigma2,
                               const std::vector<std::vector<int>>& candidates, JointMode mode,
                               long eval_cap = 100000);

// Fraction of samples whose true id appears in the first S ranked ids.
double top_s_accuracy(std::span<const std::vector<int>> rankings, std::span<const int> truths,
                      int S);

}  // namespace passlab

#endif
