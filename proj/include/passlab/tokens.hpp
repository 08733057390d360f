// SPDX-License-Identifier: Apache-2.0
#ifndef PASSLAB_TOKENS_HPP
#define PASSLAB_TOKENS_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "passlab/core.hpp"

namespace passlab {

// Pinhole-style synthesis of detection boxes from ground positions: the box
// centre is an affine map of (x, y) into normalised image units and the box
// size shrinks with distance to the camera.
struct CameraModel {
    Vec3 position{0, -1, 5};
    double region_x = 1;   // normalisation extent for x
    double region_y = 1;   // normalisation extent for y
    double s_ref = 0.1;    // box side at the reference distance
    double d_ref = 10.0;

    void validate() const;
};

// Four attribute rows (x centre, y centre, width, height) over T slots.
struct BoundingBoxSeries {
    std::size_t slots = 0;
    std::array<std::vector<double>, 4> rows;

    void resize(std::size_t T) {
        slots = T;
        for (auto& r : rows) r.assign(T, 0.0);
    }
};

BoundingBoxSeries synthesize_boxes(std::span<const Vec3> trajectory, const CameraModel& cam);

// Columns: t, x, y, w, h with a header row.
BoundingBoxSeries load_boxes_csv(const std::string& path);

struct RevinStats {
    std::array<double, 4> mean{};
    std::array<double, 4> stdev{};  // population, floored at 1e-8
};

// Per-row instance normalisation. Exactly invertible via the returned stats.
BoundingBoxSeries revin_normalize(const BoundingBoxSeries& b, RevinStats& stats);
BoundingBoxSeries revin_denormalize(const BoundingBoxSeries& b, const RevinStats& stats);

// Number of patches a length-T row yields with the given patch length and
// stride; ragged tails are dropped.
std::size_t patch_count(std::size_t T, std::size_t patch_len, std::size_t stride);

// N_P x patch_len matrix of sliding windows over one row.
RMat patchify(std::span<const double> row, std::size_t patch_len, std::size_t stride);

// Affine token embedding: patches (N_P x L_patch) times EM (L_patch x s_patch)
// plus a broadcast row offset.
RMat embed_patches(const RMat& patches, const RMat& em, std::span<const double> offset);

// Flattened predictor input for one user: the four normalised patch matrices
// row-major in attribute order, then the four (mean, stdev) pairs.
std::vector<double> feature_vector(const BoundingBoxSeries& normalized, const RevinStats& stats,
                                   std::size_t patch_len, std::size_t stride);

inline std::size_t feature_length(std::size_t T, std::size_t patch_len, std::size_t stride) {
    return 4 * patch_count(T, patch_len, stride) * patch_len + 8;
}

}  // namespace passlab

#endif
