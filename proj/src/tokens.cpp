// SPDX-License-Identifier: Apache-2.0
#include "passlab/tokens.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace passlab {

namespace {
constexpr double kStdFloor = 1e-8;
}

void CameraModel::validate() const {
    if (!(region_x > 0) || !(region_y > 0)) throw ConfigError("camera: region extents must be > 0");
    if (!(s_ref > 0) || !(d_ref > 0)) throw ConfigError("camera: s_ref and d_ref must be > 0");
}

BoundingBoxSeries synthesize_boxes(std::span<const Vec3> trajectory, const CameraModel& cam) {
    cam.validate();
    if (trajectory.empty()) throw std::invalid_argument("synthesize_boxes: empty trajectory");
    BoundingBoxSeries b;
    b.resize(trajectory.size());
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
        const Vec3& u = trajectory[t];
        if (u.y <= cam.position.y)
            throw std::invalid_argument(strfmt(
                "synthesize_boxes: slot %zu lies behind the camera plane (y=%g <= %g)", t + 1,
                u.y, cam.position.y));
        const double d = distance(u, cam.position);
        const double side = cam.s_ref * cam.d_ref / d;
        b.rows[0][t] = u.x / cam.region_x;
        b.rows[1][t] = u.y / cam.region_y;
        b.rows[2][t] = side;
        b.rows[3][t] = side;
    }
    return b;
}

BoundingBoxSeries load_boxes_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("load_boxes_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("load_boxes_csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,x,y,w,h")
        throw ConfigError("load_boxes_csv: expected header 't,x,y,w,h', got '" + line + "'");

    std::array<std::vector<double>, 4> rows;
    std::size_t expected_t = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::array<double, 5> vals{};
        for (int i = 0; i < 5; ++i) {
            if (!std::getline(ss, field, ','))
                throw ConfigError("load_boxes_csv: short row '" + line + "'");
            try {
                vals[i] = std::stod(field);
            } catch (const std::exception&) {
                throw ConfigError("load_boxes_csv: bad number '" + field + "'");
            }
        }
        if (std::getline(ss, field, ','))
            throw ConfigError("load_boxes_csv: extra field in row '" + line + "'");
        if (static_cast<std::size_t>(vals[0]) != expected_t)
            throw ConfigError(strfmt("load_boxes_csv: slot index %g out of order", vals[0]));
        ++expected_t;
        for (int i = 0; i < 4; ++i) rows[i].push_back(vals[i + 1]);
    }
    if (rows[0].empty()) throw ConfigError("load_boxes_csv: no data rows");
    BoundingBoxSeries b;
    b.slots = rows[0].size();
    b.rows = std::move(rows);
    return b;
}

BoundingBoxSeries revin_normalize(const BoundingBoxSeries& b, RevinStats& stats) {
    if (b.slots == 0) throw std::invalid_argument("revin_normalize: empty series");
    BoundingBoxSeries out;
    out.resize(b.slots);
    const double inv_t = 1.0 / static_cast<double>(b.slots);
    for (int r = 0; r < 4; ++r) {
        double mean = 0;
        for (double v : b.rows[r]) mean += v;
        mean *= inv_t;
        double var = 0;
        for (double v : b.rows[r]) var += (v - mean) * (v - mean);
        var *= inv_t;
        double sd = std::sqrt(var);
        if (sd < kStdFloor) sd = kStdFloor;
        stats.mean[r] = mean;
        stats.stdev[r] = sd;
        for (std::size_t t = 0; t < b.slots; ++t) out.rows[r][t] = (b.rows[r][t] - mean) / sd;
    }
    return out;
}

BoundingBoxSeries revin_denormalize(const BoundingBoxSeries& b, const RevinStats& stats) {
    BoundingBoxSeries out;
    out.resize(b.slots);
    for (int r = 0; r < 4; ++r)
        for (std::size_t t = 0; t < b.slots; ++t)
            out.rows[r][t] = b.rows[r][t] * stats.stdev[r] + stats.mean[r];
    return out;
}

std::size_t patch_count(std::size_t T, std::size_t patch_len, std::size_t stride) {
    if (patch_len == 0 || stride == 0)
        throw std::invalid_argument("patch_count: patch_len and stride must be >= 1");
    if (T < patch_len) return 0;
    return (T - patch_len) / stride + 1;
}

RMat patchify(std::span<const double> row, std::size_t patch_len, std::size_t stride) {
    const std::size_t n = patch_count(row.size(), patch_len, stride);
    if (n == 0)
        throw std::invalid_argument(
            strfmt("patchify: series of %zu slots shorter than patch length %d", row.size(),
                   patch_len));
    RMat p(n, patch_len);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < patch_len; ++j) p.at(i, j) = row[i * stride + j];
    return p;
}

RMat embed_patches(const RMat& patches, const RMat& em, std::span<const double> offset) {
    if (patches.cols != em.rows)
        throw std::invalid_argument("embed_patches: patch length does not match the projection");
    if (offset.size() != em.cols)
        throw std::invalid_argument("embed_patches: offset length does not match the projection");
    RMat out(patches.rows, em.cols);
    for (std::size_t i = 0; i < patches.rows; ++i)
        for (std::size_t j = 0; j < em.cols; ++j) {
            double s = offset[j];
            for (std::size_t k = 0; k < patches.cols; ++k) s += patches.at(i, k) * em.at(k, j);
            out.at(i, j) = s;
        }
    return out;
}

std::vector<double> feature_vector(const BoundingBoxSeries& normalized, const RevinStats& stats,
                                   std::size_t patch_len, std::size_t stride) {
    std::vector<double> f;
    f.reserve(feature_length(normalized.slots, patch_len, stride));
    for (int r = 0; r < 4; ++r) {
        const RMat p = patchify(normalized.rows[r], patch_len, stride);
        f.insert(f.end(), p.a.begin(), p.a.end());
    }
    for (int r = 0; r < 4; ++r) {
        f.push_back(stats.mean[r]);
        f.push_back(stats.stdev[r]);
    }
    return f;
}

}  // namespace passlab
