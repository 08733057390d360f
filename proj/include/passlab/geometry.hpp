// SPDX-License-Identifier: Apache-2.0
#ifndef PASSLAB_GEOMETRY_HPP
#define PASSLAB_GEOMETRY_HPP

#include <string>
#include <vector>

#include "passlab/core.hpp"

namespace passlab {

// Deployment region and waveguide bookkeeping. Waveguides run along x at
// height d0; waveguide n (0-based in code, 1-based in messages) lies at
// y = n * waveguide_spacing, with its feed at x = 0. Users live on the ground
// plane z = 0 inside [0, waveguide_length] x [0, region_depth].
struct SystemGeometry {
    int num_waveguides = 1;       // N
    int pas_per_waveguide = 1;    // L, activated elements per waveguide
    double waveguide_length = 0;  // x extent of the service region, metres
    double region_depth = 0;      // y extent of the service region, metres
    double mount_height = 0;      // d0
    double waveguide_spacing = 0; // y gap between adjacent waveguides
    double min_pa_spacing = 0;    // minimum separation between elements on one waveguide

    void validate() const;  // throws ConfigError on nonsense values
    double waveguide_y(int n) const { return n * waveguide_spacing; }
    Vec3 feed_point(int n) const { return {0.0, waveguide_y(n), mount_height}; }
};

// Element x-positions, column-major: column n holds waveguide n's L positions.
struct PaLayout {
    int pas_per_waveguide = 0;  // L
    int num_waveguides = 0;     // N
    std::vector<double> x;      // size L*N, x[n*L + l]

    PaLayout() = default;
    PaLayout(int L, int N) : pas_per_waveguide(L), num_waveguides(N), x(static_cast<std::size_t>(L) * N, 0.0) {}

    double& at(int l, int n) { return x[static_cast<std::size_t>(n) * pas_per_waveguide + l]; }
    double at(int l, int n) const { return x[static_cast<std::size_t>(n) * pas_per_waveguide + l]; }
    const double* col(int n) const { return x.data() + static_cast<std::size_t>(n) * pas_per_waveguide; }

    // Evenly spread elements, step waveguide_length/(L-1); single element sits mid-span.
    static PaLayout uniform_grid(const SystemGeometry& g);
};

struct UserState {
    std::vector<Vec3> positions;  // ground users, z = 0
};

struct LayoutCheck {
    bool ok = true;
    int waveguide = 0;  // 1-based in reports
    int antenna = 0;    // 1-based in reports
    std::string message;
};

// First constraint violation (shape, bounds, pairwise spacing) or ok.
LayoutCheck validate_layout(const SystemGeometry& g, const PaLayout& layout);

// 3-D position of element l on waveguide n (0-based indices, bounds-checked).
Vec3 pa_coords(const SystemGeometry& g, const PaLayout& layout, int n, int l);

// Distance from user to the nearest element of the layout.
double min_user_pa_distance(const SystemGeometry& g, const PaLayout& layout, const Vec3& user);

}  // namespace passlab

#endif
