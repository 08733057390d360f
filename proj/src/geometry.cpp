// SPDX-License-Identifier: Apache-2.0
#include "passlab/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "passlab/kernels.hpp"

namespace passlab {

void SystemGeometry::validate() const {
    if (num_waveguides < 1) throw ConfigError("geometry: num_waveguides must be >= 1");
    if (pas_per_waveguide < 1) throw ConfigError("geometry: pas_per_waveguide must be >= 1");
    if (!(waveguide_length > 0)) throw ConfigError("geometry: waveguide_length must be > 0");
    if (region_depth < 0) throw ConfigError("geometry: region_depth must be >= 0");
    if (!(mount_height > 0)) throw ConfigError("geometry: mount_height must be > 0");
    if (num_waveguides > 1 && !(waveguide_spacing > 0))
        throw ConfigError("geometry: waveguide_spacing must be > 0 with multiple waveguides");
    if (waveguide_spacing < 0) throw ConfigError("geometry: waveguide_spacing must be >= 0");
    if (!(min_pa_spacing > 0)) throw ConfigError("geometry: min_pa_spacing must be > 0");
    if (pas_per_waveguide > 1 &&
        (pas_per_waveguide - 1) * min_pa_spacing > waveguide_length)
        throw ConfigError("geometry: waveguide too short for L elements at minimum spacing");
}

PaLayout PaLayout::uniform_grid(const SystemGeometry& g) {
    PaLayout layout(g.pas_per_waveguide, g.num_waveguides);
    const int L = g.pas_per_waveguide;
    for (int n = 0; n < g.num_waveguides; ++n) {
        if (L == 1) {
            layout.at(0, n) = g.waveguide_length / 2.0;
            continue;
        }
        const double step = g.waveguide_length / (L - 1);
        for (int l = 0; l < L; ++l) layout.at(l, n) = l * step;
    }
    return layout;
}

LayoutCheck validate_layout(const SystemGeometry& g, const PaLayout& layout) {
    if (layout.num_waveguides != g.num_waveguides || layout.pas_per_waveguide != g.pas_per_waveguide) {
        return {false, 0, 0,
                strfmt("layout shape %dx%d does not match geometry %dx%d",
                       layout.pas_per_waveguide, layout.num_waveguides,
                       g.pas_per_waveguide, g.num_waveguides)};
    }
    const int L = g.pas_per_waveguide;
    for (int n = 0; n < g.num_waveguides; ++n) {
        for (int l = 0; l < L; ++l) {
            const double x = layout.at(l, n);
            if (!(x >= 0.0) || !(x <= g.waveguide_length)) {
                return {false, n + 1, l + 1,
                        strfmt("element %d on waveguide %d at x=%g outside [0, %g]",
                               l + 1, n + 1, x, g.waveguide_length)};
            }
        }
        for (int l2 = 1; l2 < L; ++l2) {
            for (int l1 = 0; l1 < l2; ++l1) {
                if (std::abs(layout.at(l2, n) - layout.at(l1, n)) < g.min_pa_spacing) {
                    return {false, n + 1, l2 + 1,
                            strfmt("elements %d and %d on waveguide %d closer than %g",
                                   l1 + 1, l2 + 1, n + 1, g.min_pa_spacing)};
                }
            }
        }
    }
    return {};
}

Vec3 pa_coords(const SystemGeometry& g, const PaLayout& layout, int n, int l) {
    if (n < 0 || n >= layout.num_waveguides || l < 0 || l >= layout.pas_per_waveguide)
        throw std::out_of_range(strfmt("pa_coords: waveguide %d element %d out of range", n + 1, l + 1));
    return {layout.at(l, n), g.waveguide_y(n), g.mount_height};
}

double min_user_pa_distance(const SystemGeometry& g, const PaLayout& layout, const Vec3& user) {
    const auto& ops = kernels::active();
    double best = std::numeric_limits<double>::infinity();
    for (int n = 0; n < layout.num_waveguides; ++n) {
        const double dy = user.y - g.waveguide_y(n);
        const double dz = user.z - g.mount_height;
        const double d2 = ops.min_distance_sq(layout.col(n), layout.pas_per_waveguide, user.x,
                                              dy * dy + dz * dz);
        if (d2 < best) best = d2;
    }
    return std::sqrt(best);
}

}  // namespace passlab
