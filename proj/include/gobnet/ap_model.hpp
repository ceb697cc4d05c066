// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/**
 * @file ap_model.hpp
 * @brief Double-tier access point: a 3x3 grid of tilted transmitter elements,
 * each a 5x5 VCSEL array behind a plano-convex lens (225 beams).
 *
 * World frame: receiver plane at z = 0, the AP hangs at z ~ h_DL and its
 * beams point down (negative z).
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "beam_optics.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "vec3.hpp"

namespace gobnet
{

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct ApConfig
{
    double pitch = 2e-3;         // VCSEL pitch delta
    double d_vl = 5e-3;          // array-to-lens distance
    double d_lens = 2e-2;        // element center spacing
    double tilt = deg_to_rad(21.0);
    double h_dl = 3.0;           // AP to receiver plane
    LensSpec lens;
    GaussianBeam source;
    int elements_per_side = 3;
    int vcsels_per_side = 5;

    int vcsels_per_element() const { return vcsels_per_side * vcsels_per_side; }
    int element_count() const { return elements_per_side * elements_per_side; }
    int beam_count() const { return element_count() * vcsels_per_element(); }

    /// Lens vertex distance from the array plane.
    double d_c() const { return d_vl + lens.center_thickness; }

    void validate() const
    {
        if (!(pitch > 0.0))
            throw InvalidArgument("ApConfig: pitch must be positive");
        if (!(h_dl > 0.0))
            throw InvalidArgument("ApConfig: h_DL must be positive");
        if (!(d_vl > 0.0))
            throw InvalidArgument("ApConfig: d_VL must be positive");
        if (!(tilt >= 0.0 && tilt < 0.5 * std::numbers::pi))
            throw InvalidArgument("ApConfig: tilt must lie in [0, pi/2)");
        if (elements_per_side != 3 || vcsels_per_side != 5)
            throw InvalidArgument("ApConfig: only the 3x3 array of 5x5 VCSEL arrays is modelled");
        lens.validate();
        source.validate();
    }
};

/// Local VCSEL coordinates (x_i, y_i) on its array, i in 1..25 row-major from the top-left.
inline std::pair<double, double> vcsel_local_position(int i, double pitch)
{
    if (i < 1 || i > 25)
        throw IndexOutOfRange("vcsel_local_position: VCSEL index " + std::to_string(i) + " outside 1..25");
    const int m = (i + 4) / 5; // ceil(i / 5)
    const int n = i - 5 * (m - 1);
    return {(-3 + n) * pitch, (3 - m) * pitch};
}

/// Outward normal of the convex face at the exit point of VCSEL i's chief ray (local frame).
inline UnitVec3 convex_surface_normal(double x, double y, double curvature_radius)
{
    const double r2 = x * x + y * y;
    return UnitVec3(Vec3{x, y, std::sqrt(curvature_radius * curvature_radius - r2)} / curvature_radius);
}

/**
 * Chief-ray direction of VCSEL i after the convex face, in the element frame.
 * The flat entry face is crossed at normal incidence and does not bend it.
 */
inline UnitVec3 local_refracted_direction(int i, const ApConfig &cfg)
{
    const auto [x, y] = vcsel_local_position(i, cfg.pitch);
    const double r2 = x * x + y * y;
    const double rl = cfg.lens.curvature_radius;
    const double n = cfg.lens.refractive_index;
    const double radicand = rl * rl - n * n * r2;
    if (radicand < 0.0)
        throw TotalInternalReflection("local_refracted_direction: VCSEL " + std::to_string(i) +
                                      " lies beyond Rlens/n_lens, its chief ray is totally reflected");
    const double root = std::sqrt(rl * rl - r2);
    const double q = (std::sqrt(radicand) - n * root) / (rl * rl);
    return UnitVec3(Vec3{q * x, q * y, n + q * root});
}

/// Tilt angles (alpha_v, beta_v) of element v in 1..9.
inline std::pair<double, double> element_tilt(int v, double tilt)
{
    static constexpr std::array<int, 9> alpha_sign{-1, -1, -1, 0, 0, 0, 1, 1, 1};
    static constexpr std::array<int, 9> beta_sign{-1, 0, 1, 1, 0, -1, -1, 0, 1};
    if (v < 1 || v > 9)
        throw IndexOutOfRange("element_tilt: element index " + std::to_string(v) + " outside 1..9");
    const auto k = static_cast<std::size_t>(v - 1);
    return {alpha_sign[k] * tilt, beta_sign[k] * tilt};
}

/// In-plane offset (x'_v, y'_v) of element v before the R_y(pi) flip.
inline std::pair<double, double> element_offset(int v, double d_lens)
{
    static constexpr std::array<int, 9> x_sign{1, 0, -1, 1, 0, -1, 1, 0, -1};
    static constexpr std::array<int, 9> y_sign{1, 1, 1, 0, 0, 0, -1, -1, -1};
    if (v < 1 || v > 9)
        throw IndexOutOfRange("element_offset: element index " + std::to_string(v) + " outside 1..9");
    const auto k = static_cast<std::size_t>(v - 1);
    return {x_sign[k] * d_lens, y_sign[k] * d_lens};
}

/// R_y(pi + beta_v) R_x(alpha_v): element frame to world frame.
inline Mat3 element_rotation(int v, double tilt)
{
    const auto [alpha, beta] = element_tilt(v, tilt);
    return rotation_y(std::numbers::pi + beta) * rotation_x(alpha);
}

/// World position of the array centre of element v (pivot of its rotation).
inline Vec3 element_array_origin(int v, const ApConfig &cfg)
{
    const auto [xo, yo] = element_offset(v, cfg.d_lens);
    return rotation_y(std::numbers::pi) * Vec3{xo, yo, 0.0} + Vec3{0.0, 0.0, cfg.h_dl + cfg.d_c()};
}

/// World position q_v of element v's lens vertex; all its beams are ranged from here.
inline Vec3 element_position(int v, const ApConfig &cfg)
{
    return element_rotation(v, cfg.tilt) * Vec3{0.0, 0.0, cfg.d_c()} + element_array_origin(v, cfg);
}

/// One of the AP's beams.
struct BeamRecord
{
    int global_index = 0;  // j in 1..225
    int element_index = 0; // v in 1..9
    int local_index = 0;   // i in 1..25
    Vec3 origin;
    UnitVec3 direction;
    TransformedBeam transformed;

    double spot_radius(double z) const { return transformed.spot_radius(z); }

    /// Intersection of the beam axis with the receiver plane z = 0.
    Vec3 spot_center() const
    {
        const double t = -origin.z / direction.z();
        return origin + t * direction.vec();
    }
};

inline std::vector<BeamRecord> build_beams(const ApConfig &cfg)
{
    cfg.validate();
    const int per_element = cfg.vcsels_per_element();
    std::vector<BeamRecord> beams;
    beams.reserve(static_cast<std::size_t>(cfg.beam_count()));

    std::vector<UnitVec3> local_dirs;
    std::vector<TransformedBeam> local_beams;
    for (int i = 1; i <= per_element; ++i)
    {
        const auto [x, y] = vcsel_local_position(i, cfg.pitch);
        local_dirs.push_back(local_refracted_direction(i, cfg));
        const double tau = cfg.lens.thickness_at(std::hypot(x, y));
        local_beams.push_back(transform_through_lens(cfg.source, cfg.lens, cfg.d_vl, tau));
    }

    for (int v = 1; v <= cfg.element_count(); ++v)
    {
        const Mat3 rot = element_rotation(v, cfg.tilt);
        const Vec3 qv = element_position(v, cfg);
        for (int i = 1; i <= per_element; ++i)
        {
            BeamRecord b;
            b.global_index = per_element * (v - 1) + i;
            b.element_index = v;
            b.local_index = i;
            b.origin = qv;
            b.direction = rot * local_dirs[static_cast<std::size_t>(i - 1)];
            b.transformed = local_beams[static_cast<std::size_t>(i - 1)];
            b.transformed.direction = b.direction;
            b.transformed.origin = qv;
            beams.push_back(b);
        }
    }
    return beams;
}

/// Irradiance of one beam at world point p, ranged from the element position.
inline double beam_intensity_at(const BeamRecord &beam, const Vec3 &p, double power)
{
    const Vec3 d = p - beam.origin;
    const double dist = norm(d);
    const double cos_phi = std::clamp(dot(d, beam.direction.vec()) / dist, -1.0, 1.0);
    const double axial = dist * cos_phi;
    const double radial2 = std::max(0.0, dist * dist - axial * axial);
    const double w = beam.spot_radius(axial);
    return 2.0 * power / (std::numbers::pi * w * w) * std::exp(-2.0 * radial2 / (w * w));
}

/// Axis-aligned rectangle on the receiver plane.
struct Extent
{
    double x_min = -2.5, x_max = 2.5, y_min = -2.5, y_max = 2.5;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    bool operator==(const Extent &) const = default;
};

/// Cell-centred raster on the receiver plane, row-major with row 0 at y_min.
struct IntensityField
{
    Extent extent;
    int nx = 0;
    int ny = 0;
    std::vector<double> values;

    IntensityField() = default;
    IntensityField(const Extent &e, int resolution_x, int resolution_y)
        : extent(e), nx(resolution_x), ny(resolution_y),
          values(static_cast<std::size_t>(resolution_x) * static_cast<std::size_t>(resolution_y), 0.0)
    {
    }

    double dx() const { return extent.width() / nx; }
    double dy() const { return extent.height() / ny; }
    double x_at(int ix) const { return extent.x_min + (ix + 0.5) * dx(); }
    double y_at(int iy) const { return extent.y_min + (iy + 0.5) * dy(); }
    double &at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * nx + ix]; }
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }

    double max_value() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }

    /// Riemann sum over the raster.
    double integral() const
    {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s * dx() * dy();
    }
};

/**
 * Sum of all beam irradiances on a resolution x resolution raster. With
 * supersample = s > 1 each cell holds the mean of an s x s sub-grid, which
 * approximates the cell average instead of the centre value.
 */
inline IntensityField total_intensity_field(std::span<const BeamRecord> beams, double power, const Extent &extent,
                                            int resolution, unsigned threads = 1, int supersample = 1)
{
    if (resolution < 2)
        throw InvalidArgument("total_intensity_field: resolution must be at least 2");
    if (supersample < 1)
        throw InvalidArgument("total_intensity_field: supersample must be at least 1");
    IntensityField field(extent, resolution, resolution);
    const double sub = 1.0 / supersample;
    parallel_for(static_cast<std::size_t>(resolution), threads,
                 [&](std::size_t row)
                 {
                     const int iy = static_cast<int>(row);
                     for (int ix = 0; ix < resolution; ++ix)
                     {
                         double s = 0.0;
                         for (int sy = 0; sy < supersample; ++sy)
                             for (int sx = 0; sx < supersample; ++sx)
                             {
                                 const Vec3 p{extent.x_min + (ix + (sx + 0.5) * sub) * field.dx(),
                                              extent.y_min + (iy + (sy + 0.5) * sub) * field.dy(), 0.0};
                                 for (const auto &b : beams)
                                     s += beam_intensity_at(b, p, power);
                             }
                         field.at(ix, iy) = s * sub * sub;
                     }
                 });
    return field;
}

inline IntensityField total_intensity_field(const ApConfig &cfg, const Extent &extent, int resolution,
                                            unsigned threads = 1, int supersample = 1)
{
    const auto beams = build_beams(cfg);
    return total_intensity_field(beams, cfg.source.power, extent, resolution, threads, supersample);
}

} // namespace gobnet
