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
 * @file ray_oracle.hpp
 * @brief Monte Carlo ray tracer used as an independent check of the
 * analytic intensity field.
 *
 * Rays are drawn from each VCSEL's waist, refracted by vector Snell at the
 * flat and the spherical lens face, posed by the element rotation and
 * intersected with the receiver plane. None of the Gaussian-beam closed
 * forms are used.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ap_model.hpp"
#include "beam_optics.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "vec3.hpp"

namespace gobnet
{

struct RaySample
{
    Vec3 origin;
    UnitVec3 direction;
    double weight = 1.0;
};

/// Rays of one source at its waist: position std w0/2 and angle std theta/2 per axis.
template <typename Rng>
std::vector<RaySample> sample_rays(const GaussianBeam &beam, std::size_t count, Rng &rng)
{
    if (count < 1)
        throw InvalidArgument("sample_rays: count must be at least 1");
    std::normal_distribution<double> pos(0.0, 0.5 * beam.waist_radius);
    std::normal_distribution<double> ang(0.0, 0.5 * divergence_half_angle(beam));
    std::vector<RaySample> rays;
    rays.reserve(count);
    const double weight = beam.power / static_cast<double>(count);
    for (std::size_t k = 0; k < count; ++k)
    {
        const double x = pos(rng);
        const double y = pos(rng);
        const double ax = ang(rng);
        const double ay = ang(rng);
        rays.push_back({Vec3{x, y, 0.0}, UnitVec3(Vec3{ax, ay, 1.0}), weight});
    }
    return rays;
}

/// Why a ray did not reach the receiver plane.
enum class Escape
{
    none,
    aperture,          // outside the lens diameter
    internal_reflection,
    upward             // leaves the element pointing away from the floor
};

struct TraceResult
{
    Escape escape = Escape::none;
    Vec3 hit;                          // on z = 0 when escape == none
    UnitVec3 direction{Vec3{0, 0, -1}}; // world direction after the lens
};

/// Lens of one element expressed in its local frame (array plane z = 0).
struct LensGeometry
{
    double flat_z = 0.0;     // entry face
    double center_z = 0.0;   // centre of the spherical exit face
    double radius = 0.0;
    double aperture = 0.0;   // L / 2
    double index = 1.0;

    static LensGeometry from(const ApConfig &cfg)
    {
        LensGeometry g;
        g.flat_z = cfg.d_vl;
        g.radius = cfg.lens.curvature_radius;
        g.center_z = cfg.d_vl + cfg.lens.center_thickness - g.radius;
        g.aperture = 0.5 * cfg.lens.diameter;
        g.index = cfg.lens.refractive_index;
        return g;
    }
};

struct ElementPose
{
    Mat3 rotation;
    Vec3 translation; // world position of the local origin

    static ElementPose of(int v, const ApConfig &cfg)
    {
        return {element_rotation(v, cfg.tilt), element_array_origin(v, cfg)};
    }
};

/// Traces one ray given in the element frame through the lens to z = 0.
inline TraceResult trace(const RaySample &ray, const LensGeometry &lens, const ElementPose &pose)
{
    TraceResult out;
    const Vec3 &p0 = ray.origin;
    const Vec3 &d0 = ray.direction.vec();
    if (!(d0.z > 0.0))
    {
        out.escape = Escape::aperture;
        return out;
    }

    // Flat face.
    const Vec3 p1 = p0 + ((lens.flat_z - p0.z) / d0.z) * d0;
    if (p1.x * p1.x + p1.y * p1.y > lens.aperture * lens.aperture)
    {
        out.escape = Escape::aperture;
        return out;
    }
    const UnitVec3 flat_normal = UnitVec3::trusted({0.0, 0.0, 1.0});
    const UnitVec3 d1 = refract(ray.direction, flat_normal, 1.0 / lens.index);

    // Spherical face: far root of |p1 + t d1 - c| = R.
    const Vec3 c{0.0, 0.0, lens.center_z};
    const Vec3 oc = p1 - c;
    const double b = dot(oc, d1.vec());
    const double disc = b * b - (dot(oc, oc) - lens.radius * lens.radius);
    if (disc < 0.0)
    {
        out.escape = Escape::aperture;
        return out;
    }
    const double t = -b + std::sqrt(disc);
    const Vec3 p2 = p1 + t * d1.vec();
    if (p2.x * p2.x + p2.y * p2.y > lens.aperture * lens.aperture || p2.z < lens.flat_z)
    {
        out.escape = Escape::aperture;
        return out;
    }
    const UnitVec3 outward((p2 - c) / lens.radius);
    UnitVec3 d2 = d1;
    try
    {
        d2 = refract(d1, outward, lens.index);
    }
    catch (const TotalInternalReflection &)
    {
        out.escape = Escape::internal_reflection;
        return out;
    }

    // World frame and receiver plane.
    const Vec3 pw = pose.rotation * p2 + pose.translation;
    const Vec3 dw = pose.rotation * d2.vec();
    if (!(dw.z < 0.0))
    {
        out.escape = Escape::upward;
        return out;
    }
    out.hit = pw + (-pw.z / dw.z) * dw;
    out.hit.z = 0.0;
    out.direction = UnitVec3(dw);
    return out;
}

/// How hits are converted to irradiance.
enum class Irradiance
{
    beam_normal, // per unit area normal to the ray, as the analytic field is defined
    horizontal   // per unit area of the receiver plane
};

struct OracleOptions
{
    std::size_t rays_per_vcsel = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    Irradiance irradiance = Irradiance::beam_normal;
    int element = 0; // trace only this element (1..9); 0 traces all
};

struct OracleField
{
    IntensityField field;
    std::vector<std::uint64_t> hits;   // per cell
    std::vector<Vec3> centroids;       // mean hit position per beam
    std::vector<std::size_t> beam_hits;
    double total_weight = 0.0;
    double landed_weight = 0.0;        // reached z = 0 (inside or outside the grid)
    double escaped_weight = 0.0;

    double escaped_fraction() const { return total_weight > 0.0 ? escaped_weight / total_weight : 0.0; }
};

/**
 * Traces rays_per_vcsel rays for every beam and bins them on the raster.
 * Each beam uses its own random substream and its own partial histogram,
 * summed in beam order, so the result does not depend on thread count.
 */
inline OracleField oracle_field(const ApConfig &cfg, const Extent &extent, int resolution,
                                const OracleOptions &opt = {})
{
    cfg.validate();
    if (resolution < 2)
        throw InvalidArgument("oracle_field: resolution must be at least 2");
    if (opt.element < 0 || opt.element > cfg.element_count())
        throw IndexOutOfRange("oracle_field: element " + std::to_string(opt.element) + " outside 0..9");
    const LensGeometry lens = LensGeometry::from(cfg);
    const int per_element = cfg.vcsels_per_element();
    const auto beams = static_cast<std::size_t>(cfg.beam_count());

    struct Partial
    {
        std::vector<std::pair<std::size_t, double>> cells;
        double landed = 0.0, escaped = 0.0, total = 0.0;
        Vec3 centroid;
        std::size_t count = 0;
    };
    std::vector<Partial> parts(beams);
    IntensityField proto(extent, resolution, resolution);

    parallel_for(beams, opt.threads,
                 [&](std::size_t k)
                 {
                     const int v = static_cast<int>(k) / per_element + 1;
                     const int i = static_cast<int>(k) % per_element + 1;
                     if (opt.element != 0 && v != opt.element)
                         return;
                     const auto [xi, yi] = vcsel_local_position(i, cfg.pitch);
                     const ElementPose pose = ElementPose::of(v, cfg);
                     std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                                       static_cast<std::uint32_t>(k)};
                     std::mt19937_64 rng(seq);
                     auto rays = sample_rays(cfg.source, opt.rays_per_vcsel, rng);
                     Partial &part = parts[k];
                     part.cells.reserve(rays.size());
                     Vec3 sum;
                     for (auto &r : rays)
                     {
                         r.origin = r.origin + Vec3{xi, yi, 0.0};
                         part.total += r.weight;
                         const TraceResult tr = trace(r, lens, pose);
                         if (tr.escape != Escape::none)
                         {
                             part.escaped += r.weight;
                             continue;
                         }
                         part.landed += r.weight;
                         sum = sum + tr.hit;
                         ++part.count;
                         const double fx = (tr.hit.x - extent.x_min) / proto.dx();
                         const double fy = (tr.hit.y - extent.y_min) / proto.dy();
                         if (fx < 0.0 || fy < 0.0 || fx >= resolution || fy >= resolution)
                             continue;
                         const auto cell = static_cast<std::size_t>(fy) * static_cast<std::size_t>(resolution) +
                                           static_cast<std::size_t>(fx);
                         const double w = opt.irradiance == Irradiance::beam_normal
                                              ? r.weight / std::abs(tr.direction.z())
                                              : r.weight;
                         part.cells.emplace_back(cell, w);
                     }
                     if (part.count > 0)
                         part.centroid = sum / static_cast<double>(part.count);
                 });

    OracleField out;
    out.field = proto;
    out.hits.assign(out.field.values.size(), 0);
    const double cell_area = proto.dx() * proto.dy();
    for (const auto &part : parts)
    {
        for (const auto &[cell, w] : part.cells)
        {
            out.field.values[cell] += w / cell_area;
            ++out.hits[cell];
        }
        out.total_weight += part.total;
        out.landed_weight += part.landed;
        out.escaped_weight += part.escaped;
        out.centroids.push_back(part.centroid);
        out.beam_hits.push_back(part.count);
    }
    return out;
}

struct FieldComparison
{
    double nrmse = 0.0;
    std::size_t cells = 0;               // cells above the mask threshold
    std::vector<double> centroid_offsets; // per beam, metres; NaN for beams without hits
    double max_centroid_offset = 0.0;
};

/**
 * Normalized RMSE between two rasters, each scaled to unit maximum, over
 * the cells where the reference exceeds `mask` of its peak.
 */
inline double normalized_rmse(const IntensityField &reference, const IntensityField &test, double mask = 0.01)
{
    if (reference.nx != test.nx || reference.ny != test.ny || !(reference.extent == test.extent))
        throw GridMismatch("normalized_rmse: rasters differ in extent or resolution");
    const double ra = reference.max_value();
    const double tb = test.max_value();
    if (!(ra > 0.0) || !(tb > 0.0))
        throw InvalidArgument("normalized_rmse: fields must have a positive maximum");
    double ss = 0.0;
    std::size_t n = 0;
    for (std::size_t c = 0; c < reference.values.size(); ++c)
    {
        const double a = reference.values[c] / ra;
        if (a <= mask)
            continue;
        const double e = a - test.values[c] / tb;
        ss += e * e;
        ++n;
    }
    return n ? std::sqrt(ss / static_cast<double>(n)) : 0.0;
}

inline FieldComparison compare_fields(const IntensityField &analytic, const OracleField &oracle,
                                      std::span<const BeamRecord> beams = {})
{
    FieldComparison cmp;
    cmp.nrmse = normalized_rmse(analytic, oracle.field);
    const double peak = analytic.max_value();
    for (double v : analytic.values)
        cmp.cells += v / peak > 0.01 ? 1 : 0;
    if (!beams.empty())
    {
        if (beams.size() != oracle.centroids.size())
            throw GridMismatch("compare_fields: beam count differs from the oracle's");
        for (std::size_t k = 0; k < beams.size(); ++k)
        {
            if (oracle.beam_hits[k] == 0)
            {
                cmp.centroid_offsets.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            Vec3 c = beams[k].spot_center();
            c.z = 0.0;
            const double off = norm(c - oracle.centroids[k]);
            cmp.centroid_offsets.push_back(off);
            cmp.max_centroid_offset = std::max(cmp.max_centroid_offset, off);
        }
    }
    return cmp;
}

} // namespace gobnet
