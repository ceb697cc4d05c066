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
 * @file beam_optics.hpp
 * @brief Gaussian beam propagation, q-parameter algebra, vector refraction
 * and the plano-convex lens transform of a single TEM00 beam.
 *
 * Lengths are metres, angles radians, powers watts.
 */

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "vec3.hpp"

namespace gobnet
{

/// TEM00 source beam with its waist at the emitter plane.
struct GaussianBeam
{
    double waist_radius = 5e-6;
    double wavelength = 950e-9;
    double power = 10e-3;

    void validate() const
    {
        if (!(waist_radius > 0.0))
            throw InvalidArgument("GaussianBeam: waist radius must be positive");
        if (!(wavelength > 0.0))
            throw InvalidArgument("GaussianBeam: wavelength must be positive");
        if (!(power >= 0.0))
            throw InvalidArgument("GaussianBeam: power must be non-negative");
    }

    double rayleigh_range() const { return std::numbers::pi * waist_radius * waist_radius / wavelength; }
};

/// Complex beam parameter q = z + j zR.
struct ComplexQ
{
    std::complex<double> value;

    double axial_offset() const { return value.real(); }
    double rayleigh_range() const { return value.imag(); }

    static ComplexQ at(const GaussianBeam &beam, double z) { return {{z, beam.rayleigh_range()}}; }
};

// w(z) for a waist w0 and Rayleigh range zR.
inline double spot_radius(double w0, double rayleigh, double z)
{
    const double t = z / rayleigh;
    return w0 * std::sqrt(1.0 + t * t);
}

inline double spot_radius(const GaussianBeam &beam, double z)
{
    return spot_radius(beam.waist_radius, beam.rayleigh_range(), z);
}

/// Irradiance I(r, z) of a beam carrying `power`, given the local spot radius.
inline double gaussian_irradiance(double power, double spot, double r)
{
    return 2.0 * power / (std::numbers::pi * spot * spot) * std::exp(-2.0 * r * r / (spot * spot));
}

inline double beam_intensity(const GaussianBeam &beam, double r, double z)
{
    return gaussian_irradiance(beam.power, spot_radius(beam, z), r);
}

inline double divergence_half_angle(const GaussianBeam &beam)
{
    return beam.wavelength / (std::numbers::pi * beam.waist_radius);
}

/// Wavefront radius of curvature R(z); infinite at the waist.
inline double wavefront_curvature(const GaussianBeam &beam, double z)
{
    if (z == 0.0)
        return std::numeric_limits<double>::infinity();
    const double zr = beam.rayleigh_range();
    return z * (1.0 + (zr / z) * (zr / z));
}

/**
 * Vector law of refraction.
 *
 * `normal` is oriented along the direction of travel (n . v1 >= 0) and
 * `mu` is n1/n2. The result satisfies n x v2 = mu (n x v1).
 */
inline UnitVec3 refract(const UnitVec3 &incident, const UnitVec3 &normal, double mu)
{
    const Vec3 &v1 = incident.vec();
    const Vec3 &n = normal.vec();
    const double c1 = dot(n, v1);
    const double radicand = 1.0 - mu * mu * (1.0 - c1 * c1);
    if (radicand < 0.0)
        throw TotalInternalReflection("refract: total internal reflection (radicand " + std::to_string(radicand) +
                                      ")");
    const Vec3 v2 = std::sqrt(radicand) * n + mu * (v1 - c1 * n);
    // Already unit length up to rounding; renormalizing keeps |v2| - 1 at ulp level.
    return UnitVec3(v2);
}

/// Plano-convex lens, flat face towards the source.
struct LensSpec
{
    double diameter = 16e-3;
    double curvature_radius = 15e-3;
    double center_thickness = 3.5e-3;
    double refractive_index = 1.55;

    double sag() const
    {
        const double h = 0.5 * diameter;
        return curvature_radius - std::sqrt(curvature_radius * curvature_radius - h * h);
    }

    /// Lensmaker focal length of a plano-convex lens.
    double focal_length() const { return curvature_radius / (refractive_index - 1.0); }

    /// Glass thickness traversed by a ray parallel to the axis at radial offset r.
    double thickness_at(double r) const
    {
        return std::sqrt(curvature_radius * curvature_radius - r * r) + center_thickness - curvature_radius;
    }

    void validate() const
    {
        if (!(diameter > 0.0) || !(curvature_radius > 0.0))
            throw InvalidArgument("LensSpec: diameter and curvature radius must be positive");
        if (0.5 * diameter > curvature_radius)
            throw InvalidArgument("LensSpec: convex surface cannot span the aperture (L/2 > Rlens)");
        if (!(refractive_index > 1.0))
            throw InvalidArgument("LensSpec: refractive index must exceed 1");
        if (center_thickness < sag())
            throw InvalidArgument("LensSpec: center thickness " + std::to_string(center_thickness) +
                                  " m is below the sag " + std::to_string(sag()) + " m");
    }
};

/// Ray-transfer matrix.
struct Abcd
{
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    ComplexQ apply(const ComplexQ &q) const
    {
        const std::complex<double> den = c * q.value + d;
        if (std::abs(den) < 1e-15)
            throw DegenerateTransform("ABCD transform: |C q + D| vanished, waist imaged at infinity");
        return {(a * q.value + b) / den};
    }
};

/// Plano-convex lens matrix for a ray path of glass thickness tau.
/// A flat slab is obtained for an infinite curvature radius.
inline Abcd lens_abcd(const LensSpec &lens, double tau)
{
    const double n = lens.refractive_index;
    const double inv_r = std::isinf(lens.curvature_radius) ? 0.0 : 1.0 / lens.curvature_radius;
    return {1.0, tau / n, (1.0 - n) * inv_r, 1.0 + tau * inv_r * (1.0 / n - 1.0)};
}

/// A beam after the lens: waist, Rayleigh range, waist offset, and the chief ray.
struct TransformedBeam
{
    double waist_radius = 0.0;
    double rayleigh_range = 0.0;
    /// Re{q'} at the exit plane. Positive: the exit plane lies this far past
    /// the new waist, i.e. the waist is a virtual image behind the lens.
    double waist_offset = 0.0;
    double wavelength = 0.0;
    UnitVec3 direction;
    Vec3 origin;

    double spot_radius(double z) const { return gobnet::spot_radius(waist_radius, rayleigh_range, z); }
    double divergence_half_angle() const { return wavelength / (std::numbers::pi * waist_radius); }
};

/**
 * Image of a Gaussian beam through the plano-convex lens.
 *
 * The input waist sits `d_vl` before the flat face and the beam crosses
 * `tau` of glass. Closed forms for Re{q'}, Im{q'} and w0'. The chief ray
 * is left on the local optical axis; callers set direction/origin.
 */
inline TransformedBeam transform_through_lens(const GaussianBeam &beam, const LensSpec &lens, double d_vl,
                                              double tau)
{
    beam.validate();
    if (!(d_vl > 0.0))
        throw InvalidArgument("transform_through_lens: d_VL must be positive");
    if (!(tau > 0.0) || tau > lens.center_thickness * (1.0 + 1e-12))
        throw InvalidArgument("transform_through_lens: traversal thickness outside (0, tau_c]");

    const double zr = beam.rayleigh_range();
    const double shifted = d_vl + tau / lens.refractive_index;
    // 1/f = 0 for a flat slab.
    const double inv_f = std::isinf(lens.curvature_radius) ? 0.0 : 1.0 / lens.focal_length();
    const double m = 1.0 - shifted * inv_f;
    const double den = m * m + zr * zr * inv_f * inv_f;
    if (std::sqrt(den) < 1e-15)
        throw DegenerateTransform("transform_through_lens: waist imaged at infinity");

    TransformedBeam out;
    out.waist_offset = (shifted * m - zr * zr * inv_f) / den;
    out.rayleigh_range = zr / den;
    const double w0 = beam.waist_radius;
    const double norm_zr = std::numbers::pi * w0 * w0 / beam.wavelength * inv_f;
    out.waist_radius = w0 / std::sqrt(m * m + norm_zr * norm_zr);
    out.wavelength = beam.wavelength;
    return out;
}

} // namespace gobnet
