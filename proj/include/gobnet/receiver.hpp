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
 * @file receiver.hpp
 * @brief Seven-element CPC angle-diversity receiver (ADR): element
 * orientations, DC channel gains, cluster-equivalent gains and noise PSD.
 */

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ap_model.hpp"
#include "errors.hpp"
#include "vec3.hpp"

namespace gobnet
{

inline constexpr int kAdrElements = 7;
inline constexpr double kBoltzmann = 1.380649e-23;
inline constexpr double kElementaryCharge = 1.602176634e-19;

using ElementVector = std::array<double, kAdrElements>;

struct AdrSpec
{
    double theta_cpc = deg_to_rad(50.0) / 3.0; // CPC acceptance half-angle
    double n_cpc = 1.77;
    int num_pd = 16;
    double pd_area = 0.0;                      // set by default_adr()
    double fill_factor = 0.8;
    double responsivity = 0.7;

    static AdrSpec from_fov(double fov, double pd_area, double fill_factor = 0.8)
    {
        AdrSpec a;
        a.theta_cpc = fov / 3.0;
        a.pd_area = pd_area;
        a.fill_factor = fill_factor;
        return a;
    }

    double fov() const { return 3.0 * theta_cpc; }
    double concentration_gain() const
    {
        const double s = std::sin(theta_cpc);
        return n_cpc * n_cpc / (s * s);
    }
    double exit_area() const { return num_pd * pd_area / fill_factor; }
    double entrance_area() const { return concentration_gain() * exit_area(); }

    void validate() const
    {
        if (!(theta_cpc > 0.0 && theta_cpc < 0.5 * std::numbers::pi))
            throw InvalidArgument("AdrSpec: CPC acceptance angle must lie in (0, pi/2)");
        if (!(n_cpc >= 1.0))
            throw InvalidArgument("AdrSpec: CPC refractive index must be at least 1");
        if (num_pd < 1 || !(pd_area > 0.0))
            throw InvalidArgument("AdrSpec: PD count and area must be positive");
        if (!(fill_factor > 0.0 && fill_factor <= 1.0))
            throw InvalidArgument("AdrSpec: fill factor must lie in (0, 1]");
        if (!(responsivity > 0.0))
            throw InvalidArgument("AdrSpec: responsivity must be positive");
    }
};

/// PD area calibrated so that, for the default AP, FOV = 50 deg and the
/// default noise, the SDMA map peaks near 25 dB at the spot centres and
/// sits near 7 dB at the network edge.
inline constexpr double kCalibratedPdArea = 1.7e-6;

inline AdrSpec default_adr() { return AdrSpec::from_fov(deg_to_rad(50.0), kCalibratedPdArea); }

struct NoiseSpec
{
    double temperature = 300.0;
    double load_resistance = 50.0;
    double noise_figure = std::pow(10.0, 5.0 / 10.0);
    double rin = std::pow(10.0, -155.0 / 10.0);
    double bandwidth = 2e9;

    void validate() const
    {
        if (!(temperature > 0.0 && load_resistance > 0.0 && noise_figure > 0.0 && rin > 0.0 && bandwidth > 0.0))
            throw InvalidArgument("NoiseSpec: all parameters must be strictly positive");
    }
};

/// Unit normal of ADR element j in 1..7 (j = 7 faces straight up).
inline UnitVec3 element_normal(int j, double theta_cpc)
{
    if (j < 1 || j > kAdrElements)
        throw IndexOutOfRange("element_normal: ADR element " + std::to_string(j) + " outside 1..7");
    if (j == 7)
        return UnitVec3::trusted({0.0, 0.0, 1.0});
    const double elevation = 2.0 * theta_cpc;
    const double azimuth = (j - 1) * std::numbers::pi / 3.0;
    return UnitVec3(Vec3{std::sin(elevation) * std::cos(azimuth), std::sin(elevation) * std::sin(azimuth),
                         std::cos(elevation)});
}

/// Incidence angle of a downward beam on an upward-facing element: the
/// angle between the element normal and the reversed beam axis.
inline double incidence_angle(const UnitVec3 &normal, const UnitVec3 &beam_direction)
{
    return angle_between(normal.vec(), -beam_direction.vec());
}

/// cos(psi) 1[psi <= theta_cpc]; depends only on the beam direction.
inline double element_response(const UnitVec3 &normal, const UnitVec3 &beam_direction, double theta_cpc)
{
    const double psi = incidence_angle(normal, beam_direction);
    return psi <= theta_cpc ? std::cos(psi) : 0.0;
}

/// DC gain between one beam and ADR element j at a UE on the receiver plane.
inline double channel_gain(const BeamRecord &beam, const Vec3 &ue, const AdrSpec &adr, int j)
{
    const double response = element_response(element_normal(j, adr.theta_cpc), beam.direction, adr.theta_cpc);
    if (response == 0.0)
        return 0.0;
    // Irradiance per watt times the effective collection area N A_PD G_CPC.
    return beam_intensity_at(beam, ue, 1.0) * adr.num_pd * adr.pd_area * adr.concentration_gain() * response;
}

/// Per-UE 7 x N_beams matrix of DC gains, H(j, i) with 0-based indices.
class ChannelGainTensor
{
public:
    ChannelGainTensor() = default;
    explicit ChannelGainTensor(std::size_t beams) : beams_(beams), data_(kAdrElements * beams, 0.0) {}

    std::size_t beam_count() const { return beams_; }
    double operator()(int j, std::size_t i) const { return data_[static_cast<std::size_t>(j) * beams_ + i]; }
    double &operator()(int j, std::size_t i) { return data_[static_cast<std::size_t>(j) * beams_ + i]; }
    std::span<const double> row(int j) const
    {
        return {data_.data() + static_cast<std::size_t>(j) * beams_, beams_};
    }
    void scale(double s)
    {
        for (double &v : data_)
            v *= s;
    }

private:
    std::size_t beams_ = 0;
    std::vector<double> data_;
};

/**
 * Direction-only part of the gain: for each (element, beam) the product
 * N A_PD G_CPC cos(psi) 1[psi <= theta]. Built once per AP/ADR pair.
 */
class ReceiverResponse
{
public:
    ReceiverResponse(std::span<const BeamRecord> beams, const AdrSpec &adr) : factors_(beams.size())
    {
        adr.validate();
        const double area = adr.num_pd * adr.pd_area * adr.concentration_gain();
        for (int j = 0; j < kAdrElements; ++j)
        {
            const UnitVec3 e = element_normal(j + 1, adr.theta_cpc);
            for (std::size_t i = 0; i < beams.size(); ++i)
                factors_(j, i) = area * element_response(e, beams[i].direction, adr.theta_cpc);
        }
    }

    double factor(int j, std::size_t i) const { return factors_(j, i); }
    std::size_t beam_count() const { return factors_.beam_count(); }

private:
    ChannelGainTensor factors_;
};

inline ChannelGainTensor channel_gain_tensor(std::span<const BeamRecord> beams, const ReceiverResponse &response,
                                             const Vec3 &ue)
{
    ChannelGainTensor h(beams.size());
    for (std::size_t i = 0; i < beams.size(); ++i)
    {
        const double irradiance = beam_intensity_at(beams[i], ue, 1.0);
        for (int j = 0; j < kAdrElements; ++j)
            h(j, i) = irradiance * response.factor(j, i);
    }
    return h;
}

inline ChannelGainTensor channel_gain_tensor(std::span<const BeamRecord> beams, const AdrSpec &adr, const Vec3 &ue)
{
    return channel_gain_tensor(beams, ReceiverResponse(beams, adr), ue);
}

struct ClusterGain
{
    ElementVector per_element{};
    double total = 0.0;
};

/// Sum of H over the beams of one cluster (1-based beam indices).
inline ClusterGain cluster_gain(const ChannelGainTensor &h, std::span<const int> cluster)
{
    if (cluster.empty())
        throw EmptyCluster("cluster_gain: cluster has no beams");
    ClusterGain g;
    for (int j = 0; j < kAdrElements; ++j)
    {
        double s = 0.0;
        for (int beam : cluster)
        {
            if (beam < 1 || static_cast<std::size_t>(beam) > h.beam_count())
                throw IndexOutOfRange("cluster_gain: beam index " + std::to_string(beam) + " out of range");
            s += h(j, static_cast<std::size_t>(beam - 1));
        }
        g.per_element[static_cast<std::size_t>(j)] = s;
        g.total += s;
    }
    return g;
}

/// Thermal floor 4 k T F_n N_PD / R_L in A^2/Hz.
inline double thermal_noise_psd(const AdrSpec &adr, const NoiseSpec &noise)
{
    return 4.0 * kBoltzmann * noise.temperature / noise.load_resistance * noise.noise_figure * adr.num_pd;
}

/// Single-sided noise PSD of one ADR element given the optical power it
/// receives from every cluster.
inline double noise_psd(std::span<const double> cluster_powers, const AdrSpec &adr, const NoiseSpec &noise)
{
    double shot = 0.0;
    double rin = 0.0;
    for (double p : cluster_powers)
    {
        if (p < 0.0)
            throw InvalidArgument("noise_psd: received power must be non-negative");
        const double current = adr.responsivity * p;
        shot += current;
        rin += current * current;
    }
    return thermal_noise_psd(adr, noise) + 2.0 * kElementaryCharge * shot + noise.rin * rin;
}

struct ElementNoise
{
    ElementVector psd{};
    ElementVector variance{};
};

/// Noise of all seven elements; cluster_powers[u][j] is P_kj from cluster u.
inline ElementNoise noise_psd(std::span<const ElementVector> cluster_powers, const AdrSpec &adr,
                              const NoiseSpec &noise)
{
    ElementNoise out;
    std::vector<double> column(cluster_powers.size());
    for (std::size_t j = 0; j < kAdrElements; ++j)
    {
        for (std::size_t u = 0; u < cluster_powers.size(); ++u)
            column[u] = cluster_powers[u][j];
        out.psd[j] = noise_psd(column, adr, noise);
        out.variance[j] = out.psd[j] * noise.bandwidth;
    }
    return out;
}

} // namespace gobnet
