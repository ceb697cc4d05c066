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
 * @file simulation.hpp
 * @brief Monte Carlo drops, per-drop evaluation, density sweeps and
 * single-UE spatial maps.
 *
 * Every drop draws from its own generator seeded by (campaign seed, stream),
 * so results do not depend on how drops are scheduled across threads.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ap_model.hpp"
#include "clustering.hpp"
#include "errors.hpp"
#include "mac.hpp"
#include "parallel.hpp"
#include "receiver.hpp"

namespace gobnet
{

struct Room
{
    double lx = 5.0;
    double ly = 5.0;
    double lz = 3.0;

    double area() const { return lx * ly; }
    Extent floor() const { return {-lx / 2, lx / 2, -ly / 2, ly / 2}; }
    void validate() const
    {
        if (!(lx > 0.0 && ly > 0.0 && lz > 0.0))
            throw InvalidArgument("Room: dimensions must be positive");
    }
};

/// Number of UEs for density rho (UE/m^2), rounded to the nearest integer.
inline int users_for_density(double rho, const Room &room)
{
    if (!(rho > 0.0))
        throw InvalidArgument("users_for_density: density must be positive");
    return std::max(1, static_cast<int>(std::lround(rho * room.area())));
}

struct DropSpec
{
    int num_ues = 10;
    Room room;
    std::uint64_t seed = 1;

    static DropSpec from_density(double rho, const Room &room, std::uint64_t seed)
    {
        return {users_for_density(rho, room), room, seed};
    }
    double density() const { return num_ues / room.area(); }
};

/// Generator for substream `stream` of `seed`.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

/// K i.i.d. uniform UE positions on the floor of the room (z = 0).
inline std::vector<Vec3> sample_drop(const DropSpec &spec, std::uint64_t stream = 0)
{
    if (spec.num_ues < 1)
        throw InvalidArgument("sample_drop: need at least one UE");
    spec.room.validate();
    auto rng = substream(spec.seed, stream);
    std::uniform_real_distribution<double> ux(-spec.room.lx / 2, spec.room.lx / 2);
    std::uniform_real_distribution<double> uy(-spec.room.ly / 2, spec.room.ly / 2);
    std::vector<Vec3> p(static_cast<std::size_t>(spec.num_ues));
    for (auto &q : p)
    {
        q.x = ux(rng);
        q.y = uy(rng);
    }
    return p;
}

/// Immutable system description shared by all drops.
struct SystemModel
{
    ApConfig ap;
    AdrSpec adr;
    NoiseSpec noise;
    MacConfig mac;
    std::vector<BeamRecord> beams;
    ReceiverResponse response;
    SpotGrid grid;

    SystemModel(const ApConfig &ap_cfg, const AdrSpec &adr_spec, const NoiseSpec &noise_spec, const MacConfig &mac_cfg)
        : ap(ap_cfg), adr(adr_spec), noise(noise_spec), mac(mac_cfg), beams(build_beams(ap_cfg)),
          response(beams, adr_spec), grid(SpotGrid::from_beams(beams))
    {
        noise.validate();
        mac.validate();
        mac.tx_power = ap.source.power;
    }

    int beam_count() const { return static_cast<int>(beams.size()); }
    double gamma() const { return mac.noise_scale(adr.responsivity); }
    ChannelGainTensor gains_at(const Vec3 &ue) const { return channel_gain_tensor(beams, response, ue); }
};

inline SystemModel default_system() { return SystemModel(ApConfig{}, default_adr(), NoiseSpec{}, MacConfig{}); }

struct UserMetrics
{
    int ue = 0;
    int cluster = 0;      // 0-based serving cluster
    int order = 0;        // 1-based position in the ascending-gain order
    double sinr = 0.0;
    double rate = 0.0;    // bit/s
};

struct DropResult
{
    NetworkMetrics network;
    std::vector<UserMetrics> users;
};

/// Which clusters transmit besides the serving one.
enum class Interference
{
    active_clusters, // clusters with at least one assigned UE
    all_clusters     // every cluster at full power
};

namespace detail
{

/// Per-element noise variance for one UE given its gains to every cluster.
inline ElementVector ue_noise_variance(std::span<const ClusterGain> gains, const SystemModel &m)
{
    std::vector<ElementVector> powers(gains.size());
    for (std::size_t u = 0; u < gains.size(); ++u)
        for (std::size_t j = 0; j < kAdrElements; ++j)
            powers[u][j] = gains[u].per_element[j] * m.ap.source.power;
    return noise_psd(powers, m.adr, m.noise).variance;
}

inline UserChannel user_channel(std::span<const ClusterGain> gains, int serving, std::span<const char> transmitting,
                                const ElementVector &noise_variance)
{
    UserChannel ch;
    ch.serving = gains[static_cast<std::size_t>(serving)].per_element;
    ch.noise_variance = noise_variance;
    for (std::size_t v = 0; v < gains.size(); ++v)
        if (static_cast<int>(v) != serving && transmitting[v])
            ch.interferers.push_back(gains[v].per_element);
    return ch;
}

} // namespace detail

/// Gains of every UE of a drop; shared across layouts and schemes.
struct DropGains
{
    std::vector<ChannelGainTensor> tensors;

    static DropGains compute(const SystemModel &m, std::span<const Vec3> ues)
    {
        DropGains g;
        g.tensors.reserve(ues.size());
        for (const auto &p : ues)
            g.tensors.push_back(m.gains_at(p));
        return g;
    }
};

/**
 * Full per-drop pipeline for one layout and scheme: association, ordering
 * or allocation, SINR, rate, sum rate and fairness.
 */
inline DropResult evaluate_drop(const SystemModel &m, const DropGains &gains, const ClusterLayout &layout,
                                Scheme scheme, Interference mode = Interference::active_clusters)
{
    const std::size_t K = gains.tensors.size();
    if (K == 0)
        throw InvalidArgument("evaluate_drop: no UEs");
    std::vector<std::vector<ClusterGain>> cg(K);
    for (std::size_t k = 0; k < K; ++k)
        cg[k] = cluster_gains(gains.tensors[k], layout);
    const UeAssignment assignment = assign_ues(cg, layout.cluster_count());

    std::vector<char> transmitting(layout.cluster_count(), mode == Interference::all_clusters ? 1 : 0);
    for (std::size_t u = 0; u < layout.cluster_count(); ++u)
        if (!assignment.members[u].empty())
            transmitting[u] = 1;

    MacConfig mac = m.mac;
    mac.scheme = scheme;
    const double gamma = m.gamma();
    const double zeta = mac.zeta();

    DropResult out;
    out.users.resize(K);
    for (std::size_t u = 0; u < layout.cluster_count(); ++u)
    {
        const auto &members = assignment.members[u];
        if (members.empty())
            continue;
        const int Ku = static_cast<int>(members.size());
        std::vector<double> totals;
        for (int k : members)
            totals.push_back(cg[static_cast<std::size_t>(k)][u].total);
        const std::vector<int> order = noma_order(members, totals);
        const std::vector<double> coeffs = noma_power_coefficients(Ku);
        const std::vector<double> share(static_cast<std::size_t>(Ku), 1.0 / Ku);

        for (int pos = 1; pos <= Ku; ++pos)
        {
            const int k = order[static_cast<std::size_t>(pos - 1)];
            const auto &g = cg[static_cast<std::size_t>(k)];
            const UserChannel ch =
                detail::user_channel(g, static_cast<int>(u), transmitting, detail::ue_noise_variance(g, m));
            UserMetrics &um = out.users[static_cast<std::size_t>(k)];
            um.ue = k;
            um.cluster = static_cast<int>(u);
            um.order = pos;
            if (scheme == Scheme::noma)
            {
                um.sinr = noma_sinr(ch, coeffs, pos, gamma, zeta);
                um.rate = user_rate(um.sinr, mac);
            }
            else
            {
                um.sinr = ofdma_sinr(ch, share, share, static_cast<std::size_t>(pos - 1), gamma, zeta);
                um.rate = user_rate(um.sinr, mac, share[static_cast<std::size_t>(pos - 1)]);
            }
        }
    }
    std::vector<double> rates;
    rates.reserve(K);
    for (const auto &um : out.users)
        rates.push_back(um.rate);
    out.network = network_metrics(rates);
    return out;
}

inline DropResult run_drop(const SystemModel &m, std::span<const Vec3> ues, const ClusterLayout &layout,
                           Scheme scheme)
{
    return evaluate_drop(m, DropGains::compute(m, ues), layout, scheme);
}

/// SINR and rate of a lone UE at `p`, served by its best cluster while every
/// other cluster transmits at full power.
struct PointMetrics
{
    int cluster = 0;
    double sinr = 0.0;
    double rate = 0.0;
};

inline PointMetrics single_user_metrics(const SystemModel &m, const ClusterLayout &layout, const Vec3 &p)
{
    const auto cg = cluster_gains(m.gains_at(p), layout);
    const int u = best_cluster(cg);
    const std::vector<char> all(cg.size(), 1);
    const UserChannel ch = detail::user_channel(cg, u, all, detail::ue_noise_variance(cg, m));
    static constexpr std::array<double, 1> unit{1.0};
    PointMetrics pm;
    pm.cluster = u;
    pm.sinr = noma_sinr(ch, unit, 1, m.gamma(), m.mac.zeta());
    pm.rate = user_rate(pm.sinr, m.mac);
    return pm;
}

struct SpatialMaps
{
    IntensityField sinr_db;
    IntensityField rate;
};

inline SpatialMaps spatial_maps(const SystemModel &m, const ClusterLayout &layout, const Extent &extent,
                                int resolution, unsigned threads = 1)
{
    if (resolution < 2)
        throw InvalidArgument("spatial_maps: resolution must be at least 2");
    SpatialMaps maps{IntensityField(extent, resolution, resolution), IntensityField(extent, resolution, resolution)};
    parallel_for(static_cast<std::size_t>(resolution), threads,
                 [&](std::size_t row)
                 {
                     const int iy = static_cast<int>(row);
                     for (int ix = 0; ix < resolution; ++ix)
                     {
                         const Vec3 p{maps.sinr_db.x_at(ix), maps.sinr_db.y_at(iy), 0.0};
                         const PointMetrics pm = single_user_metrics(m, layout, p);
                         maps.sinr_db.at(ix, iy) = to_db(pm.sinr);
                         maps.rate.at(ix, iy) = pm.rate;
                     }
                 });
    return maps;
}

/// Single-UE metrics at every beam spot centre, in beam order.
inline std::vector<PointMetrics> spot_center_metrics(const SystemModel &m, const ClusterLayout &layout)
{
    std::vector<PointMetrics> out;
    out.reserve(m.beams.size());
    for (const auto &b : m.beams)
    {
        Vec3 c = b.spot_center();
        c.z = 0.0;
        out.push_back(single_user_metrics(m, layout, c));
    }
    return out;
}

/// Beams whose spots form the outer ring of the 15x15 grid.
inline std::vector<int> outer_ring_beams(const SpotGrid &grid)
{
    std::vector<int> ring;
    const int last = SpotGrid::kSide - 1;
    for (int b = 1; b <= grid.beam_count(); ++b)
        if (grid.row(b) == 0 || grid.row(b) == last || grid.col(b) == 0 || grid.col(b) == last)
            ring.push_back(b);
    return ring;
}

/// Edge of the covered area: each outer-ring spot centre pushed radially
/// outwards by the beam's spot radius at that range.
inline std::vector<Vec3> network_edge_points(const SystemModel &m)
{
    std::vector<Vec3> pts;
    for (int b : outer_ring_beams(m.grid))
    {
        const BeamRecord &beam = m.beams[static_cast<std::size_t>(b - 1)];
        Vec3 c = beam.spot_center();
        c.z = 0.0;
        const double r = std::hypot(c.x, c.y);
        const double w = beam.spot_radius(norm(c - beam.origin));
        pts.push_back({c.x + w * c.x / r, c.y + w * c.y / r, 0.0});
    }
    return pts;
}

inline double median(std::vector<double> v)
{
    if (v.empty())
        throw InvalidArgument("median: no samples");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Headline numbers of a single-UE map.
struct CoverageSummary
{
    double peak_sinr_db = 0.0;  // best spot centre
    double edge_sinr_db = 0.0;  // median over the network-edge points
    double peak_rate = 0.0;     // best spot centre, bit/s
    double wall_rate = 0.0;     // median over outer-ring spot centres, bit/s
};

inline CoverageSummary coverage_summary(const SystemModel &m, const ClusterLayout &layout)
{
    CoverageSummary s;
    const auto spots = spot_center_metrics(m, layout);
    s.peak_sinr_db = -std::numeric_limits<double>::infinity();
    for (const auto &p : spots)
    {
        s.peak_sinr_db = std::max(s.peak_sinr_db, to_db(p.sinr));
        s.peak_rate = std::max(s.peak_rate, p.rate);
    }
    std::vector<double> edge, wall;
    for (const auto &p : network_edge_points(m))
        edge.push_back(to_db(single_user_metrics(m, layout, p).sinr));
    for (int b : outer_ring_beams(m.grid))
        wall.push_back(spots[static_cast<std::size_t>(b - 1)].rate);
    s.edge_sinr_db = median(std::move(edge));
    s.wall_rate = median(std::move(wall));
    return s;
}

struct CdfSeries
{
    std::vector<double> values;        // ascending
    std::vector<double> probabilities; // i / n for i = 1..n

    static CdfSeries from_samples(std::vector<double> samples)
    {
        if (samples.empty())
            throw InvalidArgument("CdfSeries: no samples");
        std::sort(samples.begin(), samples.end());
        CdfSeries c;
        c.values = std::move(samples);
        const double n = static_cast<double>(c.values.size());
        for (std::size_t i = 0; i < c.values.size(); ++i)
            c.probabilities.push_back((i + 1) / n);
        return c;
    }

    /// Right-continuous empirical CDF.
    double operator()(double x) const
    {
        const auto it = std::upper_bound(values.begin(), values.end(), x);
        return static_cast<double>(it - values.begin()) / static_cast<double>(values.size());
    }
};

struct SampleStats
{
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;

    /// Two-pass mean and standard error of the mean.
    static SampleStats of(std::span<const double> x)
    {
        SampleStats s;
        s.count = x.size();
        if (x.empty())
            return s;
        double sum = 0.0;
        for (double v : x)
            sum += v;
        s.mean = sum / static_cast<double>(x.size());
        if (x.size() > 1)
        {
            double ss = 0.0;
            for (double v : x)
                ss += (v - s.mean) * (v - s.mean);
            s.std_error = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
        }
        return s;
    }
};

struct CampaignSpec
{
    int drops = 1000;
    std::vector<ClusterLayout> layouts;
    std::vector<Scheme> schemes{Scheme::noma};
    std::vector<int> user_counts; // one sweep point per entry
    Room room;
    std::uint64_t seed = 1;
    unsigned threads = 1;

    void validate() const
    {
        if (drops < 1)
            throw InvalidArgument("CampaignSpec: drops must be at least 1");
        if (layouts.empty() || schemes.empty() || user_counts.empty())
            throw InvalidArgument("CampaignSpec: need at least one layout, scheme and sweep point");
        for (int k : user_counts)
            if (k < 1)
                throw InvalidArgument("CampaignSpec: user counts must be positive");
        room.validate();
    }
};

/// Per-drop samples of one (sweep point, layout, scheme) series.
struct SeriesResult
{
    int num_ues = 0;
    double density = 0.0;
    std::string layout;
    Scheme scheme = Scheme::noma;
    std::vector<double> sum_rate; // indexed by drop
    std::vector<double> jain;

    SampleStats sum_rate_stats() const { return SampleStats::of(sum_rate); }
    SampleStats jain_stats() const { return SampleStats::of(jain); }
};

struct CampaignResult
{
    std::vector<SeriesResult> series; // point-major, then layout, then scheme

    const SeriesResult &find(int num_ues, const std::string &layout, Scheme scheme) const
    {
        for (const auto &s : series)
            if (s.num_ues == num_ues && s.layout == layout && s.scheme == scheme)
                return s;
        throw InvalidArgument("CampaignResult: no series for " + layout + "/" + std::string(to_string(scheme)));
    }
};

/// Stream index of drop d at sweep point i.
inline std::uint64_t drop_stream(std::size_t point, int drop)
{
    return (static_cast<std::uint64_t>(point) << 32) | static_cast<std::uint32_t>(drop);
}

inline CampaignResult run_campaign(const SystemModel &m, const CampaignSpec &spec)
{
    spec.validate();
    for (const auto &l : spec.layouts)
        l.validate(m.beam_count());
    const std::size_t per_point = spec.layouts.size() * spec.schemes.size();
    CampaignResult result;
    for (std::size_t i = 0; i < spec.user_counts.size(); ++i)
    {
        const int K = spec.user_counts[i];
        for (const auto &l : spec.layouts)
            for (Scheme s : spec.schemes)
            {
                SeriesResult sr;
                sr.num_ues = K;
                sr.density = K / spec.room.area();
                sr.layout = l.name;
                sr.scheme = s;
                sr.sum_rate.assign(static_cast<std::size_t>(spec.drops), 0.0);
                sr.jain.assign(static_cast<std::size_t>(spec.drops), 0.0);
                result.series.push_back(std::move(sr));
            }
    }

    for (std::size_t i = 0; i < spec.user_counts.size(); ++i)
    {
        const DropSpec drop{spec.user_counts[i], spec.room, spec.seed};
        parallel_for(static_cast<std::size_t>(spec.drops), spec.threads,
                     [&](std::size_t d)
                     {
                         const auto ues = sample_drop(drop, drop_stream(i, static_cast<int>(d)));
                         const DropGains gains = DropGains::compute(m, ues);
                         std::size_t slot = i * per_point;
                         for (const auto &l : spec.layouts)
                             for (Scheme s : spec.schemes)
                             {
                                 const DropResult r = evaluate_drop(m, gains, l, s);
                                 result.series[slot].sum_rate[d] = r.network.sum_rate;
                                 result.series[slot].jain[d] = r.network.jain;
                                 ++slot;
                             }
                     });
    }
    return result;
}

} // namespace gobnet
