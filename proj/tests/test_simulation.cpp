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


#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "gobnet/simulation.hpp"

using namespace gobnet;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
const SystemModel &model()
{
    static const SystemModel m = default_system();
    return m;
}

// Welford running mean.
double streaming_mean(std::span<const double> x)
{
    double mean = 0.0;
    std::size_t n = 0;
    for (double v : x)
        mean += (v - mean) / static_cast<double>(++n);
    return mean;
}

// Noise variance of one element given the optical power from each cluster.
double noise_oracle(std::span<const double> powers, const SystemModel &m)
{
    const double thermal =
        4.0 * 1.380649e-23 * m.noise.temperature * m.noise.noise_figure * m.adr.num_pd / m.noise.load_resistance;
    double shot = 0.0, rin = 0.0;
    for (double p : powers)
    {
        const double i = m.adr.responsivity * p;
        shot += 2.0 * 1.602176634e-19 * i;
        rin += m.noise.rin * i * i;
    }
    return (thermal + shot + rin) * m.mac.bandwidth;
}
} // namespace

TEST_CASE("UE counts and drops", "[simulation]")
{
    const Room room;
    CHECK(users_for_density(4.0, room) == 100);
    CHECK(users_for_density(0.4, room) == 10);
    CHECK(users_for_density(1e-6, room) == 1);
    CHECK_THROWS_AS(users_for_density(0.0, room), InvalidArgument);
    CHECK_THAT(DropSpec::from_density(1.2, room, 3).density(), WithinAbs(1.2, 1e-12));

    const DropSpec spec{50, room, 42};
    const auto a = sample_drop(spec, 7);
    CHECK(a == sample_drop(spec, 7));
    CHECK(a != sample_drop(spec, 8));
    CHECK(a != sample_drop(DropSpec{50, room, 43}, 7));
    for (const auto &p : a)
    {
        CHECK(std::abs(p.x) <= 2.5);
        CHECK(std::abs(p.y) <= 2.5);
        CHECK(p.z == 0.0);
    }
    CHECK_THROWS_AS(sample_drop(DropSpec{0, room, 1}), InvalidArgument);

    // Uniform on the floor: mean 0, variance L^2/12.
    const auto big = sample_drop(DropSpec{1'000'000, room, 5});
    double sx = 0.0, sy = 0.0, sxx = 0.0;
    for (const auto &p : big)
    {
        sx += p.x;
        sy += p.y;
        sxx += p.x * p.x;
    }
    const double n = static_cast<double>(big.size());
    const double sigma = 5.0 / std::sqrt(12.0);
    CHECK(std::abs(sx / n) < 4.0 * sigma / std::sqrt(n));
    CHECK(std::abs(sy / n) < 4.0 * sigma / std::sqrt(n));
    CHECK_THAT(sxx / n, WithinRel(25.0 / 12.0, 0.01));
}

TEST_CASE("single-UE drops", "[simulation]")
{
    const auto &m = model();
    const ClusterLayout sdma = builtin_layout("sdma", m.grid);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> pos(-2.5, 2.5);
    for (int trial = 0; trial < 50; ++trial)
    {
        const std::vector<Vec3> ue{{pos(rng), pos(rng), 0.0}};
        const DropResult noma = run_drop(m, ue, sdma, Scheme::noma);
        const DropResult ofdma = run_drop(m, ue, sdma, Scheme::ofdma);
        if (noma.users[0].rate > 0.0)
            CHECK(noma.network.jain == 1.0);
        CHECK_THAT(noma.users[0].rate, WithinRel(ofdma.users[0].rate, 1e-12));
    }
    const std::vector<Vec3> centre{{0.0, 0.0, 0.0}};
    for (const auto &name : builtin_layout_names())
    {
        const ClusterLayout l = builtin_layout(name, m.grid);
        const DropResult noma = run_drop(m, centre, l, Scheme::noma);
        const DropResult ofdma = run_drop(m, centre, l, Scheme::ofdma);
        CHECK(noma.network.jain == 1.0);
        CHECK(noma.users[0].rate > 0.0);
        CHECK_THAT(noma.users[0].rate, WithinRel(ofdma.users[0].rate, 1e-12));
    }
}

TEST_CASE("five UEs in distinct s1 clusters decompose into single-user links", "[simulation]")
{
    const auto &m = model();
    const ClusterLayout s1 = builtin_layout("s1", m.grid);
    const std::vector<int> elements{1, 3, 5, 7, 9};
    std::vector<Vec3> ues;
    for (int v : elements)
    {
        Vec3 c = m.beams[static_cast<std::size_t>(25 * (v - 1) + 12)].spot_center();
        c.z = 0.0;
        ues.push_back(c);
    }

    for (Scheme scheme : {Scheme::noma, Scheme::ofdma})
    {
        const DropResult r = run_drop(m, ues, s1, scheme);
        double sum = 0.0;
        for (std::size_t k = 0; k < ues.size(); ++k)
        {
            CHECK(r.users[k].cluster == elements[k] - 1);
            CHECK(r.users[k].order == 1);

            // Per-element gains to every cluster from the raw beam gains.
            std::array<ElementVector, 9> g{};
            for (const auto &b : m.beams)
                for (int j = 1; j <= kAdrElements; ++j)
                    g[static_cast<std::size_t>(b.element_index - 1)][static_cast<std::size_t>(j - 1)] +=
                        channel_gain(b, ues[k], m.adr, j);

            const double gamma = m.gamma();
            double num = 0.0, wh = 0.0, ici = 0.0, noise = 0.0;
            ElementVector w{};
            for (std::size_t j = 0; j < kAdrElements; ++j)
            {
                std::vector<double> powers;
                double interference = 0.0;
                for (std::size_t v = 0; v < 9; ++v)
                {
                    powers.push_back(g[v][j] * m.ap.source.power);
                    if (v != static_cast<std::size_t>(elements[k] - 1) &&
                        std::find(elements.begin(), elements.end(), static_cast<int>(v) + 1) != elements.end())
                        interference += g[v][j] * g[v][j];
                }
                const double var = noise_oracle(powers, m);
                const double h = g[static_cast<std::size_t>(elements[k] - 1)][j];
                w[j] = h / (interference + gamma * var);
                wh += w[j] * h;
                noise += w[j] * w[j] * var;
            }
            for (int v : elements)
            {
                if (v == elements[k])
                    continue;
                double c = 0.0;
                for (std::size_t j = 0; j < kAdrElements; ++j)
                    c += w[j] * g[static_cast<std::size_t>(v - 1)][j];
                ici += c * c;
            }
            num = wh * wh;
            const double sinr = num / (ici + gamma * noise);
            const double rate = m.mac.utilization() * m.mac.bandwidth * std::log2(1.0 + sinr / m.mac.snr_gap());
            CHECK_THAT(r.users[k].sinr, WithinRel(sinr, 1e-9));
            CHECK_THAT(r.users[k].rate, WithinRel(rate, 1e-9));
            sum += rate;
        }
        CHECK_THAT(r.network.sum_rate, WithinRel(sum, 1e-9));
    }
}

TEST_CASE("interference from idle clusters only lowers SINR", "[simulation]")
{
    const auto &m = model();
    const ClusterLayout s2 = builtin_layout("s2", m.grid);
    const auto ues = sample_drop(DropSpec{12, Room{}, 4});
    const DropGains gains = DropGains::compute(m, ues);
    for (Scheme s : {Scheme::noma, Scheme::ofdma})
    {
        const DropResult active = evaluate_drop(m, gains, s2, s, Interference::active_clusters);
        const DropResult all = evaluate_drop(m, gains, s2, s, Interference::all_clusters);
        for (std::size_t k = 0; k < ues.size(); ++k)
            CHECK(all.users[k].sinr <= active.users[k].sinr * (1.0 + 1e-12));
    }
}

TEST_CASE("empirical CDF", "[simulation]")
{
    const CdfSeries one = CdfSeries::from_samples({3.5});
    CHECK(one(3.4) == 0.0);
    CHECK(one(3.5) == 1.0);
    CHECK(one.probabilities == std::vector<double>{1.0});

    const CdfSeries c = CdfSeries::from_samples({4.0, 1.0, 3.0, 2.0, 2.0});
    CHECK(c.values == std::vector<double>{1.0, 2.0, 2.0, 3.0, 4.0});
    CHECK(c(0.5) == 0.0);
    CHECK(c(1.0) == 0.2);
    CHECK(c(2.0) == 0.6);
    CHECK(c(2.0 - 1e-12) == 0.2);
    CHECK(c(10.0) == 1.0);
    CHECK(c.probabilities.back() == 1.0);
    CHECK(std::is_sorted(c.probabilities.begin(), c.probabilities.end()));
    CHECK_THROWS_AS(CdfSeries::from_samples({}), InvalidArgument);
}

TEST_CASE("sample statistics", "[simulation]")
{
    std::mt19937_64 rng(31);
    std::lognormal_distribution<double> d(20.0, 1.0);
    std::vector<double> x(100000);
    for (auto &v : x)
        v = d(rng);
    const SampleStats s = SampleStats::of(x);
    CHECK_THAT(s.mean, WithinRel(streaming_mean(x), 1e-12));
    CHECK(s.count == x.size());

    const std::vector<double> pair{1.0, 3.0};
    CHECK_THAT(SampleStats::of(pair).std_error, WithinRel(1.0, 1e-15));
    CHECK(SampleStats::of(std::vector<double>{5.0}).std_error == 0.0);
    CHECK(SampleStats::of(std::vector<double>{}).count == 0);
}

TEST_CASE("campaign", "[simulation]")
{
    const auto &m = model();
    CampaignSpec spec;
    spec.drops = 40;
    spec.layouts = {builtin_layout("sdma", m.grid), builtin_layout("s1", m.grid)};
    spec.schemes = {Scheme::noma, Scheme::ofdma};
    spec.user_counts = {5, 30};
    spec.seed = 9;

    const CampaignResult one = run_campaign(m, spec);
    REQUIRE(one.series.size() == 8);
    CHECK(one.series[0].num_ues == 5);
    CHECK(one.series[0].layout == "sdma");
    CHECK(one.series[1].scheme == Scheme::ofdma);
    CHECK(one.series[2].layout == "s1");
    CHECK(one.series[4].num_ues == 30);
    CHECK_THAT(one.series[4].density, WithinAbs(1.2, 1e-12));

    SECTION("the per-drop table matches single drops")
    {
        const auto &sr = one.find(30, "s1", Scheme::ofdma);
        for (int d : {0, 17, 39})
        {
            const auto ues = sample_drop(DropSpec{30, spec.room, spec.seed}, drop_stream(1, d));
            const DropResult r = run_drop(m, ues, spec.layouts[1], Scheme::ofdma);
            CHECK(sr.sum_rate[static_cast<std::size_t>(d)] == r.network.sum_rate);
            CHECK(sr.jain[static_cast<std::size_t>(d)] == r.network.jain);
        }
        CHECK_THROWS_AS(one.find(31, "s1", Scheme::noma), InvalidArgument);
    }

    SECTION("results do not depend on the thread count")
    {
        for (unsigned threads : {2u, 3u, 8u})
        {
            CampaignSpec t = spec;
            t.threads = threads;
            const CampaignResult other = run_campaign(m, t);
            for (std::size_t s = 0; s < one.series.size(); ++s)
            {
                CHECK(other.series[s].sum_rate == one.series[s].sum_rate);
                CHECK(other.series[s].jain == one.series[s].jain);
            }
        }
    }

    SECTION("a single drop gives a single-step CDF")
    {
        CampaignSpec t = spec;
        t.drops = 1;
        const CampaignResult r = run_campaign(m, t);
        const CdfSeries c = CdfSeries::from_samples(r.series[0].sum_rate);
        CHECK(c.values.size() == 1);
        CHECK(c(c.values[0]) == 1.0);
    }

    SECTION("invalid specs")
    {
        CampaignSpec bad = spec;
        bad.drops = 0;
        CHECK_THROWS_AS(run_campaign(m, bad), InvalidArgument);
        bad = spec;
        bad.user_counts = {0};
        CHECK_THROWS_AS(run_campaign(m, bad), InvalidArgument);
        bad = spec;
        bad.layouts.clear();
        CHECK_THROWS_AS(run_campaign(m, bad), InvalidArgument);
    }
}

TEST_CASE("standard error shrinks as one over root drops", "[simulation]")
{
    const auto &m = model();
    CampaignSpec spec;
    spec.layouts = {builtin_layout("sdma", m.grid)};
    spec.user_counts = {10};
    std::vector<double> se;
    for (int drops : {100, 1000, 10000})
    {
        spec.drops = drops;
        se.push_back(run_campaign(m, spec).series[0].sum_rate_stats().std_error);
    }
    CHECK_THAT(se[0] / se[1], WithinRel(std::sqrt(10.0), 0.25));
    CHECK_THAT(se[1] / se[2], WithinRel(std::sqrt(10.0), 0.1));
}

TEST_CASE("single-UE maps", "[simulation]")
{
    const auto &m = model();
    const ClusterLayout sdma = builtin_layout("sdma", m.grid);
    const SpatialMaps maps = spatial_maps(m, sdma, Room{}.floor(), 60);

    SECTION("mirror symmetry")
    {
        for (int iy = 0; iy < 60; ++iy)
            for (int ix = 0; ix < 60; ++ix)
            {
                CHECK_THAT(maps.sinr_db.at(ix, iy), WithinAbs(maps.sinr_db.at(59 - ix, iy), 1e-6));
                CHECK_THAT(maps.sinr_db.at(ix, iy), WithinAbs(maps.sinr_db.at(ix, 59 - iy), 1e-6));
            }
    }

    SECTION("thread count does not change the map")
    {
        const SpatialMaps again = spatial_maps(m, sdma, Room{}.floor(), 60, 4);
        CHECK(again.sinr_db.values == maps.sinr_db.values);
        CHECK(again.rate.values == maps.rate.values);
    }

    SECTION("rate is the single-user mapping of SINR")
    {
        for (int k = 0; k < 60 * 60; k += 37)
        {
            const int ix = k % 60, iy = k / 60;
            CHECK_THAT(maps.rate.at(ix, iy), WithinRel(user_rate(from_db(maps.sinr_db.at(ix, iy)), m.mac), 1e-9));
        }
    }

    CHECK_THROWS_AS(spatial_maps(m, sdma, Room{}.floor(), 1), InvalidArgument);
}

TEST_CASE("coverage of the calibrated design", "[simulation]")
{
    const auto &m = model();
    const CoverageSummary s = coverage_summary(m, builtin_layout("sdma", m.grid));
    CHECK_THAT(s.peak_sinr_db, WithinAbs(25.0, 1.5));
    CHECK_THAT(s.edge_sinr_db, WithinAbs(7.0, 1.5));
    CHECK(s.peak_rate > s.wall_rate);
    CHECK(outer_ring_beams(m.grid).size() == 56);

    // Under s1 the central element's spots carry the best links.
    const ClusterLayout s1 = builtin_layout("s1", m.grid);
    const auto spots = spot_center_metrics(m, s1);
    std::array<double, 9> mean{};
    for (std::size_t b = 0; b < spots.size(); ++b)
        mean[b / 25] += spots[b].rate / 25.0;
    CHECK(std::max_element(mean.begin(), mean.end()) - mean.begin() == 4);
}

TEST_CASE("mean sum rate grows with the UE count", "[simulation][trend]")
{
    const auto &m = model();
    CampaignSpec spec;
    spec.drops = 1000;
    for (const auto &name : builtin_layout_names())
        spec.layouts.push_back(builtin_layout(name, m.grid));
    spec.schemes = {Scheme::noma, Scheme::ofdma};
    for (double rho = 0.4; rho < 4.05; rho += 0.4)
        spec.user_counts.push_back(users_for_density(rho, spec.room));
    const CampaignResult r = run_campaign(m, spec);

    for (const auto &l : spec.layouts)
        for (Scheme s : spec.schemes)
            for (std::size_t i = 0; i + 1 < spec.user_counts.size(); ++i)
            {
                const SampleStats lo = r.find(spec.user_counts[i], l.name, s).sum_rate_stats();
                const SampleStats hi = r.find(spec.user_counts[i + 1], l.name, s).sum_rate_stats();
                INFO(l.name << ' ' << to_string(s) << " K " << spec.user_counts[i] << " -> "
                            << spec.user_counts[i + 1] << ": " << lo.mean << " -> " << hi.mean);
                CHECK(hi.mean - lo.mean > -3.0 * std::hypot(lo.std_error, hi.std_error));
            }
}
