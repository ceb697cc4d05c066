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
 * @file clustering.hpp
 * @brief Static beam clusters and UE-to-cluster association.
 *
 * A layout partitions the 1-based beam indices {1..N} into disjoint
 * clusters. Built-in layouts tile the 15x15 grid of beam spots on the
 * receiver plane:
 *
 *   sdma  225 singletons
 *   s1    one cluster per transmitter element (9 x 25)
 *   s2    3x3 tiles (25 x 9)
 *   s3    7x7 tiles with strips 3,2,2,1,2,2,3: clusters grow towards the walls
 *   s4    7x7 tiles with strips 2,2,2,3,2,2,2: centre 9, axis 6, others 4
 */

#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ap_model.hpp"
#include "errors.hpp"
#include "receiver.hpp"

namespace gobnet
{

struct ClusterLayout
{
    std::string name;
    std::vector<std::vector<int>> clusters; // 1-based beam indices

    std::size_t cluster_count() const { return clusters.size(); }
    bool operator==(const ClusterLayout &) const = default;

    /// Throws NotAPartition naming the first offending beam.
    void validate(int beam_count) const
    {
        std::vector<int> seen(static_cast<std::size_t>(beam_count) + 1, 0);
        for (const auto &c : clusters)
        {
            if (c.empty())
                throw NotAPartition("cluster with no beams");
            for (int b : c)
            {
                if (b < 1 || b > beam_count)
                    throw NotAPartition("beam " + std::to_string(b) + " outside 1.." + std::to_string(beam_count));
                if (seen[static_cast<std::size_t>(b)]++)
                    throw NotAPartition("beam " + std::to_string(b) + " duplicated");
            }
        }
        for (int b = 1; b <= beam_count; ++b)
            if (!seen[static_cast<std::size_t>(b)])
                throw NotAPartition("beam " + std::to_string(b) + " unassigned");
    }

    /// 0-based cluster index of every beam, indexed by beam - 1.
    std::vector<int> beam_to_cluster(int beam_count) const
    {
        std::vector<int> owner(static_cast<std::size_t>(beam_count), -1);
        for (std::size_t u = 0; u < clusters.size(); ++u)
            for (int b : clusters[u])
                owner[static_cast<std::size_t>(b - 1)] = static_cast<int>(u);
        return owner;
    }
};

/**
 * Position of each beam's spot on the 15x15 grid of spot centres (row 0 at
 * the most negative y, column 0 at the most negative x). Derived from the
 * AP geometry rather than assumed, so it follows tilt sign conventions.
 */
class SpotGrid
{
public:
    static constexpr int kSide = 15;

    static SpotGrid from_beams(std::span<const BeamRecord> beams)
    {
        if (beams.size() != static_cast<std::size_t>(kSide * kSide))
            throw InvalidArgument("SpotGrid: expected 225 beams");
        SpotGrid g;
        g.row_.assign(beams.size(), -1);
        g.col_.assign(beams.size(), -1);

        // Element blocks: rank the centre spots of the nine elements.
        std::array<Vec3, 9> centre{};
        for (const auto &b : beams)
            if (b.local_index == 13)
                centre[static_cast<std::size_t>(b.element_index - 1)] = b.spot_center();
        auto block_rank = [&](auto key)
        {
            std::array<int, 9> idx{};
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return key(centre[a]) < key(centre[b]); });
            std::array<int, 9> rank{};
            for (int r = 0; r < 9; ++r)
                rank[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])] = r / 3;
            return rank;
        };
        const auto block_col = block_rank([](const Vec3 &p) { return p.x; });
        const auto block_row = block_rank([](const Vec3 &p) { return p.y; });

        for (int v = 1; v <= 9; ++v)
        {
            // Mean spot x of each local column n and mean y of each local row m.
            std::array<double, 5> col_x{}, row_y{};
            for (const auto &b : beams)
            {
                if (b.element_index != v)
                    continue;
                const int m = (b.local_index + 4) / 5;
                const int n = b.local_index - 5 * (m - 1);
                const Vec3 c = b.spot_center();
                col_x[static_cast<std::size_t>(n - 1)] += c.x / 5.0;
                row_y[static_cast<std::size_t>(m - 1)] += c.y / 5.0;
            }
            const auto col_rank = rank5(col_x);
            const auto row_rank = rank5(row_y);
            for (const auto &b : beams)
            {
                if (b.element_index != v)
                    continue;
                const int m = (b.local_index + 4) / 5;
                const int n = b.local_index - 5 * (m - 1);
                const auto k = static_cast<std::size_t>(b.global_index - 1);
                g.col_[k] = 5 * block_col[static_cast<std::size_t>(v - 1)] + col_rank[static_cast<std::size_t>(n - 1)];
                g.row_[k] = 5 * block_row[static_cast<std::size_t>(v - 1)] + row_rank[static_cast<std::size_t>(m - 1)];
            }
        }
        return g;
    }

    int row(int beam) const { return row_[static_cast<std::size_t>(beam - 1)]; }
    int col(int beam) const { return col_[static_cast<std::size_t>(beam - 1)]; }
    int beam_count() const { return static_cast<int>(row_.size()); }

    /// Beam index occupying grid cell (row, col).
    int beam_at(int row, int col) const
    {
        for (std::size_t k = 0; k < row_.size(); ++k)
            if (row_[k] == row && col_[k] == col)
                return static_cast<int>(k) + 1;
        throw IndexOutOfRange("SpotGrid: no beam at (" + std::to_string(row) + ", " + std::to_string(col) + ")");
    }

private:
    static std::array<int, 5> rank5(const std::array<double, 5> &v)
    {
        std::array<int, 5> idx{0, 1, 2, 3, 4};
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
        std::array<int, 5> rank{};
        for (int r = 0; r < 5; ++r)
            rank[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])] = r;
        return rank;
    }

    std::vector<int> row_, col_;
};

/// Tiles the spot grid with strips of the given widths along x and y.
inline ClusterLayout tiled_layout(std::string name, const SpotGrid &grid, std::span<const int> strips)
{
    if (std::accumulate(strips.begin(), strips.end(), 0) != SpotGrid::kSide)
        throw InvalidArgument("tiled_layout: strip widths must sum to 15");
    std::vector<int> band(SpotGrid::kSide);
    int pos = 0;
    for (std::size_t s = 0; s < strips.size(); ++s)
        for (int k = 0; k < strips[s]; ++k)
            band[static_cast<std::size_t>(pos++)] = static_cast<int>(s);

    const auto n = strips.size();
    ClusterLayout layout{std::move(name), std::vector<std::vector<int>>(n * n)};
    for (int b = 1; b <= grid.beam_count(); ++b)
    {
        const auto r = static_cast<std::size_t>(band[static_cast<std::size_t>(grid.row(b))]);
        const auto c = static_cast<std::size_t>(band[static_cast<std::size_t>(grid.col(b))]);
        layout.clusters[r * n + c].push_back(b);
    }
    return layout;
}

inline const std::vector<std::string> &builtin_layout_names()
{
    static const std::vector<std::string> names{"sdma", "s1", "s2", "s3", "s4"};
    return names;
}

inline ClusterLayout builtin_layout(const std::string &name, const SpotGrid &grid)
{
    static constexpr std::array<int, 5> s2_strips{3, 3, 3, 3, 3};
    static constexpr std::array<int, 7> s3_strips{3, 2, 2, 1, 2, 2, 3};
    static constexpr std::array<int, 7> s4_strips{2, 2, 2, 3, 2, 2, 2};

    ClusterLayout layout;
    if (name == "sdma")
    {
        layout.name = name;
        for (int b = 1; b <= grid.beam_count(); ++b)
            layout.clusters.push_back({b});
    }
    else if (name == "s1")
    {
        layout.name = name;
        layout.clusters.resize(9);
        for (int b = 1; b <= grid.beam_count(); ++b)
            layout.clusters[static_cast<std::size_t>((b - 1) / 25)].push_back(b);
    }
    else if (name == "s2")
        layout = tiled_layout(name, grid, s2_strips);
    else if (name == "s3")
        layout = tiled_layout(name, grid, s3_strips);
    else if (name == "s4")
        layout = tiled_layout(name, grid, s4_strips);
    else
        throw UnknownLayout("unknown layout '" + name + "' (expected sdma, s1, s2, s3 or s4)");
    layout.validate(grid.beam_count());
    return layout;
}

/// Plain text: one cluster per line, whitespace-separated 1-based beam
/// indices, '#' starts a comment. The first "# name: X" comment names it.
inline ClusterLayout parse_layout(std::istream &in, int beam_count = 225, std::string fallback_name = "custom")
{
    ClusterLayout layout;
    layout.name = std::move(fallback_name);
    std::string line;
    int line_no = 0;
    bool named = false;
    while (std::getline(in, line))
    {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
        {
            const std::string comment = line.substr(hash + 1);
            if (!named && comment.rfind(" name: ", 0) == 0)
            {
                layout.name = comment.substr(7);
                named = true;
            }
            line.erase(hash);
        }
        std::istringstream tokens(line);
        std::vector<int> cluster;
        std::string tok;
        while (tokens >> tok)
        {
            std::size_t used = 0;
            int value = 0;
            try
            {
                value = std::stoi(tok, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (used != tok.size())
                throw ParseError("layout line " + std::to_string(line_no) + ": '" + tok + "' is not a beam index");
            cluster.push_back(value);
        }
        if (!cluster.empty())
            layout.clusters.push_back(std::move(cluster));
    }
    if (layout.clusters.empty())
        throw ParseError("layout has no clusters");
    layout.validate(beam_count);
    return layout;
}

inline ClusterLayout layout_from_file(const std::filesystem::path &path, int beam_count = 225)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open layout file " + path.string());
    return parse_layout(in, beam_count, path.stem().string());
}

inline void write_layout(std::ostream &out, const ClusterLayout &layout)
{
    out << "# name: " << layout.name << '\n';
    for (const auto &c : layout.clusters)
    {
        for (std::size_t k = 0; k < c.size(); ++k)
            out << (k ? " " : "") << c[k];
        out << '\n';
    }
}

struct UeAssignment
{
    std::vector<int> serving_cluster;        // per UE, 0-based
    std::vector<std::vector<int>> members;   // per cluster, ascending UE ids

    int users_in(std::size_t cluster) const { return static_cast<int>(members[cluster].size()); }
};

/// H_k^{C_u} for every cluster u and the seven elements.
inline std::vector<ClusterGain> cluster_gains(const ChannelGainTensor &h, const ClusterLayout &layout)
{
    std::vector<ClusterGain> g;
    g.reserve(layout.cluster_count());
    for (const auto &c : layout.clusters)
        g.push_back(cluster_gain(h, c));
    return g;
}

/// Serving cluster of one UE: argmax of the total cluster gain, lowest index on ties.
inline int best_cluster(std::span<const ClusterGain> gains)
{
    int best = 0;
    for (std::size_t u = 1; u < gains.size(); ++u)
        if (gains[u].total > gains[static_cast<std::size_t>(best)].total)
            best = static_cast<int>(u);
    return best;
}

/// `gains[k]` holds UE k's per-cluster gains.
inline UeAssignment assign_ues(std::span<const std::vector<ClusterGain>> gains, std::size_t cluster_count)
{
    UeAssignment a;
    a.members.resize(cluster_count);
    for (std::size_t k = 0; k < gains.size(); ++k)
    {
        if (gains[k].size() != cluster_count)
            throw InvalidArgument("assign_ues: gain table does not match the layout");
        const int u = best_cluster(gains[k]);
        a.serving_cluster.push_back(u);
        a.members[static_cast<std::size_t>(u)].push_back(static_cast<int>(k));
    }
    return a;
}

inline UeAssignment assign_ues(std::span<const ChannelGainTensor> tensors, const ClusterLayout &layout)
{
    std::vector<std::vector<ClusterGain>> gains;
    gains.reserve(tensors.size());
    for (const auto &h : tensors)
        gains.push_back(cluster_gains(h, layout));
    return assign_ues(gains, layout.cluster_count());
}

} // namespace gobnet
