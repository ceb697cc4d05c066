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
 * @file io.hpp
 * @brief CSV export. Numbers use a fixed printf format so equal inputs give
 * byte-equal files.
 */

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ap_model.hpp"
#include "errors.hpp"
#include "simulation.hpp"

namespace gobnet
{

inline std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

/**
 * Raster CSV: two comment lines with extent and resolution, then ny rows of
 * nx values. Row 0 is y_min, column 0 is x_min.
 */
inline void write_field_csv(std::ostream &out, const IntensityField &f)
{
    out << "# extent " << format_number(f.extent.x_min) << ' ' << format_number(f.extent.x_max) << ' '
        << format_number(f.extent.y_min) << ' ' << format_number(f.extent.y_max) << '\n';
    out << "# resolution " << f.nx << ' ' << f.ny << '\n';
    for (int iy = 0; iy < f.ny; ++iy)
    {
        for (int ix = 0; ix < f.nx; ++ix)
            out << (ix ? "," : "") << format_number(f.at(ix, iy));
        out << '\n';
    }
}

inline IntensityField read_field_csv(std::istream &in)
{
    std::string line, tag;
    Extent e;
    int nx = 0, ny = 0;
    if (!std::getline(in, line))
        throw ParseError("field csv: missing extent line");
    {
        std::istringstream ss(line);
        std::string hash;
        if (!(ss >> hash >> tag >> e.x_min >> e.x_max >> e.y_min >> e.y_max) || hash != "#" || tag != "extent")
            throw ParseError("field csv: bad extent line");
    }
    if (!std::getline(in, line))
        throw ParseError("field csv: missing resolution line");
    {
        std::istringstream ss(line);
        std::string hash;
        if (!(ss >> hash >> tag >> nx >> ny) || hash != "#" || tag != "resolution" || nx < 1 || ny < 1)
            throw ParseError("field csv: bad resolution line");
    }
    IntensityField f(e, nx, ny);
    for (int iy = 0; iy < ny; ++iy)
    {
        if (!std::getline(in, line))
            throw ParseError("field csv: expected " + std::to_string(ny) + " rows");
        std::istringstream ss(line);
        std::string cell;
        int ix = 0;
        while (std::getline(ss, cell, ','))
        {
            if (ix >= nx)
                throw ParseError("field csv: row " + std::to_string(iy) + " has too many values");
            try
            {
                f.at(ix++, iy) = std::stod(cell);
            }
            catch (const std::exception &)
            {
                throw ParseError("field csv: row " + std::to_string(iy) + ": '" + cell + "' is not a number");
            }
        }
        if (ix != nx)
            throw ParseError("field csv: row " + std::to_string(iy) + " has " + std::to_string(ix) + " values");
    }
    return f;
}

inline void write_cdf_csv(std::ostream &out, const CdfSeries &cdf)
{
    out << "value,probability\n";
    for (std::size_t i = 0; i < cdf.values.size(); ++i)
        out << format_number(cdf.values[i]) << ',' << format_number(cdf.probabilities[i]) << '\n';
}

enum class Metric
{
    sum_rate,
    jain
};

inline std::string_view to_string(Metric m) { return m == Metric::sum_rate ? "sum_rate" : "jain"; }

inline const std::vector<double> &samples(const SeriesResult &s, Metric m)
{
    return m == Metric::sum_rate ? s.sum_rate : s.jain;
}

/// One row per (sweep point, layout, scheme).
inline void write_mean_csv(std::ostream &out, const CampaignResult &r, Metric m)
{
    out << "rho,num_ues,layout,scheme,mean,std_error,drops\n";
    for (const auto &s : r.series)
    {
        const SampleStats st = SampleStats::of(samples(s, m));
        out << format_number(s.density) << ',' << s.num_ues << ',' << s.layout << ',' << to_string(s.scheme) << ','
            << format_number(st.mean) << ',' << format_number(st.std_error) << ',' << st.count << '\n';
    }
}

inline void write_drop_header(std::ostream &out) { out << "drop_id,ue_id,cluster,scheme,sinr_db,rate_bps\n"; }

/// Cluster is written 1-based.
inline void write_drop_rows(std::ostream &out, int drop_id, Scheme scheme, const DropResult &r)
{
    for (const auto &u : r.users)
        out << drop_id << ',' << u.ue << ',' << u.cluster + 1 << ',' << to_string(scheme) << ','
            << format_number(to_db(u.sinr)) << ',' << format_number(u.rate) << '\n';
}

/// Opens `dir/name` for writing and records the name.
class OutputDir
{
public:
    explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir))
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec)
            throw Error("cannot create output directory " + dir_.string() + ": " + ec.message());
    }

    std::ofstream open(const std::string &name)
    {
        std::ofstream f(dir_ / name, std::ios::binary);
        if (!f)
            throw Error("cannot write " + (dir_ / name).string());
        files_.push_back(name);
        return f;
    }

    const std::filesystem::path &path() const { return dir_; }
    const std::vector<std::string> &files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<std::string> files_;
};

} // namespace gobnet
