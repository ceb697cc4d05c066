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
 * @file config.hpp
 * @brief Run configuration: TOML input with mandatory units, provenance of
 * every value, and a JSON manifest that reproduces a run.
 *
 * Needs toml.hpp (toml++) and json.hpp (nlohmann) on the include path.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>
#include <toml.hpp>

#include "ap_model.hpp"
#include "clustering.hpp"
#include "errors.hpp"
#include "mac.hpp"
#include "receiver.hpp"
#include "simulation.hpp"

namespace gobnet
{

enum class Dimension
{
    length,
    area,
    angle,
    power,
    frequency,
    temperature,
    resistance,
    decibel,       // ratio given in dB, stored linear
    decibel_hertz, // PSD ratio given in dB/Hz, stored linear per Hz
    none
};

namespace detail
{
struct UnitDef
{
    std::string_view symbol;
    Dimension dim;
    double scale;
};

inline constexpr UnitDef kUnits[] = {
    {"m", Dimension::length, 1.0},          {"cm", Dimension::length, 1e-2},
    {"mm", Dimension::length, 1e-3},        {"um", Dimension::length, 1e-6},
    {"nm", Dimension::length, 1e-9},        {"m2", Dimension::area, 1.0},
    {"cm2", Dimension::area, 1e-4},         {"mm2", Dimension::area, 1e-6},
    {"um2", Dimension::area, 1e-12},        {"deg", Dimension::angle, std::numbers::pi / 180.0},
    {"rad", Dimension::angle, 1.0},         {"W", Dimension::power, 1.0},
    {"mW", Dimension::power, 1e-3},         {"uW", Dimension::power, 1e-6},
    {"Hz", Dimension::frequency, 1.0},      {"kHz", Dimension::frequency, 1e3},
    {"MHz", Dimension::frequency, 1e6},     {"GHz", Dimension::frequency, 1e9},
    {"K", Dimension::temperature, 1.0},     {"ohm", Dimension::resistance, 1.0},
    {"kohm", Dimension::resistance, 1e3},   {"dB", Dimension::decibel, 1.0},
    {"dBHz", Dimension::decibel_hertz, 1.0}, {"dB/Hz", Dimension::decibel_hertz, 1.0},
};

inline std::string_view dimension_name(Dimension d)
{
    switch (d)
    {
    case Dimension::length: return "length";
    case Dimension::area: return "area";
    case Dimension::angle: return "angle";
    case Dimension::power: return "power";
    case Dimension::frequency: return "frequency";
    case Dimension::temperature: return "temperature";
    case Dimension::resistance: return "resistance";
    case Dimension::decibel: return "dB ratio";
    case Dimension::decibel_hertz: return "dB/Hz density";
    case Dimension::none: return "dimensionless";
    }
    return "?";
}

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}
} // namespace detail

/// Parses "2mm", "21 deg", "-155dBHz" into SI (dB quantities become linear).
inline double parse_quantity(std::string_view text, Dimension dim)
{
    const std::string s = detail::trim(text);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc())
        throw ConfigError("'" + s + "' does not start with a number");
    const std::string unit = detail::trim(std::string_view(end, static_cast<std::size_t>(s.data() + s.size() - end)));
    if (unit.empty())
    {
        if (dim == Dimension::none)
            return value;
        throw ConfigError("'" + s + "' needs a unit of " + std::string(detail::dimension_name(dim)));
    }
    for (const auto &u : detail::kUnits)
    {
        if (u.symbol != unit)
            continue;
        if (u.dim != dim)
            throw ConfigError("'" + s + "': unit '" + unit + "' measures " + std::string(detail::dimension_name(u.dim)) +
                              ", expected " + std::string(detail::dimension_name(dim)));
        if (dim == Dimension::decibel || dim == Dimension::decibel_hertz)
            return std::pow(10.0, value / 10.0);
        return value * u.scale;
    }
    throw ConfigError("'" + s + "': unknown unit '" + unit + "'");
}

/// Parses "a:b:step" into a closed arithmetic grid.
inline std::vector<double> parse_range(std::string_view text)
{
    std::vector<double> parts;
    std::string s(text);
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ':'))
        parts.push_back(parse_quantity(tok, Dimension::none));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
        throw ConfigError("range '" + s + "' must be start:stop:step with step > 0 and stop >= start");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long k = 0; k <= n; ++k)
        out.push_back(parts[0] + static_cast<double>(k) * parts[2]);
    return out;
}

inline std::vector<std::string> split_list(std::string_view text)
{
    std::vector<std::string> out;
    std::stringstream ss{std::string(text)};
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (auto t = detail::trim(tok); !t.empty())
            out.push_back(t);
    return out;
}

/// Where a resolved value came from.
enum class Origin
{
    reference,   // reference AP design / system parameter
    repo_default,
    calibrated,
    file,
    cli,
    manifest
};

inline std::string_view to_string(Origin o)
{
    switch (o)
    {
    case Origin::reference: return "reference design";
    case Origin::repo_default: return "repo default";
    case Origin::calibrated: return "calibrated";
    case Origin::file: return "config file";
    case Origin::cli: return "command line";
    case Origin::manifest: return "manifest";
    }
    return "?";
}

struct RunSettings
{
    std::uint64_t seed = 1;
    unsigned threads = 1;
    int resolution = 250;
    std::size_t rays = 100000;
    std::string layout = "sdma";
    std::string layout_file;
    std::string out = "out";
    int element = 0; // 0: all elements
    bool validate = false; // intensity-map: also run the ray oracle
    bool per_drop = false; // montecarlo: also write per-user rows
};

struct CampaignSettings
{
    int drops = 1000;
    std::vector<std::string> layouts{"sdma", "s1", "s2", "s3", "s4"};
    std::vector<std::string> schemes{"noma"};
    std::vector<int> users;    // takes precedence over densities when set
    std::vector<double> densities{0.4, 0.8, 1.2, 1.6, 2.0, 2.4, 2.8, 3.2, 3.6, 4.0};
};

struct RootConfig
{
    ApConfig ap;
    AdrSpec adr = default_adr();
    NoiseSpec noise;
    MacConfig mac;
    Room room;
    RunSettings run;
    CampaignSettings campaign;
    std::map<std::string, Origin> origin;

    RootConfig() { seed_origins(); }

    /// Numeric parameters: key, dimension, display unit and accessor.
    struct Param
    {
        std::string key;
        Dimension dim;
        std::string unit;
        double scale; // SI per display unit (1 for dB quantities)
        std::function<double &(RootConfig &)> ref;
        Origin default_origin;
    };

    static const std::vector<Param> &params()
    {
        using R = RootConfig;
        static const std::vector<Param> p{
            {"ap.pitch", Dimension::length, "mm", 1e-3, [](R &c) -> double & { return c.ap.pitch; }, Origin::reference},
            {"ap.d_vl", Dimension::length, "mm", 1e-3, [](R &c) -> double & { return c.ap.d_vl; }, Origin::reference},
            {"ap.d_lens", Dimension::length, "mm", 1e-3, [](R &c) -> double & { return c.ap.d_lens; }, Origin::reference},
            {"ap.tilt", Dimension::angle, "deg", std::numbers::pi / 180.0,
             [](R &c) -> double & { return c.ap.tilt; }, Origin::reference},
            {"ap.h_dl", Dimension::length, "m", 1.0, [](R &c) -> double & { return c.ap.h_dl; }, Origin::reference},
            {"lens.diameter", Dimension::length, "mm", 1e-3, [](R &c) -> double & { return c.ap.lens.diameter; },
             Origin::reference},
            {"lens.curvature_radius", Dimension::length, "mm", 1e-3,
             [](R &c) -> double & { return c.ap.lens.curvature_radius; }, Origin::reference},
            {"lens.center_thickness", Dimension::length, "mm", 1e-3,
             [](R &c) -> double & { return c.ap.lens.center_thickness; }, Origin::reference},
            {"lens.refractive_index", Dimension::none, "", 1.0,
             [](R &c) -> double & { return c.ap.lens.refractive_index; }, Origin::reference},
            {"source.waist_radius", Dimension::length, "um", 1e-6,
             [](R &c) -> double & { return c.ap.source.waist_radius; }, Origin::reference},
            {"source.wavelength", Dimension::length, "nm", 1e-9,
             [](R &c) -> double & { return c.ap.source.wavelength; }, Origin::reference},
            {"source.power", Dimension::power, "mW", 1e-3, [](R &c) -> double & { return c.ap.source.power; },
             Origin::reference},
            {"adr.fov", Dimension::angle, "deg", std::numbers::pi / 180.0,
             [](R &c) -> double & { return c.fov_storage; }, Origin::reference},
            {"adr.n_cpc", Dimension::none, "", 1.0, [](R &c) -> double & { return c.adr.n_cpc; }, Origin::reference},
            {"adr.pd_area", Dimension::area, "mm2", 1e-6, [](R &c) -> double & { return c.adr.pd_area; },
             Origin::calibrated},
            {"adr.fill_factor", Dimension::none, "", 1.0, [](R &c) -> double & { return c.adr.fill_factor; },
             Origin::repo_default},
            {"adr.responsivity", Dimension::none, "A/W", 1.0, [](R &c) -> double & { return c.adr.responsivity; },
             Origin::reference},
            {"noise.temperature", Dimension::temperature, "K", 1.0,
             [](R &c) -> double & { return c.noise.temperature; }, Origin::repo_default},
            {"noise.load_resistance", Dimension::resistance, "ohm", 1.0,
             [](R &c) -> double & { return c.noise.load_resistance; }, Origin::repo_default},
            {"noise.noise_figure", Dimension::decibel, "dB", 1.0,
             [](R &c) -> double & { return c.noise.noise_figure; }, Origin::reference},
            {"noise.rin", Dimension::decibel_hertz, "dBHz", 1.0, [](R &c) -> double & { return c.noise.rin; },
             Origin::reference},
            {"mac.bandwidth", Dimension::frequency, "GHz", 1e9, [](R &c) -> double & { return c.mac.bandwidth; },
             Origin::reference},
            {"mac.target_ber", Dimension::none, "", 1.0, [](R &c) -> double & { return c.mac.target_ber; },
             Origin::reference},
            {"room.lx", Dimension::length, "m", 1.0, [](R &c) -> double & { return c.room.lx; }, Origin::reference},
            {"room.ly", Dimension::length, "m", 1.0, [](R &c) -> double & { return c.room.ly; }, Origin::reference},
            {"room.lz", Dimension::length, "m", 1.0, [](R &c) -> double & { return c.room.lz; }, Origin::reference},
        };
        return p;
    }

    /// Integer parameters; dimensionless.
    struct IntParam
    {
        std::string key;
        std::function<std::int64_t(const RootConfig &)> get;
        std::function<void(RootConfig &, std::int64_t)> set;
        Origin default_origin;
    };

    static const std::vector<IntParam> &int_params()
    {
        using R = RootConfig;
        static const std::vector<IntParam> p{
            {"adr.num_pd", [](const R &c) { return std::int64_t{c.adr.num_pd}; },
             [](R &c, std::int64_t v) { c.adr.num_pd = static_cast<int>(v); }, Origin::reference},
            {"mac.fft_size", [](const R &c) { return std::int64_t{c.mac.fft_size}; },
             [](R &c, std::int64_t v) { c.mac.fft_size = static_cast<int>(v); }, Origin::reference},
            {"campaign.drops", [](const R &c) { return std::int64_t{c.campaign.drops}; },
             [](R &c, std::int64_t v) { c.campaign.drops = static_cast<int>(v); }, Origin::repo_default},
            {"run.seed", [](const R &c) { return static_cast<std::int64_t>(c.run.seed); },
             [](R &c, std::int64_t v) { c.run.seed = static_cast<std::uint64_t>(v); }, Origin::repo_default},
            {"run.threads", [](const R &c) { return std::int64_t{c.run.threads}; },
             [](R &c, std::int64_t v) { c.run.threads = static_cast<unsigned>(v); }, Origin::repo_default},
            {"run.resolution", [](const R &c) { return std::int64_t{c.run.resolution}; },
             [](R &c, std::int64_t v) { c.run.resolution = static_cast<int>(v); }, Origin::repo_default},
            {"run.rays", [](const R &c) { return static_cast<std::int64_t>(c.run.rays); },
             [](R &c, std::int64_t v) { c.run.rays = static_cast<std::size_t>(v); }, Origin::repo_default},
            {"run.element", [](const R &c) { return std::int64_t{c.run.element}; },
             [](R &c, std::int64_t v) { c.run.element = static_cast<int>(v); }, Origin::repo_default},
        };
        return p;
    }

    static const std::vector<std::string> &text_keys()
    {
        static const std::vector<std::string> k{"run.layout",       "run.layout_file",   "run.out",
                                                "campaign.layouts", "campaign.schemes",  "campaign.users",
                                                "campaign.densities"};
        return k;
    }

    /// True when the ADR field of view was left at its default.
    bool fov_defaulted() const { return origin.at("adr.fov") != Origin::file && origin.at("adr.fov") != Origin::cli &&
                                        origin.at("adr.fov") != Origin::manifest; }

    /// Pushes derived fields (theta_CPC, tx power, noise bandwidth) into the sub-configs.
    void sync()
    {
        adr.theta_cpc = fov_storage / 3.0;
        mac.tx_power = ap.source.power;
        noise.bandwidth = mac.bandwidth;
    }

    void validate()
    {
        sync();
        try
        {
            ap.validate();
            adr.validate();
            noise.validate();
            mac.validate();
            room.validate();
        }
        catch (const InvalidArgument &e)
        {
            throw ConfigError(e.what());
        }
        if (std::abs(adr.fov() - fov_storage) > 1e-12)
            throw ConfigError("adr: FOV/3 does not equal the CPC acceptance angle");
        if (run.resolution < 2)
            throw ConfigError("run.resolution must be at least 2");
        if (run.rays < 1)
            throw ConfigError("run.rays must be at least 1");
        if (run.element < 0 || run.element > 9)
            throw ConfigError("run.element must lie in 0..9 (0 selects all elements)");
        if (campaign.drops < 1)
            throw ConfigError("campaign.drops must be at least 1");
        for (const auto &s : campaign.schemes)
            try
            {
                (void)parse_scheme(s);
            }
            catch (const InvalidArgument &e)
            {
                throw ConfigError(e.what());
            }
        for (const auto &l : campaign.layouts)
        {
            const auto &names = builtin_layout_names();
            if (std::find(names.begin(), names.end(), l) == names.end())
                throw ConfigError("campaign.layouts: unknown layout '" + l + "'");
        }
        for (int k : campaign.users)
            if (k < 1)
                throw ConfigError("campaign.users entries must be positive");
        for (double r : campaign.densities)
            if (!(r > 0.0))
                throw ConfigError("campaign.densities entries must be positive");
    }

    std::vector<Scheme> schemes() const
    {
        std::vector<Scheme> s;
        for (const auto &n : campaign.schemes)
            s.push_back(parse_scheme(n));
        return s;
    }

    std::vector<int> user_counts() const
    {
        if (!campaign.users.empty())
            return campaign.users;
        std::vector<int> k;
        for (double r : campaign.densities)
            k.push_back(users_for_density(r, room));
        return k;
    }

    SystemModel system() const { return SystemModel(ap, adr, noise, mac); }

    /// Layout selected by run.layout_file, falling back to run.layout.
    ClusterLayout layout(const SpotGrid &grid) const
    {
        if (!run.layout_file.empty())
            return layout_from_file(run.layout_file, grid.beam_count());
        return builtin_layout(run.layout, grid);
    }

    double fov_storage = deg_to_rad(50.0);

private:
    void seed_origins()
    {
        for (const auto &p : params())
            origin[p.key] = p.default_origin;
        for (const auto &p : int_params())
            origin[p.key] = p.default_origin;
        for (const auto &k : text_keys())
            origin[k] = Origin::repo_default;
        origin["adr.fov"] = Origin::repo_default;
    }
};

namespace detail
{
inline std::string where(const toml::node &n, const std::string &key)
{
    const auto &src = n.source();
    return "line " + std::to_string(src.begin.line) + ", key '" + key + "'";
}

inline std::vector<std::string> text_list(const toml::node &n, const std::string &key)
{
    if (auto s = n.value<std::string>())
        return split_list(*s);
    std::vector<std::string> out;
    if (const auto *arr = n.as_array())
        for (const auto &e : *arr)
        {
            auto v = e.value<std::string>();
            if (!v)
                throw ConfigError(where(e, key) + ": expected a string");
            out.push_back(*v);
        }
    else
        throw ConfigError(where(n, key) + ": expected a string or an array of strings");
    return out;
}

inline void set_text(RootConfig &c, const std::string &key, const toml::node &n)
{
    auto single = [&]() -> std::string
    {
        auto v = n.value<std::string>();
        if (!v)
            throw ConfigError(where(n, key) + ": expected a string");
        return *v;
    };
    if (key == "run.layout")
        c.run.layout = single();
    else if (key == "run.layout_file")
        c.run.layout_file = single();
    else if (key == "run.out")
        c.run.out = single();
    else if (key == "campaign.layouts")
        c.campaign.layouts = text_list(n, key);
    else if (key == "campaign.schemes")
        c.campaign.schemes = text_list(n, key);
    else if (key == "campaign.users")
    {
        c.campaign.users.clear();
        if (const auto *arr = n.as_array())
            for (const auto &e : *arr)
            {
                auto v = e.value<std::int64_t>();
                if (!v)
                    throw ConfigError(where(e, key) + ": expected an integer");
                c.campaign.users.push_back(static_cast<int>(*v));
            }
        else if (auto v = n.value<std::int64_t>())
            c.campaign.users.push_back(static_cast<int>(*v));
        else
            throw ConfigError(where(n, key) + ": expected an integer or an array of integers");
    }
    else if (key == "campaign.densities")
    {
        if (auto s = n.value<std::string>())
            c.campaign.densities = parse_range(*s);
        else if (const auto *arr = n.as_array())
        {
            c.campaign.densities.clear();
            for (const auto &e : *arr)
            {
                auto v = e.value<double>();
                if (!v)
                    throw ConfigError(where(e, key) + ": expected a number");
                c.campaign.densities.push_back(*v);
            }
        }
        else
            throw ConfigError(where(n, key) + ": expected \"start:stop:step\" or an array of numbers");
    }
}
} // namespace detail

/// Applies a parsed TOML table on top of `c`; unknown keys are errors.
inline void apply_toml(RootConfig &c, const toml::table &root, Origin origin = Origin::file)
{
    for (const auto &[section, node] : root)
    {
        const auto *tbl = node.as_table();
        if (!tbl)
            throw ConfigError(detail::where(node, std::string(section.str())) + ": expected a [section]");
        for (const auto &[name, value] : *tbl)
        {
            const std::string key = std::string(section.str()) + "." + std::string(name.str());
            bool known = false;
            for (const auto &p : RootConfig::params())
            {
                if (p.key != key)
                    continue;
                known = true;
                try
                {
                    if (auto s = value.value_exact<std::string>())
                        p.ref(c) = parse_quantity(*s, p.dim);
                    else if (auto d = value.value<double>(); d && p.dim == Dimension::none)
                        p.ref(c) = *d;
                    else
                        throw ConfigError(p.dim == Dimension::none
                                              ? "expected a number"
                                              : "expected a quoted value with a " +
                                                    std::string(detail::dimension_name(p.dim)) + " unit, e.g. \"2" +
                                                    p.unit + "\"");
                }
                catch (const ConfigError &e)
                {
                    throw ConfigError(detail::where(value, key) + ": " + e.what());
                }
            }
            for (const auto &p : RootConfig::int_params())
            {
                if (p.key != key)
                    continue;
                known = true;
                auto v = value.value_exact<std::int64_t>();
                if (!v || *v < 0)
                    throw ConfigError(detail::where(value, key) + ": expected a non-negative integer");
                p.set(c, *v);
            }
            for (const auto &k : RootConfig::text_keys())
                if (k == key)
                {
                    known = true;
                    detail::set_text(c, key, value);
                }
            if (!known)
                throw ConfigError(detail::where(value, key) + ": unknown key");
            c.origin[key] = origin;
        }
    }
}

inline RootConfig parse_config(std::string_view text, std::string_view source = "config")
{
    RootConfig c;
    try
    {
        const toml::table t = toml::parse(text, source);
        apply_toml(c, t);
    }
    catch (const toml::parse_error &e)
    {
        throw ConfigError(std::string(source) + ":" + std::to_string(e.source().begin.line) + ": " +
                          std::string(e.description()));
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(std::string(source) + ": " + e.what());
    }
    c.sync();
    return c;
}

inline RootConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

/**
 * Manifest: every resolved value in SI (dB quantities linear), exact doubles.
 * Thread count and output directory do not affect results and are left out,
 * so manifests compare equal across them.
 */
inline nlohmann::ordered_json to_json(const RootConfig &cfg)
{
    RootConfig c = cfg;
    nlohmann::ordered_json j;
    for (const auto &p : RootConfig::params())
        j["config"][p.key] = p.ref(c);
    for (const auto &p : RootConfig::int_params())
        if (p.key != "run.threads")
            j["config"][p.key] = p.get(c);
    j["config"]["run.layout"] = c.run.layout;
    j["config"]["run.layout_file"] = c.run.layout_file;
    j["config"]["campaign.layouts"] = c.campaign.layouts;
    j["config"]["campaign.schemes"] = c.campaign.schemes;
    j["config"]["campaign.users"] = c.campaign.users;
    j["config"]["campaign.densities"] = c.campaign.densities;
    return j;
}

inline RootConfig from_json(const nlohmann::json &j)
{
    RootConfig c;
    try
    {
        const auto &cfg = j.at("config");
        for (const auto &p : RootConfig::params())
            if (cfg.contains(p.key))
            {
                p.ref(c) = cfg.at(p.key).get<double>();
                c.origin[p.key] = Origin::manifest;
            }
        for (const auto &p : RootConfig::int_params())
            if (cfg.contains(p.key))
            {
                p.set(c, cfg.at(p.key).get<std::int64_t>());
                c.origin[p.key] = Origin::manifest;
            }
        auto text = [&](const char *key, auto &dst)
        {
            if (cfg.contains(key))
            {
                cfg.at(key).get_to(dst);
                c.origin[key] = Origin::manifest;
            }
        };
        text("run.layout", c.run.layout);
        text("run.layout_file", c.run.layout_file);
        text("run.out", c.run.out);
        text("campaign.layouts", c.campaign.layouts);
        text("campaign.schemes", c.campaign.schemes);
        text("campaign.users", c.campaign.users);
        text("campaign.densities", c.campaign.densities);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
    c.sync();
    return c;
}

inline RootConfig load_manifest(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open manifest " + path.string());
    try
    {
        return from_json(nlohmann::json::parse(in));
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

/// Config file (.toml) or manifest (.json), chosen by extension.
inline RootConfig load_any(const std::filesystem::path &path)
{
    return path.extension() == ".json" ? load_manifest(path) : load_config(path);
}

/// Human-readable listing of every resolved value with its origin.
inline std::string resolved_report(const RootConfig &cfg)
{
    RootConfig c = cfg;
    std::ostringstream out;
    out.precision(10);
    for (const auto &p : RootConfig::params())
    {
        double v = p.ref(c);
        if (p.dim == Dimension::decibel || p.dim == Dimension::decibel_hertz)
            v = 10.0 * std::log10(v);
        else
            v /= p.scale;
        out << p.key << " = " << v << (p.unit.empty() ? "" : " " + p.unit) << "  [" << to_string(c.origin.at(p.key))
            << "]\n";
    }
    out << "adr.theta_cpc = " << rad_to_deg(c.adr.theta_cpc) << " deg  (FOV/3)\n";
    for (const auto &p : RootConfig::int_params())
        out << p.key << " = " << p.get(c) << "  [" << to_string(c.origin.at(p.key)) << "]\n";
    auto list = [](const auto &v)
    {
        std::ostringstream s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s << (i ? "," : "") << v[i];
        return s.str();
    };
    out << "run.layout = " << c.run.layout << "  [" << to_string(c.origin.at("run.layout")) << "]\n";
    out << "run.layout_file = " << (c.run.layout_file.empty() ? "(none)" : c.run.layout_file) << "  ["
        << to_string(c.origin.at("run.layout_file")) << "]\n";
    out << "run.out = " << c.run.out << "  [" << to_string(c.origin.at("run.out")) << "]\n";
    out << "campaign.layouts = " << list(c.campaign.layouts) << "  [" << to_string(c.origin.at("campaign.layouts"))
        << "]\n";
    out << "campaign.schemes = " << list(c.campaign.schemes) << "  [" << to_string(c.origin.at("campaign.schemes"))
        << "]\n";
    out << "campaign.users = " << (c.campaign.users.empty() ? "(from densities)" : list(c.campaign.users)) << "  ["
        << to_string(c.origin.at("campaign.users")) << "]\n";
    out << "campaign.densities = " << list(c.campaign.densities) << " UE/m2  ["
        << to_string(c.origin.at("campaign.densities")) << "]\n";
    return out.str();
}

/// Warnings about defaults the user may want to set explicitly.
inline std::vector<std::string> config_warnings(const RootConfig &c)
{
    std::vector<std::string> w;
    if (c.fov_defaulted())
        w.push_back("adr.fov not set: using 50 deg (the reference parameter list also quotes 30 deg; set adr.fov or "
                    "--fov to choose)");
    return w;
}

} // namespace gobnet
