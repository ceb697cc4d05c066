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

// gobnet: intensity, SINR and rate maps and Monte Carlo campaigns for a
// grid-of-beams optical wireless network.

#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gobnet/config.hpp"
#include "gobnet/io.hpp"
#include "gobnet/ray_oracle.hpp"
#include "gobnet/simulation.hpp"

namespace
{

using namespace gobnet;
using json = nlohmann::ordered_json;

enum Exit
{
    ok = 0,
    config_error = 1,
    runtime_error = 2
};

struct Flags
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
    std::optional<int> resolution;
    std::optional<std::string> fov, pd_area, rlens, lens_diameter;
    std::optional<int> element;
    std::optional<std::size_t> rays;
    bool validate = false;
    std::optional<std::string> layout, layout_file;
    std::optional<std::string> layouts, schemes, rho;
    std::vector<int> users;
    std::optional<int> drops;
    bool per_drop = false;
};

void set_quantity(RootConfig &c, const std::string &key, const std::string &text)
{
    for (const auto &p : RootConfig::params())
        if (p.key == key)
        {
            try
            {
                p.ref(c) = parse_quantity(text, p.dim);
            }
            catch (const ConfigError &e)
            {
                throw ConfigError("option for '" + key + "': " + e.what());
            }
            c.origin[key] = Origin::cli;
            return;
        }
    throw ConfigError("no parameter '" + key + "'");
}

RootConfig resolve(const Flags &f)
{
    RootConfig c = f.config.empty() ? RootConfig{} : load_any(f.config);
    auto mark = [&](const char *key) { c.origin[key] = Origin::cli; };
    if (f.seed)
        c.run.seed = *f.seed, mark("run.seed");
    if (f.out)
        c.run.out = *f.out, mark("run.out");
    if (f.threads)
        c.run.threads = *f.threads, mark("run.threads");
    if (f.resolution)
        c.run.resolution = *f.resolution, mark("run.resolution");
    if (f.element)
        c.run.element = *f.element, mark("run.element");
    if (f.rays)
        c.run.rays = *f.rays, mark("run.rays");
    if (f.fov)
        set_quantity(c, "adr.fov", *f.fov);
    if (f.pd_area)
        set_quantity(c, "adr.pd_area", *f.pd_area);
    if (f.rlens)
        set_quantity(c, "lens.curvature_radius", *f.rlens);
    if (f.lens_diameter)
        set_quantity(c, "lens.diameter", *f.lens_diameter);
    if (f.layout)
        c.run.layout = *f.layout, mark("run.layout");
    if (f.layout_file)
        c.run.layout_file = *f.layout_file, mark("run.layout_file");
    if (f.layouts)
        c.campaign.layouts = split_list(*f.layouts), mark("campaign.layouts");
    if (f.schemes)
        c.campaign.schemes = split_list(*f.schemes), mark("campaign.schemes");
    if (f.rho)
    {
        c.campaign.densities = parse_range(*f.rho), mark("campaign.densities");
        c.campaign.users.clear(), mark("campaign.users");
    }
    if (!f.users.empty())
        c.campaign.users = f.users, mark("campaign.users");
    if (f.drops)
        c.campaign.drops = *f.drops, mark("campaign.drops");
    c.validate();
    return c;
}

void add_common(CLI::App *sub, Flags &f)
{
    sub->add_option("--config", f.config, "TOML config file or a manifest.json from an earlier run");
    sub->add_option("--seed", f.seed, "Random seed");
    sub->add_option("--out", f.out, "Output directory");
    sub->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--fov", f.fov, "ADR field of view, e.g. 30deg");
    sub->add_option("--pd-area", f.pd_area, "Photodiode area, e.g. 1.7mm2");
    sub->add_option("--rlens", f.rlens, "Lens curvature radius, e.g. 25mm");
    sub->add_option("--L", f.lens_diameter, "Lens diameter, e.g. 24mm");
}

void add_map_options(CLI::App *sub, Flags &f)
{
    sub->add_option("--resolution", f.resolution, "Raster points per side");
    sub->add_option("--layout", f.layout, "Built-in layout: sdma, s1, s2, s3, s4");
    sub->add_option("--layout-file", f.layout_file, "Layout file, one cluster of beam indices per line");
}

void write_manifest(OutputDir &dir, const std::string &command, const RootConfig &cfg, const json &results)
{
    json j;
    j["tool"] = "gobnet";
    j["command"] = command;
    j["seed"] = cfg.run.seed;
    j.update(to_json(cfg));
    j["results"] = results;
    std::vector<std::string> outputs = dir.files();
    outputs.push_back("manifest.json");
    j["outputs"] = outputs;
    auto f = dir.open("manifest.json");
    f << j.dump(2) << '\n';
}

int cmd_intensity_map(const RootConfig &cfg)
{
    OutputDir dir(cfg.run.out);
    const Extent extent = cfg.room.floor();
    auto beams = build_beams(cfg.ap);
    std::vector<BeamRecord> shown;
    for (const auto &b : beams)
        if (cfg.run.element == 0 || b.element_index == cfg.run.element)
            shown.push_back(b);
    const IntensityField field =
        total_intensity_field(shown, cfg.ap.source.power, extent, cfg.run.resolution, cfg.run.threads);
    {
        auto f = dir.open("heatmap_intensity.csv");
        write_field_csv(f, field);
    }
    json results;
    results["beams"] = shown.size();
    results["peak_intensity_w_per_m2"] = field.max_value();
    results["power_on_grid_w"] = field.integral();
    std::cout << "intensity map: " << shown.size() << " beams, peak " << field.max_value() << " W/m2\n";

    if (cfg.run.validate)
    {
        OracleOptions opt;
        opt.rays_per_vcsel = cfg.run.rays;
        opt.seed = cfg.run.seed;
        opt.threads = cfg.run.threads;
        opt.element = cfg.run.element;
        const OracleField oracle = oracle_field(cfg.ap, extent, cfg.run.resolution, opt);
        const FieldComparison cmp = compare_fields(field, oracle, beams);
        {
            auto f = dir.open("heatmap_oracle.csv");
            write_field_csv(f, oracle.field);
        }
        {
            auto f = dir.open("oracle_centroids.csv");
            f << "beam,element,analytic_x,analytic_y,oracle_x,oracle_y,offset_m\n";
            for (std::size_t k = 0; k < beams.size(); ++k)
            {
                if (oracle.beam_hits[k] == 0)
                    continue;
                const Vec3 a = beams[k].spot_center();
                f << beams[k].global_index << ',' << beams[k].element_index << ',' << format_number(a.x) << ','
                  << format_number(a.y) << ',' << format_number(oracle.centroids[k].x) << ','
                  << format_number(oracle.centroids[k].y) << ',' << format_number(cmp.centroid_offsets[k]) << '\n';
            }
        }
        results["oracle"]["rays_per_vcsel"] = cfg.run.rays;
        results["oracle"]["nrmse"] = cmp.nrmse;
        results["oracle"]["cells_compared"] = cmp.cells;
        results["oracle"]["max_centroid_offset_m"] = cmp.max_centroid_offset;
        results["escaped_fraction"] = oracle.escaped_fraction();
        std::cout << "ray oracle: NRMSE " << cmp.nrmse << " over " << cmp.cells << " cells, max centroid offset "
                  << cmp.max_centroid_offset * 100.0 << " cm, escaped fraction " << oracle.escaped_fraction() << '\n';
    }
    write_manifest(dir, "intensity-map", cfg, results);
    return ok;
}

int cmd_map(const RootConfig &cfg, bool sinr)
{
    OutputDir dir(cfg.run.out);
    const SystemModel m = cfg.system();
    const ClusterLayout layout = cfg.layout(m.grid);
    layout.validate(m.beam_count());
    const SpatialMaps maps = spatial_maps(m, layout, cfg.room.floor(), cfg.run.resolution, cfg.run.threads);
    {
        auto f = dir.open(std::string("heatmap_") + (sinr ? "sinr_" : "rate_") + layout.name + ".csv");
        write_field_csv(f, sinr ? maps.sinr_db : maps.rate);
    }
    const CoverageSummary cs = coverage_summary(m, layout);
    json results;
    results["layout"] = layout.name;
    results["clusters"] = layout.cluster_count();
    results["peak_sinr_db"] = cs.peak_sinr_db;
    results["edge_sinr_db"] = cs.edge_sinr_db;
    results["peak_rate_bps"] = cs.peak_rate;
    results["wall_rate_bps"] = cs.wall_rate;
    std::cout << layout.name << ": peak SINR " << cs.peak_sinr_db << " dB, edge SINR " << cs.edge_sinr_db
              << " dB, rate " << cs.wall_rate / 1e9 << " to " << cs.peak_rate / 1e9 << " Gb/s\n";
    write_manifest(dir, sinr ? "sinr-map" : "rate-map", cfg, results);
    return ok;
}

int cmd_montecarlo(const RootConfig &cfg)
{
    OutputDir dir(cfg.run.out);
    const SystemModel m = cfg.system();
    CampaignSpec spec;
    spec.drops = cfg.campaign.drops;
    for (const auto &name : cfg.campaign.layouts)
        spec.layouts.push_back(builtin_layout(name, m.grid));
    if (!cfg.run.layout_file.empty())
        spec.layouts.push_back(layout_from_file(cfg.run.layout_file, m.beam_count()));
    spec.schemes = cfg.schemes();
    spec.user_counts = cfg.user_counts();
    spec.room = cfg.room;
    spec.seed = cfg.run.seed;
    spec.threads = cfg.run.threads;
    const CampaignResult r = run_campaign(m, spec);

    const bool single_point = spec.user_counts.size() == 1;
    for (Metric metric : {Metric::sum_rate, Metric::jain})
    {
        for (const auto &s : r.series)
        {
            std::string name = "cdf_" + std::string(to_string(metric)) + "_" + s.layout + "_" +
                               std::string(to_string(s.scheme));
            if (!single_point)
                name += "_K" + std::to_string(s.num_ues);
            auto f = dir.open(name + ".csv");
            write_cdf_csv(f, CdfSeries::from_samples(samples(s, metric)));
        }
        auto f = dir.open("mean_" + std::string(to_string(metric)) + "_vs_rho.csv");
        write_mean_csv(f, r, metric);
    }

    if (cfg.run.per_drop)
    {
        // Sequential replay of the same substreams, so rows come out in drop order.
        for (std::size_t i = 0; i < spec.user_counts.size(); ++i)
        {
            const DropSpec drop{spec.user_counts[i], spec.room, spec.seed};
            for (const auto &l : spec.layouts)
                for (Scheme s : spec.schemes)
                {
                    auto f = dir.open("drops_" + l.name + "_" + std::string(to_string(s)) + "_K" +
                                      std::to_string(spec.user_counts[i]) + ".csv");
                    write_drop_header(f);
                    for (int d = 0; d < spec.drops; ++d)
                    {
                        const auto ues = sample_drop(drop, drop_stream(i, d));
                        write_drop_rows(f, d, s, run_drop(m, ues, l, s));
                    }
                }
        }
    }

    json results = json::array();
    for (const auto &s : r.series)
    {
        const SampleStats rate = s.sum_rate_stats();
        const SampleStats jain = s.jain_stats();
        results.push_back({{"num_ues", s.num_ues},
                           {"rho", s.density},
                           {"layout", s.layout},
                           {"scheme", to_string(s.scheme)},
                           {"mean_sum_rate_bps", rate.mean},
                           {"sum_rate_std_error", rate.std_error},
                           {"mean_jain", jain.mean},
                           {"jain_std_error", jain.std_error}});
        std::cout << "K=" << s.num_ues << " " << s.layout << "/" << to_string(s.scheme) << ": mean sum rate "
                  << rate.mean / 1e9 << " Gb/s, mean Jain " << jain.mean << '\n';
    }
    write_manifest(dir, "montecarlo", cfg, results);
    return ok;
}

int cmd_validate_config(const RootConfig &cfg, bool write_out)
{
    std::cout << resolved_report(cfg);
    for (const auto &w : config_warnings(cfg))
        std::cerr << "warning: " << w << '\n';
    const SystemModel m = cfg.system();
    const ClusterLayout layout = cfg.layout(m.grid);
    layout.validate(m.beam_count());
    std::cout << "layout " << layout.name << ": " << layout.cluster_count() << " clusters, valid partition\n";
    if (write_out)
    {
        OutputDir dir(cfg.run.out);
        write_manifest(dir, "validate-config", cfg, json::object());
    }
    return ok;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Grid-of-beams optical wireless network simulator"};
    app.require_subcommand(1);
    Flags f;

    auto *intensity = app.add_subcommand("intensity-map", "Analytic irradiance on the receiver plane");
    add_common(intensity, f);
    intensity->add_option("--resolution", f.resolution, "Raster points per side");
    intensity->add_option("--element", f.element, "Show only this AP element (1..9)")->check(CLI::Range(1, 9));
    intensity->add_flag("--validate", f.validate, "Also run the ray-trace oracle and compare");
    intensity->add_option("--rays", f.rays, "Oracle rays per VCSEL")->check(CLI::PositiveNumber);

    auto *sinr = app.add_subcommand("sinr-map", "Single-user SINR map for a cluster layout");
    add_common(sinr, f);
    add_map_options(sinr, f);

    auto *rate = app.add_subcommand("rate-map", "Single-user rate map for a cluster layout");
    add_common(rate, f);
    add_map_options(rate, f);

    auto *mc = app.add_subcommand("montecarlo", "Random-drop campaign over layouts, schemes and densities");
    add_common(mc, f);
    mc->add_option("--K", f.users, "Users per drop (repeatable or comma separated)")->delimiter(',');
    mc->add_option("--rho", f.rho, "Density sweep start:stop:step in UE/m2");
    mc->add_option("--scheme,--schemes", f.schemes, "noma, ofdma or both comma separated");
    mc->add_option("--layouts", f.layouts, "Comma-separated built-in layouts");
    mc->add_option("--layout-file", f.layout_file, "Extra layout file to include");
    mc->add_option("--drops", f.drops, "Drops per sweep point")->check(CLI::PositiveNumber);
    mc->add_flag("--per-drop", f.per_drop, "Also write per-user rows for every drop");

    auto *vc = app.add_subcommand("validate-config", "Print the resolved configuration and check it");
    add_common(vc, f);
    add_map_options(vc, f);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try
    {
        RootConfig cfg = resolve(f);
        cfg.run.validate = f.validate;
        cfg.run.per_drop = f.per_drop;
        if (intensity->parsed())
            return cmd_intensity_map(cfg);
        if (sinr->parsed())
            return cmd_map(cfg, true);
        if (rate->parsed())
            return cmd_map(cfg, false);
        if (mc->parsed())
            return cmd_montecarlo(cfg);
        return cmd_validate_config(cfg, f.out.has_value());
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    }
    catch (const UnknownLayout &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    }
    catch (const NotAPartition &e)
    {
        std::cerr << "config error: layout is not a partition: " << e.what() << '\n';
        return config_error;
    }
    catch (const ParseError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return runtime_error;
    }
}
