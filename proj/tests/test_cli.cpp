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


#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include "gobnet/config.hpp"
#include "gobnet/io.hpp"

using namespace gobnet;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace
{
struct Run
{
    int code = -1;
    std::string out, err;
};

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / "gobnet_cli_test" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

Run run(const std::string &args)
{
    const fs::path logs = fs::temp_directory_path() / "gobnet_cli_test";
    fs::create_directories(logs);
    const fs::path out = logs / "stdout.txt", err = logs / "stderr.txt";
    const std::string cmd = std::string("\"") + GOBNET_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> listing(const fs::path &dir)
{
    std::vector<std::string> names;
    for (const auto &e : fs::directory_iterator(dir))
        names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}
} // namespace

TEST_CASE("command line basics", "[cli]")
{
    CHECK(run("--help").code == 0);
    CHECK(run("").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("sinr-map --resolution x").code == 1);
    CHECK(run("intensity-map --element 12").code == 1);

    const Run bad_unit = run("validate-config --pd-area 2mm");
    CHECK(bad_unit.code == 1);
    CHECK_THAT(bad_unit.err, ContainsSubstring("unit 'mm' measures length, expected area"));

    const Run bad_layout = run("validate-config --layout s7");
    CHECK(bad_layout.code == 1);
    CHECK_THAT(bad_layout.err, ContainsSubstring("unknown layout 's7'"));

    CHECK(run("validate-config --config /nonexistent.toml").code == 1);
}

TEST_CASE("validate-config", "[cli]")
{
    const Run plain = run("validate-config");
    CHECK(plain.code == 0);
    CHECK_THAT(plain.out, ContainsSubstring("adr.pd_area = 1.7 mm2  [calibrated]"));
    CHECK_THAT(plain.out, ContainsSubstring("valid partition"));
    CHECK_THAT(plain.err, ContainsSubstring("adr.fov not set"));

    const Run narrow = run("validate-config --fov 30deg");
    CHECK(narrow.code == 0);
    CHECK(narrow.err.find("adr.fov not set") == std::string::npos);
    CHECK_THAT(narrow.out, ContainsSubstring("adr.fov = 30 deg  [command line]"));
    CHECK_THAT(narrow.out, ContainsSubstring("adr.theta_cpc = 10 deg"));

    const fs::path dir = scratch("validate");
    CHECK(run("validate-config --out \"" + dir.string() + "\"").code == 0);
    CHECK(fs::exists(dir / "manifest.json"));

    const fs::path gap = dir / "gap.txt";
    {
        std::ofstream f(gap);
        for (int b = 1; b <= 224; ++b)
            f << b << '\n';
    }
    const Run partition = run("validate-config --layout-file \"" + gap.string() + "\"");
    CHECK(partition.code == 1);
    CHECK_THAT(partition.err, ContainsSubstring("not a partition: beam 225 unassigned"));

    const Run layout = run(std::string("validate-config --layout-file \"") + GOBNET_DATA_DIR + "/layouts/s4.txt\"");
    CHECK(layout.code == 0);
    CHECK_THAT(layout.out, ContainsSubstring("layout s4: 49 clusters"));
}

TEST_CASE("maps are reproducible across thread counts and from the manifest", "[cli]")
{
    const fs::path a = scratch("map1"), b = scratch("map4"), c = scratch("replay");
    REQUIRE(run("sinr-map --layout s1 --resolution 24 --threads 1 --out \"" + a.string() + "\"").code == 0);
    REQUIRE(run("sinr-map --layout s1 --resolution 24 --threads 4 --out \"" + b.string() + "\"").code == 0);
    REQUIRE(listing(a) == (std::vector<std::string>{"heatmap_sinr_s1.csv", "manifest.json"}));
    CHECK(listing(b) == listing(a));
    for (const auto &name : listing(a))
        CHECK(slurp(a / name) == slurp(b / name));

    REQUIRE(run("sinr-map --config \"" + (a / "manifest.json").string() + "\" --out \"" + c.string() + "\"").code ==
            0);
    for (const auto &name : listing(a))
        CHECK(slurp(a / name) == slurp(c / name));

    const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
    CHECK(manifest["command"] == "sinr-map");
    CHECK(manifest["config"]["run.layout"] == "s1");
    CHECK(manifest["results"]["clusters"] == 9);
    CHECK(manifest["outputs"].size() == 2);

    std::ifstream in(a / "heatmap_sinr_s1.csv");
    const IntensityField f = read_field_csv(in);
    CHECK(f.nx == 24);
    CHECK(f.extent == Room{}.floor());
}

TEST_CASE("rate map", "[cli]")
{
    const fs::path dir = scratch("rate");
    const Run r = run("rate-map --resolution 10 --out \"" + dir.string() + "\"");
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("Gb/s"));
    std::ifstream in(dir / "heatmap_rate_sdma.csv");
    const IntensityField f = read_field_csv(in);
    CHECK(f.max_value() > 1e9);
}

TEST_CASE("montecarlo outputs", "[cli]")
{
    const fs::path dir = scratch("mc");
    REQUIRE(run("montecarlo --K 10 --drops 20 --per-drop --out \"" + dir.string() + "\"").code == 0);
    int cdfs = 0;
    for (const auto &name : listing(dir))
        cdfs += name.rfind("cdf_sum_rate_", 0) == 0;
    CHECK(cdfs == 5);
    for (const auto &l : {"sdma", "s1", "s2", "s3", "s4"})
    {
        CHECK(fs::exists(dir / (std::string("cdf_sum_rate_") + l + "_noma.csv")));
        CHECK(fs::exists(dir / (std::string("cdf_jain_") + l + "_noma.csv")));
        CHECK(fs::exists(dir / (std::string("drops_") + l + "_noma_K10.csv")));
    }
    const std::string mean = slurp(dir / "mean_sum_rate_vs_rho.csv");
    CHECK(mean.rfind("rho,num_ues,layout,scheme,mean,std_error,drops\n", 0) == 0);
    CHECK(std::count(mean.begin(), mean.end(), '\n') == 6);

    // 20 drops x 10 UEs plus the header.
    const std::string rows = slurp(dir / "drops_s2_noma_K10.csv");
    CHECK(std::count(rows.begin(), rows.end(), '\n') == 201);

    const fs::path sweep = scratch("mc_sweep");
    REQUIRE(run("montecarlo --rho 0.4:0.8:0.4 --schemes noma,ofdma --layouts s1 --drops 5 --threads 3 --out \"" +
                sweep.string() + "\"")
                .code == 0);
    CHECK(fs::exists(sweep / "cdf_sum_rate_s1_ofdma_K20.csv"));
    CHECK(fs::exists(sweep / "cdf_jain_s1_noma_K10.csv"));
    const auto manifest = nlohmann::json::parse(slurp(sweep / "manifest.json"));
    CHECK(manifest["results"].size() == 4);

    CHECK(run("montecarlo --schemes cdma --drops 1 --out \"" + sweep.string() + "\"").code == 1);
}

TEST_CASE("intensity map regimes", "[cli]")
{
    // Minimum over maximum of the element-5 pattern inside its spot bounding box.
    auto flatness = [](const std::string &extra)
    {
        const fs::path dir = scratch("blob");
        REQUIRE(run("intensity-map --element 5 --resolution 200 " + extra + " --out \"" + dir.string() + "\"").code ==
                0);
        std::ifstream in(dir / "heatmap_intensity.csv");
        const IntensityField f = read_field_csv(in);

        RootConfig c;
        if (!extra.empty())
        {
            c.ap.lens.curvature_radius = 25e-3;
            c.ap.lens.diameter = 24e-3;
        }
        double x0 = 1e9, x1 = -1e9, y0 = 1e9, y1 = -1e9;
        for (const auto &b : build_beams(c.ap))
            if (b.element_index == 5)
            {
                const Vec3 s = b.spot_center();
                x0 = std::min(x0, s.x), x1 = std::max(x1, s.x), y0 = std::min(y0, s.y), y1 = std::max(y1, s.y);
            }
        double lo = 1e300, hi = 0.0;
        for (int iy = 0; iy < f.ny; ++iy)
            for (int ix = 0; ix < f.nx; ++ix)
                if (f.x_at(ix) >= x0 && f.x_at(ix) <= x1 && f.y_at(iy) >= y0 && f.y_at(iy) <= y1)
                {
                    lo = std::min(lo, f.at(ix, iy));
                    hi = std::max(hi, f.at(ix, iy));
                }
        return lo / hi;
    };
    CHECK(flatness("") < 0.25);
    CHECK(flatness("--rlens 25mm --L 24mm") > 0.5);

    const fs::path dir = scratch("oracle");
    const Run r = run("intensity-map --validate --rays 300 --resolution 40 --out \"" + dir.string() + "\"");
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("ray oracle: NRMSE"));
    CHECK(listing(dir) == (std::vector<std::string>{"heatmap_intensity.csv", "heatmap_oracle.csv", "manifest.json",
                                                    "oracle_centroids.csv"}));
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["results"]["oracle"]["rays_per_vcsel"] == 300);
    CHECK(manifest["results"]["escaped_fraction"].get<double>() < 1e-3);
}
