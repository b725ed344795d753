/*
   Copyright 2026 The Liouville Lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "liouville/cli.hpp"
#include "liouville/io.hpp"

using namespace liouville;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path config_dir() {
    const char* dir = std::getenv("LIOUVILLE_CONFIG_DIR");
    REQUIRE(dir != nullptr);
    return dir;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("liouville_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path write_config(const fs::path& dir, const std::string& name, const json& config) {
    const fs::path p = dir / name;
    std::ofstream(p) << config.dump();
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
}

double trapezoid(const XySeries& s) {
    double m = 0.0;
    for (std::size_t i = 1; i < s.x.size(); ++i) m += 0.5 * (s.y[i] + s.y[i - 1]) * (s.x[i] - s.x[i - 1]);
    return m;
}

}  // namespace

TEST_CASE("position pdfs for three laws") {
    const fs::path out = scratch("fig2");
    const Run r = run({(config_dir() / "fig2_position_pdf.json").string(), "--out-dir", out.string()});
    REQUIRE(r.code == kExitOk);
    const json summary = json::parse(r.out);
    CHECK(summary["command"] == "pdf");
    std::size_t csv = 0;
    for (const auto& entry : fs::directory_iterator(out)) {
        if (entry.path().extension() != ".csv") continue;
        ++csv;
        CAPTURE(entry.path().string());
        CHECK(trapezoid(read_xy_csv(entry.path().string())) == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK(csv == 6);
    CHECK(fs::exists(out / "summary_pdf.json"));
}

TEST_CASE("zero diffusion collapses the ensemble into one bin") {
    const fs::path out = scratch("zero");
    const json config{{"command", "mc"},
                      {"n", 1000},
                      {"methods", {"liouville", "langevin"}},
                      {"times", {1.0}},
                      {"dt", 0.01},
                      {"model", {{"type", "position"}, {"u_p", 2.0}, {"D", 0.0}}},
                      {"binning", {{"lo", -5.0}, {"hi", 5.0}, {"bins", 10}}}};
    const Run r = run({write_config(out, "zero.json", config).string(), "--out-dir", out.string()});
    REQUIRE(r.code == kExitOk);
    for (const char* name : {"mc_liouville_t1_x.csv", "mc_langevin_t1_x.csv"}) {
        CAPTURE(name);
        const XySeries h = read_xy_csv((out / name).string());
        int occupied = 0;
        for (double y : h.y) occupied += y > 0.0;
        CHECK(occupied == 1);
    }
}

TEST_CASE("calibration recovers the dispersion at Re 20") {
    const fs::path out = scratch("fit");
    const Run r = run({(config_dir() / "fig8_fit.json").string(), "--out-dir", out.string()});
    REQUIRE(r.code == kExitOk);
    const json report = json::parse(slurp(out / "fit_report.json"));
    bool found = false;
    for (const auto& entry : report["per_re"]) {
        if (entry["Re_m"].get<double>() != 20.0) continue;
        found = true;
        CHECK(entry["sigma_xi"].get<double>() == doctest::Approx(0.9488).epsilon(0.01));
    }
    CHECK(found);
}

TEST_CASE("errors") {
    const fs::path out = scratch("errors");
    SUBCASE("unknown key") {
        const json config{{"command", "fhhs"}, {"model", {{"type", "fhhs"}, {"Re_m", 20.0}}}, {"bogus", 1}};
        const Run r = run({write_config(out, "bad.json", config).string(), "--out-dir", out.string()});
        CHECK(r.code == kExitUsage);
        const json e = json::parse(r.err);
        CHECK(e["error"] == "config");
        CHECK(e["message"].get<std::string>().find("bogus") != std::string::npos);
    }
    SUBCASE("missing config file") {
        const Run r = run({(out / "missing.json").string()});
        CHECK(r.code == kExitUsage);
        CHECK(json::parse(r.err).contains("message"));
    }
    SUBCASE("unknown option") {
        CHECK(run({"x.json", "--frobnicate"}).code == kExitUsage);
    }
    SUBCASE("invalid parameter") {
        const json config{{"command", "pdf"},
                          {"model", {{"type", "velocity"}, {"tau_p", -1.0}, {"D", 0.02}, {"v0", 1.0}}},
                          {"times", {1.0}}};
        CHECK(run({write_config(out, "neg.json", config).string(), "--out-dir", out.string()}).code == kExitUsage);
    }
    SUBCASE("finite-time blowup") {
        const json config{
            {"command", "mc"},
            {"n", 1000},
            {"methods", {"liouville"}},
            {"times", {5.0}},
            {"model",
             {{"type", "forcing"},
              {"dim", 1},
              {"drift", {{"name", "cubic"}, {"params", {-1.0}}}},
              {"coefficients", {{{"family", "normal"}}}},
              {"terms", {{{"coefficient", 0}, {"basis", {{"name", "constant"}, {"params", {1.0}}}}}}}}}};
        const Run r = run({write_config(out, "blow.json", config).string(), "--out-dir", out.string()});
        CHECK(r.code == kExitNumerical);
        const json e = json::parse(r.err);
        CHECK(e["error"] == "numerical_blowup");
        CHECK(e["time"].get<double>() > 0.0);
        CHECK(e["time"].get<double>() < 5.0);
    }
}

TEST_CASE("reruns are byte identical") {
    const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
    const std::string cfg = (config_dir() / "mc_triangular.json").string();
    REQUIRE(run({cfg, "--out-dir", a.string(), "--threads", "1"}).code == kExitOk);
    REQUIRE(run({cfg, "--out-dir", b.string(), "--threads", "3"}).code == kExitOk);
    for (const auto& entry : fs::directory_iterator(a)) {
        if (entry.path().extension() != ".csv") continue;
        CAPTURE(entry.path().string());
        CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    }
    const fs::path c = scratch("rerun_c");
    REQUIRE(run({cfg, "--out-dir", c.string(), "--seed", "8"}).code == kExitOk);
    CHECK(slurp(a / "mc_liouville_t1_x.csv") != slurp(c / "mc_liouville_t1_x.csv"));
}

TEST_CASE("help") {
    const Run r = run({"--help"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("--seed") != std::string::npos);
    CHECK(r.out.find("--out-dir") != std::string::npos);
}
