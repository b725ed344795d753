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

#include "liouville/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "liouville/analytic.hpp"
#include "liouville/characteristics.hpp"
#include "liouville/error.hpp"
#include "liouville/fhhs.hpp"
#include "liouville/fokker_planck.hpp"
#include "liouville/io.hpp"
#include "liouville/langevin.hpp"
#include "liouville/moments.hpp"
#include "liouville/parallel.hpp"
#include "liouville/stats.hpp"

namespace liouville {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

[[noreturn]] void bad(const std::string& message) { fail(ErrorKind::Config, message); }

// A JSON object with typed, validated access.
class Obj {
public:
    Obj(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) bad(where_ + ": expected an object");
    }

    void allow(const std::set<std::string>& keys) const {
        for (const auto& item : j_.items())
            if (!keys.count(item.key())) bad(where_ + ": unknown key '" + item.key() + "'");
    }

    bool has(const std::string& k) const { return j_.contains(k); }
    const json& raw(const std::string& k) const {
        if (!has(k)) bad(where_ + ": missing key '" + k + "'");
        return j_.at(k);
    }
    std::string at(const std::string& k) const { return where_ + "." + k; }

    double number(const std::string& k) const {
        const json& v = raw(k);
        if (!v.is_number()) bad(at(k) + ": expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) bad(at(k) + ": must be finite");
        return x;
    }
    double number(const std::string& k, double fallback) const { return has(k) ? number(k) : fallback; }

    std::uint64_t count(const std::string& k, std::uint64_t fallback) const {
        if (!has(k)) return fallback;
        const double x = number(k);
        if (x < 0.0 || x != std::floor(x) || x > 9.0e15) bad(at(k) + ": expected a non-negative integer");
        return static_cast<std::uint64_t>(x);
    }

    std::string string(const std::string& k) const {
        const json& v = raw(k);
        if (!v.is_string()) bad(at(k) + ": expected a string");
        return v.get<std::string>();
    }
    std::string string(const std::string& k, const std::string& fallback) const {
        return has(k) ? string(k) : fallback;
    }

    bool boolean(const std::string& k, bool fallback) const {
        if (!has(k)) return fallback;
        if (!raw(k).is_boolean()) bad(at(k) + ": expected true or false");
        return raw(k).get<bool>();
    }

    std::vector<double> numbers(const std::string& k) const {
        const json& v = raw(k);
        if (!v.is_array()) bad(at(k) + ": expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) bad(at(k) + ": expected an array of numbers");
            out.push_back(e.get<double>());
            if (!std::isfinite(out.back())) bad(at(k) + ": values must be finite");
        }
        return out;
    }

    Obj child(const std::string& k) const { return Obj(raw(k), at(k)); }

private:
    const json& j_;
    std::string where_;
};

struct Context {
    fs::path out_dir;
    fs::path config_dir;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    json files = json::array();

    std::string output(const std::string& name) {
        const fs::path p = out_dir / name;
        files.push_back(p.generic_string());
        return p.string();
    }
};

std::string tag(double t) { return format_number(t); }

// ---------------------------------------------------------------- parsing

XiDistribution parse_distribution(const json& j, const std::string& where) {
    Obj o(j, where);
    o.allow({"family", "params"});
    const std::string family = o.string("family");
    if (!o.has("params")) {
        if (family == "normal") return XiDistribution::standard_normal();
        if (family == "uniform") return XiDistribution::standard_uniform();
        if (family == "triangular") return XiDistribution::standard_triangular();
        bad(where + ": family '" + family + "' needs params");
    }
    const auto p = o.numbers("params");
    try {
        return XiDistribution::from_params(family, p);
    } catch (const Error& e) {
        bad(where + ": " + e.what());
    }
}

struct ModelSpec {
    CanonicalModel model;
    std::string label;
};

int parse_component(const json& j, const std::string& where) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "x") return 0;
        if (s == "u") return 1;
    } else if (j.is_number_integer()) {
        const int c = j.get<int>();
        if (c == 0 || c == 1) return c;
    }
    bad(where + ": component must be \"x\", \"u\", 0 or 1");
}

ModelSpec parse_model(const json& j, const std::string& where) {
    Obj o(j, where);
    const std::string type = o.string("type");
    ModelSpec spec;
    try {
        if (type == "position") {
            o.allow({"type", "label", "u_p", "D"});
            PositionModel m{o.number("u_p", 0.0), o.number("D")};
            m.validate();
            spec = {m, "position"};
        } else if (type == "velocity") {
            o.allow({"type", "label", "tau_p", "D", "v0"});
            VelocityModel m{o.number("tau_p"), o.number("D"), o.number("v0", 0.0)};
            m.validate();
            spec = {m, "velocity"};
        } else if (type == "fhhs") {
            o.allow({"type", "label", "tau_p", "sigma_xi", "C1", "C2", "Re_m", "omega", "rho_ratio"});
            FhhsModel m;
            m.tau_p = o.number("tau_p", 0.14);
            m.C2 = o.number("C2", 1.2);
            if (!o.has("sigma_xi") && !o.has("C1")) {
                if (!o.has("Re_m")) bad(where + ": give sigma_xi and C1, or Re_m for the published laws");
                m = fhhs_from_regression(o.number("Re_m"), m.tau_p, m.C2);
            } else {
                m.sigma_xi = o.number("sigma_xi");
                m.C1 = o.number("C1");
                m.Re_m = o.number("Re_m", 0.0);
            }
            m.omega = o.number("omega", m.omega);
            m.rho_ratio = o.number("rho_ratio", m.rho_ratio);
            m.validate();
            spec = {m, m.Re_m > 0.0 ? "Re" + tag(m.Re_m) : "fhhs"};
        } else if (type == "forcing") {
            o.allow({"type", "label", "dim", "drift", "coefficients", "terms", "t0", "y0"});
            RandomForcingModel m;
            m.dim = static_cast<int>(o.count("dim", 1));
            const Obj drift = o.child("drift");
            drift.allow({"name", "params"});
            m.drift = Drift::named(drift.string("name"), drift.numbers("params"));
            const json& coeffs = o.raw("coefficients");
            if (!coeffs.is_array() || coeffs.empty()) bad(o.at("coefficients") + ": expected a non-empty array");
            for (std::size_t i = 0; i < coeffs.size(); ++i)
                m.coefficients.push_back(
                    parse_distribution(coeffs[i], o.at("coefficients") + "[" + std::to_string(i) + "]"));
            const json& terms = o.raw("terms");
            if (!terms.is_array()) bad(o.at("terms") + ": expected an array");
            for (std::size_t i = 0; i < terms.size(); ++i) {
                const std::string w = o.at("terms") + "[" + std::to_string(i) + "]";
                Obj t(terms[i], w);
                t.allow({"coefficient", "component", "basis"});
                ForcingTerm term;
                term.coefficient = t.count("coefficient", 0);
                term.component = t.has("component") ? parse_component(t.raw("component"), w + ".component") : 0;
                const Obj b = t.child("basis");
                b.allow({"name", "params"});
                term.basis = Basis::named(b.string("name"), b.numbers("params"));
                m.terms.push_back(term);
            }
            m.t0 = o.number("t0", 0.0);
            if (o.has("y0")) {
                const auto y0 = o.numbers("y0");
                if (y0.size() != static_cast<std::size_t>(m.dim)) bad(o.at("y0") + ": expected dim values");
                for (std::size_t i = 0; i < y0.size(); ++i) m.y0[i] = y0[i];
            }
            m.validate();
            spec = {m, "forcing"};
        } else {
            bad(where + ": unknown model type '" + type + "' (position, velocity, fhhs, forcing)");
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config) throw;
        bad(where + ": " + e.what());
    }
    if (o.has("label")) spec.label = o.string("label");
    return spec;
}

std::vector<ModelSpec> parse_models(const Obj& root) {
    std::vector<ModelSpec> out;
    if (root.has("model") == root.has("models")) bad("config: give exactly one of 'model' or 'models'");
    if (root.has("model")) {
        out.push_back(parse_model(root.raw("model"), "config.model"));
        return out;
    }
    const json& list = root.raw("models");
    if (!list.is_array() || list.empty()) bad("config.models: expected a non-empty array");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < list.size(); ++i) {
        out.push_back(parse_model(list[i], "config.models[" + std::to_string(i) + "]"));
        if (!labels.insert(out.back().label).second) out.back().label += "_" + std::to_string(i);
    }
    return out;
}

std::vector<double> parse_times(const Obj& root, const std::string& key, bool allow_zero) {
    std::vector<double> times;
    const json& v = root.raw(key);
    if (v.is_array()) {
        times = root.numbers(key);
    } else {
        const Obj o = root.child(key);
        o.allow({"lo", "hi", "n", "spacing"});
        const double lo = o.number("lo"), hi = o.number("hi");
        const auto n = o.count("n", 50);
        const std::string spacing = o.string("spacing", "log");
        if (n < 2 || !(hi > lo)) bad(root.at(key) + ": need n >= 2 and hi > lo");
        if (spacing == "log") {
            if (!(lo > 0.0)) bad(root.at(key) + ": log spacing needs lo > 0");
            times = log_grid(lo, hi, n);
        } else if (spacing == "linear") {
            times = uniform_grid(lo, hi, n);
        } else {
            bad(root.at(key) + ": spacing must be 'log' or 'linear'");
        }
    }
    if (times.empty()) bad(root.at(key) + ": no times given");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || (!allow_zero && times[i] == 0.0))
            bad(root.at(key) + ": times must be " + (allow_zero ? ">= 0" : "> 0"));
        if (i > 0 && !(times[i] > times[i - 1])) bad(root.at(key) + ": times must be increasing");
    }
    return times;
}

std::optional<std::vector<double>> parse_grid(const Obj& root, const std::string& key) {
    if (!root.has(key)) return std::nullopt;
    const Obj g = root.child(key);
    g.allow({"lo", "hi", "n"});
    const double lo = g.number("lo"), hi = g.number("hi");
    const auto n = g.count("n", 1001);
    if (n < 2 || !(hi > lo)) bad(root.at(key) + ": need n >= 2 and hi > lo");
    return uniform_grid(lo, hi, n);
}

Binning parse_binning(const Obj& root) {
    if (!root.has("binning")) return {};
    const Obj b = root.child("binning");
    b.allow({"lo", "hi", "bins"});
    const double lo = b.number("lo"), hi = b.number("hi");
    const auto bins = b.count("bins", 100);
    if (bins < 1 || !(hi > lo)) bad(root.at("binning") + ": need bins >= 1 and hi > lo");
    return Binning::fixed(lo, hi, bins);
}

std::vector<std::string> dist_names(const std::vector<XiDistribution>& dists) {
    std::vector<std::string> names;
    for (const auto& d : dists) names.emplace_back(to_string(d.family()));
    for (std::size_t i = 0; i < names.size(); ++i)
        if (std::count(names.begin(), names.end(), names[i]) > 1) names[i] += std::to_string(i);
    return names;
}

std::string variable_name(const CanonicalModel& model, int component) {
    if (std::holds_alternative<FhhsModel>(model)) return "u";
    return component == 0 ? "x" : "u";
}

int model_dim(const CanonicalModel& model) {
    if (std::holds_alternative<VelocityModel>(model)) return 2;
    if (const auto* m = std::get_if<RandomForcingModel>(&model)) return m->dim;
    return 1;
}

json curve_summary(const PdfCurve& c, const std::string& file) {
    return {{"file", file}, {"mass", c.mass()}, {"mean", c.mean()}, {"variance", c.variance()},
            {"warnings", c.warnings}};
}

std::optional<double> try_number(const std::function<double()>& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Domain || e.kind() == ErrorKind::Unsupported) return std::nullopt;
        throw;
    }
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// ---------------------------------------------------------------- commands

json cmd_pdf(const Obj& root, Context& ctx) {
    root.allow({"command", "seed", "out_dir", "threads", "description", "model", "distribution",
                "distributions", "times", "grid", "grid_u", "dt"});
    const ModelSpec spec = parse_model(root.raw("model"), "config.model");
    const bool forcing = std::holds_alternative<RandomForcingModel>(spec.model);
    std::vector<XiDistribution> dists;
    if (forcing) {
        if (root.has("distribution") || root.has("distributions"))
            bad("config: forcing models carry their own coefficient laws; drop 'distribution'");
        dists.push_back(XiDistribution::standard_normal());
    } else if (root.has("distribution") == root.has("distributions")) {
        bad("config: give exactly one of 'distribution' or 'distributions'");
    } else if (root.has("distribution")) {
        dists.push_back(parse_distribution(root.raw("distribution"), "config.distribution"));
    } else {
        const json& list = root.raw("distributions");
        if (!list.is_array() || list.empty()) bad("config.distributions: expected a non-empty array");
        for (std::size_t i = 0; i < list.size(); ++i)
            dists.push_back(parse_distribution(list[i], "config.distributions[" + std::to_string(i) + "]"));
    }
    const auto times = parse_times(root, "times", false);
    const auto grid = parse_grid(root, "grid");
    const auto grid_u = parse_grid(root, "grid_u");
    const double dt = root.number("dt", kDefaultCharStep);
    if (forcing && !grid) bad("config.grid: required for forcing models");
    if (forcing && model_dim(spec.model) == 2 && !grid_u) bad("config.grid_u: required for two-dimensional forcing models");

    const auto names = forcing ? std::vector<std::string>{"model"} : dist_names(dists);
    json curves = json::array();
    for (std::size_t d = 0; d < dists.size(); ++d) {
        for (double t : times) {
            std::vector<std::pair<int, PdfCurve>> out;
            const std::span<const double> gx = grid ? std::span<const double>(*grid) : std::span<const double>();
            const std::span<const double> gu = grid_u ? std::span<const double>(*grid_u) : std::span<const double>();
            if (const auto* m = std::get_if<PositionModel>(&spec.model)) {
                out.emplace_back(0, position_pdf_curve(*m, dists[d], t, gx));
            } else if (const auto* m = std::get_if<VelocityModel>(&spec.model)) {
                auto [fx, fu] = velocity_model_pdfs(*m, dists[d], t, gx, gu);
                out.emplace_back(0, std::move(fx));
                out.emplace_back(1, std::move(fu));
            } else if (const auto* m = std::get_if<FhhsModel>(&spec.model)) {
                out.emplace_back(0, fhhs_pdf_curve(*m, dists[d], t, gx));
            } else {
                for (int c = 0; c < model_dim(spec.model); ++c) {
                    TransformOptions opt;
                    opt.component = c;
                    opt.dt = dt;
                    out.emplace_back(c, transform_pdf(spec.model, InitialCondition::dirac(), dists[d], t,
                                                      c == 0 ? gx : gu, opt));
                    out.back().second.set_meta("variable", c == 0 ? "x" : "u");
                }
            }
            for (auto& [c, curve] : out) {
                const std::string name = "pdf_" + spec.label + "_" + names[d] + "_t" + tag(t) + "_" +
                                         variable_name(spec.model, c) + ".csv";
                write_pdf_csv(ctx.output(name), curve);
                curves.push_back(curve_summary(curve, name));
            }
        }
    }
    return {{"curves", curves}};
}

json cmd_mc(const Obj& root, Context& ctx) {
    root.allow({"command", "seed", "out_dir", "threads", "description", "model", "distribution", "n",
                "times", "dt", "methods", "binning", "dump_paths"});
    const ModelSpec spec = parse_model(root.raw("model"), "config.model");
    if (std::holds_alternative<RandomForcingModel>(spec.model) && root.has("distribution"))
        bad("config: forcing models carry their own coefficient laws; drop 'distribution'");
    const XiDistribution dist = root.has("distribution")
                                    ? parse_distribution(root.raw("distribution"), "config.distribution")
                                    : XiDistribution::standard_normal();
    const std::size_t n = root.count("n", 100000);
    if (n < 100) bad("config.n: need at least 100 samples");
    const auto times = parse_times(root, "times", false);
    const double dt = root.number("dt", 1e-3);
    if (!(dt > 0.0)) bad("config.dt: must be > 0");
    const Binning binning = parse_binning(root);
    const bool dump = root.boolean("dump_paths", false);
    std::vector<std::string> methods{"liouville", "langevin"};
    if (root.has("methods")) {
        methods.clear();
        const json& list = root.raw("methods");
        if (!list.is_array() || list.empty()) bad("config.methods: expected a non-empty array");
        for (const auto& m : list) {
            if (!m.is_string() || (m != "liouville" && m != "langevin"))
                bad("config.methods: entries must be \"liouville\" or \"langevin\"");
            methods.push_back(m.get<std::string>());
        }
    }
    const bool langevin = std::find(methods.begin(), methods.end(), "langevin") != methods.end();
    if (langevin) {
        if (std::holds_alternative<RandomForcingModel>(spec.model))
            bad("config.methods: no Langevin counterpart for a generic forcing model");
        if (const auto* m = std::get_if<FhhsModel>(&spec.model); m && dt > m->tau_p / 50.0)
            bad("config.dt: the FHHS Langevin scheme needs dt <= tau_p / 50");
        for (double t : times) {
            const double k = std::round(t / dt);
            if (std::fabs(k * dt - t) > 1e-9 * std::max(1.0, t))
                bad("config.times: every time must be a multiple of dt for the Langevin method");
        }
    }
    const int dim = model_dim(spec.model);
    const auto stats_of = [](std::span<const double> s) {
        const SampleMoments m = sample_moments(s);
        return json{{"mean", m.mean}, {"variance", m.variance},
                    {"skewness", m.variance > 0.0 ? json(m.skewness()) : json(nullptr)}};
    };
    json report = json::array();
    for (const auto& method : methods) {
        std::optional<PathEnsemble> ens;
        if (method == "langevin") {
            LangevinOptions opt;
            opt.output_times = times;
            opt.threads = ctx.threads;
            const double t_end = times.back();
            if (const auto* m = std::get_if<PositionModel>(&spec.model))
                ens = simulate_position_langevin(*m, n, dt, t_end, ctx.seed, opt);
            else if (const auto* m = std::get_if<VelocityModel>(&spec.model))
                ens = simulate_velocity_langevin(*m, n, dt, t_end, ctx.seed, opt);
            else
                ens = simulate_fhhs_langevin(std::get<FhhsModel>(spec.model), FhhsDiffusion::FromLiouville,
                                             n, dt, t_end, ctx.seed, opt);
            if (dump) write_paths_binary(*ens, ctx.output("paths_langevin.bin"));
        }
        // the Langevin marginals are Gaussian whatever the coefficient law
        const XiDistribution& reference = method == "langevin" ? XiDistribution::standard_normal() : dist;
        for (double t : times) {
            for (int c = 0; c < dim; ++c) {
                std::vector<double> samples;
                if (ens) {
                    const auto v = ens->values_at(t, c);
                    samples.assign(v.begin(), v.end());
                } else {
                    McOptions opt;
                    opt.component = c;
                    opt.dt = dt;
                    opt.threads = ctx.threads;
                    samples = mc_terminal_states(spec.model, dist, n, t, ctx.seed, opt);
                }
                PdfCurve h = histogram(samples, binning);
                h.set_meta("model", std::string(model_name(spec.model)));
                h.set_meta("variable", variable_name(spec.model, c));
                h.set_meta("t", tag(t));
                h.set_meta("n", std::to_string(n));
                h.set_meta("seed", std::to_string(ctx.seed));
                h.set_meta("method", method);
                const std::string name =
                    "mc_" + method + "_t" + tag(t) + "_" + variable_name(spec.model, c) + ".csv";
                write_pdf_csv(ctx.output(name), h);
                const auto ks = try_number([&] {
                    return ks_statistic(samples, [&](double y) { return model_cdf(spec.model, reference, c, y, t); });
                });
                json entry = stats_of(samples);
                entry["method"] = method;
                entry["t"] = t;
                entry["variable"] = variable_name(spec.model, c);
                entry["file"] = name;
                entry["bins"] = h.size();
                entry["ks_analytic"] = opt_json(ks);
                report.push_back(entry);
            }
        }
    }
    return {{"results", report}};
}

json cmd_fp(const Obj& root, Context& ctx) {
    root.allow({"command", "seed", "out_dir", "threads", "description", "model", "problem", "n", "t0",
                "times", "dt"});
    if (root.has("model") == root.has("problem")) bad("config: give exactly one of 'model' or 'problem'");
    const auto times = parse_times(root, "times", false);
    const auto n = root.count("n", 2001);
    if (n < 3) bad("config.n: need at least 3 grid points");
    const double dt = root.number("dt", 1e-3);
    if (!(dt > 0.0)) bad("config.dt: must be > 0");
    FpProblem problem;
    std::optional<CanonicalModel> model;
    std::string label = "problem";
    if (root.has("model")) {
        const ModelSpec spec = parse_model(root.raw("model"), "config.model");
        if (std::holds_alternative<RandomForcingModel>(spec.model))
            bad("config.model: use 'problem' for generic forcing models");
        model = spec.model;
        label = spec.label;
        double t0 = 0.05;
        if (const auto* m = std::get_if<FhhsModel>(&spec.model)) t0 = 0.05 * m->tau_p;
        t0 = root.number("t0", t0);
        if (!(t0 > 0.0) || !(times.front() > t0)) bad("config: need 0 < t0 < first time");
        problem = fp_problem_for(*model, t0, times.back(), n);
    } else {
        const Obj p = root.child("problem");
        p.allow({"drift", "diffusion", "lo", "hi", "initial"});
        const Obj drift = p.child("drift");
        drift.allow({"name", "params"});
        const Obj diffusion = p.child("diffusion");
        diffusion.allow({"name", "params"});
        try {
            problem.drift = fp_drift_named(drift.string("name"), drift.numbers("params"));
            problem.diffusion = fp_diffusion_named(diffusion.string("name"), diffusion.numbers("params"));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Config) throw;
            bad(std::string("config.problem: ") + e.what());
        }
        problem.lo = p.number("lo");
        problem.hi = p.number("hi");
        if (!(problem.hi > problem.lo)) bad("config.problem: need hi > lo");
        problem.n = n;
        problem.t0 = root.number("t0", 0.0);
        if (!(times.front() > problem.t0)) bad("config: the first time must exceed t0");
        const Obj init = p.child("initial");
        init.allow({"mean", "std"});
        const double mean = init.number("mean"), sd = init.number("std");
        if (!(sd > 0.0)) bad("config.problem.initial.std: must be > 0");
        problem.initial = sample_curve(problem.grid(), [&](double x) {
            const double z = (x - mean) / sd;
            return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
        });
    }
    const FpResult result = solve_fp(problem, times, dt);
    json snaps = json::array();
    for (std::size_t i = 0; i < times.size(); ++i) {
        PdfCurve snap = result.snapshots[i];
        snap.set_meta("model", label);
        snap.set_meta("variable", model && std::holds_alternative<PositionModel>(*model) ? "x" : "u");
        const std::string name = "fp_" + label + "_t" + tag(times[i]) + ".csv";
        write_pdf_csv(ctx.output(name), snap);
        json entry = curve_summary(snap, name);
        entry["t"] = times[i];
        if (model) {
            const CanonicalModel& m = *model;
            const double t = times[i];
            entry["l1_analytic"] = l1_distance(snap, [&](double x) { return fp_reference_density(m, x, t); });
        }
        snaps.push_back(entry);
    }
    return {{"snapshots", snaps},
            {"max_mass_drift", result.max_mass_drift},
            {"min_density", result.min_density},
            {"steps", result.steps},
            {"grid", {{"lo", problem.lo}, {"hi", problem.hi}, {"n", problem.n}}}};
}

double max_relative_difference(const MomentSeries& a, const MomentSeries& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const auto& x = a.records[i];
        const auto& y = b.records[i];
        const double u[] = {x.mean_x, x.mean_u, x.var_x, x.cov_xu, x.var_u, x.cov_xi_x, x.cov_xi_u};
        const double v[] = {y.mean_x, y.mean_u, y.var_x, y.cov_xu, y.var_u, y.cov_xi_x, y.cov_xi_u};
        for (int k = 0; k < 7; ++k) {
            if (std::isnan(u[k]) || std::isnan(v[k])) continue;
            const double scale = std::fabs(v[k]);
            const double d = std::fabs(u[k] - v[k]);
            worst = std::max(worst, scale > 1e-12 ? d / scale : d);
        }
    }
    return worst;
}

json cmd_moments(const Obj& root, Context& ctx) {
    root.allow({"command", "seed", "out_dir", "threads", "description", "model", "models", "init",
                "distribution", "times", "dt", "t0"});
    const auto specs = parse_models(root);
    const std::string init_name = root.string("init", "deterministic");
    VelocityInit init;
    if (init_name == "deterministic")
        init = VelocityInit::Deterministic;
    else if (init_name == "maxwellian")
        init = VelocityInit::Maxwellian;
    else
        bad("config.init: must be 'deterministic' or 'maxwellian'");
    const XiDistribution dist = root.has("distribution")
                                    ? parse_distribution(root.raw("distribution"), "config.distribution")
                                    : XiDistribution::standard_normal();
    const auto times = parse_times(root, "times", true);
    const double dt = root.number("dt", 1e-3);
    const double t0 = root.number("t0", kDefaultStartTime);
    if (!(dt > 0.0) || !(t0 > 0.0)) bad("config: dt and t0 must be > 0");
    for (const auto& s : specs)
        if (!std::holds_alternative<FhhsModel>(s.model) && !std::holds_alternative<RandomForcingModel>(s.model) &&
            times.front() < t0)
            bad("config.times: position and velocity moments start at t0 = " + tag(t0));

    json out = json::array();
    for (const auto& s : specs) {
        MomentSeries ode;
        std::optional<MomentSeries> closed;
        if (const auto* m = std::get_if<PositionModel>(&s.model)) {
            ode = integrate_position_moments(*m, dist, times, t0, dt);
        } else if (const auto* m = std::get_if<VelocityModel>(&s.model)) {
            ode = integrate_velocity_moments(*m, init, times, t0, dist, dt);
        } else if (const auto* m = std::get_if<FhhsModel>(&s.model)) {
            ode = integrate_fhhs_moments(*m, times, dist, dt);
        } else {
            ode = integrate_moments(std::get<RandomForcingModel>(s.model), times, dt);
        }
        if (!std::holds_alternative<RandomForcingModel>(s.model))
            closed = closed_form_moments(s.model, times, init, dist);
        const std::string ode_name = "moments_" + s.label + "_ode.csv";
        write_moments_csv(ctx.output(ode_name), ode);
        json entry{{"label", s.label}, {"ode", ode_name}};
        if (closed) {
            const std::string closed_name = "moments_" + s.label + "_closed.csv";
            write_moments_csv(ctx.output(closed_name), *closed);
            entry["closed"] = closed_name;
            entry["max_relative_difference"] = max_relative_difference(ode, *closed);
        }
        out.push_back(entry);
    }
    return {{"series", out}};
}

json cmd_fhhs(const Obj& root, Context& ctx) {
    root.allow({"command", "seed", "out_dir", "threads", "description", "model", "models", "t_end",
                "n_times", "n_temperature", "re_scale"});
    const auto specs = parse_models(root);
    const auto n_times = root.count("n_times", 400);
    const auto n_temp = root.count("n_temperature", 201);
    const double re_scale = root.number("re_scale", 1.0);
    if (n_times < 2 || n_temp < 2) bad("config: n_times and n_temperature must be >= 2");
    if (!(re_scale > 0.0)) bad("config.re_scale: must be > 0");
    for (const auto& s : specs)
        if (!std::holds_alternative<FhhsModel>(s.model)) bad("config: the fhhs command needs fhhs models");
    json out = json::array();
    for (const auto& s : specs) {
        const FhhsModel& m = std::get<FhhsModel>(s.model);
        const double t_end = root.number("t_end", 10.0 * m.tau_p);
        const double t_min = 1e-3 * m.tau_p / m.C1;
        if (!(t_end > t_min)) bad("config.t_end: too small for the model's growth time");
        std::vector<double> t{0.0};
        for (double v : log_grid(t_min, t_end, n_times)) t.push_back(v);
        std::vector<double> eta, phi, T, re, D;
        for (double v : t) {
            eta.push_back(fhhs_eta(m, v));
            phi.push_back(phi_fhhs(m, v));
            T.push_back(granular_temperature(m, v));
            re.push_back(re_t(T.back(), re_scale));
            D.push_back(diffusion_of_time(m, v));
        }
        const std::string tname = "fhhs_" + s.label + "_temperature.csv";
        write_csv(ctx.output(tname), {"t", "eta", "phi", "T", "Re_T", "D"}, {t, eta, phi, T, re, D},
                  {"model=fhhs sigma_xi=" + format_number(m.sigma_xi) + " C1=" + format_number(m.C1) +
                   " C2=" + format_number(m.C2) + " tau_p=" + format_number(m.tau_p)});

        const auto temps = uniform_grid(0.0, steady_temperature(m), n_temp);
        std::vector<double> S, G, net, DT;
        for (double v : temps) {
            const SourceSink ss = source_sink(m, v);
            S.push_back(ss.S);
            G.push_back(ss.Gamma);
            net.push_back(ss.S - ss.Gamma);
            DT.push_back(diffusion_of_temperature(m, v));
        }
        const std::string sname = "fhhs_" + s.label + "_source_sink.csv";
        write_csv(ctx.output(sname), {"T", "S", "Gamma", "dTdt"}, {temps, S, G, net});
        const std::string dname = "fhhs_" + s.label + "_diffusion.csv";
        write_csv(ctx.output(dname), {"T", "D"}, {temps, DT});
        out.push_back({{"label", s.label},
                       {"sigma_xi", m.sigma_xi},
                       {"C1", m.C1},
                       {"C2", m.C2},
                       {"tau_p", m.tau_p},
                       {"steady_temperature", steady_temperature(m)},
                       {"files", {tname, sname, dname}}});
    }
    return {{"models", out}};
}

json law_json(const PowerLaw& law) {
    return {{"slope", law.slope}, {"intercept", law.intercept}, {"r2", law.r2}};
}

json cmd_fit(const Obj& root, Context& ctx) {
    root.allow({"command", "seed", "out_dir", "threads", "description", "datasets", "synthetic", "tau_p",
                "C2", "refine_c2"});
    FhhsFitOptions options;
    options.tau_p = root.number("tau_p", 0.14);
    options.C2 = root.number("C2", 1.2);
    options.refine_c2 = root.boolean("refine_c2", false);
    if (!(options.tau_p > 0.0) || !(options.C2 >= 1.0)) bad("config: need tau_p > 0 and C2 >= 1");
    if (!root.has("datasets") && !root.has("synthetic")) bad("config: give 'datasets' and/or 'synthetic'");

    std::vector<TemperatureSeries> series;
    if (root.has("datasets")) {
        const json& list = root.raw("datasets");
        if (!list.is_array() || list.empty()) bad("config.datasets: expected a non-empty array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string w = "config.datasets[" + std::to_string(i) + "]";
            const Obj d(list[i], w);
            d.allow({"file", "Re_m"});
            fs::path file = d.string("file");
            if (file.is_relative()) file = ctx.config_dir / file;
            TemperatureSeries s;
            s.Re_m = d.number("Re_m", 0.0);
            XySeries xy = read_xy_csv(file.string());
            s.t = std::move(xy.x);
            s.T = std::move(xy.y);
            series.push_back(std::move(s));
        }
    }
    if (root.has("synthetic")) {
        const Obj syn = root.child("synthetic");
        syn.allow({"Re_m", "noise", "n_points", "t_min", "t_max"});
        const auto res = syn.numbers("Re_m");
        const double noise = syn.number("noise", 0.0);
        const auto n_points = syn.count("n_points", 200);
        const double t_min = syn.number("t_min", 1e-6);
        const double t_max = syn.number("t_max", 10.0 * options.tau_p);
        if (res.empty() || noise < 0.0 || n_points < 10 || !(t_min > 0.0) || !(t_max > t_min))
            bad("config.synthetic: need Re_m values, noise >= 0, n_points >= 10 and 0 < t_min < t_max");
        const auto times = log_grid(t_min, t_max, n_points);
        for (std::size_t i = 0; i < res.size(); ++i) {
            if (!(res[i] > 0.0)) bad("config.synthetic.Re_m: values must be > 0");
            const FhhsModel m = fhhs_from_regression(res[i], options.tau_p, options.C2);
            TemperatureSeries s;
            s.Re_m = res[i];
            s.t = times;
            s.T = synthetic_temperature(m, times, noise, ctx.seed + i);
            write_csv(ctx.output("synthetic_Re" + tag(res[i]) + ".csv"), {"t", "T"}, {s.t, s.T});
            series.push_back(std::move(s));
        }
    }
    const FitReport report = fit_fhhs_family(series, options);
    json per = json::array();
    for (const auto& f : report.per_re)
        per.push_back({{"Re_m", f.Re_m},
                       {"sigma_xi", f.sigma_xi},
                       {"C1", f.C1},
                       {"C2", f.C2},
                       {"rms", f.rms},
                       {"iterations", f.iterations}});
    const FhhsFit& first = report.per_re.front();
    json doc{{"sigma_xi", first.sigma_xi},
             {"C1", first.C1},
             {"C2", first.C2},
             {"rms", first.rms},
             {"per_re", per},
             {"loglog", report.has_loglog ? json{{"sigma", law_json(report.sigma_law)},
                                                  {"c1", law_json(report.c1_law)}}
                                          : json(nullptr)}};
    write_text_file(ctx.output("fit_report.json"), doc.dump(2) + "\n");
    return doc;
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message,
                 std::optional<double> time = std::nullopt) {
    json e{{"error", kind}, {"message", message}};
    if (time) e["time"] = *time;
    err << e.dump() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Liouville and Langevin models of particle-laden flows"};
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
    app.add_option("config", config_path, "JSON run configuration")->required();
    app.add_option("--seed", seed, "override the config seed");
    app.add_option("--out-dir", out_dir, "override the output directory");
    app.add_option("--threads", threads, "worker threads (default: LIOUVILLE_THREADS or all cores)");
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        write_error(err, "usage", e.what());
        return kExitUsage;
    }

    try {
        std::ifstream is(config_path);
        if (!is) bad("cannot open config file " + config_path);
        json config;
        try {
            config = json::parse(is);
        } catch (const json::parse_error& e) {
            bad(std::string("config is not valid JSON: ") + e.what());
        }
        const Obj root(config, "config");
        const std::string command = root.string("command");

        Context ctx;
        ctx.config_dir = fs::path(config_path).parent_path();
        ctx.seed = seed ? *seed : root.count("seed", 1);
        ctx.out_dir = out_dir ? fs::path(*out_dir) : fs::path(root.string("out_dir", "out"));
        ctx.threads = threads ? *threads : static_cast<unsigned>(root.count("threads", 0));
        if (ctx.threads == 0) ctx.threads = default_threads();
        if (root.has("description") && !root.raw("description").is_string())
            bad("config.description: expected a string");

        using Command = json (*)(const Obj&, Context&);
        Command run = nullptr;
        if (command == "pdf") run = cmd_pdf;
        else if (command == "mc") run = cmd_mc;
        else if (command == "fp") run = cmd_fp;
        else if (command == "moments") run = cmd_moments;
        else if (command == "fhhs") run = cmd_fhhs;
        else if (command == "fit") run = cmd_fit;
        else bad("config.command: unknown command '" + command + "' (pdf, mc, fp, moments, fhhs, fit)");

        std::error_code ec;
        fs::create_directories(ctx.out_dir, ec);
        if (ec) bad("cannot create output directory " + ctx.out_dir.string() + ": " + ec.message());
        json result = run(root, ctx);
        json summary{{"command", command}, {"seed", ctx.seed}, {"result", result}, {"files", ctx.files}};
        write_text_file((ctx.out_dir / ("summary_" + command + ".json")).string(), summary.dump(2) + "\n");
        out << summary.dump(2) << "\n";
        return kExitOk;
    } catch (const NumericalBlowup& e) {
        write_error(err, std::string(to_string(e.kind())), e.what(), e.time());
        return kExitNumerical;
    } catch (const Error& e) {
        write_error(err, std::string(to_string(e.kind())), e.what());
        const bool usage = e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Parameter;
        return usage ? kExitUsage : kExitNumerical;
    } catch (const json::exception& e) {
        write_error(err, "config", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        write_error(err, "internal", e.what());
        return kExitNumerical;
    }
}

}  // namespace liouville
