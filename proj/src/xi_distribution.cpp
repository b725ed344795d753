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

#include "liouville/xi_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "liouville/error.hpp"
#include "liouville/normal.hpp"
#include "liouville/rng.hpp"

namespace liouville {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_all(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double double_factorial(int n) {
    double r = 1.0;
    for (int k = n; k > 1; k -= 2) r *= k;
    return r;
}

}  // namespace

std::string_view to_string(Family family) {
    switch (family) {
        case Family::Normal: return "normal";
        case Family::Uniform: return "uniform";
        case Family::Triangular: return "triangular";
        case Family::Custom: return "custom";
        case Family::Degenerate: return "degenerate";
    }
    return "unknown";
}

XiDistribution::XiDistribution(Family family, std::vector<double> params)
    : family_(family), params_(std::move(params)) {}

XiDistribution XiDistribution::normal(double mean, double stddev) {
    require(std::isfinite(mean) && std::isfinite(stddev) && stddev > 0.0, ErrorKind::Parameter,
            "normal: need finite mean and std > 0");
    XiDistribution d(Family::Normal, {mean, stddev});
    d.finish();
    return d;
}

XiDistribution XiDistribution::uniform(double lo, double hi) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, ErrorKind::Parameter,
            "uniform: need lo < hi");
    XiDistribution d(Family::Uniform, {lo, hi});
    d.finish();
    return d;
}

XiDistribution XiDistribution::triangular(double lo, double mode, double hi) {
    require(std::isfinite(lo) && std::isfinite(mode) && std::isfinite(hi) && lo < hi &&
                lo <= mode && mode <= hi,
            ErrorKind::Parameter, "triangular: need lo < hi and lo <= mode <= hi");
    XiDistribution d(Family::Triangular, {lo, mode, hi});
    d.finish();
    return d;
}

XiDistribution XiDistribution::degenerate(double value) {
    require(std::isfinite(value), ErrorKind::Parameter, "degenerate: value must be finite");
    XiDistribution d(Family::Degenerate, {value});
    d.finish();
    return d;
}

XiDistribution XiDistribution::custom(std::vector<double> nodes, std::vector<double> density) {
    require(nodes.size() >= 2 && nodes.size() == density.size(), ErrorKind::Parameter,
            "custom: need >= 2 nodes and one density value per node");
    require(finite_all(nodes) && finite_all(density), ErrorKind::Parameter,
            "custom: non-finite table entry");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        require(nodes[i] > nodes[i - 1], ErrorKind::Parameter, "custom: nodes must increase");
    for (double f : density)
        require(f >= 0.0, ErrorKind::Parameter, "custom: density must be nonnegative");

    std::vector<double> cum(nodes.size(), 0.0);
    for (std::size_t i = 1; i < nodes.size(); ++i)
        cum[i] = cum[i - 1] + 0.5 * (density[i] + density[i - 1]) * (nodes[i] - nodes[i - 1]);
    const double mass = cum.back();
    require(mass > 0.0, ErrorKind::Parameter, "custom: density has zero mass");
    for (auto& f : density) f /= mass;
    for (auto& c : cum) c /= mass;

    XiDistribution d(Family::Custom, {});
    d.nodes_ = std::move(nodes);
    d.dens_ = std::move(density);
    d.cum_ = std::move(cum);
    d.finish();
    return d;
}

XiDistribution XiDistribution::standard_uniform() {
    return uniform(-std::numbers::sqrt3, std::numbers::sqrt3);
}

XiDistribution XiDistribution::standard_triangular() {
    const double r2 = std::numbers::sqrt2;
    return triangular(-2.0 * r2, r2, r2);
}

XiDistribution XiDistribution::from_params(std::string_view family, std::span<const double> p) {
    auto need = [&](std::size_t n) {
        require(p.size() == n, ErrorKind::Parameter,
                std::string(family) + ": expected " + std::to_string(n) + " parameters");
    };
    if (family == "normal") {
        need(2);
        return normal(p[0], p[1]);
    }
    if (family == "uniform") {
        need(2);
        return uniform(p[0], p[1]);
    }
    if (family == "triangular") {
        need(3);
        return triangular(p[0], p[1], p[2]);
    }
    if (family == "degenerate") {
        need(1);
        return degenerate(p[0]);
    }
    if (family == "custom") {
        // flattened [x0, f0, x1, f1, ...]
        require(p.size() >= 4 && p.size() % 2 == 0, ErrorKind::Parameter,
                "custom: expected flattened (x, density) pairs");
        std::vector<double> xs, fs;
        for (std::size_t i = 0; i < p.size(); i += 2) {
            xs.push_back(p[i]);
            fs.push_back(p[i + 1]);
        }
        return custom(std::move(xs), std::move(fs));
    }
    fail(ErrorKind::Parameter, "unknown distribution family '" + std::string(family) + "'");
}

std::string XiDistribution::describe() const {
    std::ostringstream os;
    os << to_string(family_);
    if (family_ == Family::Custom) {
        os << "(" << nodes_.size() << " nodes)";
        return os.str();
    }
    os << "(";
    for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? "," : "") << params_[i];
    os << ")";
    return os.str();
}

std::vector<XiDistribution::Segment> XiDistribution::segments() const {
    std::vector<Segment> segs;
    switch (family_) {
        case Family::Uniform: {
            const double f = 1.0 / (params_[1] - params_[0]);
            segs.push_back({params_[0], params_[1], f, f});
            break;
        }
        case Family::Triangular: {
            const double lo = params_[0], c = params_[1], hi = params_[2];
            const double peak = 2.0 / (hi - lo);
            if (c > lo) segs.push_back({lo, c, 0.0, peak});
            if (hi > c) segs.push_back({c, hi, peak, 0.0});
            break;
        }
        case Family::Custom:
            for (std::size_t i = 1; i < nodes_.size(); ++i)
                segs.push_back({nodes_[i - 1], nodes_[i], dens_[i - 1], dens_[i]});
            break;
        default:
            break;
    }
    return segs;
}

// Integral of (x - centre)^n f(x) over a linear segment of the density.
static double segment_moment(double x0, double x1, double f0, double f1, double centre, int n) {
    const double slope = (f1 - f0) / (x1 - x0);
    const double a = f0 + slope * (centre - x0);
    const double y0 = x0 - centre, y1 = x1 - centre;
    return a * (std::pow(y1, n + 1) - std::pow(y0, n + 1)) / (n + 1) +
           slope * (std::pow(y1, n + 2) - std::pow(y0, n + 2)) / (n + 2);
}

void XiDistribution::finish() {
    switch (family_) {
        case Family::Normal:
            mean_ = params_[0];
            variance_ = params_[1] * params_[1];
            return;
        case Family::Degenerate:
            mean_ = params_[0];
            variance_ = 0.0;
            return;
        default:
            break;
    }
    double m = 0.0;
    for (const auto& s : segments()) m += segment_moment(s.x0, s.x1, s.f0, s.f1, 0.0, 1);
    mean_ = m;
    double v = 0.0;
    for (const auto& s : segments()) v += segment_moment(s.x0, s.x1, s.f0, s.f1, m, 2);
    variance_ = v;
    if (family_ == Family::Uniform) {
        mean_ = 0.5 * (params_[0] + params_[1]);
        const double w = params_[1] - params_[0];
        variance_ = w * w / 12.0;
    } else if (family_ == Family::Triangular) {
        const double a = params_[0], c = params_[1], b = params_[2];
        mean_ = (a + b + c) / 3.0;
        variance_ = (a * a + b * b + c * c - a * b - a * c - b * c) / 18.0;
    }
}

double XiDistribution::stddev() const { return std::sqrt(variance_); }

bool XiDistribution::standardized() const noexcept {
    return std::fabs(mean_) < 1e-12 && std::fabs(variance_ - 1.0) < 1e-12;
}

double XiDistribution::density(double xi) const {
    switch (family_) {
        case Family::Normal:
            return normal_pdf((xi - params_[0]) / params_[1]) / params_[1];
        case Family::Uniform:
            return (xi >= params_[0] && xi <= params_[1]) ? 1.0 / (params_[1] - params_[0]) : 0.0;
        case Family::Triangular: {
            const double a = params_[0], c = params_[1], b = params_[2];
            if (xi < a || xi > b) return 0.0;
            if (xi < c) return 2.0 * (xi - a) / ((b - a) * (c - a));
            if (xi > c) return 2.0 * (b - xi) / ((b - a) * (b - c));
            return 2.0 / (b - a);
        }
        case Family::Custom: {
            if (xi < nodes_.front() || xi > nodes_.back()) return 0.0;
            auto it = std::upper_bound(nodes_.begin(), nodes_.end(), xi);
            if (it == nodes_.end()) return dens_.back();
            const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
            const double w = (xi - nodes_[k]) / (nodes_[k + 1] - nodes_[k]);
            return dens_[k] + w * (dens_[k + 1] - dens_[k]);
        }
        case Family::Degenerate:
            fail(ErrorKind::Unsupported, "degenerate law has no density");
    }
    return 0.0;
}

double XiDistribution::cdf(double xi) const {
    switch (family_) {
        case Family::Normal:
            return normal_cdf((xi - params_[0]) / params_[1]);
        case Family::Uniform:
            return std::clamp((xi - params_[0]) / (params_[1] - params_[0]), 0.0, 1.0);
        case Family::Triangular: {
            const double a = params_[0], c = params_[1], b = params_[2];
            if (xi <= a) return 0.0;
            if (xi >= b) return 1.0;
            if (xi <= c) return (xi - a) * (xi - a) / ((b - a) * (c - a));
            return 1.0 - (b - xi) * (b - xi) / ((b - a) * (b - c));
        }
        case Family::Custom: {
            if (xi <= nodes_.front()) return 0.0;
            if (xi >= nodes_.back()) return 1.0;
            auto it = std::upper_bound(nodes_.begin(), nodes_.end(), xi);
            const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
            const double s = xi - nodes_[k];
            const double slope = (dens_[k + 1] - dens_[k]) / (nodes_[k + 1] - nodes_[k]);
            return cum_[k] + dens_[k] * s + 0.5 * slope * s * s;
        }
        case Family::Degenerate:
            return xi >= params_[0] ? 1.0 : 0.0;
    }
    return 0.0;
}

double XiDistribution::quantile(double p) const {
    require(p >= 0.0 && p <= 1.0, ErrorKind::Domain, "quantile: p must lie in [0, 1]");
    switch (family_) {
        case Family::Normal:
            if (p == 0.0) return -kInf;
            if (p == 1.0) return kInf;
            return params_[0] + params_[1] * normal_quantile(p);
        case Family::Uniform:
            return params_[0] + p * (params_[1] - params_[0]);
        case Family::Triangular: {
            const double a = params_[0], c = params_[1], b = params_[2];
            const double fc = (c - a) / (b - a);
            if (p < fc) return a + std::sqrt(p * (b - a) * (c - a));
            return b - std::sqrt((1.0 - p) * (b - a) * (b - c));
        }
        case Family::Custom: {
            auto it = std::upper_bound(cum_.begin(), cum_.end(), p);
            if (it == cum_.end()) return nodes_.back();
            std::size_t k = static_cast<std::size_t>(it - cum_.begin());
            k = k == 0 ? 0 : k - 1;
            const double dp = p - cum_[k];
            const double f0 = dens_[k];
            const double slope = (dens_[k + 1] - dens_[k]) / (nodes_[k + 1] - nodes_[k]);
            const double disc = std::max(0.0, f0 * f0 + 2.0 * slope * dp);
            const double denom = f0 + std::sqrt(disc);
            const double s = denom > 0.0 ? 2.0 * dp / denom : 0.0;
            return std::min(nodes_[k] + s, nodes_[k + 1]);
        }
        case Family::Degenerate:
            return params_[0];
    }
    return 0.0;
}

double XiDistribution::central_moment(int order) const {
    require(order >= 1, ErrorKind::Domain, "central_moment: order must be >= 1");
    if (order == 1) return 0.0;
    switch (family_) {
        case Family::Normal:
            return order % 2 ? 0.0 : std::pow(params_[1], order) * double_factorial(order - 1);
        case Family::Uniform: {
            const double h = 0.5 * (params_[1] - params_[0]);
            return order % 2 ? 0.0 : std::pow(h, order) / (order + 1);
        }
        case Family::Degenerate:
            return 0.0;
        default:
            break;
    }
    double m = 0.0;
    for (const auto& s : segments()) m += segment_moment(s.x0, s.x1, s.f0, s.f1, mean_, order);
    return m;
}

double XiDistribution::standardized_moment(int order) const {
    require(variance_ > 0.0, ErrorKind::Unsupported, "standardized_moment: zero variance");
    return central_moment(order) / std::pow(stddev(), order);
}

std::pair<double, double> XiDistribution::support() const {
    switch (family_) {
        case Family::Normal: return {-kInf, kInf};
        case Family::Uniform: return {params_[0], params_[1]};
        case Family::Triangular: return {params_[0], params_[2]};
        case Family::Custom: return {nodes_.front(), nodes_.back()};
        case Family::Degenerate: return {params_[0], params_[0]};
    }
    return {-kInf, kInf};
}

std::vector<double> XiDistribution::breakpoints() const {
    switch (family_) {
        case Family::Uniform: return {params_[0], params_[1]};
        case Family::Triangular: return {params_[0], params_[1], params_[2]};
        case Family::Custom: return nodes_;
        case Family::Degenerate: return {params_[0]};
        case Family::Normal: return {};
    }
    return {};
}

double XiDistribution::draw(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) const {
    return quantile(CounterStream(seed, stream).uniform(index));
}

std::vector<double> XiDistribution::sample(std::uint64_t seed, std::size_t n,
                                           std::uint64_t stream) const {
    require(n >= 1, ErrorKind::Domain, "sample: n must be >= 1");
    const CounterStream rng(seed, stream);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = quantile(rng.uniform(k));
    return out;
}

}  // namespace liouville
