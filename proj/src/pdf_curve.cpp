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

#include "liouville/pdf_curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "liouville/error.hpp"
#include "liouville/stats.hpp"

namespace liouville {

namespace {

// Quadrature weights of the curve's nodes.
std::vector<double> weights(const PdfCurve& c) {
    const std::size_t n = c.size();
    std::vector<double> w(n, 0.0);
    if (c.kind == PdfCurve::Kind::Histogram) {
        std::fill(w.begin(), w.end(), c.bin_width);
        return w;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double h = 0.5 * (c.coords[i] - c.coords[i - 1]);
        w[i - 1] += h;
        w[i] += h;
    }
    return w;
}

}  // namespace

double PdfCurve::mass() const {
    const auto w = weights(*this);
    std::vector<double> terms(size());
    for (std::size_t i = 0; i < size(); ++i) terms[i] = w[i] * density[i];
    return compensated_sum(terms);
}

double PdfCurve::mean() const {
    const auto w = weights(*this);
    std::vector<double> terms(size());
    for (std::size_t i = 0; i < size(); ++i) terms[i] = w[i] * density[i] * coords[i];
    return compensated_sum(terms) / mass();
}

double PdfCurve::central_moment(int order) const {
    const auto w = weights(*this);
    const double mu = mean();
    const double m0 = mass();
    std::vector<double> terms(size());
    for (std::size_t i = 0; i < size(); ++i)
        terms[i] = w[i] * density[i] * std::pow(coords[i] - mu, order);
    return compensated_sum(terms) / m0;
}

double PdfCurve::lower_edge() const {
    return kind == Kind::Histogram ? coords.front() - 0.5 * bin_width : coords.front();
}

double PdfCurve::upper_edge() const {
    return kind == Kind::Histogram ? coords.back() + 0.5 * bin_width : coords.back();
}

std::vector<std::pair<double, double>> PdfCurve::cumulative() const {
    std::vector<std::pair<double, double>> out;
    if (kind == Kind::Histogram) {
        double acc = 0.0;
        out.emplace_back(lower_edge(), 0.0);
        for (std::size_t i = 0; i < size(); ++i) {
            acc += density[i] * bin_width;
            out.emplace_back(coords[i] + 0.5 * bin_width, acc);
        }
        return out;
    }
    double acc = 0.0;
    out.emplace_back(coords.front(), 0.0);
    for (std::size_t i = 1; i < size(); ++i) {
        acc += 0.5 * (density[i] + density[i - 1]) * (coords[i] - coords[i - 1]);
        out.emplace_back(coords[i], acc);
    }
    return out;
}

double PdfCurve::at(double x) const {
    if (coords.empty() || x < lower_edge() || x > upper_edge()) return 0.0;
    if (kind == Kind::Histogram) {
        auto k = static_cast<std::size_t>((x - lower_edge()) / bin_width);
        return density[std::min(k, size() - 1)];
    }
    auto it = std::upper_bound(coords.begin(), coords.end(), x);
    if (it == coords.end()) return density.back();
    const std::size_t k = static_cast<std::size_t>(it - coords.begin()) - 1;
    const double w = (x - coords[k]) / (coords[k + 1] - coords[k]);
    return density[k] + w * (density[k + 1] - density[k]);
}

void PdfCurve::set_meta(const std::string& key, const std::string& value) {
    for (auto& kv : meta)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    meta.emplace_back(key, value);
}

std::string PdfCurve::meta_value(const std::string& key) const {
    for (const auto& kv : meta)
        if (kv.first == key) return kv.second;
    return {};
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    require(n >= 2 && hi > lo, ErrorKind::Domain, "uniform_grid: need n >= 2 and hi > lo");
    std::vector<double> g(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + h * static_cast<double>(i);
    g.back() = hi;
    return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    require(n >= 2 && lo > 0.0 && hi > lo, ErrorKind::Domain, "log_grid: need 0 < lo < hi, n >= 2");
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

PdfCurve sample_curve(std::span<const double> grid, const std::function<double(double)>& f) {
    PdfCurve c;
    c.coords.assign(grid.begin(), grid.end());
    c.density.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) c.density[i] = f(grid[i]);
    return c;
}

PdfCurve histogram(std::span<const double> samples, const Binning& binning) {
    require(!samples.empty(), ErrorKind::EmptyEnsemble, "histogram: no samples");
    double lo = binning.lo, hi = binning.hi;
    std::size_t bins = binning.bins;
    if (binning.freedman_diaconis) {
        std::vector<double> sorted(samples.begin(), samples.end());
        std::sort(sorted.begin(), sorted.end());
        lo = sorted.front();
        hi = sorted.back();
        const auto quartile = [&](double q) {
            const double pos = q * static_cast<double>(sorted.size() - 1);
            const auto k = static_cast<std::size_t>(pos);
            const double w = pos - static_cast<double>(k);
            return k + 1 < sorted.size() ? sorted[k] + w * (sorted[k + 1] - sorted[k]) : sorted[k];
        };
        const double iqr = quartile(0.75) - quartile(0.25);
        const double n = static_cast<double>(sorted.size());
        double width = 2.0 * iqr / std::cbrt(n);
        if (!(hi > lo)) {
            // every sample identical: a single unit-width bin
            lo -= 0.5;
            hi += 0.5;
            bins = 1;
        } else {
            if (!(width > 0.0)) width = (hi - lo) / std::sqrt(n);
            bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / width)));
        }
    }
    require(bins >= 1 && hi > lo, ErrorKind::Domain, "histogram: need hi > lo and bins >= 1");
    PdfCurve c;
    c.kind = PdfCurve::Kind::Histogram;
    c.bin_width = (hi - lo) / static_cast<double>(bins);
    c.coords.resize(bins);
    for (std::size_t i = 0; i < bins; ++i)
        c.coords[i] = lo + (static_cast<double>(i) + 0.5) * c.bin_width;
    std::vector<std::size_t> counts(bins, 0);
    std::size_t outside = 0;
    for (double x : samples) {
        if (!(x >= lo && x <= hi)) {
            ++outside;
            continue;
        }
        auto k = static_cast<std::size_t>((x - lo) / c.bin_width);
        ++counts[std::min(k, bins - 1)];
    }
    const double n = static_cast<double>(samples.size());
    c.density.resize(bins);
    for (std::size_t i = 0; i < bins; ++i)
        c.density[i] = static_cast<double>(counts[i]) / (n * c.bin_width);
    if (outside) c.warnings.push_back(std::to_string(outside) + " samples outside the bin range");
    return c;
}

PdfCurve kernel_density(std::span<const double> samples, std::span<const double> grid,
                        double bandwidth) {
    require(!samples.empty(), ErrorKind::EmptyEnsemble, "kernel_density: no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    if (bandwidth <= 0.0) {
        const auto m = sample_moments(sorted);
        bandwidth = 1.06 * std::sqrt(m.variance) * std::pow(n, -0.2);
    }
    require(bandwidth > 0.0, ErrorKind::Domain, "kernel_density: degenerate sample");
    const double cutoff = 8.0 * bandwidth;
    const double norm = 1.0 / (n * bandwidth * std::sqrt(2.0 * std::numbers::pi));
    PdfCurve c;
    c.coords.assign(grid.begin(), grid.end());
    c.density.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        auto first = std::lower_bound(sorted.begin(), sorted.end(), x - cutoff);
        auto last = std::upper_bound(first, sorted.end(), x + cutoff);
        double acc = 0.0;
        for (auto it = first; it != last; ++it) {
            const double z = (x - *it) / bandwidth;
            acc += std::exp(-0.5 * z * z);
        }
        c.density[i] = acc * norm;
    }
    return c;
}

double ks_distance(const PdfCurve& curve, const std::function<double(double)>& cdf) {
    double worst = 0.0;
    for (const auto& [x, f] : curve.cumulative()) worst = std::max(worst, std::fabs(cdf(x) - f));
    return worst;
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
    require(!samples.empty(), ErrorKind::EmptyEnsemble, "ks_statistic: no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        worst = std::max({worst, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return worst;
}

double l1_distance(const PdfCurve& curve, const std::function<double(double)>& f) {
    if (curve.kind == PdfCurve::Kind::Sampled) {
        double acc = 0.0;
        for (std::size_t i = 1; i < curve.size(); ++i) {
            const double a = std::fabs(curve.density[i - 1] - f(curve.coords[i - 1]));
            const double b = std::fabs(curve.density[i] - f(curve.coords[i]));
            acc += 0.5 * (a + b) * (curve.coords[i] - curve.coords[i - 1]);
        }
        return acc;
    }
    // Simpson on each bin
    constexpr int sub = 8;
    double acc = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double lo = curve.coords[i] - 0.5 * curve.bin_width;
        const double h = curve.bin_width / sub;
        double s = 0.0;
        for (int k = 0; k <= sub; ++k) {
            const double w = (k == 0 || k == sub) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            s += w * std::fabs(curve.density[i] - f(lo + k * h));
        }
        acc += s * h / 3.0;
    }
    return acc;
}

double l1_distance(const PdfCurve& a, const PdfCurve& b) {
    const double lo = std::min(a.lower_edge(), b.lower_edge());
    const double hi = std::max(a.upper_edge(), b.upper_edge());
    const auto grid = uniform_grid(lo, hi, 20001);
    double acc = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double x0 = grid[i - 1], x1 = grid[i];
        acc += 0.5 * (std::fabs(a.at(x0) - b.at(x0)) + std::fabs(a.at(x1) - b.at(x1))) * (x1 - x0);
    }
    return acc;
}

}  // namespace liouville
