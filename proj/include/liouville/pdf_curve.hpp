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

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace liouville {

/// A one-dimensional density sampled on a grid.
///
/// Sampled curves hold point values at `coords` (trapezoid quadrature);
/// histograms hold bin averages with `coords` at the bin centres and a
/// uniform `bin_width`.
struct PdfCurve {
    enum class Kind { Sampled, Histogram };

    Kind kind = Kind::Sampled;
    std::vector<double> coords;
    std::vector<double> density;
    double bin_width = 0.0;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> warnings;

    std::size_t size() const { return coords.size(); }
    double mass() const;
    double mean() const;
    double central_moment(int order) const;
    double variance() const { return central_moment(2); }
    double lower_edge() const;
    double upper_edge() const;

    /// Cumulative mass at the integration nodes: grid points for sampled
    /// curves, bin edges (size()+1 values) for histograms.
    std::vector<std::pair<double, double>> cumulative() const;

    /// Value at x: linear interpolation (sampled) or bin lookup (histogram);
    /// zero outside the covered range.
    double at(double x) const;

    void set_meta(const std::string& key, const std::string& value);
    std::string meta_value(const std::string& key) const;
};

std::vector<double> uniform_grid(double lo, double hi, std::size_t n);
std::vector<double> log_grid(double lo, double hi, std::size_t n);

PdfCurve sample_curve(std::span<const double> grid, const std::function<double(double)>& f);

/// Histogram binning: Freedman-Diaconis width over the sample range unless
/// an explicit range and bin count are given.
struct Binning {
    bool freedman_diaconis = true;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t bins = 0;

    static Binning fixed(double lo, double hi, std::size_t bins) { return {false, lo, hi, bins}; }
};

PdfCurve histogram(std::span<const double> samples, const Binning& binning = {});

/// Gaussian kernel density estimate on `grid`; bandwidth <= 0 selects
/// Silverman's rule.
PdfCurve kernel_density(std::span<const double> samples, std::span<const double> grid,
                        double bandwidth = 0.0);

/// Two-sided Kolmogorov-Smirnov distance between the curve's accumulated
/// CDF and `cdf`, evaluated at the curve's integration nodes.
double ks_distance(const PdfCurve& curve, const std::function<double(double)>& cdf);

/// Exact KS statistic of a sample against `cdf`.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Integral of |curve - f| over the curve's grid.
double l1_distance(const PdfCurve& curve, const std::function<double(double)>& f);
double l1_distance(const PdfCurve& a, const PdfCurve& b);

}  // namespace liouville
