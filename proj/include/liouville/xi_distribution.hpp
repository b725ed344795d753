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

// Laws of the time-invariant random coefficients that replace Wiener
// increments in a random-coefficient (Liouville) particle model.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace liouville {

enum class Family { Normal, Uniform, Triangular, Custom, Degenerate };

std::string_view to_string(Family family);

/// Immutable after construction and safe to share between threads.
///
/// Parameter order per family (also the config-file order):
///   normal     [mean, std]
///   uniform    [lo, hi]
///   triangular [lo, mode, hi]
///   degenerate [value]
/// A custom law is a tabulated density on an increasing grid; it is
/// renormalised by the trapezoid rule and treated as piecewise linear.
class XiDistribution {
public:
    static XiDistribution normal(double mean = 0.0, double stddev = 1.0);
    static XiDistribution uniform(double lo, double hi);
    static XiDistribution triangular(double lo, double mode, double hi);
    static XiDistribution custom(std::vector<double> nodes, std::vector<double> density);
    static XiDistribution degenerate(double value);

    // The three zero-mean, unit-variance laws used throughout:
    // N(0,1), U(-sqrt3, sqrt3) and T(lo=-2sqrt2, mode=sqrt2, hi=sqrt2).
    static XiDistribution standard_normal() { return normal(0.0, 1.0); }
    static XiDistribution standard_uniform();
    static XiDistribution standard_triangular();

    /// Builds from a family name and its parameter list.
    static XiDistribution from_params(std::string_view family, std::span<const double> params);

    Family family() const noexcept { return family_; }
    const std::vector<double>& params() const noexcept { return params_; }
    std::string describe() const;

    double density(double xi) const;
    double cdf(double xi) const;
    double quantile(double p) const;

    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return variance_; }
    double stddev() const;

    /// Zero mean and unit variance to 1e-12.
    bool standardized() const noexcept;

    /// E[(Xi - mean)^order]; exact for every family.
    double central_moment(int order) const;

    /// Central moment divided by stddev^order.
    double standardized_moment(int order) const;

    /// Closed support; +-infinity for the normal law.
    std::pair<double, double> support() const;
    bool bounded() const noexcept { return family_ != Family::Normal; }

    /// Points where the density is not smooth (breakpoints for quadrature).
    std::vector<double> breakpoints() const;

    /// Draw k of stream (seed, stream), by inverse-transform sampling.
    double draw(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0) const;
    std::vector<double> sample(std::uint64_t seed, std::size_t n, std::uint64_t stream = 0) const;

private:
    struct Segment {
        double x0, x1, f0, f1;
    };

    XiDistribution(Family family, std::vector<double> params);
    void finish();
    std::vector<Segment> segments() const;

    Family family_;
    std::vector<double> params_;
    // custom law: nodes, normalised density, cumulative mass at nodes
    std::vector<double> nodes_, dens_, cum_;
    double mean_ = 0.0;
    double variance_ = 0.0;
};

}  // namespace liouville
