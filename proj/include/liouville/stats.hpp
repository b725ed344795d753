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

#include <cmath>
#include <cstddef>
#include <span>

namespace liouville {

/// Neumaier-compensated sum in index order (deterministic).
inline double compensated_sum(std::span<const double> v) {
    double sum = 0.0, c = 0.0;
    for (double x : v) {
        const double t = sum + x;
        c += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;  // population (1/n) central moments
    double third = 0.0;
    double fourth = 0.0;

    double skewness() const { return third / std::pow(variance, 1.5); }
};

inline SampleMoments sample_moments(std::span<const double> v) {
    SampleMoments m;
    const double n = static_cast<double>(v.size());
    if (v.empty()) return m;
    m.mean = compensated_sum(v) / n;
    double s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (double x : v) {
        const double d = x - m.mean;
        const double d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
    }
    m.variance = s2 / n;
    m.third = s3 / n;
    m.fourth = s4 / n;
    return m;
}

}  // namespace liouville
