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

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "liouville/error.hpp"
#include "liouville/pdf_curve.hpp"
#include "liouville/stats.hpp"
#include "liouville/xi_distribution.hpp"

using namespace liouville;

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

// Integral of g(x) f(x) over the support, split at the density kinks.
template <class G>
double integrate(const XiDistribution& d, G g) {
    using boost::math::quadrature::gauss_kronrod;
    auto pts = d.breakpoints();
    if (!d.bounded()) pts = {-12.0, 12.0};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += gauss_kronrod<double, 31>::integrate([&](double x) { return g(x) * d.density(x); }, pts[i],
                                                      pts[i + 1], 10, 1e-14);
    return total;
}

std::vector<XiDistribution> standard_laws() {
    return {XiDistribution::standard_normal(), XiDistribution::standard_uniform(),
            XiDistribution::standard_triangular()};
}

}  // namespace

TEST_CASE("density values") {
    CHECK(XiDistribution::standard_normal().density(0.0) == doctest::Approx(0.3989423).epsilon(1e-7));
    CHECK(XiDistribution::standard_uniform().density(0.0) == doctest::Approx(0.2886751).epsilon(1e-7));
    CHECK(XiDistribution::standard_triangular().density(kSqrt2) == doctest::Approx(0.4714045).epsilon(1e-7));
    CHECK(XiDistribution::standard_uniform().density(2.0) == 0.0);
    CHECK(XiDistribution::standard_triangular().density(-3.0) == 0.0);
}

TEST_CASE("standard laws have zero mean and unit variance") {
    for (const auto& d : standard_laws()) {
        CAPTURE(d.describe());
        CHECK(d.standardized());
        CHECK(std::fabs(d.mean()) < 1e-12);
        CHECK(std::fabs(d.variance() - 1.0) < 1e-12);
        CHECK(integrate(d, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::fabs(integrate(d, [](double x) { return x; })) < 1e-9);
        CHECK(std::fabs(integrate(d, [](double x) { return x * x; }) - 1.0) < 1e-8);
    }
}

TEST_CASE("triangular law endpoints") {
    const auto t = XiDistribution::standard_triangular();
    const auto [lo, hi] = t.support();
    CHECK(lo == doctest::Approx(-2.0 * kSqrt2));
    CHECK(hi == doctest::Approx(kSqrt2));
    CHECK(t.params()[1] == doctest::Approx(kSqrt2));
}

TEST_CASE("central moments against quadrature") {
    for (const auto& d : standard_laws()) {
        for (int k = 1; k <= 6; ++k) {
            CAPTURE(d.describe());
            CAPTURE(k);
            const double want = integrate(d, [&](double x) { return std::pow(x - d.mean(), k); });
            CHECK(d.central_moment(k) == doctest::Approx(want).epsilon(1e-8).scale(1.0));
        }
    }
    CHECK(XiDistribution::standard_normal().central_moment(3) == 0.0);
    CHECK(XiDistribution::standard_uniform().central_moment(4) == doctest::Approx(1.8).epsilon(1e-12));
    // -(sqrt2)^5 / 10
    CHECK(XiDistribution::standard_triangular().central_moment(3) ==
          doctest::Approx(-std::pow(kSqrt2, 5) / 10.0).epsilon(1e-12));
    CHECK(XiDistribution::standard_triangular().central_moment(3) == doctest::Approx(-0.5657).epsilon(1e-4));
    CHECK(XiDistribution::normal(1.0, 2.0).central_moment(4) == doctest::Approx(48.0));
}

TEST_CASE("quantile inverts the cdf") {
    for (const auto& d : standard_laws()) {
        for (double p = 0.001; p < 1.0; p += 0.0137) {
            CAPTURE(d.describe());
            CHECK(d.cdf(d.quantile(p)) == doctest::Approx(p).epsilon(1e-10).scale(1.0));
        }
        const auto [lo, hi] = d.support();
        const double a = std::max(lo, -6.0), b = std::min(hi, 6.0);
        for (int i = 1; i < 50; ++i) {
            const double x = a + (b - a) * i / 50.0;
            CHECK(d.quantile(d.cdf(x)) == doctest::Approx(x).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("sampling") {
    SUBCASE("uniform samples stay inside the support") {
        const auto s = XiDistribution::standard_uniform().sample(99, 10000);
        for (double v : s) {
            REQUIRE(v >= -kSqrt3);
            REQUIRE(v <= kSqrt3);
        }
    }
    SUBCASE("normal sample mean and variance") {
        const auto s = XiDistribution::standard_normal().sample(7, 1000000);
        const auto m = sample_moments(s);
        CHECK(std::fabs(m.mean) < 0.005);
        CHECK(std::fabs(m.variance - 1.0) < 0.01);
    }
    SUBCASE("triangular sample skewness") {
        const auto s = XiDistribution::standard_triangular().sample(3, 1000000);
        CHECK(std::fabs(sample_moments(s).skewness() + 0.5657) < 0.02);
    }
    SUBCASE("draw k does not depend on the sample size") {
        const auto d = XiDistribution::standard_triangular();
        const auto small = d.sample(5, 10);
        const auto large = d.sample(5, 1000);
        for (std::size_t k = 0; k < small.size(); ++k) CHECK(small[k] == large[k]);
        CHECK(d.draw(5, 7) == small[7]);
        CHECK(d.draw(5, 7, 1) != small[7]);
    }
    SUBCASE("empirical cdf is close to the law") {
        for (const auto& d : standard_laws()) {
            const auto s = d.sample(21, 100000);
            CAPTURE(d.describe());
            CHECK(ks_statistic(s, [&](double x) { return d.cdf(x); }) < 0.01);
        }
    }
}

TEST_CASE("custom law from a table") {
    // tabulated triangle on [0, 2] with peak at 1, given unnormalised
    const auto d = XiDistribution::custom({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    CHECK(d.density(1.0) == doctest::Approx(1.0));
    CHECK(d.mean() == doctest::Approx(1.0));
    CHECK(d.variance() == doctest::Approx(1.0 / 6.0));
    CHECK(d.cdf(1.0) == doctest::Approx(0.5));
    CHECK(d.quantile(0.125) == doctest::Approx(0.5));
    CHECK(d.central_moment(3) == doctest::Approx(0.0).scale(1.0));
    CHECK(d.central_moment(4) == doctest::Approx(integrate(d, [](double x) { return std::pow(x - 1.0, 4); })));
}

TEST_CASE("degenerate law") {
    const auto d = XiDistribution::degenerate(0.5);
    CHECK(d.mean() == 0.5);
    CHECK(d.variance() == 0.0);
    CHECK(d.draw(1, 2) == 0.5);
    CHECK_THROWS_AS(d.density(0.5), Error);
}

TEST_CASE("invalid parameters") {
    auto kind = [](auto f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Config;
    };
    CHECK(kind([] { XiDistribution::uniform(1.0, 1.0); }) == ErrorKind::Parameter);
    CHECK(kind([] { XiDistribution::triangular(0.0, 2.0, 1.0); }) == ErrorKind::Parameter);
    CHECK(kind([] { XiDistribution::normal(0.0, -1.0); }) == ErrorKind::Parameter);
    CHECK(kind([] { XiDistribution::custom({0.0, 1.0}, {-1.0, 1.0}); }) == ErrorKind::Parameter);
    const double two[] = {0.0, 1.0};
    CHECK(kind([&] { XiDistribution::from_params("triangular", two); }) == ErrorKind::Parameter);
    CHECK(kind([&] { XiDistribution::from_params("cauchy", two); }) == ErrorKind::Parameter);
    CHECK(XiDistribution::from_params("uniform", two).variance() == doctest::Approx(1.0 / 12.0));
}
