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

#include <cmath>
#include <numbers>

#include "liouville/analytic.hpp"
#include "liouville/characteristics.hpp"
#include "liouville/error.hpp"
#include "liouville/fhhs.hpp"
#include "liouville/fokker_planck.hpp"

using namespace liouville;

namespace {

const PositionModel kFig2{5.0, 2.5};
const VelocityModel kFig4{10.0, 0.02, 1.0};

double gauss(double x, double mean, double var) {
    return std::exp(-0.5 * (x - mean) * (x - mean) / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

FpProblem heat_problem(std::size_t n) {
    FpProblem p;
    const double a[] = {5.0}, d[] = {2.5};
    p.drift = fp_drift_named("constant", a);
    p.diffusion = fp_diffusion_named("constant", d);
    p.lo = -12.0;
    p.hi = 20.0;
    p.n = n;
    p.t0 = 0.05;
    p.initial = sample_curve(p.grid(), [](double x) { return gauss(x, 0.25, 0.25); });
    return p;
}

double heat_l1(std::size_t n, double dt) {
    const PdfCurve f = solve_fp(heat_problem(n), 0.8, dt);
    return l1_distance(f, [](double x) { return gauss(x, 4.0, 4.0); });
}

}  // namespace

TEST_CASE("heat equation") {
    const double times[] = {0.2, 0.8};
    const FpResult r = solve_fp(heat_problem(2001), times, 1e-3);
    REQUIRE(r.snapshots.size() == 2);
    CHECK(l1_distance(r.snapshots[1], [](double x) { return gauss(x, 4.0, 4.0); }) < 1e-3);
    CHECK(l1_distance(r.snapshots[0], [](double x) { return gauss(x, 1.0, 1.0); }) < 1e-3);
    CHECK(r.max_mass_drift < 1e-6);
    CHECK(r.min_density >= -1e-10);
    CHECK(r.snapshots[1].mean() == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("second-order convergence under refinement") {
    // grid spacing and step halved together
    const double e1 = heat_l1(201, 4e-3), e2 = heat_l1(401, 2e-3), e3 = heat_l1(801, 1e-3);
    const double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
    CAPTURE(e1);
    CAPTURE(e2);
    CAPTURE(e3);
    CHECK(p1 >= 1.7);
    CHECK(p1 <= 2.2);
    CHECK(p2 >= 1.7);
    CHECK(p2 <= 2.2);
}

TEST_CASE("ornstein-uhlenbeck marginal") {
    const FpProblem p = fp_problem_for(kFig4, 0.05, 5.0);
    const PdfCurve f = solve_fp(p, 5.0, 1e-3);
    const double var = kFig4.D * -std::expm1(-10.0);
    CHECK(f.variance() == doctest::Approx(var).epsilon(1e-3));
    CHECK(f.mean() == doctest::Approx(std::exp(-5.0)).epsilon(1e-4));
    CHECK(l1_distance(f, [](double u) { return fp_reference_density(kFig4, u, 5.0); }) < 1e-3);
}

TEST_CASE("fhhs velocity equation") {
    const FhhsModel m = fhhs_from_regression(20.0);
    const FpProblem p = fp_problem_for(m, 0.05 * m.tau_p, m.tau_p);
    const PdfCurve f = solve_fp(p, m.tau_p, 1e-4);
    CHECK(l1_distance(f, [&](double u) { return fp_reference_density(m, u, m.tau_p); }) < 1e-3);
    CHECK(f.variance() == doctest::Approx(std::pow(m.sigma_xi * fhhs_eta(m, m.tau_p), 2)).epsilon(1e-3));
}

TEST_CASE("zero drift and diffusion leave the density unchanged") {
    FpProblem p = heat_problem(501);
    const double zero[] = {0.0};
    p.drift = fp_drift_named("constant", zero);
    p.diffusion = fp_diffusion_named("constant", zero);
    const PdfCurve f = solve_fp(p, 1.0, 1e-2);
    CHECK(f.density == p.initial.density);
}

TEST_CASE("three-way agreement with the liouville marginal and monte carlo") {
    const FpProblem p = fp_problem_for(kFig2, 0.05, 0.8);
    const PdfCurve fd = solve_fp(p, 0.8, 1e-3);
    const PdfCurve exact = position_pdf_curve(kFig2, XiDistribution::standard_normal(), 0.8, p.grid());
    const auto samples = mc_terminal_states(kFig2, XiDistribution::standard_normal(), 100000, 0.8, 12);
    const PdfCurve mc = kernel_density(samples, p.grid());
    CHECK(l1_distance(fd, exact) < 2e-2);
    CHECK(l1_distance(fd, mc) < 2e-2);
    CHECK(l1_distance(exact, mc) < 2e-2);
}

TEST_CASE("compatibility of the liouville and fokker-planck descriptions") {
    SUBCASE("position model") {
        const DeltaJoint j = delta_joint(kFig2, XiDistribution::standard_normal(), 0.8, 0);
        const auto grid = uniform_grid(4.0 - 10.0, 4.0 + 10.0, 201);
        CHECK(compatibility_residual(j, [](double) { return 2.5; }, grid) < 1e-5);
        CHECK(compatibility_residual(j, [](double) { return 5.0; }, grid) > 1e-2);
    }
    SUBCASE("fhhs model") {
        const FhhsModel m = fhhs_from_regression(20.0);
        const DeltaJoint j = delta_joint(m, XiDistribution::standard_normal(), m.tau_p, 0);
        const double D = matched_diffusion(m, m.tau_p);
        CHECK(D == doctest::Approx(diffusion_of_time(m, m.tau_p)));
        const auto grid = uniform_grid(-5.0 * j.scale, 5.0 * j.scale, 201);
        CHECK(compatibility_residual(j, [&](double) { return D; }, grid) < 1e-5);
        CHECK(compatibility_residual(j, [&](double) { return 2.0 * D; }, grid) > 1e-2);
    }
    SUBCASE("a non-gaussian coefficient breaks the identity") {
        const DeltaJoint j = delta_joint(kFig2, XiDistribution::standard_uniform(), 0.8, 0);
        const auto grid = uniform_grid(0.0, 8.0, 201);
        CHECK(compatibility_residual(j, [](double) { return 2.5; }, grid) > 1e-2);
    }
}

TEST_CASE("invalid problems") {
    FpProblem p = heat_problem(201);
    p.initial.density[77] += 1.0;
    CHECK_THROWS_AS(solve_fp(p, 0.5, 1e-2), Error);
    const FpProblem ok = heat_problem(201);
    const double backwards[] = {0.5, 0.2};
    CHECK_THROWS_AS(solve_fp(ok, backwards, 1e-2), Error);
    const double bad[] = {-1.0};
    CHECK_THROWS_AS(fp_diffusion_named("constant", bad), Error);
    CHECK_THROWS_AS(fp_drift_named("quadratic", bad), Error);
}
