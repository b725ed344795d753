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

#include "liouville/error.hpp"
#include "liouville/models.hpp"
#include "liouville/rng.hpp"

using namespace liouville;

namespace {

const VelocityModel kFig4{10.0, 0.02, 1.0};

ErrorKind kind_of(auto f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::Config;
}

// Closed forms written out directly, in long double.
long double sigma_x_ref(const VelocityModel& m, long double t) {
    const long double g = 2 * t - 3 + 4 * std::exp(-t) - std::exp(-2 * t);
    return m.tau_p * std::sqrt(m.D * g);
}
long double sigma_u_ref(const VelocityModel& m, long double t) {
    return std::sqrt(m.D * (1 - std::exp(-2 * t)));
}

}  // namespace

TEST_CASE("position forcing") {
    const PositionModel m{5.0, 2.5};
    CHECK(phi_position(m, 0.8) == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(phi_position(m, 1.25) == doctest::Approx(1.0).epsilon(1e-14));
    double prev = phi_position(m, 1e-3);
    for (double t = 1e-2; t < 1e4; t *= 3.0) {
        const double v = phi_position(m, t);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 0.02);
    CHECK(kind_of([&] { phi_position(m, 0.0); }) == ErrorKind::Domain);
}

TEST_CASE("velocity forcings") {
    const auto f1 = phi_varphi_velocity(kFig4, 1.0);
    CHECK(f1.phi == doctest::Approx(std::sqrt(0.02 / (1.0 - std::exp(-2.0)))).epsilon(1e-14));
    CHECK(f1.phi == doctest::Approx(0.152087).epsilon(1e-6));
    CHECK(phi_varphi_velocity(kFig4, 60.0).phi == doctest::Approx(0.141421).epsilon(1e-6));
    CHECK(kind_of([&] { phi_varphi_velocity(kFig4, 0.0); }) == ErrorKind::Domain);

    SUBCASE("position forcing tends to -tau_p sqrt(D)") {
        // d sigma_X/dt ~ tau_p sqrt(D / 2t) decays while tau_p sigma_U -> tau_p sqrt(D)
        const double limit = -kFig4.tau_p * std::sqrt(kFig4.D);
        for (double t : {50.0, 1e4, 1e8}) {
            const double want = limit + kFig4.tau_p * std::sqrt(kFig4.D) / std::sqrt(2.0 * t - 3.0);
            CHECK(phi_varphi_velocity(kFig4, t).varphi == doctest::Approx(want).epsilon(1e-10));
        }
    }

    SUBCASE("forcings satisfy the standard deviation ODEs") {
        const CounterStream rng(2024, 0);
        for (int i = 0; i < 20; ++i) {
            const double t = 0.05 + 9.0 * rng.uniform(i);
            const double h = 1e-5 * t;
            const double dsx = (velocity_sigma_x(kFig4, t + h) - velocity_sigma_x(kFig4, t - h)) / (2 * h);
            const double dsu = (velocity_sigma_u(kFig4, t + h) - velocity_sigma_u(kFig4, t - h)) / (2 * h);
            const auto f = phi_varphi_velocity(kFig4, t);
            CAPTURE(t);
            CHECK(dsx == doctest::Approx(kFig4.tau_p * velocity_sigma_u(kFig4, t) + f.varphi).epsilon(1e-6));
            CHECK(dsu == doctest::Approx(-velocity_sigma_u(kFig4, t) + f.phi).epsilon(1e-6));
        }
    }
}

TEST_CASE("velocity standard deviations") {
    for (double t : {0.5, 1.0, 3.0, 20.0}) {
        CHECK(velocity_sigma_x(kFig4, t) == doctest::Approx(double(sigma_x_ref(kFig4, t))).epsilon(1e-13));
        CHECK(velocity_sigma_u(kFig4, t) == doctest::Approx(double(sigma_u_ref(kFig4, t))).epsilon(1e-13));
    }
    CHECK(velocity_sigma_x(kFig4, 1.0) * velocity_sigma_x(kFig4, 1.0) == doctest::Approx(0.672365).epsilon(1e-6));
    CHECK(velocity_sigma_u(kFig4, 1.0) * velocity_sigma_u(kFig4, 1.0) == doctest::Approx(0.0172933).epsilon(1e-6));
    CHECK(velocity_sigma_x(kFig4, 0.0) == 0.0);
    CHECK(velocity_sigma_u(kFig4, 0.0) == 0.0);
}

TEST_CASE("dispersion factor keeps full precision for small t") {
    // leading terms of the series 2t^3/3 - t^4/2 + 7t^5/30 - t^6/12
    for (double t : {1e-6, 1e-4, 1e-3, 1e-2}) {
        const double want = 2.0 * t * t * t / 3.0 - t * t * t * t / 2.0 + 7.0 * std::pow(t, 5) / 30.0 -
                            std::pow(t, 6) / 12.0 + 31.0 * std::pow(t, 7) / 1260.0;
        CHECK(velocity_dispersion_factor(t) == doctest::Approx(want).epsilon(1e-12));
    }
    for (double t : {0.4999, 0.5, 0.5001})
        CHECK(velocity_dispersion_factor(t) == doctest::Approx(2 * t - 3 + 4 * std::exp(-t) - std::exp(-2 * t)).epsilon(1e-12));
}

TEST_CASE("validation") {
    CHECK(kind_of([] { PositionModel{0.0, -1.0}.validate(); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { VelocityModel{0.0, 1.0, 0.0}.validate(); }) == ErrorKind::Parameter);
    CHECK(kind_of([] {
              FhhsModel m;
              m.C2 = 0.9;
              m.validate();
          }) == ErrorKind::Parameter);
    CHECK(kind_of([] {
              FhhsModel m;
              m.sigma_xi = 0.0;
              m.C1 = 1.0;
              m.sigma_xi = -1.0;
              m.validate();
          }) == ErrorKind::Parameter);
    CHECK_NOTHROW(PositionModel{0.0, 0.0}.validate());
}

TEST_CASE("named drift and basis registry") {
    const double ab[] = {-2.0, 1.0};
    const Drift d = Drift::named("affine", ab);
    CHECK(d.eval({3.0, 0.0})[0] == -5.0);
    CHECK(d.jacobian({3.0, 0.0})[0] == -2.0);
    const double k[] = {0.5};
    CHECK(Drift::named("cubic", k).eval({2.0, 0.0})[0] == -4.0);
    CHECK(kind_of([&] { Drift::named("quadratic", k); }) == ErrorKind::Parameter);

    const double pw[] = {2.0, 0.5};
    CHECK(Basis::named("power", pw).eval({}, 4.0) == doctest::Approx(4.0));
    const double ex[] = {1.0, -1.0};
    CHECK(Basis::named("exp", ex).eval({}, 1.0) == doctest::Approx(std::exp(-1.0)));
    const double tab[] = {0.0, 1.0, 2.0, 3.0};
    const Basis table = Basis::named("table", tab);
    CHECK(table.eval({}, 1.0) == doctest::Approx(2.0));
    CHECK(table.eval({}, 5.0) == doctest::Approx(3.0));
    const double lin[] = {3.0, 1.0};
    const Basis ls = Basis::named("linear_state", lin);
    CHECK(ls.eval({1.0, 2.0}, 0.0) == 6.0);
    CHECK(ls.d_dstate({1.0, 2.0}, 0.0, 1) == 3.0);
    CHECK(ls.d_dstate({1.0, 2.0}, 0.0, 0) == 0.0);
    CHECK_FALSE(ls.time_only());
    CHECK(kind_of([&] { Basis::named("power", std::span<const double>(lin, 1)); }) == ErrorKind::Parameter);
    CHECK(kind_of([&] { Basis::named("wavelet", lin); }) == ErrorKind::Parameter);
}

TEST_CASE("forcing form of the solved models") {
    const auto xi = XiDistribution::standard_normal();
    SUBCASE("position") {
        const PositionModel m{5.0, 2.5};
        const RandomForcingModel f = to_forcing_model(m, xi);
        REQUIRE(f.terms.size() == 1);
        for (double t : {1e-3, 0.1, 0.8, 7.0})
            CHECK(f.terms[0].basis.eval({}, t) == doctest::Approx(phi_position(m, t)).epsilon(1e-15));
        CHECK(f.drift.eval({0.0, 0.0})[0] == 5.0);
        CHECK(f.t0 == kDefaultStartTime);
        CHECK(f.singular_at_zero());
        CHECK(f.linear_in_state());
    }
    SUBCASE("velocity") {
        const RandomForcingModel f = to_forcing_model(kFig4, xi);
        CHECK(f.dim == 2);
        CHECK(f.y0[1] == 1.0);
        const auto phi = phi_varphi_velocity(kFig4, 2.0);
        CHECK(f.terms[0].basis.eval({}, 2.0) == doctest::Approx(phi.varphi).epsilon(1e-15));
        CHECK(f.terms[1].basis.eval({}, 2.0) == doctest::Approx(phi.phi).epsilon(1e-15));
        CHECK(f.drift.eval({0.0, 2.0})[0] == 20.0);
        CHECK(f.drift.eval({0.0, 2.0})[1] == -2.0);
    }
    SUBCASE("singular bases need a positive start time") {
        RandomForcingModel f = to_forcing_model(PositionModel{0.0, 1.0}, xi);
        f.t0 = 0.0;
        CHECK(kind_of([&] { f.validate(); }) == ErrorKind::Parameter);
    }
    CHECK(model_name(CanonicalModel{kFig4}) == "velocity");
    CHECK(model_name(CanonicalModel{FhhsModel{}}) == "fhhs");
}
