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

// First and second moment equations of linear random-forcing models,
// integrated with RK4.

#include <span>
#include <vector>

#include "liouville/analytic.hpp"
#include "liouville/characteristics.hpp"
#include "liouville/models.hpp"

namespace liouville {

/// Moments of y = (x[, u]) for dy/dt = A y + b + sum_c Xi_c g_c(t) with
/// independent coefficients: mean, covariance and cross[c] = cov(Xi_c, y).
struct MomentState {
    Vec2 mean{};
    Mat2 cov{};
    std::vector<Vec2> cross;
};

/// Integrates
///   m' = A m + b + G E[Xi],  K' = K A^T + S G^T,  C' = A C + C A^T + G K + K^T G^T
/// from `init` at t_init to each of `times` (increasing, >= t_init).
/// Throws Unsupported for nonlinear drift or state-dependent forcing, whose
/// moment equations involve higher moments.
std::vector<MomentState> integrate_linear_moments(const RandomForcingModel& model,
                                                  const MomentState& init, double t_init,
                                                  std::span<const double> times,
                                                  double dt = kDefaultCharStep);

/// Generic entry: deterministic start y0 at model.t0, zero covariances.
MomentSeries integrate_moments(const RandomForcingModel& model, std::span<const double> times,
                               double dt = kDefaultCharStep);

/// Position model, seeded from the closed form at t0 > 0.
MomentSeries integrate_position_moments(const PositionModel& model, const XiDistribution& dist,
                                        std::span<const double> times,
                                        double t0 = kDefaultStartTime, double dt = kDefaultCharStep);

/// Velocity model, seeded from the closed form at t0 > 0.
MomentSeries integrate_velocity_moments(const VelocityModel& model, VelocityInit init,
                                        std::span<const double> times,
                                        double t0 = kDefaultStartTime,
                                        const XiDistribution& dist = XiDistribution::standard_normal(),
                                        double dt = kDefaultCharStep);

/// FHHS model from the deterministic start U(0) = 0 at t = 0.
MomentSeries integrate_fhhs_moments(const FhhsModel& model, std::span<const double> times,
                                    const XiDistribution& shape = XiDistribution::standard_normal(),
                                    double dt = kDefaultCharStep);

/// Closed-form series of the solved models at `times`.
MomentSeries closed_form_moments(const CanonicalModel& model, std::span<const double> times,
                                 VelocityInit init = VelocityInit::Deterministic,
                                 const XiDistribution& dist = XiDistribution::standard_normal());

}  // namespace liouville
