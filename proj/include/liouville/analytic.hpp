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

// Closed-form densities and moments of the solved models.

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "liouville/models.hpp"
#include "liouville/pdf_curve.hpp"
#include "liouville/xi_distribution.hpp"

namespace liouville {

/// f_X(x; t) = f_Xi((x - u_p t) / sqrt(2Dt)) / sqrt(2Dt).
double position_pdf(const PositionModel& model, const XiDistribution& dist, double x, double t);
double position_cdf(const PositionModel& model, const XiDistribution& dist, double x, double t);

/// Gaussian heat kernel exp(-(x - u_p t)^2 / 4Dt) / sqrt(4 pi D t).
double heat_kernel(const PositionModel& model, double x, double t);

/// E[(X - E X)^n] = E[(Xi - E Xi)^n] (2Dt)^(n/2).
double position_central_moment(const PositionModel& model, const XiDistribution& dist, int order,
                               double t);

/// Densities of X and U for the velocity model with a deterministic start.
double velocity_pdf_x(const VelocityModel& model, const XiDistribution& dist, double x, double t);
double velocity_pdf_u(const VelocityModel& model, const XiDistribution& dist, double u, double t);
double velocity_cdf_x(const VelocityModel& model, const XiDistribution& dist, double x, double t);
double velocity_cdf_u(const VelocityModel& model, const XiDistribution& dist, double u, double t);

/// Grid for the density of a + b Xi: mean +- 8 standard deviations, or the
/// image of a bounded support.
std::vector<double> affine_grid(double a, double b, const XiDistribution& dist,
                                std::size_t n = 1001);

PdfCurve position_pdf_curve(const PositionModel& model, const XiDistribution& dist, double t,
                            std::span<const double> grid = {});

struct VelocityMarginals {
    PdfCurve f_x;
    PdfCurve f_u;
};

VelocityMarginals velocity_model_pdfs(const VelocityModel& model, const XiDistribution& dist,
                                      double t, std::span<const double> grid_x = {},
                                      std::span<const double> grid_u = {});

/// Marginal velocity density of the FHHS model (shape = law of Xi / sigma_xi).
PdfCurve fhhs_pdf_curve(const FhhsModel& model, const XiDistribution& shape, double t,
                        std::span<const double> grid = {});

/// Analytic CDF of one state component of a solved model (component 0 is
/// the velocity for the FHHS model).
double model_cdf(const CanonicalModel& model, const XiDistribution& dist, int component, double y,
                 double t);
double model_pdf(const CanonicalModel& model, const XiDistribution& dist, int component, double y,
                 double t);

inline constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

/// First and second moments at one time. Fields that do not apply to a
/// model are NaN. Covariances with Xi use the coefficient in model units
/// (sigma_xi scale for the FHHS model).
struct MomentRecord {
    double t = 0.0;
    double mean_x = kNotApplicable;
    double mean_u = kNotApplicable;
    double var_x = kNotApplicable;
    double cov_xu = kNotApplicable;
    double var_u = kNotApplicable;
    double cov_xi_x = kNotApplicable;
    double cov_xi_u = kNotApplicable;
    double var_xi = kNotApplicable;
};

struct MomentSeries {
    std::string model;
    std::vector<MomentRecord> records;

    /// Throws Domain if a variance is negative or a covariance breaks
    /// Cauchy-Schwarz by more than `tol`.
    void check(double tol = 1e-9) const;
};

enum class VelocityInit { Deterministic, Maxwellian };

/// Velocity start: U(0) = v0 (deterministic) or U(0) ~ v0 + N(0, D)
/// independent of Xi (Maxwellian).
MomentRecord velocity_model_moments(const VelocityModel& model, double t,
                                    VelocityInit init = VelocityInit::Deterministic,
                                    const XiDistribution& dist = XiDistribution::standard_normal());

/// 2 tau_p^2 D (t - 1 + e^{-t}), the Maxwellian-start position variance.
double taylor_position_variance(const VelocityModel& model, double t);

MomentRecord position_moments(const PositionModel& model, const XiDistribution& dist, double t);

/// FHHS moments with a standardised coefficient shape (mean 0, variance 1
/// unless `shape` says otherwise).
MomentRecord fhhs_moments(const FhhsModel& model, double t,
                          const XiDistribution& shape = XiDistribution::standard_normal());

}  // namespace liouville
