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

// Fluidized homogeneous heating system: forcing, granular temperature,
// source/sink split, diffusion coefficient and calibration against T(t).

#include <cstdint>
#include <span>
#include <vector>

#include "liouville/models.hpp"
#include "liouville/xi_distribution.hpp"

namespace liouville {

/// eta(t) = (1 - exp(-C1 t / tau_p))^C2.
double fhhs_eta(const FhhsModel& model, double t);

/// Forcing (1/tau_p)(1-e)^(C2-1) [1 + (C1 C2 - 1) e], e = exp(-C1 t / tau_p).
/// Accepts t = +inf (returns 1/tau_p).
double phi_fhhs(const FhhsModel& model, double t);

double fhhs_velocity_variance(const FhhsModel& model, double t);
/// T = sigma_U^2 / 3.
double granular_temperature(const FhhsModel& model, double t);
double steady_temperature(const FhhsModel& model);

/// Preimage of T under the monotone T(t); +inf at the steady value.
/// Throws OutOfRange above the steady value.
double time_from_temperature(const FhhsModel& model, double T);

struct SourceSink {
    double S;
    double Gamma;
};

/// S = (2/sqrt3) sigma_xi phi sqrt(T) at the time where T is reached,
/// Gamma = 2T / tau_p.
SourceSink source_sink(const FhhsModel& model, double T);

/// Marginal velocity density (1/(sigma_xi eta)) f(u / (sigma_xi eta)) where
/// `shape` is the law of Xi / sigma_xi. Requires t > 0.
double fhhs_pdf(const FhhsModel& model, const XiDistribution& shape, double u, double t);

enum class DiffusionMode { OfTime, OfTemperature };

/// D = eta phi sigma_xi^2 (the K = 0 branch), as a function of time or of
/// the granular temperature.
double diffusion_coefficient(const FhhsModel& model, DiffusionMode mode, double arg);
double diffusion_of_time(const FhhsModel& model, double t);
double diffusion_of_temperature(const FhhsModel& model, double T);

/// Full diffusion coefficient eta phi sigma^2 + (K/u) exp(u^2 / (2 eta^2 sigma^2)).
/// Formula evaluator only; singular at u = 0 unless K = 0.
double diffusion_with_k(const FhhsModel& model, double K, double u, double t);

/// Thermal Reynolds number scale * sqrt(T).
double re_t(double T, double scale);

// ---------------------------------------------------------------- fitting

/// log(y) = slope log(x) + intercept (natural logarithms).
struct PowerLaw {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;

    double operator()(double x) const;
};

/// Published Reynolds-number laws for sigma_xi and C1
/// (rho_p / rho_f = 100, omega = 0.1).
PowerLaw published_sigma_law();
PowerLaw published_c1_law();

/// Parameters from the published laws at Re_m.
FhhsModel fhhs_from_regression(double Re_m, double tau_p = 0.14, double C2 = 1.2);

/// Least squares fit of log y against log x.
PowerLaw loglog_regression(std::span<const double> x, std::span<const double> y);

struct FhhsFitOptions {
    double tau_p = 0.14;
    double C2 = 1.2;
    bool refine_c2 = false;
    int max_iterations = 200;
};

struct FhhsFit {
    double Re_m = 0.0;
    double sigma_xi = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    double rms = 0.0;
    int iterations = 0;
};

/// Two-stage fit: sigma_xi from the plateau, C1 from the linearised rising
/// branch, then Levenberg-Marquardt on the squared residuals of T.
FhhsFit fit_fhhs(std::span<const double> t, std::span<const double> T,
                 const FhhsFitOptions& options = {});

struct TemperatureSeries {
    double Re_m = 0.0;
    std::vector<double> t;
    std::vector<double> T;
};

struct FitReport {
    std::vector<FhhsFit> per_re;
    bool has_loglog = false;
    PowerLaw sigma_law;
    PowerLaw c1_law;
};

/// Fits every series and, given two or more distinct Re_m values, the
/// log-log laws of sigma_xi and C1.
FitReport fit_fhhs_family(std::span<const TemperatureSeries> series, const FhhsFitOptions& options = {});

/// T(t) of the model on `times`, optionally with multiplicative Gaussian
/// noise of relative size `noise` drawn from (seed, point index).
std::vector<double> synthetic_temperature(const FhhsModel& model, std::span<const double> times,
                                          double noise = 0.0, std::uint64_t seed = 0);

}  // namespace liouville
