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

// Finite-volume Crank-Nicolson solver for one-dimensional Fokker-Planck
// equations  df/dt + d(a f)/dx = d/dx (D df/dx)  with zero-flux walls.

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "liouville/models.hpp"
#include "liouville/pdf_curve.hpp"
#include "liouville/xi_distribution.hpp"

namespace liouville {

using Field = std::function<double(double x, double t)>;

enum class FpScheme { CrankNicolson };

struct FpProblem {
    Field drift;
    Field diffusion;
    double lo = 0.0;
    double hi = 1.0;
    std::size_t n = 2001;
    double t0 = 0.0;
    /// Initial density; resampled onto the solver grid if its nodes differ.
    PdfCurve initial;
    FpScheme scheme = FpScheme::CrankNicolson;

    std::vector<double> grid() const { return uniform_grid(lo, hi, n); }
};

struct FpResult {
    std::vector<PdfCurve> snapshots;  // one per requested time, in order
    double max_mass_drift = 0.0;
    double min_density = 0.0;
    std::size_t steps = 0;
};

/// Advances the problem to each snapshot time (increasing, > t0) with steps
/// of at most dt. Throws SchemeFailure on densities below -1e-10 and
/// Conservation on relative mass drift above 1e-4.
FpResult solve_fp(const FpProblem& problem, std::span<const double> snapshot_times, double dt);
PdfCurve solve_fp(const FpProblem& problem, double t_end, double dt);

/// Named drift and diffusion fields: drift "constant" [a], "linear" [a0, a1]
/// (a0 + a1 x), "relaxation" [tau] (-x / tau); diffusion "constant" [D],
/// "fhhs" [tau_p, sigma_xi, C1, C2] (eta phi sigma_xi^2).
Field fp_drift_named(std::string_view name, std::span<const double> params);
Field fp_diffusion_named(std::string_view name, std::span<const double> params);

/// Marginal FP problem of a solved model (position X, velocity U, FHHS U)
/// with Gaussian noise, started from the analytic density at t0 on
/// mean +- 10 of the largest standard deviation over [t0, t_end].
FpProblem fp_problem_for(const CanonicalModel& model, double t0, double t_end, std::size_t n = 2001);

/// Density at time t of the marginal solved by fp_problem_for (Gaussian Xi).
double fp_reference_density(const CanonicalModel& model, double x, double t);

/// Delta-supported joint density f_Xi(xi) delta(y - center - scale xi) of
/// one component, with the forcing that multiplies xi in its equation.
struct DeltaJoint {
    double center = 0.0;
    double scale = 1.0;
    double forcing = 0.0;
    XiDistribution law = XiDistribution::standard_normal();

    /// Marginal density of y.
    double marginal(double y) const;
    /// forcing * integral of xi f(y, xi) dxi.
    double xi_flux(double y) const;
};

/// Joint of the position (component 0), velocity (component 1 = U) or FHHS
/// model at time t.
DeltaJoint delta_joint(const CanonicalModel& model, const XiDistribution& dist, double t,
                       int component);

/// The diffusion coefficient that matches the Liouville model at time t.
double matched_diffusion(const CanonicalModel& model, double t);

/// sup over grid of |d/dy (D df/dy + xi flux)|, derivatives by central
/// differences with step 1e-3 scale.
double compatibility_residual(const DeltaJoint& joint, const std::function<double(double)>& D_field,
                              std::span<const double> grid);

}  // namespace liouville
