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

// Characteristics of the Liouville equation in the augmented (state, xi)
// phase space, flow-map Jacobians, and marginal densities built from them.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "liouville/models.hpp"
#include "liouville/pdf_curve.hpp"
#include "liouville/xi_distribution.hpp"

namespace liouville {

/// A point on a characteristic. `xi` holds one value per coefficient of the
/// forcing model; for the FHHS model it is the standardised coefficient
/// Xi / sigma_xi. `logdens` accumulates minus the drift divergence.
struct CharState {
    double t = 0.0;
    Vec2 state{};
    std::vector<double> xi;
    double logdens = 0.0;
};

inline constexpr double kDefaultCharStep = 1e-3;

/// Time nodes from lo to hi with steps of at most dt; with `graded` the
/// step is also capped at 0.01 t (requires lo > 0). A finite `transient`
/// time scale s caps the step at 0.05 clamp(t, 1e-6 s, s) while t < 40 s.
/// The last step lands exactly on hi.
std::vector<double> step_schedule(double lo, double hi, double dt, bool graded,
                                  double transient = std::numeric_limits<double>::infinity());

/// Step schedule and forcing cache for one time window. Steps are graded
/// (h <= 0.01 t) near t = 0 when a basis is singular there; the last step is
/// shortened to land on the end time. Integrates backward when t_to < t_from.
class CharacteristicFlow {
public:
    CharacteristicFlow(RandomForcingModel model, double t_from, double t_to,
                       double dt = kDefaultCharStep);

    /// Advances y (and logdens, and the tangent matrix if given) across the
    /// window with classical RK4.
    void advance(Vec2& y, std::span<const double> xi, double& logdens,
                 Mat2* tangent = nullptr) const;

    double t_from() const { return times_.front(); }
    double t_to() const { return times_.back(); }
    std::size_t steps() const { return times_.size() - 1; }
    const RandomForcingModel& model() const { return model_; }

private:
    struct Deriv;
    Deriv rhs(const Vec2& y, double t, std::size_t step, int stage, std::span<const double> xi,
              const Mat2* tangent) const;

    RandomForcingModel model_;
    std::vector<double> times_;
    std::vector<double> cache_;  // basis values per (step, stage, term) for time-only forcing
};

CharState integrate_characteristic(const RandomForcingModel& model, const CharState& init,
                                   double t_end, double dt = kDefaultCharStep);
CharState integrate_characteristic(const CanonicalModel& model, const CharState& init,
                                   double t_end, double dt = kDefaultCharStep);

/// The model's start time: the configured t0 for the singular position and
/// velocity forcings, zero for the FHHS model.
double start_time(const CanonicalModel& model);

/// State on the characteristic through the model's deterministic initial
/// condition, in closed form for the solved models and by integration for a
/// generic forcing model.
CharState canonical_state(const CanonicalModel& model, std::span<const double> xi, double t);

enum class JacobianMethod { Variational, FiniteDifference };

/// det dy(t)/dy(t0) along the characteristic with coefficients `xi` through
/// the deterministic start (default xi = 0).
double flow_map_jacobian(const CanonicalModel& model, double t0, double t, JacobianMethod method,
                         std::span<const double> xi = {}, double dt = kDefaultCharStep);

/// Initial density of the state at the model start time: a Dirac mass at
/// the deterministic start, or a smooth density (one-dimensional systems).
struct InitialCondition {
    std::optional<PdfCurve> density;

    static InitialCondition dirac() { return {}; }
    static InitialCondition smooth(PdfCurve f0) { return {std::move(f0)}; }
};

struct TransformOptions {
    int component = 0;  // 0 = position, 1 = velocity
    double dt = kDefaultCharStep;
    int panels = 24;    // Gauss-Legendre panels over the Xi support
};

/// Marginal density of one state component at time t on `grid`, by the
/// method of transformations. `dist` is the coefficient law for the solved
/// models (ignored for a generic forcing model, which carries its own).
PdfCurve transform_pdf(const CanonicalModel& model, const InitialCondition& init,
                       const XiDistribution& dist, double t, std::span<const double> grid,
                       const TransformOptions& options = {});

struct McOptions {
    int component = 0;
    double dt = kDefaultCharStep;
    unsigned threads = 0;  // 0 = default_threads()
    /// For affine systems the RK4 map is affine in xi, so integrating the
    /// basis characteristics once gives every sample to rounding.
    bool exploit_linearity = true;
};

/// Terminal values of one component for n characteristics with coefficient
/// k drawn as dist.draw(seed, k, coefficient index).
std::vector<double> mc_terminal_states(const CanonicalModel& model, const XiDistribution& dist,
                                       std::size_t n, double t, std::uint64_t seed,
                                       const McOptions& options = {});

/// Histogram of mc_terminal_states, normalised to unit mass.
PdfCurve mc_marginal_pdf(const CanonicalModel& model, const XiDistribution& dist, std::size_t n,
                         double t, std::uint64_t seed, const Binning& binning = {},
                         const McOptions& options = {});

}  // namespace liouville
