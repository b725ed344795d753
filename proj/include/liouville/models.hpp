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

// Model records for the three solved particle systems and the generic
// N-term random-forcing model. All quantities are nondimensional.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "liouville/xi_distribution.hpp"

namespace liouville {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<double, 4>;  // row-major

/// dX = u_p dt + sqrt(2D) dW  <->  dX/dt = u_p + Xi sqrt(D / 2t).
struct PositionModel {
    double u_p = 0.0;
    double D = 1.0;

    void validate() const;
};

/// dX = tau_p U dt, dU = -U dt + sqrt(2D) dW, with X(0) = 0, U(0) = v0.
/// Stokes drag (drag correction fixed to one).
struct VelocityModel {
    double tau_p = 1.0;
    double D = 1.0;
    double v0 = 0.0;

    void validate() const;
};

/// dU/dt = -U / tau_p + Xi phi(t) for a fluidized homogeneous heating
/// system. Re_m, omega and rho_ratio are carried as metadata only.
struct FhhsModel {
    double tau_p = 0.14;
    double sigma_xi = 1.0;
    double C1 = 1.0;
    double C2 = 1.2;
    double Re_m = 0.0;
    double omega = 0.1;
    double rho_ratio = 100.0;

    void validate() const;
};

/// Deterministic part of a random-forcing model: either affine, A y + b,
/// or the scalar cubic damping -k y^3.
struct Drift {
    enum class Kind { Affine, Cubic };

    Kind kind = Kind::Affine;
    int dim = 1;
    Mat2 A{};
    Vec2 b{};
    double k = 0.0;

    static Drift affine(double a, double b);
    static Drift affine(const Mat2& A, const Vec2& b);
    static Drift cubic(double k);
    /// Registry lookup: "affine" [a, b] or [a00, a01, a10, a11, b0, b1];
    /// "cubic" [k].
    static Drift named(std::string_view name, std::span<const double> params);

    Vec2 eval(const Vec2& y) const;
    Mat2 jacobian(const Vec2& y) const;
    bool linear() const { return kind == Kind::Affine; }
};

/// A basis function of (state, t) from the named registry.
struct Basis {
    enum class Kind {
        Constant,        // [c]
        Power,           // [c, p]            c t^p
        Exponential,     // [c, lambda]       c exp(lambda t)
        PositionSqrt,    // [D]               sqrt(D / 2t)
        VelocityVarphi,  // [tau_p, D]        position forcing of the velocity model
        VelocityPhi,     // [D]               sqrt(D / (1 - exp(-2t)))
        FhhsPhi,         // [tau_p, C1, C2, scale]
        Table,           // [t0, v0, t1, v1, ...] piecewise linear in t
        LinearState,     // [c, k]            c y_k
    };

    Kind kind = Kind::Constant;
    std::vector<double> params;

    static Basis named(std::string_view name, std::span<const double> params);
    std::string_view name() const;

    double eval(const Vec2& y, double t) const;
    /// d/dy_k of the basis.
    double d_dstate(const Vec2& y, double t, int k) const;
    bool time_only() const { return kind != Kind::LinearState; }
    bool singular_at_zero() const;
    /// Time scale of a fast initial transient (infinite if none).
    double transient_scale() const;
};

struct ForcingTerm {
    std::size_t coefficient = 0;  // index into RandomForcingModel::coefficients
    int component = 0;            // 0 = x_p, 1 = u_p
    Basis basis;
};

/// dy/dt = drift(y) + sum_i Xi_{c(i)} basis_i(y, t) e_{component(i)},
/// integrated from the deterministic state y0 at t0.
struct RandomForcingModel {
    int dim = 1;
    Drift drift;
    std::vector<XiDistribution> coefficients;
    std::vector<ForcingTerm> terms;
    double t0 = 0.0;
    Vec2 y0{};

    void validate() const;
    bool singular_at_zero() const;
    double transient_scale() const;
    bool time_only_forcing() const;
    bool linear_in_state() const;
};

using CanonicalModel = std::variant<PositionModel, VelocityModel, FhhsModel, RandomForcingModel>;

std::string_view model_name(const CanonicalModel& model);

/// Default start time for the position and velocity forcings, which are
/// singular at t = 0.
inline constexpr double kDefaultStartTime = 1e-6;

/// phi(t) = sqrt(D / 2t) for the position model.
double phi_position(const PositionModel& model, double t);

struct VelocityForcing {
    double varphi;  // forcing of the position equation
    double phi;     // forcing of the velocity equation
};

VelocityForcing phi_varphi_velocity(const VelocityModel& model, double t);

/// 2t - 3 + 4e^{-t} - e^{-2t}, accurate for small t.
double velocity_dispersion_factor(double t);

/// Standard deviations of X and U for the velocity model with a
/// deterministic start and unit-variance forcing.
double velocity_sigma_x(const VelocityModel& model, double t);
double velocity_sigma_u(const VelocityModel& model, double t);

/// Expresses a solved model in random-forcing form. The coefficient law is
/// `xi`; for the FHHS model it is the standardised shape and the basis
/// carries the sigma_xi factor.
RandomForcingModel to_forcing_model(const CanonicalModel& model, const XiDistribution& xi,
                                    double t0 = kDefaultStartTime);

}  // namespace liouville
