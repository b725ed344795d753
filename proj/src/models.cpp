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

#include "liouville/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "liouville/error.hpp"
#include "liouville/fhhs.hpp"

namespace liouville {

void PositionModel::validate() const {
    require(std::isfinite(u_p), ErrorKind::Parameter, "position model: u_p must be finite");
    // D = 0 is the deterministic limit; it is accepted for Langevin runs and
    // rejected by every operation that needs a density.
    require(std::isfinite(D) && D >= 0.0, ErrorKind::Parameter, "position model: need D >= 0");
}

void VelocityModel::validate() const {
    require(std::isfinite(tau_p) && tau_p > 0.0, ErrorKind::Parameter,
            "velocity model: need tau_p > 0");
    require(std::isfinite(D) && D >= 0.0, ErrorKind::Parameter, "velocity model: need D >= 0");
    require(std::isfinite(v0), ErrorKind::Parameter, "velocity model: v0 must be finite");
}

void FhhsModel::validate() const {
    require(std::isfinite(tau_p) && tau_p > 0.0, ErrorKind::Parameter, "fhhs: need tau_p > 0");
    require(std::isfinite(sigma_xi) && sigma_xi >= 0.0, ErrorKind::Parameter,
            "fhhs: need sigma_xi >= 0");
    require(std::isfinite(C1) && C1 > 0.0, ErrorKind::Parameter, "fhhs: need C1 > 0");
    require(std::isfinite(C2) && C2 >= 1.0, ErrorKind::Parameter, "fhhs: need C2 >= 1");
}

Drift Drift::affine(double a, double b) {
    Drift d;
    d.dim = 1;
    d.A = {a, 0.0, 0.0, 0.0};
    d.b = {b, 0.0};
    return d;
}

Drift Drift::affine(const Mat2& A, const Vec2& b) {
    Drift d;
    d.dim = 2;
    d.A = A;
    d.b = b;
    return d;
}

Drift Drift::cubic(double k) {
    Drift d;
    d.kind = Kind::Cubic;
    d.dim = 1;
    d.k = k;
    return d;
}

Drift Drift::named(std::string_view name, std::span<const double> p) {
    if (name == "affine") {
        if (p.size() == 2) return affine(p[0], p[1]);
        if (p.size() == 6) return affine(Mat2{p[0], p[1], p[2], p[3]}, Vec2{p[4], p[5]});
        fail(ErrorKind::Parameter, "affine drift: expected [a, b] or [a00, a01, a10, a11, b0, b1]");
    }
    if (name == "cubic") {
        require(p.size() == 1, ErrorKind::Parameter, "cubic drift: expected [k]");
        return cubic(p[0]);
    }
    fail(ErrorKind::Parameter, "unknown drift '" + std::string(name) + "'");
}

Vec2 Drift::eval(const Vec2& y) const {
    if (kind == Kind::Cubic) return {-k * y[0] * y[0] * y[0], 0.0};
    if (dim == 1) return {A[0] * y[0] + b[0], 0.0};
    return {A[0] * y[0] + A[1] * y[1] + b[0], A[2] * y[0] + A[3] * y[1] + b[1]};
}

Mat2 Drift::jacobian(const Vec2& y) const {
    if (kind == Kind::Cubic) return {-3.0 * k * y[0] * y[0], 0.0, 0.0, 0.0};
    if (dim == 1) return {A[0], 0.0, 0.0, 0.0};
    return A;
}

Basis Basis::named(std::string_view name, std::span<const double> p) {
    struct Entry {
        std::string_view name;
        Kind kind;
        std::size_t nparams;  // 0 = variable length
    };
    static constexpr Entry registry[] = {
        {"constant", Kind::Constant, 1},
        {"power", Kind::Power, 2},
        {"exp", Kind::Exponential, 2},
        {"position_sqrt", Kind::PositionSqrt, 1},
        {"velocity_varphi", Kind::VelocityVarphi, 2},
        {"velocity_phi", Kind::VelocityPhi, 1},
        {"fhhs_phi", Kind::FhhsPhi, 4},
        {"table", Kind::Table, 0},
        {"linear_state", Kind::LinearState, 2},
    };
    for (const auto& e : registry) {
        if (e.name != name) continue;
        if (e.nparams) {
            require(p.size() == e.nparams, ErrorKind::Parameter,
                    "basis '" + std::string(name) + "': expected " + std::to_string(e.nparams) +
                        " parameters");
        }
        Basis b{e.kind, std::vector<double>(p.begin(), p.end())};
        for (double v : b.params)
            require(std::isfinite(v), ErrorKind::Parameter, "basis parameters must be finite");
        if (e.kind == Kind::Table) {
            require(p.size() >= 4 && p.size() % 2 == 0, ErrorKind::Parameter,
                    "table basis: expected flattened (t, value) pairs");
            for (std::size_t i = 2; i < p.size(); i += 2)
                require(p[i] > p[i - 2], ErrorKind::Parameter, "table basis: times must increase");
        }
        if (e.kind == Kind::LinearState)
            require(b.params[1] == 0.0 || b.params[1] == 1.0, ErrorKind::Parameter,
                    "linear_state basis: component must be 0 or 1");
        if (e.kind == Kind::PositionSqrt || e.kind == Kind::VelocityPhi)
            require(b.params[0] >= 0.0, ErrorKind::Parameter, "basis: D must be >= 0");
        return b;
    }
    fail(ErrorKind::Parameter, "unknown basis '" + std::string(name) + "'");
}

std::string_view Basis::name() const {
    switch (kind) {
        case Kind::Constant: return "constant";
        case Kind::Power: return "power";
        case Kind::Exponential: return "exp";
        case Kind::PositionSqrt: return "position_sqrt";
        case Kind::VelocityVarphi: return "velocity_varphi";
        case Kind::VelocityPhi: return "velocity_phi";
        case Kind::FhhsPhi: return "fhhs_phi";
        case Kind::Table: return "table";
        case Kind::LinearState: return "linear_state";
    }
    return "unknown";
}

double Basis::eval(const Vec2& y, double t) const {
    switch (kind) {
        case Kind::Constant: return params[0];
        case Kind::Power: return params[0] * std::pow(t, params[1]);
        case Kind::Exponential: return params[0] * std::exp(params[1] * t);
        case Kind::PositionSqrt: return std::sqrt(params[0] / (2.0 * t));
        case Kind::VelocityVarphi:
            return phi_varphi_velocity(VelocityModel{params[0], params[1], 0.0}, t).varphi;
        case Kind::VelocityPhi: return std::sqrt(params[0] / -std::expm1(-2.0 * t));
        case Kind::FhhsPhi: {
            FhhsModel m;
            m.tau_p = params[0];
            m.C1 = params[1];
            m.C2 = params[2];
            return params[3] * phi_fhhs(m, t);
        }
        case Kind::Table: {
            const std::size_t n = params.size() / 2;
            if (t <= params[0]) return params[1];
            if (t >= params[2 * (n - 1)]) return params[2 * n - 1];
            std::size_t k = 0;
            while (params[2 * (k + 1)] < t) ++k;
            const double w = (t - params[2 * k]) / (params[2 * k + 2] - params[2 * k]);
            return params[2 * k + 1] + w * (params[2 * k + 3] - params[2 * k + 1]);
        }
        case Kind::LinearState: return params[0] * y[static_cast<int>(params[1])];
    }
    return 0.0;
}

double Basis::d_dstate(const Vec2&, double, int k) const {
    if (kind == Kind::LinearState && static_cast<int>(params[1]) == k) return params[0];
    return 0.0;
}

bool Basis::singular_at_zero() const {
    switch (kind) {
        case Kind::Power: return params[1] < 0.0;
        case Kind::PositionSqrt:
        case Kind::VelocityPhi: return params[0] > 0.0;
        case Kind::VelocityVarphi: return true;
        case Kind::FhhsPhi: return params[2] < 1.0;
        default: return false;
    }
}

double Basis::transient_scale() const {
    if (kind == Kind::FhhsPhi) return params[0] / params[1];
    if (kind == Kind::Exponential && params[1] < 0.0) return -1.0 / params[1];
    return std::numeric_limits<double>::infinity();
}

void RandomForcingModel::validate() const {
    require(dim == 1 || dim == 2, ErrorKind::Parameter, "forcing model: dim must be 1 or 2");
    require(drift.dim == dim, ErrorKind::Parameter, "forcing model: drift dimension mismatch");
    require(!terms.empty(), ErrorKind::Parameter, "forcing model: need at least one term");
    require(!coefficients.empty(), ErrorKind::Parameter, "forcing model: need a coefficient law");
    for (const auto& term : terms) {
        require(term.coefficient < coefficients.size(), ErrorKind::Parameter,
                "forcing model: term refers to a missing coefficient");
        require(term.component >= 0 && term.component < dim, ErrorKind::Parameter,
                "forcing model: term component out of range");
        if (term.basis.kind == Basis::Kind::LinearState)
            require(static_cast<int>(term.basis.params[1]) < dim, ErrorKind::Parameter,
                    "forcing model: linear_state basis refers to a missing component");
    }
    require(std::isfinite(t0) && t0 >= 0.0, ErrorKind::Parameter, "forcing model: need t0 >= 0");
    require(!singular_at_zero() || t0 > 0.0, ErrorKind::Parameter,
            "forcing model: a basis is singular at t = 0, so t0 must be > 0");
    require(std::isfinite(y0[0]) && std::isfinite(y0[1]), ErrorKind::Parameter,
            "forcing model: y0 must be finite");
}

bool RandomForcingModel::singular_at_zero() const {
    return std::any_of(terms.begin(), terms.end(),
                       [](const ForcingTerm& t) { return t.basis.singular_at_zero(); });
}

double RandomForcingModel::transient_scale() const {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& t : terms) s = std::min(s, t.basis.transient_scale());
    return s;
}

bool RandomForcingModel::time_only_forcing() const {
    return std::all_of(terms.begin(), terms.end(),
                       [](const ForcingTerm& t) { return t.basis.time_only(); });
}

bool RandomForcingModel::linear_in_state() const { return drift.linear() && time_only_forcing(); }

std::string_view model_name(const CanonicalModel& model) {
    struct Visitor {
        std::string_view operator()(const PositionModel&) const { return "position"; }
        std::string_view operator()(const VelocityModel&) const { return "velocity"; }
        std::string_view operator()(const FhhsModel&) const { return "fhhs"; }
        std::string_view operator()(const RandomForcingModel&) const { return "forcing"; }
    };
    return std::visit(Visitor{}, model);
}

double phi_position(const PositionModel& model, double t) {
    require(t > 0.0, ErrorKind::Domain, "phi_position: t must be > 0 (forcing singular at 0)");
    return std::sqrt(model.D / (2.0 * t));
}

double velocity_dispersion_factor(double t) {
    if (t < 0.5) {
        // sum_{n>=3} (-1)^n (4 - 2^n) t^n / n!
        double term = 1.0;  // t^n / n!
        double pow2 = 1.0;
        double sum = 0.0;
        for (int n = 1; n <= 40; ++n) {
            term *= t / n;
            pow2 *= 2.0;
            if (n < 3) continue;
            const double c = (n % 2 ? -1.0 : 1.0) * (4.0 - pow2) * term;
            sum += c;
            if (std::fabs(c) < 1e-18 * std::fabs(sum)) break;
        }
        return sum;
    }
    return 2.0 * t - 3.0 + 4.0 * std::exp(-t) - std::exp(-2.0 * t);
}

double velocity_sigma_x(const VelocityModel& m, double t) {
    require(t >= 0.0, ErrorKind::Domain, "velocity_sigma_x: t must be >= 0");
    return m.tau_p * std::sqrt(m.D * velocity_dispersion_factor(t));
}

double velocity_sigma_u(const VelocityModel& m, double t) {
    require(t >= 0.0, ErrorKind::Domain, "velocity_sigma_u: t must be >= 0");
    return std::sqrt(m.D * -std::expm1(-2.0 * t));
}

VelocityForcing phi_varphi_velocity(const VelocityModel& m, double t) {
    require(t > 0.0, ErrorKind::Domain, "phi_varphi_velocity: t must be > 0");
    const double one_minus_e2 = -std::expm1(-2.0 * t);
    const double one_minus_e1 = -std::expm1(-t);
    const double g = velocity_dispersion_factor(t);
    const double sqrt_d = std::sqrt(m.D);
    // d sigma_X / dt - tau_p sigma_U
    const double varphi =
        m.tau_p * sqrt_d * (one_minus_e1 * one_minus_e1 / std::sqrt(g) - std::sqrt(one_minus_e2));
    // d sigma_U / dt + sigma_U
    const double phi = std::sqrt(m.D / one_minus_e2);
    return {varphi, phi};
}

RandomForcingModel to_forcing_model(const CanonicalModel& model, const XiDistribution& xi,
                                    double t0) {
    struct Visitor {
        const XiDistribution& xi;
        double t0;

        RandomForcingModel operator()(const PositionModel& m) const {
            m.validate();
            RandomForcingModel f;
            f.dim = 1;
            f.drift = Drift::affine(0.0, m.u_p);
            f.coefficients = {xi};
            const double d[] = {m.D};
            f.terms = {{0, 0, Basis::named("position_sqrt", d)}};
            f.t0 = t0;
            return f;
        }
        RandomForcingModel operator()(const VelocityModel& m) const {
            m.validate();
            RandomForcingModel f;
            f.dim = 2;
            f.drift = Drift::affine(Mat2{0.0, m.tau_p, 0.0, -1.0}, Vec2{0.0, 0.0});
            f.coefficients = {xi};
            const double pv[] = {m.tau_p, m.D};
            const double pu[] = {m.D};
            f.terms = {{0, 0, Basis::named("velocity_varphi", pv)},
                       {0, 1, Basis::named("velocity_phi", pu)}};
            f.t0 = t0;
            f.y0 = {0.0, m.v0};
            return f;
        }
        RandomForcingModel operator()(const FhhsModel& m) const {
            m.validate();
            RandomForcingModel f;
            f.dim = 1;
            f.drift = Drift::affine(-1.0 / m.tau_p, 0.0);
            f.coefficients = {xi};
            const double p[] = {m.tau_p, m.C1, m.C2, m.sigma_xi};
            f.terms = {{0, 0, Basis::named("fhhs_phi", p)}};
            // bounded forcing for C2 >= 1: start at the release time
            f.t0 = 0.0;
            return f;
        }
        RandomForcingModel operator()(const RandomForcingModel& m) const {
            m.validate();
            return m;
        }
    };
    return std::visit(Visitor{xi, t0}, model);
}

}  // namespace liouville
