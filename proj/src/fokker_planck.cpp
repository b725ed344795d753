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

#include "liouville/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "liouville/analytic.hpp"
#include "liouville/error.hpp"
#include "liouville/fhhs.hpp"

namespace liouville {

namespace {

struct Tridiagonal {
    std::vector<double> lower, diag, upper;
};

// Finite-volume operator L with (L f)_i = (F_{i-1/2} - F_{i+1/2}) / w_i.
Tridiagonal assemble(const FpProblem& p, const std::vector<double>& x, double dx, double t) {
    const std::size_t n = x.size();
    Tridiagonal L{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                  std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double xf = 0.5 * (x[i] + x[i + 1]);
        const double a = p.drift(xf, t);
        const double D = p.diffusion(xf, t);
        require(D >= 0.0 && std::isfinite(D) && std::isfinite(a), ErrorKind::Domain,
                "solve_fp: need finite a and D >= 0 at x = " + std::to_string(xf));
        const double alpha = 0.5 * a + D / dx;
        const double beta = 0.5 * a - D / dx;
        const double w_left = i == 0 ? 0.5 * dx : dx;
        const double w_right = i + 2 == n ? 0.5 * dx : dx;
        // face flux alpha f_i + beta f_{i+1}, leaving cell i and entering i+1
        L.diag[i] -= alpha / w_left;
        L.upper[i] -= beta / w_left;
        L.lower[i + 1] += alpha / w_right;
        L.diag[i + 1] += beta / w_right;
    }
    return L;
}

void thomas(const std::vector<double>& a, std::vector<double> b, std::vector<double> c,
            std::vector<double>& d) {
    const std::size_t n = d.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        d[i] -= m * d[i - 1];
    }
    d[n - 1] /= b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

double trapezoid_mass(const std::vector<double>& f, double dx) {
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * dx;
}

}  // namespace

FpResult solve_fp(const FpProblem& p, std::span<const double> snapshot_times, double dt) {
    require(static_cast<bool>(p.drift) && static_cast<bool>(p.diffusion), ErrorKind::Domain,
            "solve_fp: drift and diffusion fields are required");
    require(p.n >= 3 && p.hi > p.lo, ErrorKind::Domain, "solve_fp: need n >= 3 and hi > lo");
    require(dt > 0.0, ErrorKind::Domain, "solve_fp: dt must be > 0");
    require(!p.initial.coords.empty(), ErrorKind::Domain, "solve_fp: missing initial density");
    const std::vector<double> x = p.grid();
    const std::size_t n = x.size();
    const double dx = (p.hi - p.lo) / static_cast<double>(n - 1);

    std::vector<double> f(n);
    const bool same_grid =
        p.initial.kind == PdfCurve::Kind::Sampled && p.initial.size() == n &&
        std::fabs(p.initial.coords.front() - p.lo) <= 1e-12 * (1.0 + std::fabs(p.lo)) &&
        std::fabs(p.initial.coords.back() - p.hi) <= 1e-12 * (1.0 + std::fabs(p.hi));
    for (std::size_t i = 0; i < n; ++i) f[i] = same_grid ? p.initial.density[i] : p.initial.at(x[i]);
    const double mass0 = trapezoid_mass(f, dx);
    require(std::fabs(mass0 - 1.0) <= 1e-9, ErrorKind::Domain,
            "solve_fp: initial density has mass " + std::to_string(mass0) + ", expected 1");

    FpResult result;
    result.min_density = *std::min_element(f.begin(), f.end());
    double t = p.t0;
    Tridiagonal L0 = assemble(p, x, dx, t);
    std::vector<double> rhs(n), a(n), b(n), c(n);
    for (double target : snapshot_times) {
        require(target >= t, ErrorKind::Domain, "solve_fp: snapshot times must increase from t0");
        const double span = target - t;
        const auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
        for (std::size_t k = 0; k < steps; ++k) {
            const double t1 = k + 1 == steps ? target : t + span / static_cast<double>(steps);
            const double h = t1 - t;
            const Tridiagonal L1 = assemble(p, x, dx, t1);
            for (std::size_t i = 0; i < n; ++i) {
                double r = f[i] + 0.5 * h * L0.diag[i] * f[i];
                if (i > 0) r += 0.5 * h * L0.lower[i] * f[i - 1];
                if (i + 1 < n) r += 0.5 * h * L0.upper[i] * f[i + 1];
                rhs[i] = r;
                a[i] = -0.5 * h * L1.lower[i];
                b[i] = 1.0 - 0.5 * h * L1.diag[i];
                c[i] = -0.5 * h * L1.upper[i];
            }
            thomas(a, b, c, rhs);
            f.swap(rhs);
            L0 = L1;
            t = t1;
            ++result.steps;

            const double lowest = *std::min_element(f.begin(), f.end());
            result.min_density = std::min(result.min_density, lowest);
            if (!(lowest >= -1e-10))
                fail(ErrorKind::SchemeFailure, "solve_fp: density " + std::to_string(lowest) +
                                                   " below -1e-10 at t = " + std::to_string(t));
            const double drift = std::fabs(trapezoid_mass(f, dx) - mass0) / mass0;
            result.max_mass_drift = std::max(result.max_mass_drift, drift);
            if (!(drift <= 1e-4))
                fail(ErrorKind::Conservation,
                     "solve_fp: relative mass drift " + std::to_string(drift) + " at t = " + std::to_string(t));
        }
        PdfCurve snap;
        snap.coords = x;
        snap.density = f;
        snap.set_meta("t", std::to_string(target));
        snap.set_meta("method", "fokker_planck");
        result.snapshots.push_back(std::move(snap));
    }
    return result;
}

PdfCurve solve_fp(const FpProblem& problem, double t_end, double dt) {
    const double times[] = {t_end};
    return std::move(solve_fp(problem, times, dt).snapshots.front());
}

Field fp_drift_named(std::string_view name, std::span<const double> p) {
    const auto need = [&](std::size_t k) {
        require(p.size() == k, ErrorKind::Parameter,
                "fp drift '" + std::string(name) + "': expected " + std::to_string(k) + " parameters");
    };
    if (name == "constant") {
        need(1);
        const double a = p[0];
        return [a](double, double) { return a; };
    }
    if (name == "linear") {
        need(2);
        const double a0 = p[0], a1 = p[1];
        return [a0, a1](double x, double) { return a0 + a1 * x; };
    }
    if (name == "relaxation") {
        need(1);
        require(p[0] > 0.0, ErrorKind::Parameter, "fp drift 'relaxation': tau must be > 0");
        const double tau = p[0];
        return [tau](double x, double) { return -x / tau; };
    }
    fail(ErrorKind::Parameter, "unknown fp drift '" + std::string(name) + "'");
}

Field fp_diffusion_named(std::string_view name, std::span<const double> p) {
    if (name == "constant") {
        require(p.size() == 1 && p[0] >= 0.0, ErrorKind::Parameter,
                "fp diffusion 'constant': expected [D] with D >= 0");
        const double D = p[0];
        return [D](double, double) { return D; };
    }
    if (name == "fhhs") {
        require(p.size() == 4, ErrorKind::Parameter,
                "fp diffusion 'fhhs': expected [tau_p, sigma_xi, C1, C2]");
        FhhsModel m;
        m.tau_p = p[0];
        m.sigma_xi = p[1];
        m.C1 = p[2];
        m.C2 = p[3];
        m.validate();
        return [m](double, double t) { return diffusion_of_time(m, t); };
    }
    fail(ErrorKind::Parameter, "unknown fp diffusion '" + std::string(name) + "'");
}

namespace {

struct Gaussian {
    double mean;
    double sd;
};

Gaussian reference_gaussian(const CanonicalModel& model, double t) {
    if (const auto* m = std::get_if<PositionModel>(&model))
        return {m->u_p * t, std::sqrt(2.0 * m->D * t)};
    if (const auto* m = std::get_if<VelocityModel>(&model))
        return {m->v0 * std::exp(-t), velocity_sigma_u(*m, t)};
    if (const auto* m = std::get_if<FhhsModel>(&model))
        return {0.0, m->sigma_xi * fhhs_eta(*m, t)};
    fail(ErrorKind::Unsupported, "no reference Fokker-Planck marginal for a generic forcing model");
}

}  // namespace

double fp_reference_density(const CanonicalModel& model, double x, double t) {
    const auto [mean, sd] = reference_gaussian(model, t);
    require(sd > 0.0, ErrorKind::Domain, "fp_reference_density: zero spread");
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

FpProblem fp_problem_for(const CanonicalModel& model, double t0, double t_end, std::size_t n) {
    require(t0 > 0.0 && t_end > t0, ErrorKind::Domain, "fp_problem_for: need 0 < t0 < t_end");
    FpProblem p;
    p.n = n;
    p.t0 = t0;
    if (const auto* m = std::get_if<PositionModel>(&model)) {
        m->validate();
        const double a[] = {m->u_p}, d[] = {m->D};
        p.drift = fp_drift_named("constant", a);
        p.diffusion = fp_diffusion_named("constant", d);
    } else if (const auto* m = std::get_if<VelocityModel>(&model)) {
        m->validate();
        const double a[] = {0.0, -1.0}, d[] = {m->D};
        p.drift = fp_drift_named("linear", a);
        p.diffusion = fp_diffusion_named("constant", d);
    } else if (const auto* m = std::get_if<FhhsModel>(&model)) {
        m->validate();
        const double a[] = {m->tau_p}, d[] = {m->tau_p, m->sigma_xi, m->C1, m->C2};
        p.drift = fp_drift_named("relaxation", a);
        p.diffusion = fp_diffusion_named("fhhs", d);
    } else {
        fail(ErrorKind::Unsupported, "fp_problem_for: generic forcing models need an explicit problem");
    }
    // window: extreme means +- 10 of the largest spread on [t0, t_end]
    double lo = 1e300, hi = -1e300, sd_max = 0.0;
    for (int k = 0; k <= 200; ++k) {
        const double t = t0 + (t_end - t0) * k / 200.0;
        const auto [mean, sd] = reference_gaussian(model, t);
        lo = std::min(lo, mean);
        hi = std::max(hi, mean);
        sd_max = std::max(sd_max, sd);
    }
    require(sd_max > 0.0, ErrorKind::Domain, "fp_problem_for: zero spread");
    p.lo = lo - 10.0 * sd_max;
    p.hi = hi + 10.0 * sd_max;
    p.initial = sample_curve(p.grid(), [&](double x) { return fp_reference_density(model, x, t0); });
    return p;
}

double DeltaJoint::marginal(double y) const { return law.density((y - center) / scale) / scale; }

double DeltaJoint::xi_flux(double y) const {
    const double xi = (y - center) / scale;
    return forcing * xi * law.density(xi) / scale;
}

DeltaJoint delta_joint(const CanonicalModel& model, const XiDistribution& dist, double t,
                       int component) {
    require(t > 0.0, ErrorKind::Domain, "delta_joint: t must be > 0");
    DeltaJoint j;
    j.law = dist;
    if (const auto* m = std::get_if<PositionModel>(&model)) {
        require(component == 0, ErrorKind::Domain, "delta_joint: position model has one component");
        j.center = m->u_p * t;
        j.scale = std::sqrt(2.0 * m->D * t);
        j.forcing = phi_position(*m, t);
    } else if (const auto* m = std::get_if<VelocityModel>(&model)) {
        require(component == 1, ErrorKind::Unsupported,
                "delta_joint: only the velocity marginal of the velocity model is supported");
        j.center = m->v0 * std::exp(-t);
        j.scale = velocity_sigma_u(*m, t);
        j.forcing = phi_varphi_velocity(*m, t).phi;
    } else if (const auto* m = std::get_if<FhhsModel>(&model)) {
        require(component == 0, ErrorKind::Domain, "delta_joint: fhhs model has one component");
        j.center = 0.0;
        j.scale = m->sigma_xi * fhhs_eta(*m, t);
        j.forcing = m->sigma_xi * phi_fhhs(*m, t);
    } else {
        fail(ErrorKind::Unsupported, "delta_joint: generic forcing models are not supported");
    }
    require(j.scale > 0.0, ErrorKind::Domain, "delta_joint: zero spread");
    return j;
}

double matched_diffusion(const CanonicalModel& model, double t) {
    if (const auto* m = std::get_if<PositionModel>(&model)) return m->D;
    if (const auto* m = std::get_if<VelocityModel>(&model)) return m->D;
    if (const auto* m = std::get_if<FhhsModel>(&model)) return diffusion_of_time(*m, t);
    fail(ErrorKind::Unsupported, "matched_diffusion: generic forcing models are not supported");
}

double compatibility_residual(const DeltaJoint& joint, const std::function<double(double)>& D_field,
                              std::span<const double> grid) {
    const double h = 1e-3 * joint.scale;
    const auto flux = [&](double y) {
        const double df = (joint.marginal(y + h) - joint.marginal(y - h)) / (2.0 * h);
        return D_field(y) * df + joint.xi_flux(y);
    };
    double worst = 0.0;
    for (double y : grid) worst = std::max(worst, std::fabs((flux(y + h) - flux(y - h)) / (2.0 * h)));
    return worst;
}

}  // namespace liouville
