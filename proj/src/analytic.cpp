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

#include "liouville/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "liouville/error.hpp"
#include "liouville/fhhs.hpp"
#include "liouville/io.hpp"

namespace liouville {

namespace {

double position_scale(const PositionModel& m, double t) {
    m.validate();
    require(t > 0.0, ErrorKind::Domain, "position model: t must be > 0");
    require(m.D > 0.0, ErrorKind::Domain, "position model: the density needs D > 0");
    return std::sqrt(2.0 * m.D * t);
}

struct Affine {
    double a;
    double b;
};

Affine velocity_x_map(const VelocityModel& m, double t) {
    m.validate();
    require(t > 0.0, ErrorKind::Domain, "velocity model: t must be > 0");
    require(m.D > 0.0, ErrorKind::Domain, "velocity model: the density needs D > 0");
    return {m.tau_p * m.v0 * -std::expm1(-t), velocity_sigma_x(m, t)};
}

Affine velocity_u_map(const VelocityModel& m, double t) {
    m.validate();
    require(t > 0.0, ErrorKind::Domain, "velocity model: t must be > 0");
    require(m.D > 0.0, ErrorKind::Domain, "velocity model: the density needs D > 0");
    return {m.v0 * std::exp(-t), velocity_sigma_u(m, t)};
}

Affine fhhs_map(const FhhsModel& m, double t) {
    m.validate();
    require(t > 0.0, ErrorKind::Domain, "fhhs: t = 0 is a delta at u = 0 and has no density");
    const double s = m.sigma_xi * fhhs_eta(m, t);
    require(s > 0.0, ErrorKind::Domain, "fhhs: zero spread (delta density)");
    return {0.0, s};
}

PdfCurve affine_curve(const Affine& map, const XiDistribution& dist, std::span<const double> grid,
                      const std::string& model, double t, const std::string& variable) {
    PdfCurve c;
    if (grid.empty()) {
        // nodes generated in xi so that bounded supports are hit exactly
        const auto y = affine_grid(map.a, map.b, dist);
        const auto xi = affine_grid(0.0, 1.0, dist);
        c.coords = y;
        c.density.resize(xi.size());
        const bool flip = map.b < 0.0;
        for (std::size_t i = 0; i < xi.size(); ++i)
            c.density[i] = dist.density(xi[flip ? xi.size() - 1 - i : i]) / std::fabs(map.b);
    } else {
        c = sample_curve(grid, [&](double y) { return dist.density((y - map.a) / map.b) / std::fabs(map.b); });
    }
    c.set_meta("model", model);
    c.set_meta("t", format_number(t));
    c.set_meta("variable", variable);
    c.set_meta("xi", dist.describe());
    c.set_meta("method", "analytic");
    return c;
}

}  // namespace

double position_pdf(const PositionModel& model, const XiDistribution& dist, double x, double t) {
    const double s = position_scale(model, t);
    return dist.density((x - model.u_p * t) / s) / s;
}

double position_cdf(const PositionModel& model, const XiDistribution& dist, double x, double t) {
    const double s = position_scale(model, t);
    return dist.cdf((x - model.u_p * t) / s);
}

double heat_kernel(const PositionModel& model, double x, double t) {
    model.validate();
    require(t > 0.0 && model.D > 0.0, ErrorKind::Domain, "heat_kernel: need t > 0 and D > 0");
    const double d = x - model.u_p * t;
    return std::exp(-d * d / (4.0 * model.D * t)) / std::sqrt(4.0 * std::numbers::pi * model.D * t);
}

double position_central_moment(const PositionModel& model, const XiDistribution& dist, int order,
                               double t) {
    model.validate();
    require(t >= 0.0, ErrorKind::Domain, "position_central_moment: t must be >= 0");
    require(order >= 2, ErrorKind::Domain, "position_central_moment: order must be >= 2");
    return dist.central_moment(order) * std::pow(2.0 * model.D * t, 0.5 * order);
}

double velocity_pdf_x(const VelocityModel& model, const XiDistribution& dist, double x, double t) {
    const auto [a, b] = velocity_x_map(model, t);
    return dist.density((x - a) / b) / b;
}

double velocity_pdf_u(const VelocityModel& model, const XiDistribution& dist, double u, double t) {
    const auto [a, b] = velocity_u_map(model, t);
    return dist.density((u - a) / b) / b;
}

double velocity_cdf_x(const VelocityModel& model, const XiDistribution& dist, double x, double t) {
    const auto [a, b] = velocity_x_map(model, t);
    return dist.cdf((x - a) / b);
}

double velocity_cdf_u(const VelocityModel& model, const XiDistribution& dist, double u, double t) {
    const auto [a, b] = velocity_u_map(model, t);
    return dist.cdf((u - a) / b);
}

std::vector<double> affine_grid(double a, double b, const XiDistribution& dist, std::size_t n) {
    require(b != 0.0 && std::isfinite(b), ErrorKind::Domain, "affine_grid: zero scale");
    double lo, hi;
    if (dist.bounded()) {
        std::tie(lo, hi) = dist.support();
    } else {
        lo = dist.mean() - 8.0 * dist.stddev();
        hi = dist.mean() + 8.0 * dist.stddev();
    }
    double y0 = a + b * lo, y1 = a + b * hi;
    if (y0 > y1) std::swap(y0, y1);
    return uniform_grid(y0, y1, n);
}

PdfCurve position_pdf_curve(const PositionModel& model, const XiDistribution& dist, double t,
                            std::span<const double> grid) {
    const double s = position_scale(model, t);
    return affine_curve({model.u_p * t, s}, dist, grid, "position", t, "x");
}

VelocityMarginals velocity_model_pdfs(const VelocityModel& model, const XiDistribution& dist,
                                      double t, std::span<const double> grid_x,
                                      std::span<const double> grid_u) {
    return {affine_curve(velocity_x_map(model, t), dist, grid_x, "velocity", t, "x"),
            affine_curve(velocity_u_map(model, t), dist, grid_u, "velocity", t, "u")};
}

PdfCurve fhhs_pdf_curve(const FhhsModel& model, const XiDistribution& shape, double t,
                        std::span<const double> grid) {
    return affine_curve(fhhs_map(model, t), shape, grid, "fhhs", t, "u");
}

namespace {

Affine component_map(const CanonicalModel& model, int component, double t) {
    if (const auto* m = std::get_if<PositionModel>(&model)) {
        require(component == 0, ErrorKind::Domain, "position model has one component");
        return {m->u_p * t, position_scale(*m, t)};
    }
    if (const auto* m = std::get_if<VelocityModel>(&model)) {
        require(component == 0 || component == 1, ErrorKind::Domain,
                "velocity model has two components");
        return component == 0 ? velocity_x_map(*m, t) : velocity_u_map(*m, t);
    }
    if (const auto* m = std::get_if<FhhsModel>(&model)) {
        require(component == 0, ErrorKind::Domain, "fhhs model has one component");
        return fhhs_map(*m, t);
    }
    fail(ErrorKind::Unsupported, "no closed-form density for a generic forcing model");
}

}  // namespace

double model_cdf(const CanonicalModel& model, const XiDistribution& dist, int component, double y,
                 double t) {
    const auto [a, b] = component_map(model, component, t);
    return dist.cdf((y - a) / b);
}

double model_pdf(const CanonicalModel& model, const XiDistribution& dist, int component, double y,
                 double t) {
    const auto [a, b] = component_map(model, component, t);
    return dist.density((y - a) / b) / b;
}

void MomentSeries::check(double tol) const {
    const auto ok_var = [&](double v) { return std::isnan(v) || v >= -tol; };
    const auto ok_cov = [&](double c, double va, double vb) {
        if (std::isnan(c) || std::isnan(va) || std::isnan(vb)) return true;
        return std::fabs(c) <= std::sqrt(std::max(va, 0.0) * std::max(vb, 0.0)) + tol;
    };
    for (const auto& r : records) {
        require(ok_var(r.var_x) && ok_var(r.var_u) && ok_var(r.var_xi), ErrorKind::Domain,
                "moment series: negative variance at t = " + std::to_string(r.t));
        require(ok_cov(r.cov_xu, r.var_x, r.var_u) && ok_cov(r.cov_xi_x, r.var_xi, r.var_x) &&
                    ok_cov(r.cov_xi_u, r.var_xi, r.var_u),
                ErrorKind::Domain, "moment series: Cauchy-Schwarz violated at t = " + std::to_string(r.t));
    }
}

double taylor_position_variance(const VelocityModel& model, double t) {
    model.validate();
    require(t >= 0.0, ErrorKind::Domain, "taylor_position_variance: t must be >= 0");
    double h;  // t - 1 + e^{-t}
    if (t < 0.1) {
        double term = t;  // t^n / n!
        h = 0.0;
        for (int n = 2; n <= 30; ++n) {
            term *= t / n;
            h += (n % 2 ? -1.0 : 1.0) * term;
        }
    } else {
        h = t + std::expm1(-t);
    }
    return 2.0 * model.tau_p * model.tau_p * model.D * h;
}

MomentRecord velocity_model_moments(const VelocityModel& model, double t, VelocityInit init,
                                    const XiDistribution& dist) {
    model.validate();
    require(t >= 0.0, ErrorKind::Domain, "velocity_model_moments: t must be >= 0");
    const double sx = velocity_sigma_x(model, t);
    const double su = velocity_sigma_u(model, t);
    const double mu = dist.mean();
    const double s2 = dist.variance();
    const double e = std::exp(-t);
    const double one_minus_e = -std::expm1(-t);
    MomentRecord r;
    r.t = t;
    r.mean_x = model.tau_p * model.v0 * one_minus_e + mu * sx;
    r.mean_u = model.v0 * e + mu * su;
    r.var_x = s2 * sx * sx;
    r.var_u = s2 * su * su;
    // single coefficient: Xi, X and U are perfectly correlated
    r.cov_xu = s2 * sx * su;
    r.cov_xi_x = s2 * sx;
    r.cov_xi_u = s2 * su;
    r.var_xi = s2;
    if (init == VelocityInit::Maxwellian) {
        // U(0) - v0 ~ N(0, D), independent of Xi
        const double tu = model.tau_p * one_minus_e;
        r.var_x += model.D * tu * tu;
        r.var_u += model.D * e * e;
        r.cov_xu += model.D * tu * e;
    }
    return r;
}

MomentRecord position_moments(const PositionModel& model, const XiDistribution& dist, double t) {
    model.validate();
    require(t >= 0.0, ErrorKind::Domain, "position_moments: t must be >= 0");
    const double s = std::sqrt(2.0 * model.D * t);
    MomentRecord r;
    r.t = t;
    r.mean_x = model.u_p * t + dist.mean() * s;
    r.var_x = dist.variance() * s * s;
    r.cov_xi_x = dist.variance() * s;
    r.var_xi = dist.variance();
    return r;
}

MomentRecord fhhs_moments(const FhhsModel& model, double t, const XiDistribution& shape) {
    model.validate();
    const double eta = fhhs_eta(model, t);
    const double sigma = model.sigma_xi;
    MomentRecord r;
    r.t = t;
    r.mean_u = sigma * eta * shape.mean();
    r.var_u = sigma * sigma * eta * eta * shape.variance();
    r.cov_xi_u = sigma * sigma * eta * shape.variance();
    r.var_xi = sigma * sigma * shape.variance();
    return r;
}

}  // namespace liouville
