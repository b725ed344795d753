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

#include "liouville/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "liouville/error.hpp"
#include "liouville/fhhs.hpp"
#include "liouville/parallel.hpp"

namespace liouville {

std::vector<double> step_schedule(double lo, double hi, double dt, bool graded, double transient) {
    require(dt > 0.0 && std::isfinite(dt), ErrorKind::Domain, "step_schedule: dt must be > 0");
    require(std::isfinite(lo) && std::isfinite(hi), ErrorKind::Domain,
            "step_schedule: non-finite time window");
    require(!graded || lo > 0.0, ErrorKind::Domain,
            "step_schedule: forcing is singular at t = 0; start at t0 > 0");
    std::vector<double> times{lo};
    double t = lo;
    while (t < hi) {
        double h = graded ? std::min(dt, 0.01 * t) : dt;
        // geometric grading through a fast transient, which may start with a
        // fractional power of t
        if (t < 40.0 * transient)
            h = std::min(h, 0.05 * std::clamp(t, 1e-6 * transient, transient));
        if (t + h >= hi - 1e-3 * h) {
            t = hi;
        } else {
            t += h;
        }
        times.push_back(t);
    }
    return times;
}

namespace {

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

double det(const Mat2& m, int dim) { return dim == 1 ? m[0] : m[0] * m[3] - m[1] * m[2]; }

std::vector<double> padded_xi(const RandomForcingModel& m, std::span<const double> xi) {
    require(xi.size() <= m.coefficients.size(), ErrorKind::Domain,
            "characteristics: more coefficient values than coefficients");
    std::vector<double> out(m.coefficients.size(), 0.0);
    std::copy(xi.begin(), xi.end(), out.begin());
    return out;
}

RandomForcingModel forcing_of(const CanonicalModel& model, const XiDistribution& dist) {
    return to_forcing_model(model, dist, start_time(model));
}

}  // namespace

struct CharacteristicFlow::Deriv {
    Vec2 dy{};
    double dL = 0.0;
    Mat2 dM{};
};

CharacteristicFlow::CharacteristicFlow(RandomForcingModel model, double t_from, double t_to,
                                       double dt)
    : model_(std::move(model)) {
    const double lo = std::min(t_from, t_to), hi = std::max(t_from, t_to);
    times_ = step_schedule(lo, hi, dt, model_.singular_at_zero(), model_.transient_scale());
    if (t_to < t_from) std::reverse(times_.begin(), times_.end());
    if (model_.time_only_forcing()) {
        const std::size_t nt = model_.terms.size();
        cache_.resize(steps() * 3 * nt);
        for (std::size_t k = 0; k < steps(); ++k) {
            const double t0 = times_[k], t1 = times_[k + 1];
            const double stage_t[3] = {t0, 0.5 * (t0 + t1), t1};
            for (int s = 0; s < 3; ++s)
                for (std::size_t i = 0; i < nt; ++i)
                    cache_[(k * 3 + s) * nt + i] = model_.terms[i].basis.eval(Vec2{}, stage_t[s]);
        }
    }
}

CharacteristicFlow::Deriv CharacteristicFlow::rhs(const Vec2& y, double t, std::size_t step,
                                                  int stage, std::span<const double> xi,
                                                  const Mat2* tangent) const {
    Deriv d;
    d.dy = model_.drift.eval(y);
    Mat2 J = model_.drift.jacobian(y);
    const std::size_t nt = model_.terms.size();
    for (std::size_t i = 0; i < nt; ++i) {
        const auto& term = model_.terms[i];
        const double x = xi[term.coefficient];
        const double b = cache_.empty() ? term.basis.eval(y, t) : cache_[(step * 3 + stage) * nt + i];
        d.dy[term.component] += x * b;
        if (!term.basis.time_only())
            for (int k = 0; k < model_.dim; ++k)
                J[term.component * 2 + k] += x * term.basis.d_dstate(y, t, k);
    }
    d.dL = -(model_.dim == 1 ? J[0] : J[0] + J[3]);
    if (tangent) d.dM = mat_mul(J, *tangent);
    return d;
}

void CharacteristicFlow::advance(Vec2& y, std::span<const double> xi, double& logdens,
                                 Mat2* tangent) const {
    require(xi.size() == model_.coefficients.size(), ErrorKind::Domain,
            "characteristics: need one xi value per coefficient");
    const auto axpy = [](const Vec2& a, double h, const Vec2& b) {
        return Vec2{a[0] + h * b[0], a[1] + h * b[1]};
    };
    const auto maxpy = [](const Mat2& a, double h, const Mat2& b) {
        return Mat2{a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2], a[3] + h * b[3]};
    };
    for (std::size_t k = 0; k < steps(); ++k) {
        const double t0 = times_[k];
        const double h = times_[k + 1] - t0;
        const double tm = t0 + 0.5 * h;
        Mat2 m2, m3, m4;
        const Deriv k1 = rhs(y, t0, k, 0, xi, tangent);
        if (tangent) m2 = maxpy(*tangent, 0.5 * h, k1.dM);
        const Deriv k2 = rhs(axpy(y, 0.5 * h, k1.dy), tm, k, 1, xi, tangent ? &m2 : nullptr);
        if (tangent) m3 = maxpy(*tangent, 0.5 * h, k2.dM);
        const Deriv k3 = rhs(axpy(y, 0.5 * h, k2.dy), tm, k, 1, xi, tangent ? &m3 : nullptr);
        if (tangent) m4 = maxpy(*tangent, h, k3.dM);
        const Deriv k4 = rhs(axpy(y, h, k3.dy), t0 + h, k, 2, xi, tangent ? &m4 : nullptr);
        for (int i = 0; i < 2; ++i)
            y[i] += h / 6.0 * (k1.dy[i] + 2.0 * k2.dy[i] + 2.0 * k3.dy[i] + k4.dy[i]);
        logdens += h / 6.0 * (k1.dL + 2.0 * k2.dL + 2.0 * k3.dL + k4.dL);
        if (tangent)
            for (int i = 0; i < 4; ++i)
                (*tangent)[i] += h / 6.0 * (k1.dM[i] + 2.0 * k2.dM[i] + 2.0 * k3.dM[i] + k4.dM[i]);
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(logdens))
            throw NumericalBlowup(times_[k + 1], "characteristic left the finite range at t = " +
                                                     std::to_string(times_[k + 1]));
    }
}

CharState integrate_characteristic(const RandomForcingModel& model, const CharState& init,
                                   double t_end, double dt) {
    model.validate();
    require(t_end >= init.t, ErrorKind::Domain, "integrate_characteristic: need t_end >= init.t");
    CharState out = init;
    out.xi = padded_xi(model, init.xi);
    if (t_end == init.t) return out;
    CharacteristicFlow flow(model, init.t, t_end, dt);
    flow.advance(out.state, out.xi, out.logdens);
    out.t = t_end;
    return out;
}

CharState integrate_characteristic(const CanonicalModel& model, const CharState& init,
                                   double t_end, double dt) {
    return integrate_characteristic(forcing_of(model, XiDistribution::standard_normal()), init,
                                    t_end, dt);
}

double start_time(const CanonicalModel& model) {
    if (std::holds_alternative<FhhsModel>(model)) return 0.0;
    if (const auto* m = std::get_if<RandomForcingModel>(&model)) return m->t0;
    return kDefaultStartTime;
}

CharState canonical_state(const CanonicalModel& model, std::span<const double> xi, double t) {
    require(t >= 0.0, ErrorKind::Domain, "canonical_state: t must be >= 0");
    CharState s;
    s.t = t;
    const double x = xi.empty() ? 0.0 : xi[0];
    if (const auto* m = std::get_if<PositionModel>(&model)) {
        m->validate();
        s.xi = {x};
        s.state = {m->u_p * t + x * std::sqrt(2.0 * m->D * t), 0.0};
        return s;
    }
    if (const auto* m = std::get_if<VelocityModel>(&model)) {
        m->validate();
        s.xi = {x};
        s.logdens = t;
        if (t == 0.0) {
            s.state = {0.0, m->v0};
            return s;
        }
        s.state = {m->tau_p * m->v0 * -std::expm1(-t) + x * velocity_sigma_x(*m, t),
                   m->v0 * std::exp(-t) + x * velocity_sigma_u(*m, t)};
        return s;
    }
    if (const auto* m = std::get_if<FhhsModel>(&model)) {
        m->validate();
        s.xi = {x};
        s.logdens = t / m->tau_p;
        s.state = {x * m->sigma_xi * fhhs_eta(*m, t), 0.0};
        return s;
    }
    const auto& m = std::get<RandomForcingModel>(model);
    CharState init;
    init.t = m.t0;
    init.state = m.y0;
    init.xi = padded_xi(m, xi);
    require(t >= m.t0, ErrorKind::Domain, "canonical_state: t before the model start time");
    return integrate_characteristic(m, init, t);
}

double flow_map_jacobian(const CanonicalModel& model, double t0, double t, JacobianMethod method,
                         std::span<const double> xi, double dt) {
    const RandomForcingModel rfm = forcing_of(model, XiDistribution::standard_normal());
    require(t > t0, ErrorKind::Domain, "flow_map_jacobian: need t > t0");
    const auto x = padded_xi(rfm, xi);
    const Vec2 start = canonical_state(model, x, t0).state;
    const CharacteristicFlow flow(rfm, t0, t, dt);
    if (method == JacobianMethod::Variational) {
        Vec2 y = start;
        double L = 0.0;
        Mat2 M{1.0, 0.0, 0.0, 1.0};
        flow.advance(y, x, L, &M);
        return det(M, rfm.dim);
    }
    constexpr double h = 1e-6;
    Mat2 M{};
    for (int k = 0; k < rfm.dim; ++k) {
        Vec2 yp = start, ym = start;
        yp[k] += h;
        ym[k] -= h;
        double L = 0.0;
        flow.advance(yp, x, L);
        flow.advance(ym, x, L);
        for (int i = 0; i < rfm.dim; ++i) M[i * 2 + k] = (yp[i] - ym[i]) / (2.0 * h);
    }
    return det(M, rfm.dim);
}

namespace {

// Integrates g over the support of `dist` with Gauss-Legendre panels split
// at the density breakpoints.
template <class G>
double integrate_over_xi(const XiDistribution& dist, int panels, G&& g) {
    std::vector<double> cuts;
    if (dist.bounded()) {
        cuts = dist.breakpoints();
        const auto [lo, hi] = dist.support();
        cuts.push_back(lo);
        cuts.push_back(hi);
    } else {
        const double s = dist.stddev();
        cuts = {dist.mean() - 10.0 * s, dist.mean() + 10.0 * s};
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double span = cuts.back() - cuts.front();
    double total = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double a = cuts[i - 1], b = cuts[i];
        const int n = std::max(1, static_cast<int>(std::ceil(panels * (b - a) / span)));
        const double w = (b - a) / n;
        for (int p = 0; p < n; ++p)
            total += boost::math::quadrature::gauss<double, 20>::integrate(g, a + p * w, a + (p + 1) * w);
    }
    return total;
}

void add_mass_warning(PdfCurve& curve) {
    const double mass = curve.mass();
    if (mass < 0.999)
        curve.warnings.push_back("mass-loss: grid captures " + std::to_string(mass) +
                                 " of the probability mass");
}

}  // namespace

PdfCurve transform_pdf(const CanonicalModel& model, const InitialCondition& init,
                       const XiDistribution& dist, double t, std::span<const double> grid,
                       const TransformOptions& options) {
    const RandomForcingModel rfm = forcing_of(model, dist);
    const double t0 = rfm.t0;
    require(t > t0, ErrorKind::Domain, "transform_pdf: t must exceed the start time");
    require(options.component >= 0 && options.component < rfm.dim, ErrorKind::Domain,
            "transform_pdf: component out of range");
    require(rfm.coefficients.size() == 1, ErrorKind::Unsupported,
            "transform_pdf: only single-coefficient models are marginalised by quadrature");
    require(!grid.empty(), ErrorKind::Domain, "transform_pdf: empty grid");
    const XiDistribution& law = rfm.coefficients[0];
    const int c = options.component;

    PdfCurve out;
    out.coords.assign(grid.begin(), grid.end());
    out.density.assign(grid.size(), 0.0);
    out.set_meta("model", std::string(model_name(model)));
    out.set_meta("t", std::to_string(t));
    out.set_meta("method", "transform");

    if (!init.density) {
        // Dirac start: Y(t) = A + B xi along the characteristics
        const CharacteristicFlow flow(rfm, t0, t, options.dt);
        const auto terminal = [&](double xi) {
            const double x[] = {xi};
            Vec2 y = canonical_state(model, x, t0).state;
            double L = 0.0;
            flow.advance(y, x, L);
            return y[c];
        };
        const double y0 = terminal(0.0), y1 = terminal(1.0), ym = terminal(-1.0);
        const double scale = 1.0 + std::fabs(y0) + std::fabs(y1);
        require(std::fabs(y1 + ym - 2.0 * y0) <= 1e-9 * scale, ErrorKind::Unsupported,
                "transform_pdf: terminal state is not affine in xi; use mc_marginal_pdf");
        const double B = y1 - y0;
        require(B != 0.0 && law.family() != Family::Degenerate, ErrorKind::Domain,
                "transform_pdf: the marginal is a point mass");
        for (std::size_t i = 0; i < grid.size(); ++i)
            out.density[i] = law.density((grid[i] - y0) / B) / std::fabs(B);
        add_mass_warning(out);
        return out;
    }

    require(rfm.dim == 1, ErrorKind::Unsupported,
            "transform_pdf: smooth initial densities need a one-dimensional model");
    const PdfCurve& f0 = *init.density;
    require(std::fabs(f0.mass() - 1.0) < 1e-6, ErrorKind::Domain,
            "transform_pdf: initial density is not normalised");
    const CharacteristicFlow back(rfm, t, t0, options.dt);

    // pullback (y, xi) -> (y0, density factor)
    std::function<double(double, double)> conditional;
    if (rfm.linear_in_state()) {
        const auto pull = [&](double y, double xi) {
            Vec2 s{y, 0.0};
            double L = 0.0;
            const double x[] = {xi};
            back.advance(s, x, L);
            return std::pair{s[0], L};
        };
        const auto [a, L] = pull(0.0, 0.0);
        const double b = pull(1.0, 0.0).first - a;
        const double g = pull(0.0, 1.0).first - a;
        const double factor = std::exp(-L);
        conditional = [&f0, a, b, g, factor](double y, double xi) {
            return f0.at(a + b * y + g * xi) * factor;
        };
    } else {
        conditional = [&f0, &back](double y, double xi) {
            Vec2 s{y, 0.0};
            double L = 0.0;
            const double x[] = {xi};
            back.advance(s, x, L);
            return f0.at(s[0]) * std::exp(-L);
        };
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = grid[i];
        if (law.family() == Family::Degenerate) {
            out.density[i] = conditional(y, law.mean());
        } else {
            out.density[i] = integrate_over_xi(
                law, options.panels, [&](double xi) { return conditional(y, xi) * law.density(xi); });
        }
    }
    add_mass_warning(out);
    return out;
}

std::vector<double> mc_terminal_states(const CanonicalModel& model, const XiDistribution& dist,
                                       std::size_t n, double t, std::uint64_t seed,
                                       const McOptions& options) {
    require(n >= 100, ErrorKind::Domain, "mc_marginal_pdf: need n >= 100");
    const RandomForcingModel rfm = forcing_of(model, dist);
    const double t0 = rfm.t0;
    require(t >= t0, ErrorKind::Domain, "mc_marginal_pdf: t before the start time");
    require(options.component >= 0 && options.component < rfm.dim, ErrorKind::Domain,
            "mc_marginal_pdf: component out of range");
    const int c = options.component;
    const std::size_t nc = rfm.coefficients.size();
    const CharacteristicFlow flow(rfm, t0, t, options.dt);
    const auto terminal = [&](std::span<const double> xi) {
        Vec2 y = canonical_state(model, xi, t0).state;
        double L = 0.0;
        if (t > t0) flow.advance(y, xi, L);
        return y[c];
    };

    std::vector<double> out(n);
    if (options.exploit_linearity && rfm.linear_in_state()) {
        std::vector<double> x(nc, 0.0);
        const double base = terminal(x);
        std::vector<double> slope(nc);
        for (std::size_t j = 0; j < nc; ++j) {
            x.assign(nc, 0.0);
            x[j] = 1.0;
            slope[j] = terminal(x) - base;
        }
        parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t k = begin; k < end; ++k) {
                double y = base;
                for (std::size_t j = 0; j < nc; ++j) y += slope[j] * rfm.coefficients[j].draw(seed, k, j);
                out[k] = y;
            }
        });
        return out;
    }
    parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> x(nc);
        for (std::size_t k = begin; k < end; ++k) {
            for (std::size_t j = 0; j < nc; ++j) x[j] = rfm.coefficients[j].draw(seed, k, j);
            out[k] = terminal(x);
        }
    });
    return out;
}

PdfCurve mc_marginal_pdf(const CanonicalModel& model, const XiDistribution& dist, std::size_t n,
                         double t, std::uint64_t seed, const Binning& binning,
                         const McOptions& options) {
    const auto samples = mc_terminal_states(model, dist, n, t, seed, options);
    PdfCurve h = histogram(samples, binning);
    h.set_meta("model", std::string(model_name(model)));
    h.set_meta("t", std::to_string(t));
    h.set_meta("n", std::to_string(n));
    h.set_meta("seed", std::to_string(seed));
    h.set_meta("method", "liouville_mc");
    return h;
}

}  // namespace liouville
