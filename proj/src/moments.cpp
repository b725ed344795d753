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

#include "liouville/moments.hpp"

#include <cmath>
#include <string>

#include "liouville/error.hpp"

namespace liouville {

namespace {

// Flattened (m[2], C[4], K[2 nc]) with the RK4 right-hand side.
class LinearMomentSystem {
public:
    explicit LinearMomentSystem(const RandomForcingModel& m) : model_(m), nc_(m.coefficients.size()) {
        A_ = m.drift.jacobian(Vec2{});
        b_ = m.drift.eval(Vec2{});
        for (const auto& c : m.coefficients) {
            mu_.push_back(c.mean());
            var_.push_back(c.variance());
        }
    }

    std::size_t size() const { return 6 + 2 * nc_; }

    std::vector<double> pack(const MomentState& s) const {
        std::vector<double> y(size(), 0.0);
        y[0] = s.mean[0];
        y[1] = s.mean[1];
        for (int i = 0; i < 4; ++i) y[2 + i] = s.cov[i];
        for (std::size_t c = 0; c < nc_ && c < s.cross.size(); ++c) {
            y[6 + 2 * c] = s.cross[c][0];
            y[7 + 2 * c] = s.cross[c][1];
        }
        return y;
    }

    MomentState unpack(const std::vector<double>& y) const {
        MomentState s;
        s.mean = {y[0], y[1]};
        for (int i = 0; i < 4; ++i) s.cov[i] = y[2 + i];
        s.cross.resize(nc_);
        for (std::size_t c = 0; c < nc_; ++c) s.cross[c] = {y[6 + 2 * c], y[7 + 2 * c]};
        return s;
    }

    void rhs(double t, const std::vector<double>& y, std::vector<double>& dy) const {
        // columns g_c of G
        std::vector<Vec2> g(nc_, Vec2{});
        for (const auto& term : model_.terms)
            g[term.coefficient][term.component] += term.basis.eval(Vec2{}, t);
        const auto& A = A_;
        const double m0 = y[0], m1 = y[1];
        dy[0] = A[0] * m0 + A[1] * m1 + b_[0];
        dy[1] = A[2] * m0 + A[3] * m1 + b_[1];
        for (std::size_t c = 0; c < nc_; ++c) {
            dy[0] += g[c][0] * mu_[c];
            dy[1] += g[c][1] * mu_[c];
        }
        // C' = A C + C A^T + sum_c (g_c K_c^T + K_c g_c^T)
        const double C[4] = {y[2], y[3], y[4], y[5]};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double v = 0.0;
                for (int k = 0; k < 2; ++k) v += A[i * 2 + k] * C[k * 2 + j] + C[i * 2 + k] * A[j * 2 + k];
                for (std::size_t c = 0; c < nc_; ++c) {
                    const double Ki = y[6 + 2 * c + i], Kj = y[6 + 2 * c + j];
                    v += g[c][i] * Kj + Ki * g[c][j];
                }
                dy[2 + i * 2 + j] = v;
            }
        // K_c' = A K_c + Var(Xi_c) g_c
        for (std::size_t c = 0; c < nc_; ++c) {
            const double k0 = y[6 + 2 * c], k1 = y[7 + 2 * c];
            dy[6 + 2 * c] = A[0] * k0 + A[1] * k1 + var_[c] * g[c][0];
            dy[7 + 2 * c] = A[2] * k0 + A[3] * k1 + var_[c] * g[c][1];
        }
    }

private:
    const RandomForcingModel& model_;
    std::size_t nc_;
    Mat2 A_{};
    Vec2 b_{};
    std::vector<double> mu_, var_;
};

MomentRecord to_record(const MomentState& s, double t, int dim, double var_xi, double xi_scale,
                       bool velocity_only) {
    MomentRecord r;
    r.t = t;
    r.var_xi = var_xi * xi_scale * xi_scale;
    const double k0 = s.cross.empty() ? 0.0 : s.cross[0][0];
    const double k1 = s.cross.empty() ? 0.0 : s.cross[0][1];
    if (velocity_only) {
        r.mean_u = s.mean[0];
        r.var_u = s.cov[0];
        r.cov_xi_u = xi_scale * k0;
        return r;
    }
    r.mean_x = s.mean[0];
    r.var_x = s.cov[0];
    r.cov_xi_x = xi_scale * k0;
    if (dim == 2) {
        r.mean_u = s.mean[1];
        r.var_u = s.cov[3];
        r.cov_xu = s.cov[1];
        r.cov_xi_u = xi_scale * k1;
    }
    return r;
}

MomentState state_of(const MomentRecord& r, bool velocity_only) {
    MomentState s;
    const auto z = [](double v) { return std::isnan(v) ? 0.0 : v; };
    if (velocity_only) {
        s.mean = {z(r.mean_u), 0.0};
        s.cov = {z(r.var_u), 0.0, 0.0, 0.0};
        s.cross = {Vec2{z(r.cov_xi_u), 0.0}};
        return s;
    }
    s.mean = {z(r.mean_x), z(r.mean_u)};
    s.cov = {z(r.var_x), z(r.cov_xu), z(r.cov_xu), z(r.var_u)};
    s.cross = {Vec2{z(r.cov_xi_x), z(r.cov_xi_u)}};
    return s;
}

}  // namespace

std::vector<MomentState> integrate_linear_moments(const RandomForcingModel& model,
                                                  const MomentState& init, double t_init,
                                                  std::span<const double> times, double dt) {
    model.validate();
    if (!model.linear_in_state())
        fail(ErrorKind::Unsupported,
             "moment equations do not close for nonlinear drift or state-dependent forcing "
             "(they involve higher moments); no closure is implemented");
    const LinearMomentSystem sys(model);
    std::vector<double> y = sys.pack(init);
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    std::vector<MomentState> out;
    double t = t_init;
    for (double target : times) {
        require(target >= t, ErrorKind::Domain, "integrate_moments: times must increase from the start");
        if (target > t) {
            const auto nodes = step_schedule(t, target, dt, model.singular_at_zero(), model.transient_scale());
            for (std::size_t s = 0; s + 1 < nodes.size(); ++s) {
                const double t0 = nodes[s];
                const double h = nodes[s + 1] - t0;
                sys.rhs(t0, y, k1);
                for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
                sys.rhs(t0 + 0.5 * h, tmp, k2);
                for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
                sys.rhs(t0 + 0.5 * h, tmp, k3);
                for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
                sys.rhs(nodes[s + 1], tmp, k4);
                for (std::size_t i = 0; i < n; ++i)
                    y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            for (double v : y)
                if (!std::isfinite(v))
                    throw NumericalBlowup(target, "moment equations diverged before t = " +
                                                      std::to_string(target));
            t = target;
        }
        out.push_back(sys.unpack(y));
    }
    return out;
}

MomentSeries integrate_moments(const RandomForcingModel& model, std::span<const double> times,
                               double dt) {
    MomentState init;
    init.mean = model.y0;
    init.cross.assign(model.coefficients.size(), Vec2{});
    const auto states = integrate_linear_moments(model, init, model.t0, times, dt);
    MomentSeries series;
    series.model = "forcing";
    for (std::size_t i = 0; i < states.size(); ++i)
        series.records.push_back(
            to_record(states[i], times[i], model.dim, model.coefficients[0].variance(), 1.0, false));
    return series;
}

MomentSeries integrate_position_moments(const PositionModel& model, const XiDistribution& dist,
                                        std::span<const double> times, double t0, double dt) {
    require(t0 > 0.0, ErrorKind::Domain, "integrate_position_moments: the start time must be > 0");
    const RandomForcingModel rfm = to_forcing_model(model, dist, t0);
    const MomentRecord seed = position_moments(model, dist, t0);
    const auto states = integrate_linear_moments(rfm, state_of(seed, false), t0, times, dt);
    MomentSeries series;
    series.model = "position";
    for (std::size_t i = 0; i < states.size(); ++i) {
        series.records.push_back(to_record(states[i], times[i], 1, dist.variance(), 1.0, false));
        if (times[i] == t0) series.records.back() = seed;
    }
    return series;
}

MomentSeries integrate_velocity_moments(const VelocityModel& model, VelocityInit init,
                                        std::span<const double> times, double t0,
                                        const XiDistribution& dist, double dt) {
    require(t0 > 0.0, ErrorKind::Domain, "integrate_velocity_moments: the start time must be > 0");
    const RandomForcingModel rfm = to_forcing_model(model, dist, t0);
    const MomentRecord seed = velocity_model_moments(model, t0, init, dist);
    const auto states = integrate_linear_moments(rfm, state_of(seed, false), t0, times, dt);
    MomentSeries series;
    series.model = "velocity";
    for (std::size_t i = 0; i < states.size(); ++i) {
        series.records.push_back(to_record(states[i], times[i], 2, dist.variance(), 1.0, false));
        if (times[i] == t0) series.records.back() = seed;
    }
    return series;
}

MomentSeries integrate_fhhs_moments(const FhhsModel& model, std::span<const double> times,
                                    const XiDistribution& shape, double dt) {
    const RandomForcingModel rfm = to_forcing_model(model, shape);
    MomentState init;
    init.cross = {Vec2{}};
    const auto states = integrate_linear_moments(rfm, init, 0.0, times, dt);
    MomentSeries series;
    series.model = "fhhs";
    for (std::size_t i = 0; i < states.size(); ++i)
        series.records.push_back(
            to_record(states[i], times[i], 1, shape.variance(), model.sigma_xi, true));
    return series;
}

MomentSeries closed_form_moments(const CanonicalModel& model, std::span<const double> times,
                                 VelocityInit init, const XiDistribution& dist) {
    MomentSeries series;
    series.model = std::string(model_name(model));
    for (double t : times) {
        if (const auto* m = std::get_if<PositionModel>(&model))
            series.records.push_back(position_moments(*m, dist, t));
        else if (const auto* m = std::get_if<VelocityModel>(&model))
            series.records.push_back(velocity_model_moments(*m, t, init, dist));
        else if (const auto* m = std::get_if<FhhsModel>(&model))
            series.records.push_back(fhhs_moments(*m, t, dist));
        else
            fail(ErrorKind::Unsupported, "closed_form_moments: no closed form for a generic forcing model");
    }
    return series;
}

}  // namespace liouville
