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

#include "liouville/fhhs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "liouville/error.hpp"
#include "liouville/rng.hpp"

namespace liouville {

namespace {

// a = C1 t / tau_p
double growth_argument(const FhhsModel& m, double t) { return m.C1 * t / m.tau_p; }

void require_time(double t) {
    require(t >= 0.0 && !std::isnan(t), ErrorKind::Domain, "fhhs: time must be >= 0");
}

}  // namespace

double fhhs_eta(const FhhsModel& model, double t) {
    require_time(t);
    const double one_minus_e = -std::expm1(-growth_argument(model, t));
    return std::pow(one_minus_e, model.C2);
}

double phi_fhhs(const FhhsModel& model, double t) {
    require_time(t);
    const double a = growth_argument(model, t);
    const double e = std::exp(-a);
    const double one_minus_e = -std::expm1(-a);
    return std::pow(one_minus_e, model.C2 - 1.0) * (1.0 + (model.C1 * model.C2 - 1.0) * e) /
           model.tau_p;
}

double fhhs_velocity_variance(const FhhsModel& model, double t) {
    const double s = model.sigma_xi * fhhs_eta(model, t);
    return s * s;
}

double granular_temperature(const FhhsModel& model, double t) {
    return fhhs_velocity_variance(model, t) / 3.0;
}

double steady_temperature(const FhhsModel& model) { return model.sigma_xi * model.sigma_xi / 3.0; }

double time_from_temperature(const FhhsModel& model, double T) {
    require(T >= 0.0, ErrorKind::Domain, "time_from_temperature: T must be >= 0");
    require(model.sigma_xi > 0.0, ErrorKind::Parameter, "time_from_temperature: need sigma_xi > 0");
    const double eta = std::sqrt(3.0 * T) / model.sigma_xi;
    if (eta > 1.0 + 1e-12)
        fail(ErrorKind::OutOfRange, "time_from_temperature: T above the steady value " +
                                        std::to_string(steady_temperature(model)));
    if (eta >= 1.0) return std::numeric_limits<double>::infinity();
    return -(model.tau_p / model.C1) * std::log1p(-std::pow(eta, 1.0 / model.C2));
}

SourceSink source_sink(const FhhsModel& model, double T) {
    const double t = time_from_temperature(model, T);
    const double S = 2.0 / std::sqrt(3.0) * model.sigma_xi * phi_fhhs(model, t) * std::sqrt(T);
    return {S, 2.0 * T / model.tau_p};
}

double fhhs_pdf(const FhhsModel& model, const XiDistribution& shape, double u, double t) {
    require(t > 0.0, ErrorKind::Domain,
            "fhhs_pdf: t = 0 is a delta at u = 0 and has no density");
    const double scale = model.sigma_xi * fhhs_eta(model, t);
    require(scale > 0.0, ErrorKind::Domain, "fhhs_pdf: zero spread (delta density)");
    return shape.density(u / scale) / scale;
}

double diffusion_of_time(const FhhsModel& model, double t) {
    return fhhs_eta(model, t) * phi_fhhs(model, t) * model.sigma_xi * model.sigma_xi;
}

double diffusion_of_temperature(const FhhsModel& model, double T) {
    require(T >= 0.0, ErrorKind::Domain, "diffusion_of_temperature: T must be >= 0");
    require(T <= steady_temperature(model) * (1.0 + 1e-12), ErrorKind::OutOfRange,
            "diffusion_of_temperature: T above the steady value");
    const double c = model.C1 * model.C2;
    const double k = 1.0 / (2.0 * model.C2);
    return 3.0 / model.tau_p *
           ((1.0 - c) * T +
            c * std::pow(model.sigma_xi, 1.0 / model.C2) * std::pow(3.0, -k) * std::pow(T, 1.0 - k));
}

double diffusion_coefficient(const FhhsModel& model, DiffusionMode mode, double arg) {
    return mode == DiffusionMode::OfTime ? diffusion_of_time(model, arg)
                                         : diffusion_of_temperature(model, arg);
}

double diffusion_with_k(const FhhsModel& model, double K, double u, double t) {
    const double base = diffusion_of_time(model, t);
    if (K == 0.0) return base;
    require(u != 0.0, ErrorKind::Domain, "diffusion_with_k: singular at u = 0 for K != 0");
    const double s = model.sigma_xi * fhhs_eta(model, t);
    require(s > 0.0, ErrorKind::Domain, "diffusion_with_k: zero spread");
    return base + K / u * std::exp(u * u / (2.0 * s * s));
}

double re_t(double T, double scale) {
    require(T >= 0.0, ErrorKind::Domain, "re_t: T must be >= 0");
    require(scale > 0.0, ErrorKind::Parameter, "re_t: scale must be > 0");
    return scale * std::sqrt(T);
}

double PowerLaw::operator()(double x) const { return std::exp(intercept + slope * std::log(x)); }

PowerLaw published_sigma_law() { return {0.06258, std::log(0.7866), 0.998}; }
PowerLaw published_c1_law() { return {2.446, std::log(0.5411), 0.998}; }

FhhsModel fhhs_from_regression(double Re_m, double tau_p, double C2) {
    require(Re_m > 0.0, ErrorKind::Parameter, "fhhs_from_regression: Re_m must be > 0");
    FhhsModel m;
    m.tau_p = tau_p;
    m.C2 = C2;
    m.Re_m = Re_m;
    m.sigma_xi = published_sigma_law()(Re_m);
    m.C1 = published_c1_law()(Re_m);
    m.validate();
    return m;
}

PowerLaw loglog_regression(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), ErrorKind::Domain, "loglog_regression: size mismatch");
    require(x.size() >= 2, ErrorKind::FitDegenerate, "loglog_regression: need two or more points");
    const std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, ErrorKind::Domain, "loglog_regression: values must be > 0");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    require(sxx > 0.0, ErrorKind::FitDegenerate, "loglog_regression: all x values are equal");
    PowerLaw law;
    law.slope = sxy / sxx;
    law.intercept = my - law.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (law.intercept + law.slope * lx[i]);
        ss_res += r * r;
    }
    law.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return law;
}

namespace {

// Solves the n x n system (n <= 3) in place by partial pivoting; false if
// singular.
bool solve_small(std::array<std::array<double, 3>, 3> a, std::array<double, 3>& b, int n) {
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
        if (!(std::fabs(a[p][c]) > 0.0)) return false;
        std::swap(a[c], a[p]);
        std::swap(b[c], b[p]);
        for (int r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (int c = n - 1; c >= 0; --c) {
        double s = b[c];
        for (int k = c + 1; k < n; ++k) s -= a[c][k] * b[k];
        b[c] = s / a[c][c];
    }
    return true;
}

struct FitParams {
    double sigma;
    double log_c1;
    double c2;
};

// Residuals T_model - T and their Jacobian columns (sigma, log C1, C2).
double evaluate(const FitParams& p, double tau_p, std::span<const double> t, std::span<const double> T,
                std::vector<std::array<double, 3>>* jac, std::vector<double>& res) {
    const double c1 = std::exp(p.log_c1);
    double cost = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double a = c1 * t[i] / tau_p;
        const double one_minus_e = -std::expm1(-a);
        const double eta = std::pow(one_minus_e, p.c2);
        const double model = p.sigma * p.sigma * eta * eta / 3.0;
        res[i] = model - T[i];
        cost += res[i] * res[i];
        if (jac) {
            const double s2 = p.sigma * p.sigma;
            // d eta / d log C1 = C2 eta e a / (1 - e)
            const double deta_dlogc1 =
                one_minus_e > 0.0 ? p.c2 * eta * std::exp(-a) * a / one_minus_e : 0.0;
            const double log_term = one_minus_e > 0.0 ? std::log(one_minus_e) : 0.0;
            (*jac)[i] = {2.0 * p.sigma * eta * eta / 3.0, 2.0 * s2 * eta * deta_dlogc1 / 3.0,
                         2.0 * s2 * eta * eta * log_term / 3.0};
        }
    }
    return cost;
}

}  // namespace

FhhsFit fit_fhhs(std::span<const double> t, std::span<const double> T, const FhhsFitOptions& options) {
    require(t.size() == T.size(), ErrorKind::Domain, "fit_fhhs: t and T differ in length");
    require(t.size() >= 10, ErrorKind::FitDegenerate, "fit_fhhs: need at least 10 points");
    require(options.tau_p > 0.0 && options.C2 >= 1.0, ErrorKind::Parameter,
            "fit_fhhs: need tau_p > 0 and C2 >= 1");
    for (std::size_t i = 0; i < t.size(); ++i) {
        require(std::isfinite(t[i]) && std::isfinite(T[i]) && T[i] >= 0.0 && t[i] >= 0.0,
                ErrorKind::Domain, "fit_fhhs: data must be finite with t, T >= 0");
        require(i == 0 || t[i] > t[i - 1], ErrorKind::Domain, "fit_fhhs: t must be increasing");
    }
    const std::size_t n = t.size();

    // plateau: the last tenth of the record against the tenth before it
    const std::size_t block = std::max<std::size_t>(3, n / 10);
    const auto block_mean = [&](std::size_t end) {
        double s = 0.0;
        for (std::size_t i = end - block; i < end; ++i) s += T[i];
        return s / static_cast<double>(block);
    };
    const double t_ss = block_mean(n);
    const double t_prev = block_mean(n - block);
    require(t_ss > 0.0, ErrorKind::FitDegenerate, "fit_fhhs: plateau temperature is zero");
    if (std::fabs(t_ss - t_prev) > 0.05 * t_ss)
        fail(ErrorKind::FitDegenerate, "fit_fhhs: data do not reach a plateau");

    FitParams p{std::sqrt(3.0 * t_ss), 0.0, options.C2};

    // rising branch: log(1 - (T/Tss)^(1/(2 C2))) = -C1 t / tau_p
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = T[i] / t_ss;
        if (r < 0.05 || r > 0.95) continue;
        const double y = std::log1p(-std::pow(r, 1.0 / (2.0 * options.C2)));
        stt += t[i] * t[i];
        sty += t[i] * y;
    }
    require(stt > 0.0 && sty < 0.0, ErrorKind::FitDegenerate,
            "fit_fhhs: no points on the rising branch");
    p.log_c1 = std::log(-options.tau_p * sty / stt);

    const int n_par = options.refine_c2 ? 3 : 2;
    std::vector<double> res(n);
    std::vector<std::array<double, 3>> jac(n);
    double cost = evaluate(p, options.tau_p, t, T, &jac, res);
    double lambda = 1e-3;
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> g{};
        for (std::size_t i = 0; i < n; ++i)
            for (int a = 0; a < n_par; ++a) {
                g[a] -= jac[i][a] * res[i];
                for (int b = 0; b < n_par; ++b) jtj[a][b] += jac[i][a] * jac[i][b];
            }
        bool improved = false;
        bool converged = false;
        while (lambda < 1e12) {
            auto damped = jtj;
            for (int a = 0; a < n_par; ++a) damped[a][a] *= 1.0 + lambda;
            auto step = g;
            if (!solve_small(damped, step, n_par)) fail(ErrorKind::FitDegenerate, "fit_fhhs: singular normal equations");
            FitParams trial{p.sigma + step[0], p.log_c1 + step[1],
                            options.refine_c2 ? std::max(1.0, p.c2 + step[2]) : p.c2};
            if (trial.sigma <= 0.0) {
                lambda *= 4.0;
                continue;
            }
            std::vector<double> trial_res(n);
            const double trial_cost = evaluate(trial, options.tau_p, t, T, nullptr, trial_res);
            if (trial_cost <= cost) {
                const double rel = std::fabs(step[0]) / p.sigma + std::fabs(step[1]) +
                                   (options.refine_c2 ? std::fabs(step[2]) / p.c2 : 0.0);
                converged = rel < 1e-12 || cost - trial_cost <= 1e-15 * cost;
                p = trial;
                cost = evaluate(p, options.tau_p, t, T, &jac, res);
                lambda = std::max(lambda / 3.0, 1e-12);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!improved || converged) break;
    }
    require(std::isfinite(cost), ErrorKind::FitDegenerate, "fit_fhhs: non-finite residual");

    FhhsFit fit;
    fit.sigma_xi = p.sigma;
    fit.C1 = std::exp(p.log_c1);
    fit.C2 = p.c2;
    fit.rms = std::sqrt(cost / static_cast<double>(n));
    fit.iterations = iter;
    return fit;
}

FitReport fit_fhhs_family(std::span<const TemperatureSeries> series, const FhhsFitOptions& options) {
    require(!series.empty(), ErrorKind::FitDegenerate, "fit_fhhs_family: no data sets");
    FitReport report;
    for (const auto& s : series) {
        FhhsFit fit = fit_fhhs(s.t, s.T, options);
        fit.Re_m = s.Re_m;
        report.per_re.push_back(fit);
    }
    std::vector<double> re, sigma, c1;
    for (const auto& f : report.per_re) {
        if (!(f.Re_m > 0.0)) continue;
        re.push_back(f.Re_m);
        sigma.push_back(f.sigma_xi);
        c1.push_back(f.C1);
    }
    const bool distinct = re.size() >= 2 && *std::min_element(re.begin(), re.end()) <
                                                 *std::max_element(re.begin(), re.end());
    if (distinct) {
        report.has_loglog = true;
        report.sigma_law = loglog_regression(re, sigma);
        report.c1_law = loglog_regression(re, c1);
    }
    return report;
}

std::vector<double> synthetic_temperature(const FhhsModel& model, std::span<const double> times,
                                          double noise, std::uint64_t seed) {
    model.validate();
    const CounterStream rng(seed, 0);
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        out[i] = granular_temperature(model, times[i]);
        if (noise > 0.0) out[i] *= 1.0 + noise * rng.normal(i);
    }
    return out;
}

}  // namespace liouville
