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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "liouville/analytic.hpp"
#include "liouville/characteristics.hpp"
#include "liouville/fhhs.hpp"
#include "liouville/fokker_planck.hpp"
#include "liouville/langevin.hpp"
#include "liouville/moments.hpp"
#include "liouville/pdf_curve.hpp"
#include "liouville/stats.hpp"

using namespace liouville;

namespace {

const PositionModel kPosition{5.0, 2.5};
const VelocityModel kVelocity{10.0, 0.02, 1.0};

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(std::fabs(want), 1e-12);
}

double gauss(double x, double mean, double var) {
    return std::exp(-0.5 * (x - mean) * (x - mean) / var) / std::sqrt(2.0 * M_PI * var);
}

void heat_kernel_equivalence(Outcome& o) {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double t : {0.05, 0.8}) {
        const double c = kPosition.u_p * t, w = 6.0 * std::sqrt(2.0 * kPosition.D * t);
        for (int i = 0; i < 200; ++i) {
            const double x = c - w + 2.0 * w * i / 199.0;
            const double kernel = std::exp(-(x - c) * (x - c) / (4.0 * kPosition.D * t)) /
                                  std::sqrt(4.0 * M_PI * kPosition.D * t);
            worst = std::max(worst, std::fabs(position_pdf(kPosition, XiDistribution::standard_normal(), x, t) - kernel));
        }
    }
    const double elapsed = seconds_since(start);
    o.detail << "max |diff| = " << worst << ", " << elapsed << " s";
    o.require(worst <= 1e-12, "pointwise 1e-12");
    o.require(elapsed < 1.0, "runtime < 1 s");
}

void mc_equivalence(Outcome& o) {
    const std::size_t n = 100000;
    const double dt = 1e-3;
    const std::vector<double> times{0.2, 1.0, 5.0};
    const auto n01 = XiDistribution::standard_normal();
    LangevinOptions lo;
    lo.output_times = times;
    double worst = 0.0;

    auto start = std::chrono::steady_clock::now();
    const PathEnsemble pos = simulate_position_langevin(kPosition, n, dt, 5.0, 21, lo);
    for (double t : times) {
        const auto cdf = [&](double x) { return position_cdf(kPosition, n01, x, t); };
        worst = std::max(worst, ks_statistic(pos.values_at(t, 0), cdf));
        worst = std::max(worst, ks_statistic(mc_terminal_states(kPosition, n01, n, t, 22), cdf));
    }
    const double t_position = seconds_since(start);

    start = std::chrono::steady_clock::now();
    const PathEnsemble vel = simulate_velocity_langevin(kVelocity, n, dt, 5.0, 23, lo);
    for (double t : times) {
        for (int c : {0, 1}) {
            const auto cdf = [&](double y) {
                return c == 0 ? velocity_cdf_x(kVelocity, n01, y, t) : velocity_cdf_u(kVelocity, n01, y, t);
            };
            McOptions mo;
            mo.component = c;
            worst = std::max(worst, ks_statistic(vel.values_at(t, c), cdf));
            worst = std::max(worst, ks_statistic(mc_terminal_states(kVelocity, n01, n, t, 24, mo), cdf));
        }
    }
    const double t_velocity = seconds_since(start);
    o.detail << "max KS = " << worst << ", position " << t_position << " s, velocity " << t_velocity << " s";
    o.require(worst < 0.01, "KS < 0.01");
    o.require(t_position < 30.0 && t_velocity < 30.0, "runtime < 30 s per case");
}

double series_error(const MomentSeries& a, const MomentSeries& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const auto& x = a.records[i];
        const auto& y = b.records[i];
        for (auto f : {&MomentRecord::mean_x, &MomentRecord::mean_u, &MomentRecord::var_x, &MomentRecord::cov_xu,
                       &MomentRecord::var_u, &MomentRecord::cov_xi_x, &MomentRecord::cov_xi_u}) {
            if (std::isnan(y.*f)) continue;
            worst = std::max(worst, rel_err(x.*f, y.*f));
        }
    }
    return worst;
}

void moment_suite(Outcome& o) {
    const auto times = log_grid(1e-3, 10.0, 50);
    const auto n01 = XiDistribution::standard_normal();
    double worst = series_error(integrate_position_moments(kPosition, n01, times),
                                closed_form_moments(kPosition, times, VelocityInit::Deterministic, n01));
    for (auto init : {VelocityInit::Deterministic, VelocityInit::Maxwellian})
        worst = std::max(worst, series_error(integrate_velocity_moments(kVelocity, init, times),
                                             closed_form_moments(kVelocity, times, init)));
    const FhhsModel fhhs = fhhs_from_regression(20.0);
    const auto ftimes = log_grid(1e-5, 10.0 * fhhs.tau_p, 50);
    worst = std::max(worst, series_error(integrate_fhhs_moments(fhhs, ftimes), closed_form_moments(fhhs, ftimes)));

    const double t1[] = {1.0};
    const double taylor = integrate_velocity_moments(kVelocity, VelocityInit::Maxwellian, t1).records[0].var_x;
    const double oracle = 2.0 * 100.0 * 0.02 * (1.0 - 1.0 + std::exp(-1.0));
    o.detail << "max relative difference = " << worst << ", Taylor variance = " << taylor;
    o.require(worst <= 1e-6, "1e-6 relative");
    o.require(rel_err(taylor, oracle) <= 1e-6 && std::fabs(taylor - 1.471518) < 5e-7, "Taylor value");
}

void jacobian(Outcome& o) {
    double worst = 0.0;
    for (auto method : {JacobianMethod::Variational, JacobianMethod::FiniteDifference})
        for (double t : {0.1, 0.5, 1.0, 2.0, 5.0})
            worst = std::max(worst, std::fabs(flow_map_jacobian(kVelocity, kDefaultStartTime, t, method) - std::exp(-t)));
    o.detail << "max |J - e^-t| = " << worst;
    o.require(worst <= 1e-6, "1e-6");
}

void fokker_planck(Outcome& o) {
    FpProblem heat;
    const double a[] = {5.0}, d[] = {2.5};
    heat.drift = fp_drift_named("constant", a);
    heat.diffusion = fp_diffusion_named("constant", d);
    heat.lo = -12.0;
    heat.hi = 20.0;
    heat.t0 = 0.05;
    const auto heat_l1 = [&](std::size_t n, double dt, double* drift) {
        FpProblem p = heat;
        p.n = n;
        p.initial = sample_curve(p.grid(), [](double x) { return gauss(x, 0.25, 0.25); });
        const double end[] = {0.8};
        const FpResult r = solve_fp(p, end, dt);
        if (drift) *drift = r.max_mass_drift;
        return l1_distance(r.snapshots[0], [](double x) { return gauss(x, 4.0, 4.0); });
    };
    double mass = 0.0;
    const double l1_heat = heat_l1(2001, 1e-3, &mass);

    const double t5[] = {5.0};
    const FpResult ou = solve_fp(fp_problem_for(kVelocity, 0.05, 5.0), t5, 1e-3);
    const double l1_ou = l1_distance(ou.snapshots[0], [](double u) { return fp_reference_density(kVelocity, u, 5.0); });
    mass = std::max(mass, ou.max_mass_drift);

    const FhhsModel m = fhhs_from_regression(20.0);
    const double tend[] = {m.tau_p};
    const FpResult fr = solve_fp(fp_problem_for(m, 0.05 * m.tau_p, m.tau_p), tend, 1e-4);
    const double l1_fhhs = l1_distance(fr.snapshots[0], [&](double u) { return fp_reference_density(m, u, m.tau_p); });
    mass = std::max(mass, fr.max_mass_drift);

    const double e1 = heat_l1(201, 4e-3, nullptr), e2 = heat_l1(401, 2e-3, nullptr), e3 = heat_l1(801, 1e-3, nullptr);
    const double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
    o.detail << "L1 heat " << l1_heat << ", OU " << l1_ou << ", FHHS " << l1_fhhs << "; mass drift " << mass
             << "; orders " << p1 << ", " << p2;
    o.require(std::max({l1_heat, l1_ou, l1_fhhs}) < 1e-3, "L1 < 1e-3");
    o.require(mass <= 1e-6, "mass 1e-6");
    o.require(p1 >= 1.7 && p1 <= 2.2 && p2 >= 1.7 && p2 <= 2.2, "order in [1.7, 2.2]");
}

void fhhs_closed_forms(Outcome& o) {
    const FhhsModel m = fhhs_from_regression(20.0);
    const double s2 = m.sigma_xi * m.sigma_xi;
    o.require(granular_temperature(m, 0.0) == 0.0, "T(0) = 0");
    o.require(rel_err(granular_temperature(m, 1e3), s2 / 3.0) <= 1e-14, "T(inf)");

    const auto T = [&](double t) { return granular_temperature(m, t); };
    const auto dTdt = [&](double t) {
        const double h = 1e-3 * std::min(t, m.tau_p / m.C1);
        return (-T(t + 2 * h) + 8 * T(t + h) - 8 * T(t - h) + T(t - 2 * h)) / (12 * h);
    };
    // relative on the rising branch; on the plateau dT/dt is below the
    // rounding level of S and is compared on the scale of S
    double rising = 0.0, plateau = 0.0;
    const double scale = m.tau_p / m.C1;
    for (double t = 0.01 * scale; t < 20.0 * scale; t *= 1.2) {
        const auto sg = source_sink(m, T(t));
        rising = std::max(rising, rel_err(sg.S - sg.Gamma, dTdt(t)));
    }
    for (double t = 20.0 * scale; t <= 20.0 * m.tau_p; t *= 1.5) {
        const auto sg = source_sink(m, T(t));
        plateau = std::max(plateau, std::fabs(sg.S - sg.Gamma - dTdt(t)) / sg.S);
    }
    o.require(rising <= 1e-5, "S - Gamma vs dT/dt relative");
    o.require(plateau <= 1e-5, "S - Gamma vs dT/dt on the plateau");

    double identity = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double t = 1e-6 * std::pow(10.0, i / 8.0);
        identity = std::max(identity, rel_err(diffusion_of_temperature(m, T(t)), diffusion_of_time(m, t)));
    }
    o.require(identity <= 1e-9, "D(T) = D(t)");

    const auto zero = source_sink(m, 0.0);
    const double r1 = source_sink(m, 1e-10).S / std::sqrt(1e-10), r2 = source_sink(m, 1e-14).S / std::sqrt(1e-14);
    o.require(zero.S == 0.0 && zero.Gamma == 0.0 && r2 < r1, "S(0) = 0 and S / sqrt(T) decreasing");
    o.detail << "dT/dt rel " << rising << " (rising), " << plateau << " (plateau, S scale); D identity " << identity
             << "; S/sqrt(T) " << r1 << " -> " << r2;
}

void calibration(Outcome& o) {
    const auto times = log_grid(1e-6, 1.4, 200);
    double clean = 0.0, noisy = 0.0;
    std::vector<TemperatureSeries> family;
    for (double re : {10.0, 20.0, 50.0, 100.0}) {
        const FhhsModel truth = fhhs_from_regression(re);
        const auto T = synthetic_temperature(truth, times);
        const FhhsFit a = fit_fhhs(times, T);
        const FhhsFit b = fit_fhhs(times, synthetic_temperature(truth, times, 0.01, static_cast<std::uint64_t>(re)));
        clean = std::max({clean, rel_err(a.sigma_xi, truth.sigma_xi), rel_err(a.C1, truth.C1)});
        noisy = std::max({noisy, rel_err(b.sigma_xi, truth.sigma_xi), rel_err(b.C1, truth.C1)});
        family.push_back({re, times, T});
    }
    const FitReport r = fit_fhhs_family(family);
    double law = 0.0, r2 = 0.0;
    if (r.has_loglog) {
        law = std::max({rel_err(r.sigma_law.slope, 0.06258), rel_err(r.sigma_law.intercept, std::log(0.7866)),
                        rel_err(r.c1_law.slope, 2.446), rel_err(r.c1_law.intercept, std::log(0.5411))});
        r2 = std::min(r.sigma_law.r2, r.c1_law.r2);
    }
    o.detail << "noiseless " << clean << ", 1% noise " << noisy << ", laws " << law << ", min R^2 " << r2;
    o.require(r.has_loglog, "log-log laws");
    o.require(clean <= 0.01, "noiseless 1%");
    o.require(noisy <= 0.05, "noisy 5%");
    o.require(law <= 0.005, "laws 0.5%");
    o.require(r2 > 0.99, "R^2 > 0.99");
}

void non_gaussian(Outcome& o) {
    const auto tri = XiDistribution::standard_triangular();
    McOptions mo;
    mo.component = 1;
    double worst = 0.0;
    for (double t : {0.5, 2.0, 5.0}) {
        const SampleMoments s = sample_moments(mc_terminal_states(kVelocity, tri, 100000, t, 41, mo));
        const double su = velocity_sigma_u(kVelocity, t);
        const double analytic = tri.central_moment(3) * su * su * su / std::pow(su * tri.stddev(), 3.0);
        worst = std::max(worst, std::fabs(s.skewness() - analytic));
        o.detail << "t=" << t << ": " << s.skewness() << " vs " << analytic << "; ";
    }
    o.require(worst <= 0.03, "within 0.03");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"heat-kernel equivalence", heat_kernel_equivalence},
        {"Langevin and Liouville Monte Carlo equivalence", mc_equivalence},
        {"moment suite", moment_suite},
        {"flow-map Jacobian", jacobian},
        {"Fokker-Planck finite differences", fokker_planck},
        {"FHHS closed forms", fhhs_closed_forms},
        {"calibration round trip", calibration},
        {"non-Gaussian skewness", non_gaussian},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        failed += !o.pass;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
