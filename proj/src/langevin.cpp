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

#include "liouville/langevin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <boost/math/quadrature/gauss.hpp>

#include "liouville/error.hpp"
#include "liouville/fhhs.hpp"
#include "liouville/parallel.hpp"
#include "liouville/rng.hpp"

namespace liouville {

namespace {

enum Purpose : std::uint64_t { kPositionNoise = 1, kVelocityNoise = 2, kFhhsNoise = 3 };

struct Schedule {
    std::size_t steps;
    std::vector<double> times;
    std::vector<std::size_t> record_step;  // step index at which each time is reached
};

Schedule make_schedule(double dt, double t_end, std::vector<double> output) {
    require(dt > 0.0 && std::isfinite(dt), ErrorKind::Domain, "langevin: dt must be > 0");
    require(t_end > 0.0 && std::isfinite(t_end), ErrorKind::Domain, "langevin: t_end must be > 0");
    if (output.empty()) output = {t_end};
    Schedule s;
    const auto steps_of = [&](double t) {
        const double k = std::round(t / dt);
        require(std::fabs(k * dt - t) <= 1e-9 * std::max(1.0, t), ErrorKind::Domain,
                "langevin: output time " + std::to_string(t) + " is not a multiple of dt");
        return static_cast<std::size_t>(k);
    };
    s.steps = steps_of(t_end);
    for (double t : output) {
        require(t >= 0.0 && t <= t_end * (1.0 + 1e-12), ErrorKind::Domain,
                "langevin: output times must lie in [0, t_end]");
        s.times.push_back(t);
        s.record_step.push_back(steps_of(t));
    }
    for (std::size_t i = 1; i < s.times.size(); ++i)
        require(s.times[i] > s.times[i - 1], ErrorKind::Domain,
                "langevin: output times must be increasing");
    return s;
}

PathEnsemble make_ensemble(const Schedule& s, std::size_t n, int dim, std::uint64_t seed, double dt) {
    require(n >= 1, ErrorKind::Domain, "langevin: need at least one path");
    PathEnsemble e;
    e.n_paths = n;
    e.dim = dim;
    e.times = s.times;
    e.states.assign(s.times.size() * static_cast<std::size_t>(dim) * n, 0.0);
    e.seed = seed;
    e.dt = dt;
    return e;
}

// Standard normals eta_k of one path, generated in Philox pairs.
class PathNoise {
public:
    PathNoise(std::uint64_t seed, std::uint64_t path, Purpose purpose)
        : stream_(seed, (path << 8) | purpose) {}

    double operator()(std::size_t step) {
        if ((step & 1) == 0) pair_ = stream_.normal_pair(step >> 1);
        return pair_[step & 1];
    }

private:
    CounterStream stream_;
    std::array<double, 2> pair_{};
};

// Runs `advance(state, step, noise)` for every path and records the state at
// the schedule's output steps.
template <int Dim, class Init, class Advance>
void run_paths(PathEnsemble& e, const Schedule& s, unsigned threads, Purpose purpose, Init init,
               Advance advance) {
    const std::size_t n = e.n_paths;
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            PathNoise noise(e.seed, p, purpose);
            std::array<double, Dim> y = init();
            std::size_t next = 0;
            const auto record = [&](std::size_t step) {
                while (next < s.record_step.size() && s.record_step[next] == step) {
                    for (int c = 0; c < Dim; ++c)
                        e.states[(next * Dim + static_cast<std::size_t>(c)) * n + p] = y[c];
                    ++next;
                }
            };
            record(0);
            for (std::size_t k = 0; k < s.steps; ++k) {
                advance(y, k, noise(k));
                record(k + 1);
            }
            for (int c = 0; c < Dim; ++c)
                if (!std::isfinite(y[c]))
                    throw NumericalBlowup(static_cast<double>(s.steps) * e.dt,
                                          "langevin: non-finite path state");
        }
    });
}

}  // namespace

std::size_t PathEnsemble::time_index(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::fabs(times[i] - t) <= 1e-12 * std::max(1.0, std::fabs(t))) return i;
    fail(ErrorKind::Domain, "ensemble has no output at t = " + std::to_string(t));
}

std::span<const double> PathEnsemble::values(std::size_t time_index, int component) const {
    require(n_paths > 0, ErrorKind::EmptyEnsemble, "ensemble is empty");
    require(time_index < times.size() && component >= 0 && component < dim, ErrorKind::Domain,
            "ensemble: index out of range");
    return {states.data() + (time_index * static_cast<std::size_t>(dim) + component) * n_paths,
            n_paths};
}

PathEnsemble simulate_position_langevin(const PositionModel& model, std::size_t n, double dt,
                                        double t_end, std::uint64_t seed,
                                        const LangevinOptions& options) {
    model.validate();
    const Schedule s = make_schedule(dt, t_end, options.output_times);
    PathEnsemble e = make_ensemble(s, n, 1, seed, dt);
    const double drift = model.u_p * dt;
    const double amp = std::sqrt(2.0 * model.D * dt);
    run_paths<1>(
        e, s, options.threads, kPositionNoise, [] { return std::array<double, 1>{0.0}; },
        [&](std::array<double, 1>& y, std::size_t, double eta) { y[0] += drift + amp * eta; });
    return e;
}

PathEnsemble simulate_velocity_langevin(const VelocityModel& model, std::size_t n, double dt,
                                        double t_end, std::uint64_t seed,
                                        const LangevinOptions& options) {
    model.validate();
    const Schedule s = make_schedule(dt, t_end, options.output_times);
    PathEnsemble e = make_ensemble(s, n, 2, seed, dt);
    const double amp = std::sqrt(2.0 * model.D * dt);
    const double tau_dt = model.tau_p * dt;
    const double v0 = model.v0;
    run_paths<2>(
        e, s, options.threads, kVelocityNoise, [v0] { return std::array<double, 2>{0.0, v0}; },
        [&](std::array<double, 2>& y, std::size_t, double eta) {
            const double u = y[1];
            y[0] += tau_dt * u;
            y[1] = u - u * dt + amp * eta;
        });
    return e;
}

PathEnsemble simulate_fhhs_langevin(const FhhsModel& model, FhhsDiffusion, std::size_t n,
                                    double dt, double t_end, std::uint64_t seed,
                                    const LangevinOptions& options) {
    model.validate();
    require(dt <= model.tau_p / 50.0 * (1.0 + 1e-12), ErrorKind::Domain,
            "simulate_fhhs_langevin: need dt <= tau_p / 50");
    const Schedule s = make_schedule(dt, t_end, options.output_times);
    PathEnsemble e = make_ensemble(s, n, 1, seed, dt);
    std::vector<double> amp(s.steps);
    // noise variance injected per step is the integral of 2 D(t) over the step,
    // taken from the identity 2 D = dv/dt + 2 v / tau_p with v the velocity variance
    const auto v = [&](double t) { return fhhs_velocity_variance(model, t); };
    for (std::size_t k = 0; k < s.steps; ++k) {
        const double t0 = static_cast<double>(k) * dt, t1 = t0 + dt;
        const double area = boost::math::quadrature::gauss<double, 20>::integrate(v, t0, t1);
        amp[k] = std::sqrt(std::max(0.0, v(t1) - v(t0) + 2.0 * area / model.tau_p));
    }
    const double decay = dt / model.tau_p;
    run_paths<1>(
        e, s, options.threads, kFhhsNoise, [] { return std::array<double, 1>{0.0}; },
        [&](std::array<double, 1>& y, std::size_t k, double eta) {
            y[0] += -y[0] * decay + amp[k] * eta;
        });
    return e;
}

PdfCurve empirical_pdf(const PathEnsemble& ens, double t, int component, const Binning& binning) {
    require(ens.n_paths > 0, ErrorKind::EmptyEnsemble, "empirical_pdf: ensemble is empty");
    PdfCurve h = histogram(ens.values_at(t, component), binning);
    h.set_meta("t", std::to_string(t));
    h.set_meta("n", std::to_string(ens.n_paths));
    h.set_meta("seed", std::to_string(ens.seed));
    h.set_meta("method", "langevin");
    return h;
}

SampleMoments ensemble_moments(const PathEnsemble& ens, double t, int component) {
    return sample_moments(ens.values_at(t, component));
}

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    require(static_cast<bool>(is), ErrorKind::Domain, "path dump: truncated file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
    return v;
}

}  // namespace

void write_paths_binary(const PathEnsemble& ens, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorKind::Config, "cannot open " + path + " for writing");
    put_u64(os, ens.n_paths);
    put_u64(os, ens.times.size());
    for (double t : ens.times) put_u64(os, std::bit_cast<std::uint64_t>(t));
    for (std::size_t i = 0; i < ens.times.size(); ++i)
        for (std::size_t p = 0; p < ens.n_paths; ++p)
            for (int c = 0; c < ens.dim; ++c)
                put_u64(os, std::bit_cast<std::uint64_t>(
                                ens.states[(i * static_cast<std::size_t>(ens.dim) + c) * ens.n_paths + p]));
    require(static_cast<bool>(os), ErrorKind::Config, "failed writing " + path);
}

PathEnsemble read_paths_binary(const std::string& path, int dim) {
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), ErrorKind::Config, "cannot open " + path);
    require(dim == 1 || dim == 2, ErrorKind::Domain, "read_paths_binary: dim must be 1 or 2");
    PathEnsemble e;
    e.dim = dim;
    e.n_paths = get_u64(is);
    const std::uint64_t nt = get_u64(is);
    for (std::uint64_t i = 0; i < nt; ++i) e.times.push_back(std::bit_cast<double>(get_u64(is)));
    e.states.resize(nt * static_cast<std::size_t>(dim) * e.n_paths);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t p = 0; p < e.n_paths; ++p)
            for (int c = 0; c < dim; ++c)
                e.states[(i * static_cast<std::size_t>(dim) + c) * e.n_paths + p] =
                    std::bit_cast<double>(get_u64(is));
    return e;
}

}  // namespace liouville
