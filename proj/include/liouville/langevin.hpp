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

// Euler-Maruyama ensembles of the Langevin counterparts of the solved models.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "liouville/models.hpp"
#include "liouville/pdf_curve.hpp"
#include "liouville/stats.hpp"

namespace liouville {

/// Paths sampled at the output times. States are stored as
/// [time][component][path].
struct PathEnsemble {
    std::size_t n_paths = 0;
    int dim = 1;
    std::vector<double> times;
    std::vector<double> states;
    std::uint64_t seed = 0;
    double dt = 0.0;

    std::size_t time_index(double t) const;
    std::span<const double> values(std::size_t time_index, int component) const;
    std::span<const double> values_at(double t, int component) const {
        return values(time_index(t), component);
    }
};

struct LangevinOptions {
    /// Times to record; each must be a multiple of dt. Empty = {t_end}.
    std::vector<double> output_times;
    unsigned threads = 0;  // 0 = default_threads()
};

/// X_{k+1} = X_k + u_p dt + sqrt(2 D dt) eta_k, X(0) = 0.
PathEnsemble simulate_position_langevin(const PositionModel& model, std::size_t n, double dt,
                                        double t_end, std::uint64_t seed,
                                        const LangevinOptions& options = {});

/// X_{k+1} = X_k + tau_p U_k dt, U_{k+1} = U_k - U_k dt + sqrt(2 D dt) eta_k,
/// X(0) = 0, U(0) = v0.
PathEnsemble simulate_velocity_langevin(const VelocityModel& model, std::size_t n, double dt,
                                        double t_end, std::uint64_t seed,
                                        const LangevinOptions& options = {});

enum class FhhsDiffusion { FromLiouville };

/// dU = -U / tau_p dt + sqrt(2 D(t)) dW with D = eta phi sigma_xi^2 averaged
/// over each step, U(0) = 0. Requires dt <= tau_p / 50.
PathEnsemble simulate_fhhs_langevin(const FhhsModel& model, FhhsDiffusion diffusion, std::size_t n,
                                    double dt, double t_end, std::uint64_t seed,
                                    const LangevinOptions& options = {});

/// Normalised histogram of one component at an output time.
PdfCurve empirical_pdf(const PathEnsemble& ens, double t, int component = 0,
                       const Binning& binning = {});

SampleMoments ensemble_moments(const PathEnsemble& ens, double t, int component = 0);

/// Little-endian dump: u64 n_paths, u64 n_times, f64 times[n_times], then
/// f64 states[n_times][n_paths][dim].
void write_paths_binary(const PathEnsemble& ens, const std::string& path);
PathEnsemble read_paths_binary(const std::string& path, int dim);

}  // namespace liouville
