// Copyright 2026 The ssml Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SSML_EXPERIMENT_HPP
#define SSML_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ssml/learner.hpp"
#include "ssml/waveplate.hpp"

namespace ssml {

enum class StateSource {
    Haar,            // hidden states Haar-uniform on the Bloch sphere
    WaveplateAngles, // hidden states prepared by random HWP/QWP dial angles
};

struct SweepConfig {
    int n_states = 35;
    StateSource state_source = StateSource::Haar;
    LearnerConfig learner;
    NoiseModel noise;
    std::uint64_t master_seed = 0;
    double retardance_error = 0.0;  // fixed offset on every plate, radians
    double retardance_jitter = 0.0; // half-width of a per-plate uniform offset
    double eps_floor = 1e-15;       // drops exact-zero checkpoints from fits

    void validate() const;
};

/// One aggregated checkpoint, tagged by trial index.
struct CheckpointRow {
    int trial;
    std::uint64_t n;
    std::uint64_t m_s;
    double eps_true;
    double eps_monitored;

    bool operator==(const CheckpointRow&) const = default;
};

using CheckpointTable = std::vector<CheckpointRow>;

struct TrialRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    PureState hidden;
    /// Preparation dial angles (beta1, beta2); set when the state came from
    /// preparation optics.
    std::optional<std::array<double, 2>> prep_angles;
    /// Retardance offsets drawn for this trial: prep HWP, prep QWP, then the
    /// three stack plates.
    std::array<double, 5> plate_errors{0.0, 0.0, 0.0, 0.0, 0.0};
    LearningTrace trace;
};

struct SweepResult {
    std::vector<TrialRecord> trials;
    CheckpointTable table;
};

/// Retardance offsets for one trial's five plates (prep HWP, prep QWP, then
/// the three stack plates): fixed_offset plus jitter times a uniform [-1,1)
/// draw per plate, from the apparatus stream seeded
/// mix64(trial_seed ^ kApparatusStreamSalt). Always five draws.
std::array<double, 5> draw_plate_errors(std::uint64_t trial_seed, double fixed_offset,
                                        double jitter);

/// One independent trial per hidden state. Hidden states come from a state
/// stream seeded mix64(master_seed ^ kStateStreamSalt) (two draws per state);
/// trial i runs on a stream seeded trial_stream_seed(master_seed, i); plate
/// errors follow draw_plate_errors. The result is a pure function of the
/// config; n_threads only changes wall time.
SweepResult run_sweep(const SweepConfig& config, int n_threads = 1);

enum class FitStatus { Ok, TooFewPoints, Degenerate };

/// Power law eps = C (N + N0)^(-gamma) fitted in log space.
struct FitResult {
    FitStatus status = FitStatus::TooFewPoints;
    double c = 0.0;
    double n0 = 0.0;
    double gamma = 0.0;
    double sse_log = 0.0;
    std::size_t n_points = 0;

    bool ok() const { return status == FitStatus::Ok; }
};

/// Minimizes sum [log eps - (log C - gamma log(N + N0))]^2. For fixed N0 the
/// problem is linear regression of log eps on log(N + N0); N0 is profiled by
/// a coarse scan plus golden-section refinement on [0, max(N)], or pinned by
/// fixed_n0. Points with eps <= eps_floor or non-finite coordinates are
/// dropped; fewer than 3 surviving points yields TooFewPoints, zero spread
/// in N yields Degenerate.
FitResult fit_scaling(std::span<const std::pair<double, double>> points,
                      double eps_floor = 1e-15,
                      std::optional<double> fixed_n0 = std::nullopt);

/// Agreement between the measured and the streak-count infidelity.
struct CorrelationReport {
    bool computable = false;
    std::size_t n_points = 0;
    double pearson_log = 0.0;        // Pearson r of log eps_true vs log eps_monitored
    double mean_log10_ratio = 0.0;   // mean log10(eps_true / eps_monitored)
    double stddev_log10_ratio = 0.0;
    double median_ratio = 0.0;       // median eps_true / eps_monitored
};

/// Requires at least 10 rows with eps_true > eps_floor; otherwise returns a
/// non-computable report.
CorrelationReport compare_monitored_vs_true(const CheckpointTable& table,
                                            double eps_floor = 1e-9);

/// Infidelity an experimenter would deduce from dial angles alone:
/// 1 - |<H| U_ideal(alpha) V_ideal(beta) |H>|^2, with every plate rebuilt at
/// its nominal retardance regardless of the errors actually present.
double angle_deduced_infidelity(const PreparationSetting& prep, const WaveplateStack& learned);

// --- Noise-ceiling study -------------------------------------------------

struct NoiseStudyConfig {
    std::vector<double> q_values;   // false-negative probabilities to scan
    int seeds_per_q = 50;
    std::uint64_t shots = 1000000;  // copies per run; halting streak is set equal
    bool fiducial_hidden = true;    // hidden = |H> (else Haar per seed)
    LearnerConfig learner;          // a, b, r_range, weight_source are honored;
                                    // m_h and max_shots are derived from `shots`
    std::uint64_t master_seed = 0;
};

struct NoiseStudySeedRow {
    double q;
    int seed_index;
    std::uint64_t best_streak;
    double final_eps;
    HaltReason halt_reason;
};

struct NoiseStudyRow {
    double q;
    int n_seeds;
    double median_best_streak;
    double median_final_eps;
    double min_final_eps;
    double max_final_eps;
};

struct NoiseStudyResult {
    std::vector<NoiseStudyRow> rows;      // one per q
    std::vector<NoiseStudySeedRow> detail;
};

/// Sweeps the false-negative probability and reports the streak ceiling and
/// the converged-infidelity plateau. Each (q, seed) pair runs one trial with
/// m_h = shots and max_shots = shots + 1, so a noiseless run halts exactly at
/// the streak ceiling and a noisy run consumes the full budget.
NoiseStudyResult run_noise_study(const NoiseStudyConfig& config, int n_threads = 1);

// --- Angle-deduced infidelity study --------------------------------------

struct AngleStudyConfig {
    int n_states = 7;
    LearnerConfig learner;
    NoiseModel noise;
    double retardance_error = 0.021; // fixed offset on all five plates
    double retardance_jitter = 0.0;
    std::uint64_t master_seed = 0;
};

struct AngleStudyRow {
    int trial;
    double beta1;
    double beta2;
    std::uint64_t final_n;
    std::uint64_t final_m_s;
    double eps_true;
    double eps_deduced;
    HaltReason halt_reason;
};

/// Learns states prepared by imperfect optics and contrasts the true final
/// infidelity with the one deduced from dial angles under the ideal-plate
/// assumption.
std::vector<AngleStudyRow> run_angle_study(const AngleStudyConfig& config, int n_threads = 1);

} // namespace ssml

#endif // SSML_EXPERIMENT_HPP
