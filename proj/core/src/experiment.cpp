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

#include "ssml/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace ssml {

void SweepConfig::validate() const {
    if (n_states < 1) {
        throw std::invalid_argument("SweepConfig: n_states must be >= 1");
    }
    if (!(eps_floor >= 0.0)) {
        throw std::invalid_argument("SweepConfig: eps_floor must be >= 0");
    }
    if (retardance_jitter < 0.0) {
        throw std::invalid_argument("SweepConfig: retardance_jitter must be >= 0");
    }
    learner.validate();
    noise.validate();
}

namespace {

// Runs `count` jobs on up to n_threads workers; results land by index so the
// output order never depends on scheduling.
template <typename Job>
void run_indexed(int count, int n_threads, Job&& job) {
    if (n_threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) {
            job(i);
        }
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            job(i);
        }
    };
    const int spawn = std::min(n_threads, count);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int t = 0; t < spawn; ++t) {
        pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
        t.join();
    }
}

double median(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return values[mid];
    }
    return 0.5 * (values[mid - 1] + values[mid]);
}

} // namespace

std::array<double, 5> draw_plate_errors(std::uint64_t trial_seed, double fixed_offset,
                                        double jitter) {
    RandomStream apparatus(mix64(trial_seed ^ kApparatusStreamSalt));
    std::array<double, 5> errors{};
    for (double& e : errors) {
        // Always five draws, jitter or not, to keep stream positions stable.
        const double u = apparatus.symmetric(1.0);
        e = fixed_offset + jitter * u;
    }
    return errors;
}

SweepResult run_sweep(const SweepConfig& config, int n_threads) {
    config.validate();

    // Hidden states are drawn up front from the dedicated state stream, so
    // trial execution order cannot affect them.
    RandomStream state_stream(mix64(config.master_seed ^ kStateStreamSalt));
    std::vector<TrialRecord> trials(static_cast<std::size_t>(config.n_states));
    for (int i = 0; i < config.n_states; ++i) {
        TrialRecord& rec = trials[static_cast<std::size_t>(i)];
        rec.trial = i;
        rec.seed = trial_stream_seed(config.master_seed, static_cast<std::uint64_t>(i));
        rec.plate_errors =
            draw_plate_errors(rec.seed, config.retardance_error, config.retardance_jitter);
        if (config.state_source == StateSource::Haar) {
            rec.hidden = haar_random_state(state_stream);
        } else {
            const double beta1 = state_stream.uniform(0.0, std::numbers::pi);
            const double beta2 = state_stream.uniform(0.0, std::numbers::pi);
            rec.prep_angles = {beta1, beta2};
            rec.hidden = prepare_state(PreparationSetting::make(
                beta1, beta2, rec.plate_errors[0], rec.plate_errors[1]));
        }
    }

    run_indexed(config.n_states, n_threads, [&](int i) {
        TrialRecord& rec = trials[static_cast<std::size_t>(i)];
        Apparatus apparatus;
        apparatus.u_retardance_errors = {rec.plate_errors[2], rec.plate_errors[3],
                                         rec.plate_errors[4]};
        rec.trace = run_trial(rec.hidden, config.learner, config.noise, rec.seed, apparatus);
    });

    SweepResult result;
    result.trials = std::move(trials);
    for (const TrialRecord& rec : result.trials) {
        for (const Checkpoint& c : rec.trace.checkpoints) {
            result.table.push_back({rec.trial, c.n, c.m_s, c.eps_true, c.eps_monitored});
        }
    }
    return result;
}

namespace {

struct ProfiledFit {
    double sse = std::numeric_limits<double>::infinity();
    double gamma = 0.0;
    double log_c = 0.0;
    bool degenerate = true;
};

// Ordinary least squares of log(eps) on log(N + n0); the inner, exactly
// solvable half of the profiled fit.
ProfiledFit fit_at(const std::vector<std::pair<double, double>>& pts, double n0) {
    const double n = static_cast<double>(pts.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [N, eps] : pts) {
        mean_x += std::log(N + n0);
        mean_y += std::log(eps);
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [N, eps] : pts) {
        const double dx = std::log(N + n0) - mean_x;
        const double dy = std::log(eps) - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    ProfiledFit fit;
    if (sxx <= 0.0) {
        return fit;
    }
    const double slope = sxy / sxx;
    const double intercept = mean_y - slope * mean_x;
    double sse = 0.0;
    for (const auto& [N, eps] : pts) {
        const double r = std::log(eps) - (intercept + slope * std::log(N + n0));
        sse += r * r;
    }
    fit.sse = sse;
    fit.gamma = -slope;
    fit.log_c = intercept;
    fit.degenerate = false;
    return fit;
}

} // namespace

FitResult fit_scaling(std::span<const std::pair<double, double>> points, double eps_floor,
                      std::optional<double> fixed_n0) {
    std::vector<std::pair<double, double>> usable;
    usable.reserve(points.size());
    for (const auto& [N, eps] : points) {
        if (std::isfinite(N) && std::isfinite(eps) && N > 0.0 && eps > eps_floor) {
            usable.push_back({N, eps});
        }
    }

    FitResult result;
    result.n_points = usable.size();
    if (usable.size() < 3) {
        result.status = FitStatus::TooFewPoints;
        return result;
    }

    double n_max = 0.0;
    for (const auto& [N, eps] : usable) {
        n_max = std::max(n_max, N);
    }

    double best_n0 = 0.0;
    ProfiledFit best;
    if (fixed_n0) {
        if (*fixed_n0 < 0.0 || !std::isfinite(*fixed_n0)) {
            throw std::invalid_argument("fit_scaling: fixed N0 must be finite and >= 0");
        }
        best_n0 = *fixed_n0;
        best = fit_at(usable, best_n0);
    } else {
        // Coarse scan brackets the basin, golden-section refines it. The
        // bracket endpoints follow the scan grid, so rescaling every N by k
        // rescales the recovered N0 by exactly k.
        constexpr int kGridPoints = 65;
        int best_index = 0;
        for (int g = 0; g < kGridPoints; ++g) {
            const double n0 = n_max * static_cast<double>(g) / (kGridPoints - 1);
            const ProfiledFit fit = fit_at(usable, n0);
            if (fit.sse < best.sse) {
                best = fit;
                best_n0 = n0;
                best_index = g;
            }
        }
        double lo = n_max * static_cast<double>(std::max(0, best_index - 1)) / (kGridPoints - 1);
        double hi = n_max * static_cast<double>(std::min(kGridPoints - 1, best_index + 1)) /
                    (kGridPoints - 1);
        constexpr double kInvGolden = 0.6180339887498949;
        const double tolerance = std::max(1e-12, 1e-14 * n_max);
        while (hi - lo > tolerance) {
            const double c1 = hi - kInvGolden * (hi - lo);
            const double c2 = lo + kInvGolden * (hi - lo);
            if (fit_at(usable, c1).sse < fit_at(usable, c2).sse) {
                hi = c2;
            } else {
                lo = c1;
            }
        }
        const double refined = 0.5 * (lo + hi);
        const ProfiledFit fit = fit_at(usable, refined);
        if (fit.sse <= best.sse) {
            best = fit;
            best_n0 = refined;
        }
    }

    if (best.degenerate) {
        result.status = FitStatus::Degenerate;
        return result;
    }
    result.status = FitStatus::Ok;
    result.c = std::exp(best.log_c);
    result.n0 = best_n0;
    result.gamma = best.gamma;
    result.sse_log = best.sse;
    return result;
}

CorrelationReport compare_monitored_vs_true(const CheckpointTable& table, double eps_floor) {
    std::vector<double> lt, lm;
    for (const CheckpointRow& row : table) {
        if (row.eps_true > eps_floor && row.eps_monitored > 0.0) {
            lt.push_back(std::log(row.eps_true));
            lm.push_back(std::log(row.eps_monitored));
        }
    }

    CorrelationReport report;
    report.n_points = lt.size();
    if (lt.size() < 10) {
        return report;
    }

    const double n = static_cast<double>(lt.size());
    double mt = 0.0, mm = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        mt += lt[i];
        mm += lm[i];
    }
    mt /= n;
    mm /= n;
    double stt = 0.0, smm = 0.0, stm = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        stt += (lt[i] - mt) * (lt[i] - mt);
        smm += (lm[i] - mm) * (lm[i] - mm);
        stm += (lt[i] - mt) * (lm[i] - mm);
    }
    if (stt <= 0.0 || smm <= 0.0) {
        // Zero spread on either axis: correlation undefined.
        return report;
    }

    std::vector<double> log10_ratio(lt.size());
    constexpr double kLn10 = 2.302585092994046;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        log10_ratio[i] = (lt[i] - lm[i]) / kLn10;
    }
    double mean_r = 0.0;
    for (double r : log10_ratio) {
        mean_r += r;
    }
    mean_r /= n;
    double var_r = 0.0;
    for (double r : log10_ratio) {
        var_r += (r - mean_r) * (r - mean_r);
    }

    report.computable = true;
    report.pearson_log = stm / std::sqrt(stt * smm);
    report.mean_log10_ratio = mean_r;
    report.stddev_log10_ratio = std::sqrt(var_r / n);
    report.median_ratio = std::pow(10.0, median(log10_ratio));
    return report;
}

double angle_deduced_infidelity(const PreparationSetting& prep, const WaveplateStack& learned) {
    WaveplateStack ideal_stack;
    ideal_stack.plates.reserve(learned.plates.size());
    for (const Waveplate& plate : learned.plates) {
        ideal_stack.plates.push_back(plate.ideal());
    }
    const PreparationSetting ideal_prep{prep.hwp.ideal(), prep.qwp.ideal()};
    const Unitary2 composite = stack_unitary(ideal_stack) * preparation_unitary(ideal_prep);
    // <H| U V |H> is the composite's top-left entry.
    return std::clamp(1.0 - std::norm(composite.m00), 0.0, 1.0);
}

NoiseStudyResult run_noise_study(const NoiseStudyConfig& config, int n_threads) {
    if (config.q_values.empty()) {
        throw std::invalid_argument("NoiseStudyConfig: q_values must be non-empty");
    }
    if (config.seeds_per_q < 1) {
        throw std::invalid_argument("NoiseStudyConfig: seeds_per_q must be >= 1");
    }
    if (config.shots < 1) {
        throw std::invalid_argument("NoiseStudyConfig: shots must be >= 1");
    }
    for (double q : config.q_values) {
        if (!(q >= 0.0 && q <= 1.0)) {
            throw std::invalid_argument("NoiseStudyConfig: q outside [0, 1]");
        }
    }

    LearnerConfig learner = config.learner;
    learner.m_h = config.shots;
    learner.max_shots = config.shots + 1;
    learner.halt_mode = HaltMode::Immediate;
    learner.validate();

    const int runs_per_q = config.seeds_per_q;
    const int total = static_cast<int>(config.q_values.size()) * runs_per_q;
    std::vector<NoiseStudySeedRow> detail(static_cast<std::size_t>(total));

    run_indexed(total, n_threads, [&](int idx) {
        const int qi = idx / runs_per_q;
        const int si = idx % runs_per_q;
        const double q = config.q_values[static_cast<std::size_t>(qi)];
        const std::uint64_t seed =
            trial_stream_seed(config.master_seed, static_cast<std::uint64_t>(idx));
        PureState hidden = PureState::horizontal();
        if (!config.fiducial_hidden) {
            RandomStream state_stream(mix64(seed ^ kStateStreamSalt));
            hidden = haar_random_state(state_stream);
        }
        NoiseModel noise;
        noise.p_false_negative = q;
        const LearningTrace trace = run_trial(hidden, learner, noise, seed);
        detail[static_cast<std::size_t>(idx)] = {q, si, trace.best_streak, trace.final_eps_true,
                                                 trace.halt_reason};
    });

    NoiseStudyResult result;
    result.detail = std::move(detail);
    for (std::size_t qi = 0; qi < config.q_values.size(); ++qi) {
        std::vector<double> bests, finals;
        bests.reserve(static_cast<std::size_t>(runs_per_q));
        finals.reserve(static_cast<std::size_t>(runs_per_q));
        for (int si = 0; si < runs_per_q; ++si) {
            const NoiseStudySeedRow& row =
                result.detail[qi * static_cast<std::size_t>(runs_per_q) +
                              static_cast<std::size_t>(si)];
            bests.push_back(static_cast<double>(row.best_streak));
            finals.push_back(row.final_eps);
        }
        NoiseStudyRow row;
        row.q = config.q_values[qi];
        row.n_seeds = runs_per_q;
        row.median_best_streak = median(bests);
        row.median_final_eps = median(finals);
        row.min_final_eps = *std::min_element(finals.begin(), finals.end());
        row.max_final_eps = *std::max_element(finals.begin(), finals.end());
        result.rows.push_back(row);
    }
    return result;
}

std::vector<AngleStudyRow> run_angle_study(const AngleStudyConfig& config, int n_threads) {
    SweepConfig sweep;
    sweep.n_states = config.n_states;
    sweep.state_source = StateSource::WaveplateAngles;
    sweep.learner = config.learner;
    sweep.noise = config.noise;
    sweep.master_seed = config.master_seed;
    sweep.retardance_error = config.retardance_error;
    sweep.retardance_jitter = config.retardance_jitter;

    const SweepResult result = run_sweep(sweep, n_threads);

    std::vector<AngleStudyRow> rows;
    rows.reserve(result.trials.size());
    for (const TrialRecord& rec : result.trials) {
        const auto& [beta1, beta2] = *rec.prep_angles;
        // Deduced value: dial angles only, ideal plates. The true value is
        // what the imperfect optics actually achieved.
        const PreparationSetting prep = PreparationSetting::make(beta1, beta2);
        const WaveplateStack learned = WaveplateStack::qwp_hwp_qwp(rec.trace.final_angles);
        AngleStudyRow row;
        row.trial = rec.trial;
        row.beta1 = beta1;
        row.beta2 = beta2;
        row.final_n = rec.trace.final_n;
        row.final_m_s = rec.trace.final_m_s;
        row.eps_true = rec.trace.final_eps_true;
        row.eps_deduced = angle_deduced_infidelity(prep, learned);
        row.halt_reason = rec.trace.halt_reason;
        rows.push_back(row);
    }
    return rows;
}

} // namespace ssml
