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

#ifndef SSML_LEARNER_HPP
#define SSML_LEARNER_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "ssml/noise.hpp"
#include "ssml/qubit.hpp"
#include "ssml/random.hpp"

namespace ssml {

enum class HaltMode {
    Immediate,     // stop the instant the streak reaches m_h
    OnNextFailure, // once the streak reaches m_h, stop at the next registered failure
};

enum class HaltReason { Halted, ShotBudgetExhausted };

/// Which streak value sets the random-walk weight at a failure: the streak
/// that just ended (default), or the running record.
enum class WeightSource { Streak, Record };

struct LearnerConfig {
    double a = 0.3;                             // weight amplitude
    double b = 0.5;                             // weight decay exponent
    double r_range = std::numbers::pi / 2.0;    // half-width of the uniform r draw
    std::uint64_t m_h = 60000;                  // halting streak
    HaltMode halt_mode = HaltMode::Immediate;
    std::uint64_t max_shots = 0;                // 0 -> 200 * m_h
    WeightSource weight_source = WeightSource::Streak;
    std::array<double, 3> initial_angles{0.0, 0.0, 0.0};
    bool randomize_initial_angles = false;      // draw each angle uniform on [0, pi)

    std::uint64_t effective_max_shots() const {
        return max_shots == 0 ? 200 * m_h : max_shots;
    }

    /// Throws std::invalid_argument on a > 0, b >= 0, r_range > 0, m_h >= 1,
    /// or max_shots > m_h violations.
    void validate() const;
};

/// Mutable loop state: the three stack angles, the current success streak
/// M_S, the copy counter N, and the record streak.
struct LearnerState {
    std::array<double, 3> angles{0.0, 0.0, 0.0};
    std::uint64_t streak = 0;
    std::uint64_t shots = 0;
    std::uint64_t best_streak = 0;
};

/// A registered failure: the copy count at the failing shot (inclusive) and
/// the length of the success streak it terminated.
struct FailureEvent {
    std::uint64_t n;
    std::uint64_t streak;
};

/// Random-walk weight a (streak+1)^(-b).
double feedback_weight(std::uint64_t streak, double a, double b);

/// Streak-count infidelity estimate (1 + M_S)^(-1).
double monitored_infidelity(std::uint64_t streak);

/// One feedback step. Success: keep angles, streak += 1. Failure: weight
/// from the streak at the instant of failure (or the record, per
/// weight_source), each angle gets an independent uniform kick in
/// [-w r_range, +w r_range), streak resets, the event is returned, and
/// best_streak absorbs the ended streak. Lost: nothing moves. The copy
/// counter increments in all three cases.
///
/// Draw budget: exactly 3 uniforms on Failure, 0 otherwise.
std::optional<FailureEvent> apply_feedback(LearnerState& state, ShotOutcome outcome,
                                           const LearnerConfig& config, RandomStream& rng);

/// Record-maximum sample: copy count and streak at a record-setting failure
/// (or at halting), with the true infidelity at the angles that produced the
/// streak and the streak-count estimate (1+M_S)^(-1).
struct Checkpoint {
    std::uint64_t n = 0;
    std::uint64_t m_s = 0;
    double eps_true = 0.0;
    double eps_monitored = 0.0;

    bool operator==(const Checkpoint&) const = default;
};

struct LearningTrace {
    std::vector<Checkpoint> checkpoints;
    std::array<double, 3> final_angles{0.0, 0.0, 0.0};
    std::uint64_t final_n = 0;
    std::uint64_t final_m_s = 0;
    std::uint64_t best_streak = 0;
    std::uint64_t successes = 0;
    std::uint64_t failures = 0;
    std::uint64_t losses = 0;
    double final_eps_true = 0.0;
    HaltReason halt_reason = HaltReason::Halted;

    bool operator==(const LearningTrace&) const = default;
};

/// Imperfections of the physical learning stack: per-plate retardance
/// offsets for the QWP-HWP-QWP train, in traversal order.
struct Apparatus {
    std::array<double, 3> u_retardance_errors{0.0, 0.0, 0.0};
};

using FailureObserver = std::function<void(const FailureEvent&)>;

/// Full learning loop against a hidden state: shot sampling, feedback,
/// record-maximum checkpointing, halting.
///
/// Checkpoints: every failure whose ended streak strictly exceeds the record
/// appends one, with eps_true evaluated at the pre-perturbation angles (the
/// angles in force during the streak). Immediate halting appends a final
/// checkpoint at the moment the streak reaches m_h; OnNextFailure waits for
/// the next registered failure, appends its checkpoint, and stops without
/// applying the perturbation. Exhausting max_shots ends the trace with no
/// final checkpoint and halt_reason = ShotBudgetExhausted.
///
/// The observer (when set) fires on every registered failure, halting
/// failures included.
///
/// Draw budget: 3 per shot, plus 3 per perturbing failure, plus 3 up front
/// when initial angles are randomized.
LearningTrace run_trial(const PureState& hidden, const LearnerConfig& config,
                        const NoiseModel& noise, RandomStream& rng,
                        const Apparatus& apparatus = {},
                        const FailureObserver& on_failure = {});

/// Convenience overload owning its stream.
LearningTrace run_trial(const PureState& hidden, const LearnerConfig& config,
                        const NoiseModel& noise, std::uint64_t seed,
                        const Apparatus& apparatus = {},
                        const FailureObserver& on_failure = {});

} // namespace ssml

#endif // SSML_LEARNER_HPP
