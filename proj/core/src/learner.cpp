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

#include "ssml/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssml/waveplate.hpp"

namespace ssml {

void LearnerConfig::validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::invalid_argument("LearnerConfig: a must be > 0");
    }
    if (!(b >= 0.0) || !std::isfinite(b)) {
        throw std::invalid_argument("LearnerConfig: b must be >= 0");
    }
    if (!(r_range > 0.0) || !std::isfinite(r_range)) {
        throw std::invalid_argument("LearnerConfig: r_range must be > 0");
    }
    if (m_h < 1) {
        throw std::invalid_argument("LearnerConfig: m_h must be >= 1");
    }
    if (effective_max_shots() <= m_h) {
        throw std::invalid_argument("LearnerConfig: max_shots must exceed m_h");
    }
}

double feedback_weight(std::uint64_t streak, double a, double b) {
    return a * std::pow(static_cast<double>(streak) + 1.0, -b);
}

double monitored_infidelity(std::uint64_t streak) {
    return 1.0 / (1.0 + static_cast<double>(streak));
}

std::optional<FailureEvent> apply_feedback(LearnerState& state, ShotOutcome outcome,
                                           const LearnerConfig& config, RandomStream& rng) {
    ++state.shots;
    switch (outcome) {
    case ShotOutcome::Success:
        ++state.streak;
        return std::nullopt;
    case ShotOutcome::Lost:
        return std::nullopt;
    case ShotOutcome::Failure:
        break;
    }

    const std::uint64_t ended = state.streak;
    state.best_streak = std::max(state.best_streak, ended);
    const std::uint64_t weight_streak =
        config.weight_source == WeightSource::Record ? state.best_streak : ended;
    const double w = feedback_weight(weight_streak, config.a, config.b);
    for (double& angle : state.angles) {
        angle += w * rng.symmetric(config.r_range);
    }
    state.streak = 0;
    return FailureEvent{state.shots, ended};
}

namespace {

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

double born_probability(const std::array<double, 3>& angles, const Apparatus& apparatus,
                        const PureState& hidden, const PureState& fiducial) {
    return success_probability(WaveplateStack::qwp_hwp_qwp(angles, apparatus.u_retardance_errors),
                               hidden, fiducial);
}

} // namespace

LearningTrace run_trial(const PureState& hidden, const LearnerConfig& config,
                        const NoiseModel& noise, RandomStream& rng, const Apparatus& apparatus,
                        const FailureObserver& on_failure) {
    config.validate();
    noise.validate();

    const PureState fiducial = PureState::horizontal();
    const std::uint64_t shot_budget = config.effective_max_shots();

    LearnerState state;
    state.angles = config.initial_angles;
    if (config.randomize_initial_angles) {
        for (double& angle : state.angles) {
            angle = rng.uniform(0.0, std::numbers::pi);
        }
    }

    LearningTrace trace;
    bool halted = false;
    // The Born probability only changes when the angles do, i.e. at
    // perturbing failures; cache it across the success run.
    double p = born_probability(state.angles, apparatus, hidden, fiducial);

    while (state.shots < shot_budget) {
        const ShotOutcome outcome = sample_shot(p, noise, rng);
        if (outcome == ShotOutcome::Success) {
            ++trace.successes;
            apply_feedback(state, outcome, config, rng);
            if (config.halt_mode == HaltMode::Immediate && state.streak == config.m_h) {
                state.best_streak = std::max(state.best_streak, state.streak);
                trace.checkpoints.push_back({state.shots, state.streak, clamp01(1.0 - p),
                                             monitored_infidelity(state.streak)});
                trace.final_m_s = state.streak;
                halted = true;
                break;
            }
            continue;
        }
        if (outcome == ShotOutcome::Lost) {
            ++trace.losses;
            apply_feedback(state, outcome, config, rng);
            continue;
        }

        // Registered failure.
        ++trace.failures;
        const std::uint64_t ended = state.streak;
        const double eps_here = clamp01(1.0 - p);

        if (config.halt_mode == HaltMode::OnNextFailure && ended >= config.m_h) {
            // Halting failure: counted, checkpointed, but not perturbed.
            ++state.shots;
            state.best_streak = std::max(state.best_streak, ended);
            if (on_failure) {
                on_failure(FailureEvent{state.shots, ended});
            }
            trace.checkpoints.push_back(
                {state.shots, ended, eps_here, monitored_infidelity(ended)});
            trace.final_m_s = ended;
            halted = true;
            break;
        }

        const bool record = ended > state.best_streak;
        const auto event = apply_feedback(state, outcome, config, rng);
        if (on_failure && event) {
            on_failure(*event);
        }
        if (record) {
            trace.checkpoints.push_back(
                {state.shots, ended, eps_here, monitored_infidelity(ended)});
        }
        p = born_probability(state.angles, apparatus, hidden, fiducial);
    }

    trace.halt_reason = halted ? HaltReason::Halted : HaltReason::ShotBudgetExhausted;
    if (!halted) {
        trace.final_m_s = state.streak;
    }
    trace.final_angles = state.angles;
    trace.final_n = state.shots;
    trace.best_streak = state.best_streak;
    trace.final_eps_true = clamp01(1.0 - p);
    return trace;
}

LearningTrace run_trial(const PureState& hidden, const LearnerConfig& config,
                        const NoiseModel& noise, std::uint64_t seed, const Apparatus& apparatus,
                        const FailureObserver& on_failure) {
    RandomStream rng(seed);
    return run_trial(hidden, config, noise, rng, apparatus, on_failure);
}

} // namespace ssml
