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

#ifndef SSML_NOISE_HPP
#define SSML_NOISE_HPP

#include "ssml/qubit.hpp"
#include "ssml/random.hpp"
#include "ssml/waveplate.hpp"

namespace ssml {

/// Per-shot detector imperfections. Loss is applied first (the copy is
/// consumed with no record); the flip probabilities then corrupt the
/// registered outcome. A false negative turns a true success into a
/// registered failure, which is what caps the attainable success streak
/// at roughly 1/p_false_negative.
struct NoiseModel {
    double p_false_negative = 0.0;
    double p_false_positive = 0.0;
    double p_loss = 0.0;

    /// Throws std::invalid_argument unless every probability is in [0, 1].
    void validate() const;
};

enum class ShotOutcome { Success, Failure, Lost };

/// Born probability |<fiducial| U psi>|^2 of a success detection.
double success_probability(const WaveplateStack& stack, const PureState& psi,
                           const PureState& fiducial);

/// One detector shot. Consumes exactly three uniform draws in fixed order
/// (loss, outcome, flip) regardless of which branches fire, so a stream
/// position is a pure function of the shot count.
///
/// p_success outside [0, 1] by more than 1e-9 throws std::invalid_argument:
/// that signals a numerical bug upstream, not a sampling condition.
ShotOutcome sample_shot(double p_success, const NoiseModel& noise, RandomStream& rng);

} // namespace ssml

#endif // SSML_NOISE_HPP
