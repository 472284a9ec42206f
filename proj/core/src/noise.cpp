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

#include "ssml/noise.hpp"

#include <stdexcept>

namespace ssml {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

} // namespace

void NoiseModel::validate() const {
    if (!is_probability(p_false_negative)) {
        throw std::invalid_argument("NoiseModel: p_false_negative outside [0, 1]");
    }
    if (!is_probability(p_false_positive)) {
        throw std::invalid_argument("NoiseModel: p_false_positive outside [0, 1]");
    }
    if (!is_probability(p_loss)) {
        throw std::invalid_argument("NoiseModel: p_loss outside [0, 1]");
    }
}

double success_probability(const WaveplateStack& stack, const PureState& psi,
                           const PureState& fiducial) {
    const Unitary2 u = stack_unitary(stack);
    const complexd transformed_h = u.m00 * psi.amp_h() + u.m01 * psi.amp_v();
    const complexd transformed_v = u.m10 * psi.amp_h() + u.m11 * psi.amp_v();
    const complexd amp =
        std::conj(fiducial.amp_h()) * transformed_h + std::conj(fiducial.amp_v()) * transformed_v;
    const double p = std::norm(amp);
    return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

ShotOutcome sample_shot(double p_success, const NoiseModel& noise, RandomStream& rng) {
    if (p_success < -1e-9 || p_success > 1.0 + 1e-9) {
        throw std::invalid_argument("sample_shot: p_success outside [0, 1]");
    }
    const double p = p_success < 0.0 ? 0.0 : (p_success > 1.0 ? 1.0 : p_success);

    // Fixed three-draw budget: loss, outcome, flip — always in this order.
    const double u_loss = rng.uniform();
    const double u_outcome = rng.uniform();
    const double u_flip = rng.uniform();

    if (u_loss < noise.p_loss) {
        return ShotOutcome::Lost;
    }
    const bool true_success = u_outcome < p;
    if (true_success) {
        return u_flip < noise.p_false_negative ? ShotOutcome::Failure : ShotOutcome::Success;
    }
    return u_flip < noise.p_false_positive ? ShotOutcome::Success : ShotOutcome::Failure;
}

} // namespace ssml
