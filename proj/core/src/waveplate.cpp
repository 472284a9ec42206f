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

#include "ssml/waveplate.hpp"

#include <cmath>

namespace ssml {

namespace {

double reduce_fast_axis(double angle) {
    double reduced = std::fmod(angle, std::numbers::pi);
    if (reduced < 0.0) {
        reduced += std::numbers::pi;
    }
    return reduced;
}

} // namespace

Waveplate::Waveplate(double angle, double nominal_retardance, double error)
    : fast_axis_angle(reduce_fast_axis(angle)),
      retardance(nominal_retardance),
      retardance_error(error) {}

Unitary2 jones_matrix(const Waveplate& plate) {
    const double c = std::cos(plate.fast_axis_angle);
    const double s = std::sin(plate.fast_axis_angle);
    const complexd phase = std::polar(1.0, plate.effective_retardance());
    // R(theta) diag(1, phase) R(-theta), multiplied out.
    return {c * c + phase * s * s, c * s * (1.0 - phase),
            c * s * (1.0 - phase), s * s + phase * c * c};
}

WaveplateStack WaveplateStack::qwp_hwp_qwp(const std::array<double, 3>& angles,
                                           const std::array<double, 3>& retardance_errors) {
    WaveplateStack stack;
    stack.plates = {Waveplate::quarter(angles[0], retardance_errors[0]),
                    Waveplate::half(angles[1], retardance_errors[1]),
                    Waveplate::quarter(angles[2], retardance_errors[2])};
    return stack;
}

Unitary2 stack_unitary(const WaveplateStack& stack) {
    Unitary2 u = Unitary2::identity();
    for (const Waveplate& plate : stack.plates) {
        u = jones_matrix(plate) * u;
    }
    return u;
}

Unitary2 preparation_unitary(const PreparationSetting& setting) {
    return jones_matrix(setting.qwp) * jones_matrix(setting.hwp);
}

PureState prepare_state(const PreparationSetting& setting) {
    return preparation_unitary(setting).apply(PureState::horizontal());
}

PureState estimated_state(const WaveplateStack& stack, const PureState& fiducial) {
    return stack_unitary(stack).adjoint().apply(fiducial);
}

} // namespace ssml
