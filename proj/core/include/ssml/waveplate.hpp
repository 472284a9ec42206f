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

#ifndef SSML_WAVEPLATE_HPP
#define SSML_WAVEPLATE_HPP

#include <array>
#include <numbers>
#include <vector>

#include "ssml/qubit.hpp"

namespace ssml {

inline constexpr double kQuarterWaveRetardance = std::numbers::pi / 2.0;
inline constexpr double kHalfWaveRetardance = std::numbers::pi;

/// Birefringent retarder at a rotatable fast axis. The fast-axis angle is
/// reduced to [0, pi) on construction (the Jones matrix has period pi);
/// retardance_error models plate imperfection and adds to the nominal value.
struct Waveplate {
    double fast_axis_angle;
    double retardance;
    double retardance_error;

    Waveplate(double angle, double nominal_retardance, double error = 0.0);

    static Waveplate quarter(double angle, double error = 0.0) {
        return Waveplate(angle, kQuarterWaveRetardance, error);
    }
    static Waveplate half(double angle, double error = 0.0) {
        return Waveplate(angle, kHalfWaveRetardance, error);
    }

    double effective_retardance() const noexcept { return retardance + retardance_error; }

    /// Same dial angle and nominal retardance, zero error.
    Waveplate ideal() const { return Waveplate(fast_axis_angle, retardance, 0.0); }
};

/// Jones matrix R(theta) diag(1, e^{i Gamma}) R(-theta) with theta the
/// fast-axis angle and Gamma the effective retardance (phase on the slow
/// axis). Ideal plates at zero angle: QWP -> diag(1, i), HWP -> diag(1, -1).
Unitary2 jones_matrix(const Waveplate& plate);

/// Ordered train of plates; light traverses in list order, so the composite
/// matrix multiplies later plates on the left.
struct WaveplateStack {
    std::vector<Waveplate> plates;

    /// The learnable unitary: QWP(a1), HWP(a2), QWP(a3) in traversal order.
    static WaveplateStack qwp_hwp_qwp(const std::array<double, 3>& angles,
                                      const std::array<double, 3>& retardance_errors = {});
};

Unitary2 stack_unitary(const WaveplateStack& stack);

/// State-preparation optics after an ideal horizontal polarizer:
/// HWP(beta1) then QWP(beta2) acting on |H>.
struct PreparationSetting {
    Waveplate hwp;
    Waveplate qwp;

    static PreparationSetting make(double beta1, double beta2, double hwp_error = 0.0,
                                   double qwp_error = 0.0) {
        return {Waveplate::half(beta1, hwp_error), Waveplate::quarter(beta2, qwp_error)};
    }
};

/// The preparation unitary V = J(QWP) J(HWP).
Unitary2 preparation_unitary(const PreparationSetting& setting);

/// V |H>, the hidden state generated by the preparation optics.
PureState prepare_state(const PreparationSetting& setting);

/// U† |fiducial>: the state identified by a learned stack, which is also the
/// state reproduced by sending the fiducial backward through the stack.
PureState estimated_state(const WaveplateStack& stack, const PureState& fiducial);

} // namespace ssml

#endif // SSML_WAVEPLATE_HPP
