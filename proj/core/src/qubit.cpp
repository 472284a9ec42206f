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

#include "ssml/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ssml {

PureState::PureState(complexd amp_h, complexd amp_v) {
    const double norm = std::sqrt(std::norm(amp_h) + std::norm(amp_v));
    if (norm < 1e-12) {
        throw std::invalid_argument("PureState: amplitudes have near-zero norm");
    }
    h_ = amp_h / norm;
    v_ = amp_v / norm;
}

double unitarity_defect(const Unitary2& u) {
    const Unitary2 p = u.adjoint() * u;
    const Unitary2 id = Unitary2::identity();
    double defect = 0.0;
    defect = std::max(defect, std::abs(p.m00 - id.m00));
    defect = std::max(defect, std::abs(p.m01 - id.m01));
    defect = std::max(defect, std::abs(p.m10 - id.m10));
    defect = std::max(defect, std::abs(p.m11 - id.m11));
    return defect;
}

complexd inner_product(const PureState& a, const PureState& b) {
    return std::conj(a.amp_h()) * b.amp_h() + std::conj(a.amp_v()) * b.amp_v();
}

double fidelity(const PureState& a, const PureState& b) {
    return std::norm(inner_product(a, b));
}

double infidelity(const PureState& a, const PureState& b) {
    return std::clamp(1.0 - fidelity(a, b), 0.0, 1.0);
}

StokesVector to_stokes(const PureState& s) {
    const complexd cross = std::conj(s.amp_h()) * s.amp_v();
    return {std::norm(s.amp_h()) - std::norm(s.amp_v()), 2.0 * cross.real(),
            2.0 * cross.imag()};
}

double stokes_infidelity(const StokesVector& a, const StokesVector& b) {
    const double dot = a.s1 * b.s1 + a.s2 * b.s2 + a.s3 * b.s3;
    const double cx = a.s2 * b.s3 - a.s3 * b.s2;
    const double cy = a.s3 * b.s1 - a.s1 * b.s3;
    const double cz = a.s1 * b.s2 - a.s2 * b.s1;
    const double cross_norm = std::sqrt(cx * cx + cy * cy + cz * cz);
    const double phi = std::atan2(cross_norm, dot);
    const double s = std::sin(phi / 2.0);
    return std::clamp(s * s, 0.0, 1.0);
}

PureState haar_random_state(RandomStream& rng) {
    // cos(theta) uniform on [-1, 1] makes the Bloch vector area-uniform.
    const double cos_theta = 1.0 - 2.0 * rng.uniform();
    const double azimuth = 2.0 * std::numbers::pi * rng.uniform();
    const double half_theta = 0.5 * std::acos(cos_theta);
    return PureState(std::cos(half_theta),
                     std::sin(half_theta) * std::polar(1.0, azimuth));
}

} // namespace ssml
