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

#ifndef SSML_QUBIT_HPP
#define SSML_QUBIT_HPP

#include <complex>

#include "ssml/random.hpp"

namespace ssml {

using complexd = std::complex<double>;

/// Unit-norm polarization qubit with amplitudes on the (H, V) basis.
/// Construction normalizes; a near-zero input vector is rejected.
class PureState {
public:
    PureState() : h_(1.0, 0.0), v_(0.0, 0.0) {}
    PureState(complexd amp_h, complexd amp_v);

    complexd amp_h() const noexcept { return h_; }
    complexd amp_v() const noexcept { return v_; }

    static PureState horizontal() { return PureState(1.0, 0.0); }
    static PureState vertical() { return PureState(0.0, 1.0); }
    static PureState diagonal() { return PureState(1.0, 1.0); }

    bool operator==(const PureState&) const = default;

private:
    complexd h_, v_;
};

/// 2x2 complex matrix, row-major. Values produced by this library are
/// unitary to 1e-12; the struct itself does not enforce it.
struct Unitary2 {
    complexd m00, m01, m10, m11;

    static Unitary2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Unitary2 adjoint() const {
        return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
    }

    /// Matrix-vector product; the result is renormalized through the
    /// PureState constructor to absorb rounding drift.
    PureState apply(const PureState& s) const {
        return PureState(m00 * s.amp_h() + m01 * s.amp_v(),
                         m10 * s.amp_h() + m11 * s.amp_v());
    }
};

inline Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

/// max |(U†U - I)_ij|, the unitarity defect.
double unitarity_defect(const Unitary2& u);

/// <a|b>
complexd inner_product(const PureState& a, const PureState& b);

/// |<a|b>|^2
double fidelity(const PureState& a, const PureState& b);

/// 1 - |<a|b>|^2, clamped to [0, 1] against rounding.
double infidelity(const PureState& a, const PureState& b);

/// Stokes 3-vector; unit length for pure states. Convention: |H> -> (1,0,0),
/// (|H>+|V>)/sqrt2 -> (0,1,0).
struct StokesVector {
    double s1, s2, s3;
};

StokesVector to_stokes(const PureState& s);

/// sin^2(phi/2) where phi is the angle between the (unit) vectors, computed
/// through atan2 of cross-norm and dot for stability near 0 and pi.
double stokes_infidelity(const StokesVector& a, const StokesVector& b);

/// Haar-uniform pure state (uniform on the Bloch sphere). Consumes exactly
/// two draws: polar cosine, then azimuth.
PureState haar_random_state(RandomStream& rng);

} // namespace ssml

#endif // SSML_QUBIT_HPP
