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

#ifndef SSML_RANDOM_HPP
#define SSML_RANDOM_HPP

#include <cstdint>
#include <random>

namespace ssml {

/// SplitMix64 step: adds the golden-ratio increment and applies the
/// avalanche finalizer. Used to derive substream seeds from a master seed;
/// the mapping is fixed and part of the reproducibility contract.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of the private stream that drives trial `trial_index` of a batch:
/// mix64(master_seed XOR trial_index). Trials never share a stream.
constexpr std::uint64_t trial_stream_seed(std::uint64_t master_seed,
                                          std::uint64_t trial_index) noexcept {
    return mix64(master_seed ^ trial_index);
}

// Salts for auxiliary streams derived from the same master seed.
// State stream: draws hidden states (Haar samples or preparation angles).
// Apparatus stream (per trial): draws per-plate retardance imperfections.
inline constexpr std::uint64_t kStateStreamSalt = 0x517CC1B727220A95ULL;
inline constexpr std::uint64_t kApparatusStreamSalt = 0x2545F4914F6CDD1DULL;

/// Counting uniform-random stream.
///
/// The engine is std::mt19937_64 (bit-exact across standard libraries) and
/// doubles are built from the top 53 bits, so a (seed, draw count) pair pins
/// every value the simulator ever consumes. The draw counter backs the
/// fixed-draw-budget contracts of sample_shot and apply_feedback.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Uniform double in [0, 1), 53-bit resolution. Counts as one draw.
    double uniform() {
        ++draws_;
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi). One draw.
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Uniform double in [-half_width, +half_width). One draw.
    double symmetric(double half_width) { return uniform(-half_width, half_width); }

    /// Number of uniform values consumed so far (the stream position).
    std::uint64_t draws() const noexcept { return draws_; }

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
};

} // namespace ssml

#endif // SSML_RANDOM_HPP
