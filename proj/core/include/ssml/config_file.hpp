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

#ifndef SSML_CONFIG_FILE_HPP
#define SSML_CONFIG_FILE_HPP

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "ssml/experiment.hpp"

namespace ssml {

/// Parse or validation error carrying the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Angle token: a plain value is radians; a "deg:" prefix converts from
/// degrees ("deg:45" -> pi/4).
double parse_angle(std::string_view token);

/// Sweep configuration from `key = value` lines; `#` starts a comment, blank
/// lines are skipped, unknown keys raise ConfigError naming the key.
///
/// Keys: n_states, state_source (haar|waveplate_angles), master_seed,
/// a, b, r_range, m_h, halt_mode (immediate|on_next_failure), max_shots,
/// weight_source (streak|record), init_angles (three angle tokens, or
/// "randomized"), noise_fn, noise_fp, noise_loss, retardance_error,
/// retardance_jitter, eps_floor. Angle-valued keys accept the deg: prefix.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig parse_sweep_config_file(const std::filesystem::path& path);

} // namespace ssml

#endif // SSML_CONFIG_FILE_HPP
