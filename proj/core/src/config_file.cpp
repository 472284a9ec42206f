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

#include "ssml/config_file.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ssml/serialize.hpp"

namespace ssml {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::uint64_t parse_u64(const std::string& key, std::string_view token) {
    const double value = parse_double(token);
    if (value < 0.0 || value != std::floor(value) || value > 1.8e19) {
        throw ConfigError(key, "key '" + key + "': expected a non-negative integer, got '" +
                                   std::string(token) + "'");
    }
    return static_cast<std::uint64_t>(value);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::stringstream stream{std::string(s)};
    std::string part;
    while (std::getline(stream, part, sep)) {
        parts.push_back(part);
    }
    return parts;
}

} // namespace

double parse_angle(std::string_view token) {
    token = trim(token);
    constexpr std::string_view kDegreesPrefix = "deg:";
    if (token.substr(0, kDegreesPrefix.size()) == kDegreesPrefix) {
        return parse_double(token.substr(kDegreesPrefix.size())) * std::numbers::pi / 180.0;
    }
    return parse_double(token);
}

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig config;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) {
            continue;
        }
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("", "line " + std::to_string(line_number) +
                                      ": expected 'key = value', got '" + std::string(view) + "'");
        }
        const std::string key{trim(view.substr(0, eq))};
        const std::string value{trim(view.substr(eq + 1))};
        if (key.empty() || value.empty()) {
            throw ConfigError(key, "line " + std::to_string(line_number) +
                                       ": empty key or value");
        }

        try {
            if (key == "n_states") {
                config.n_states = static_cast<int>(parse_u64(key, value));
            } else if (key == "state_source") {
                config.state_source = state_source_from_string(value);
            } else if (key == "master_seed") {
                config.master_seed = parse_u64(key, value);
            } else if (key == "a") {
                config.learner.a = parse_double(value);
            } else if (key == "b") {
                config.learner.b = parse_double(value);
            } else if (key == "r_range") {
                config.learner.r_range = parse_angle(value);
            } else if (key == "m_h") {
                config.learner.m_h = parse_u64(key, value);
            } else if (key == "halt_mode") {
                config.learner.halt_mode = halt_mode_from_string(value);
            } else if (key == "max_shots") {
                config.learner.max_shots = parse_u64(key, value);
            } else if (key == "weight_source") {
                config.learner.weight_source = weight_source_from_string(value);
            } else if (key == "init_angles") {
                if (value == "randomized") {
                    config.learner.randomize_initial_angles = true;
                } else {
                    const auto parts = split(value, ',');
                    if (parts.size() != 3) {
                        throw std::invalid_argument("expected three comma-separated angles");
                    }
                    config.learner.randomize_initial_angles = false;
                    for (int i = 0; i < 3; ++i) {
                        config.learner.initial_angles[static_cast<std::size_t>(i)] =
                            parse_angle(parts[static_cast<std::size_t>(i)]);
                    }
                }
            } else if (key == "noise_fn") {
                config.noise.p_false_negative = parse_double(value);
            } else if (key == "noise_fp") {
                config.noise.p_false_positive = parse_double(value);
            } else if (key == "noise_loss") {
                config.noise.p_loss = parse_double(value);
            } else if (key == "retardance_error") {
                config.retardance_error = parse_double(value);
            } else if (key == "retardance_jitter") {
                config.retardance_jitter = parse_double(value);
            } else if (key == "eps_floor") {
                config.eps_floor = parse_double(value);
            } else {
                throw ConfigError(key, "line " + std::to_string(line_number) +
                                           ": unknown key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(key, "line " + std::to_string(line_number) + ", key '" + key +
                                       "': " + e.what());
        }
    }
    return config;
}

SweepConfig parse_sweep_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot read config file '" + path.string() + "'");
    }
    return parse_sweep_config(in);
}

} // namespace ssml
