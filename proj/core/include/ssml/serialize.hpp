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

#ifndef SSML_SERIALIZE_HPP
#define SSML_SERIALIZE_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssml/experiment.hpp"
#include "ssml/learner.hpp"

namespace ssml {

/// Shortest representation that parses back to the identical double.
std::string format_double(double value);

/// Strict double parse of the whole token; throws std::invalid_argument.
double parse_double(std::string_view token);

// Enum <-> name mappings used in CSV/JSON and config files.
std::string_view to_string(HaltMode mode);
std::string_view to_string(HaltReason reason);
std::string_view to_string(WeightSource source);
std::string_view to_string(StateSource source);
std::string_view to_string(FitStatus status);
HaltMode halt_mode_from_string(std::string_view name);
WeightSource weight_source_from_string(std::string_view name);
StateSource state_source_from_string(std::string_view name);

inline constexpr std::string_view kCheckpointCsvHeader = "trial,N,M_S,eps_true,eps_monitored";

/// Checkpoint rows for one trace, one line per checkpoint.
void write_trace_csv(std::ostream& out, int trial, const LearningTrace& trace,
                     bool with_header = true);

void write_checkpoint_table_csv(std::ostream& out, const CheckpointTable& table);

void write_noise_study_csv(std::ostream& out, const NoiseStudyResult& result);

void write_angle_study_csv(std::ostream& out, const std::vector<AngleStudyRow>& rows);

nlohmann::json learner_config_json(const LearnerConfig& config);
nlohmann::json noise_model_json(const NoiseModel& noise);
nlohmann::json fit_result_json(const FitResult& fit);
nlohmann::json correlation_report_json(const CorrelationReport& report);

/// Trace metadata: config, noise, seed, halt reason, finals.
nlohmann::json trace_metadata_json(const LearnerConfig& config, const NoiseModel& noise,
                                   std::uint64_t seed, const LearningTrace& trace);

nlohmann::json sweep_config_json(const SweepConfig& config);

/// Sweep summary: config echo, pooled fit, monitored-vs-true correlation,
/// per-trial finals, optional per-trial fits.
nlohmann::json sweep_summary_json(const SweepConfig& config, const SweepResult& result,
                                  const FitResult& fit, const CorrelationReport& correlation,
                                  const std::vector<FitResult>* per_trial_fits = nullptr);

/// Writes through a temp file in the target directory, then renames.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// (N, eps) pairs from a headered CSV. The N column is "N"; the eps column is
/// "eps" when present, else "eps_true". Throws std::invalid_argument on a
/// missing column or malformed row.
std::vector<std::pair<double, double>> read_fit_points_csv(std::istream& in);

} // namespace ssml

#endif // SSML_SERIALIZE_HPP
