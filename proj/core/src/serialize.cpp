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

#include "ssml/serialize.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace ssml {

std::string format_double(double value) {
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) {
        throw std::runtime_error("format_double: to_chars failed");
    }
    return std::string(buffer, end);
}

double parse_double(std::string_view token) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw std::invalid_argument("parse_double: malformed number '" + std::string(token) + "'");
    }
    return value;
}

std::string_view to_string(HaltMode mode) {
    return mode == HaltMode::Immediate ? "immediate" : "on_next_failure";
}

std::string_view to_string(HaltReason reason) {
    return reason == HaltReason::Halted ? "halted" : "shot_budget_exhausted";
}

std::string_view to_string(WeightSource source) {
    return source == WeightSource::Streak ? "streak" : "record";
}

std::string_view to_string(StateSource source) {
    return source == StateSource::Haar ? "haar" : "waveplate_angles";
}

std::string_view to_string(FitStatus status) {
    switch (status) {
    case FitStatus::Ok:
        return "ok";
    case FitStatus::TooFewPoints:
        return "too_few_points";
    case FitStatus::Degenerate:
        return "degenerate";
    }
    return "unknown";
}

HaltMode halt_mode_from_string(std::string_view name) {
    if (name == "immediate") {
        return HaltMode::Immediate;
    }
    if (name == "on_next_failure" || name == "on-next-failure") {
        return HaltMode::OnNextFailure;
    }
    throw std::invalid_argument("unknown halt mode '" + std::string(name) + "'");
}

WeightSource weight_source_from_string(std::string_view name) {
    if (name == "streak") {
        return WeightSource::Streak;
    }
    if (name == "record") {
        return WeightSource::Record;
    }
    throw std::invalid_argument("unknown weight source '" + std::string(name) + "'");
}

StateSource state_source_from_string(std::string_view name) {
    if (name == "haar") {
        return StateSource::Haar;
    }
    if (name == "waveplate_angles" || name == "waveplate-angles") {
        return StateSource::WaveplateAngles;
    }
    throw std::invalid_argument("unknown state source '" + std::string(name) + "'");
}

namespace {

void write_checkpoint_row(std::ostream& out, int trial, std::uint64_t n, std::uint64_t m_s,
                          double eps_true, double eps_monitored) {
    out << trial << ',' << n << ',' << m_s << ',' << format_double(eps_true) << ','
        << format_double(eps_monitored) << '\n';
}

} // namespace

void write_trace_csv(std::ostream& out, int trial, const LearningTrace& trace, bool with_header) {
    if (with_header) {
        out << kCheckpointCsvHeader << '\n';
    }
    for (const Checkpoint& c : trace.checkpoints) {
        write_checkpoint_row(out, trial, c.n, c.m_s, c.eps_true, c.eps_monitored);
    }
}

void write_checkpoint_table_csv(std::ostream& out, const CheckpointTable& table) {
    out << kCheckpointCsvHeader << '\n';
    for (const CheckpointRow& row : table) {
        write_checkpoint_row(out, row.trial, row.n, row.m_s, row.eps_true, row.eps_monitored);
    }
}

void write_noise_study_csv(std::ostream& out, const NoiseStudyResult& result) {
    out << "q,n_seeds,median_best_streak,median_final_eps,min_final_eps,max_final_eps\n";
    for (const NoiseStudyRow& row : result.rows) {
        out << format_double(row.q) << ',' << row.n_seeds << ','
            << format_double(row.median_best_streak) << ',' << format_double(row.median_final_eps)
            << ',' << format_double(row.min_final_eps) << ',' << format_double(row.max_final_eps)
            << '\n';
    }
}

void write_angle_study_csv(std::ostream& out, const std::vector<AngleStudyRow>& rows) {
    out << "trial,beta1,beta2,N,M_S,eps_true,eps_deduced\n";
    for (const AngleStudyRow& row : rows) {
        out << row.trial << ',' << format_double(row.beta1) << ',' << format_double(row.beta2)
            << ',' << row.final_n << ',' << row.final_m_s << ',' << format_double(row.eps_true)
            << ',' << format_double(row.eps_deduced) << '\n';
    }
}

nlohmann::json learner_config_json(const LearnerConfig& config) {
    nlohmann::json j;
    j["a"] = config.a;
    j["b"] = config.b;
    j["r_range"] = config.r_range;
    j["m_h"] = config.m_h;
    j["halt_mode"] = to_string(config.halt_mode);
    j["max_shots"] = config.effective_max_shots();
    j["weight_source"] = to_string(config.weight_source);
    if (config.randomize_initial_angles) {
        j["init_angles"] = "randomized";
    } else {
        j["init_angles"] = config.initial_angles;
    }
    return j;
}

nlohmann::json noise_model_json(const NoiseModel& noise) {
    return {{"p_false_negative", noise.p_false_negative},
            {"p_false_positive", noise.p_false_positive},
            {"p_loss", noise.p_loss}};
}

nlohmann::json fit_result_json(const FitResult& fit) {
    nlohmann::json j;
    j["status"] = to_string(fit.status);
    j["n_points"] = fit.n_points;
    if (fit.ok()) {
        j["C"] = fit.c;
        j["N0"] = fit.n0;
        j["gamma"] = fit.gamma;
        j["sse_log"] = fit.sse_log;
    }
    return j;
}

nlohmann::json correlation_report_json(const CorrelationReport& report) {
    nlohmann::json j;
    j["computable"] = report.computable;
    j["n_points"] = report.n_points;
    if (report.computable) {
        j["pearson_log"] = report.pearson_log;
        j["mean_log10_ratio"] = report.mean_log10_ratio;
        j["stddev_log10_ratio"] = report.stddev_log10_ratio;
        j["median_ratio"] = report.median_ratio;
    }
    return j;
}

nlohmann::json trace_metadata_json(const LearnerConfig& config, const NoiseModel& noise,
                                   std::uint64_t seed, const LearningTrace& trace) {
    nlohmann::json j;
    j["config"] = learner_config_json(config);
    j["noise"] = noise_model_json(noise);
    j["seed"] = seed;
    j["halt_reason"] = to_string(trace.halt_reason);
    j["final_angles"] = trace.final_angles;
    j["final_n"] = trace.final_n;
    j["final_m_s"] = trace.final_m_s;
    j["best_streak"] = trace.best_streak;
    j["successes"] = trace.successes;
    j["failures"] = trace.failures;
    j["losses"] = trace.losses;
    j["final_eps_true"] = trace.final_eps_true;
    j["n_checkpoints"] = trace.checkpoints.size();
    return j;
}

nlohmann::json sweep_config_json(const SweepConfig& config) {
    nlohmann::json j;
    j["n_states"] = config.n_states;
    j["state_source"] = to_string(config.state_source);
    j["master_seed"] = config.master_seed;
    j["learner"] = learner_config_json(config.learner);
    j["noise"] = noise_model_json(config.noise);
    j["retardance_error"] = config.retardance_error;
    j["retardance_jitter"] = config.retardance_jitter;
    j["eps_floor"] = config.eps_floor;
    return j;
}

nlohmann::json sweep_summary_json(const SweepConfig& config, const SweepResult& result,
                                  const FitResult& fit, const CorrelationReport& correlation,
                                  const std::vector<FitResult>* per_trial_fits) {
    nlohmann::json j;
    j["config"] = sweep_config_json(config);
    j["fit"] = fit_result_json(fit);
    j["correlation"] = correlation_report_json(correlation);
    nlohmann::json trials = nlohmann::json::array();
    for (const TrialRecord& rec : result.trials) {
        nlohmann::json t;
        t["trial"] = rec.trial;
        t["seed"] = rec.seed;
        t["halt_reason"] = to_string(rec.trace.halt_reason);
        t["final_n"] = rec.trace.final_n;
        t["final_m_s"] = rec.trace.final_m_s;
        t["best_streak"] = rec.trace.best_streak;
        t["final_eps_true"] = rec.trace.final_eps_true;
        t["final_angles"] = rec.trace.final_angles;
        t["n_checkpoints"] = rec.trace.checkpoints.size();
        if (rec.prep_angles) {
            t["prep_angles"] = *rec.prep_angles;
        }
        trials.push_back(std::move(t));
    }
    j["trials"] = std::move(trials);
    if (per_trial_fits) {
        nlohmann::json fits = nlohmann::json::array();
        for (const FitResult& f : *per_trial_fits) {
            fits.push_back(fit_result_json(f));
        }
        j["per_trial_fits"] = std::move(fits);
    }
    return j;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw std::runtime_error("short write to '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

std::vector<std::pair<double, double>> read_fit_points_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("fit CSV: empty input");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }

    std::vector<std::string> columns;
    {
        std::stringstream header(line);
        std::string cell;
        while (std::getline(header, cell, ',')) {
            columns.push_back(cell);
        }
    }
    int n_col = -1, eps_col = -1, eps_true_col = -1;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == "N") {
            n_col = static_cast<int>(i);
        } else if (columns[i] == "eps") {
            eps_col = static_cast<int>(i);
        } else if (columns[i] == "eps_true") {
            eps_true_col = static_cast<int>(i);
        }
    }
    if (eps_col < 0) {
        eps_col = eps_true_col;
    }
    if (n_col < 0 || eps_col < 0) {
        throw std::invalid_argument("fit CSV: need an 'N' column and an 'eps' or 'eps_true' column");
    }

    std::vector<std::pair<double, double>> points;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::stringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) {
            cells.push_back(cell);
        }
        if (static_cast<int>(cells.size()) <= std::max(n_col, eps_col)) {
            throw std::invalid_argument("fit CSV: short row '" + line + "'");
        }
        points.push_back({parse_double(cells[static_cast<std::size_t>(n_col)]),
                          parse_double(cells[static_cast<std::size_t>(eps_col)])});
    }
    return points;
}

} // namespace ssml
