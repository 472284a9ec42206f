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

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssml/ssml.hpp"

namespace {

using namespace ssml;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitBudgetOrFitFailure = 2;

// Learner/noise flags shared by run, sweep, noise-study, and angle-study.
// Values are kept as strings where the deg: angle prefix applies.
struct LearnerFlags {
    double a = 0.3;
    double b = 0.5;
    std::string r_range = "1.5707963267948966";
    std::uint64_t m_h = 60000;
    std::string halt_mode = "immediate";
    std::uint64_t max_shots = 0;
    std::string weight_source = "streak";
    std::string init_angles = "0,0,0";
    double noise_fn = 0.0;
    double noise_fp = 0.0;
    double noise_loss = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--a", a, "Random-walk weight amplitude");
        cmd->add_option("--b", b, "Random-walk weight decay exponent");
        cmd->add_option("--r-range", r_range,
                        "Half-width of the uniform feedback draw (angle token)");
        cmd->add_option("--mh", m_h, "Halting streak M_H");
        cmd->add_option("--halt-mode", halt_mode, "immediate | on-next-failure");
        cmd->add_option("--max-shots", max_shots, "Shot budget (0 = 200 * M_H)");
        cmd->add_option("--weight-source", weight_source, "streak | record");
        cmd->add_option("--init-angles", init_angles,
                        "Three comma-separated angle tokens, or 'randomized'");
        cmd->add_option("--noise-fn", noise_fn, "False-negative probability per shot");
        cmd->add_option("--noise-fp", noise_fp, "False-positive probability per shot");
        cmd->add_option("--noise-loss", noise_loss, "Loss probability per shot");
    }

    LearnerConfig learner() const {
        LearnerConfig config;
        config.a = a;
        config.b = b;
        config.r_range = parse_angle(r_range);
        config.m_h = m_h;
        config.halt_mode = halt_mode_from_string(halt_mode);
        config.max_shots = max_shots;
        config.weight_source = weight_source_from_string(weight_source);
        if (init_angles == "randomized") {
            config.randomize_initial_angles = true;
        } else {
            std::stringstream stream(init_angles);
            std::string part;
            std::vector<double> angles;
            while (std::getline(stream, part, ',')) {
                angles.push_back(parse_angle(part));
            }
            if (angles.size() != 3) {
                throw std::invalid_argument("--init-angles: expected three angles");
            }
            config.initial_angles = {angles[0], angles[1], angles[2]};
        }
        return config;
    }

    NoiseModel noise() const {
        NoiseModel model;
        model.p_false_negative = noise_fn;
        model.p_false_positive = noise_fp;
        model.p_loss = noise_loss;
        return model;
    }
};

std::vector<double> parse_double_list(const std::string& list) {
    std::vector<double> values;
    std::stringstream stream(list);
    std::string part;
    while (std::getline(stream, part, ',')) {
        values.push_back(parse_double(part));
    }
    return values;
}

void emit(const std::string& csv, const std::string& json_text, const std::string& out_prefix) {
    if (out_prefix.empty()) {
        std::cout << csv;
        std::cout << json_text << '\n';
        return;
    }
    write_file_atomic(out_prefix + ".csv", csv);
    write_file_atomic(out_prefix + ".json", json_text + "\n");
}

// --- run -------------------------------------------------------------------

struct RunArgs {
    LearnerFlags flags;
    std::uint64_t seed = 0;
    std::string state = "haar";
    double retardance_error = 0.0;
    double retardance_jitter = 0.0;
    std::string out_prefix;
};

int cmd_run(const RunArgs& args) {
    const LearnerConfig learner = args.flags.learner();
    const NoiseModel noise = args.flags.noise();

    const std::uint64_t trial_seed = trial_stream_seed(args.seed, 0);
    const std::array<double, 5> plate_errors =
        draw_plate_errors(trial_seed, args.retardance_error, args.retardance_jitter);

    PureState hidden;
    std::optional<std::array<double, 2>> prep_angles;
    if (args.state == "haar") {
        RandomStream state_stream(mix64(args.seed ^ kStateStreamSalt));
        hidden = haar_random_state(state_stream);
    } else if (args.state.rfind("angles:", 0) == 0) {
        std::stringstream stream(args.state.substr(7));
        std::string part;
        std::vector<double> betas;
        while (std::getline(stream, part, ',')) {
            betas.push_back(parse_angle(part));
        }
        if (betas.size() != 2) {
            throw std::invalid_argument("--state angles: expected two angles");
        }
        prep_angles = {betas[0], betas[1]};
        hidden = prepare_state(
            PreparationSetting::make(betas[0], betas[1], plate_errors[0], plate_errors[1]));
    } else {
        throw std::invalid_argument("--state: expected 'haar' or 'angles:B1,B2'");
    }

    Apparatus apparatus;
    apparatus.u_retardance_errors = {plate_errors[2], plate_errors[3], plate_errors[4]};
    const LearningTrace trace = run_trial(hidden, learner, noise, trial_seed, apparatus);

    std::ostringstream csv;
    write_trace_csv(csv, 0, trace);
    nlohmann::json meta = trace_metadata_json(learner, noise, args.seed, trace);
    const StokesVector s = to_stokes(hidden);
    meta["hidden_stokes"] = {s.s1, s.s2, s.s3};
    if (prep_angles) {
        meta["prep_angles"] = *prep_angles;
    }
    emit(csv.str(), meta.dump(2), args.out_prefix);

    return trace.halt_reason == HaltReason::Halted ? kExitOk : kExitBudgetOrFitFailure;
}

// --- sweep -------------------------------------------------------------------

struct SweepArgs {
    LearnerFlags flags;
    std::string config_path;
    std::uint64_t master_seed = 0;
    int n_states = 35;
    std::string state_source = "haar";
    double retardance_error = 0.0;
    double retardance_jitter = 0.0;
    double eps_floor = 1e-15;
    std::string out_prefix = "sweep";
    int threads = 1;
    bool fit_per_trial = false;
};

int cmd_sweep(const SweepArgs& args, const CLI::App* cmd) {
    SweepConfig config;
    if (!args.config_path.empty()) {
        config = parse_sweep_config_file(args.config_path);
    }
    // Explicit flags override the config file.
    auto given = [cmd](const std::string& flag) { return cmd->count(flag) > 0; };
    if (args.config_path.empty() || given("--seed")) config.master_seed = args.master_seed;
    if (args.config_path.empty() || given("--n-states")) config.n_states = args.n_states;
    if (args.config_path.empty() || given("--state-source"))
        config.state_source = state_source_from_string(args.state_source);
    if (args.config_path.empty() || given("--retardance-error"))
        config.retardance_error = args.retardance_error;
    if (args.config_path.empty() || given("--retardance-jitter"))
        config.retardance_jitter = args.retardance_jitter;
    if (args.config_path.empty() || given("--eps-floor")) config.eps_floor = args.eps_floor;
    if (args.config_path.empty()) {
        config.learner = args.flags.learner();
        config.noise = args.flags.noise();
    } else {
        if (given("--a")) config.learner.a = args.flags.a;
        if (given("--b")) config.learner.b = args.flags.b;
        if (given("--r-range")) config.learner.r_range = parse_angle(args.flags.r_range);
        if (given("--mh")) config.learner.m_h = args.flags.m_h;
        if (given("--halt-mode"))
            config.learner.halt_mode = halt_mode_from_string(args.flags.halt_mode);
        if (given("--max-shots")) config.learner.max_shots = args.flags.max_shots;
        if (given("--weight-source"))
            config.learner.weight_source = weight_source_from_string(args.flags.weight_source);
        if (given("--init-angles")) {
            const LearnerConfig parsed = args.flags.learner();
            config.learner.initial_angles = parsed.initial_angles;
            config.learner.randomize_initial_angles = parsed.randomize_initial_angles;
        }
        if (given("--noise-fn")) config.noise.p_false_negative = args.flags.noise_fn;
        if (given("--noise-fp")) config.noise.p_false_positive = args.flags.noise_fp;
        if (given("--noise-loss")) config.noise.p_loss = args.flags.noise_loss;
    }

    const SweepResult result = run_sweep(config, args.threads);

    std::vector<std::pair<double, double>> points;
    points.reserve(result.table.size());
    for (const CheckpointRow& row : result.table) {
        points.push_back({static_cast<double>(row.n), row.eps_true});
    }
    const FitResult fit = fit_scaling(points, config.eps_floor);
    const CorrelationReport correlation = compare_monitored_vs_true(result.table);

    std::optional<std::vector<FitResult>> per_trial;
    if (args.fit_per_trial) {
        per_trial.emplace();
        for (const TrialRecord& rec : result.trials) {
            std::vector<std::pair<double, double>> trial_points;
            for (const Checkpoint& c : rec.trace.checkpoints) {
                trial_points.push_back({static_cast<double>(c.n), c.eps_true});
            }
            per_trial->push_back(fit_scaling(trial_points, config.eps_floor));
        }
    }

    std::ostringstream csv;
    write_checkpoint_table_csv(csv, result.table);
    const nlohmann::json summary = sweep_summary_json(
        config, result, fit, correlation, per_trial ? &*per_trial : nullptr);

    write_file_atomic(args.out_prefix + ".csv", csv.str());
    write_file_atomic(args.out_prefix + ".json", summary.dump(2) + "\n");

    if (fit.ok()) {
        std::cout << "sweep: " << result.trials.size() << " trials, " << result.table.size()
                  << " checkpoints, gamma=" << format_double(fit.gamma) << " -> "
                  << args.out_prefix << ".csv " << args.out_prefix << ".json\n";
    } else {
        std::cout << "sweep: " << result.trials.size() << " trials, " << result.table.size()
                  << " checkpoints, fit " << to_string(fit.status) << " -> " << args.out_prefix
                  << ".csv " << args.out_prefix << ".json\n";
    }
    return kExitOk;
}

// --- fit ---------------------------------------------------------------------

struct FitArgs {
    std::string csv_path;
    double floor = 1e-15;
    std::optional<double> n0_fixed;
};

int cmd_fit(const FitArgs& args) {
    std::ifstream in(args.csv_path);
    if (!in) {
        throw std::invalid_argument("cannot read '" + args.csv_path + "'");
    }
    std::vector<std::pair<double, double>> points;
    try {
        points = read_fit_points_csv(in);
    } catch (const std::invalid_argument& e) {
        if (std::string(e.what()).find("empty input") == std::string::npos) {
            throw;
        }
        // Empty file: report as a fit failure, not a usage error.
    }
    const FitResult fit = fit_scaling(points, args.floor, args.n0_fixed);
    std::cout << fit_result_json(fit).dump(2) << '\n';
    return fit.ok() ? kExitOk : kExitBudgetOrFitFailure;
}

// --- noise-study ---------------------------------------------------------------

struct NoiseStudyArgs {
    LearnerFlags flags;
    std::string q_grid = "1e-5,1e-4,1e-3";
    int seeds = 50;
    std::uint64_t shots = 1000000;
    std::string state = "fiducial";
    std::uint64_t master_seed = 0;
    int threads = 1;
    std::string out_path;
};

int cmd_noise_study(const NoiseStudyArgs& args) {
    NoiseStudyConfig config;
    config.q_values = parse_double_list(args.q_grid);
    config.seeds_per_q = args.seeds;
    config.shots = args.shots;
    config.master_seed = args.master_seed;
    config.learner = args.flags.learner();
    if (args.state == "fiducial") {
        config.fiducial_hidden = true;
    } else if (args.state == "haar") {
        config.fiducial_hidden = false;
    } else {
        throw std::invalid_argument("--state: expected 'fiducial' or 'haar'");
    }

    const NoiseStudyResult result = run_noise_study(config, args.threads);
    std::ostringstream csv;
    write_noise_study_csv(csv, result);
    if (args.out_path.empty()) {
        std::cout << csv.str();
    } else {
        write_file_atomic(args.out_path, csv.str());
    }
    return kExitOk;
}

// --- angle-study -----------------------------------------------------------------

struct AngleStudyArgs {
    LearnerFlags flags;
    int n_states = 7;
    double retardance_error = 0.021;
    double retardance_jitter = 0.0;
    std::uint64_t master_seed = 0;
    int threads = 1;
    std::string out_prefix;
};

int cmd_angle_study(const AngleStudyArgs& args) {
    AngleStudyConfig config;
    config.n_states = args.n_states;
    config.learner = args.flags.learner();
    config.noise = args.flags.noise();
    config.retardance_error = args.retardance_error;
    config.retardance_jitter = args.retardance_jitter;
    config.master_seed = args.master_seed;

    const std::vector<AngleStudyRow> rows = run_angle_study(config, args.threads);

    std::vector<double> eps_true, eps_deduced;
    for (const AngleStudyRow& row : rows) {
        eps_true.push_back(row.eps_true);
        eps_deduced.push_back(row.eps_deduced);
    }
    auto median_of = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t mid = v.size() / 2;
        return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
    };
    nlohmann::json summary;
    summary["n_states"] = config.n_states;
    summary["retardance_error"] = config.retardance_error;
    summary["retardance_jitter"] = config.retardance_jitter;
    summary["master_seed"] = config.master_seed;
    summary["median_eps_true"] = rows.empty() ? 0.0 : median_of(eps_true);
    summary["median_eps_deduced"] = rows.empty() ? 0.0 : median_of(eps_deduced);

    std::ostringstream csv;
    write_angle_study_csv(csv, rows);
    emit(csv.str(), summary.dump(2), args.out_prefix);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ssml: single-shot measurement learning simulator for polarization qubits"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run_cmd = app.add_subcommand("run", "Run one learning trial");
    run_args.flags.attach(run_cmd);
    run_cmd->add_option("--seed", run_args.seed, "Master seed");
    run_cmd->add_option("--state", run_args.state, "haar | angles:B1,B2 (angle tokens)");
    run_cmd->add_option("--retardance-error", run_args.retardance_error,
                        "Fixed retardance offset on every plate (rad)");
    run_cmd->add_option("--retardance-jitter", run_args.retardance_jitter,
                        "Half-width of per-plate uniform retardance offset (rad)");
    run_cmd->add_option("--out", run_args.out_prefix,
                        "Write PREFIX.csv and PREFIX.json instead of stdout");

    SweepArgs sweep_args;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a batch of trials and fit the scaling");
    sweep_args.flags.attach(sweep_cmd);
    sweep_cmd->add_option("--config", sweep_args.config_path, "key = value config file");
    sweep_cmd->add_option("--seed", sweep_args.master_seed, "Master seed");
    sweep_cmd->add_option("--n-states", sweep_args.n_states, "Number of hidden states");
    sweep_cmd->add_option("--state-source", sweep_args.state_source, "haar | waveplate_angles");
    sweep_cmd->add_option("--retardance-error", sweep_args.retardance_error,
                          "Fixed retardance offset on every plate (rad)");
    sweep_cmd->add_option("--retardance-jitter", sweep_args.retardance_jitter,
                          "Half-width of per-plate uniform retardance offset (rad)");
    sweep_cmd->add_option("--eps-floor", sweep_args.eps_floor, "Fit floor for eps_true");
    sweep_cmd->add_option("--out", sweep_args.out_prefix, "Output prefix (default 'sweep')");
    sweep_cmd->add_option("--threads", sweep_args.threads, "Worker threads for trials");
    sweep_cmd->add_flag("--fit-per-trial", sweep_args.fit_per_trial,
                        "Also fit each trial's checkpoints separately");

    FitArgs fit_args;
    CLI::App* fit_cmd = app.add_subcommand("fit", "Fit eps = C (N + N0)^-gamma to a CSV");
    fit_cmd->add_option("csv", fit_args.csv_path, "CSV with N and eps (or eps_true) columns")
        ->required();
    fit_cmd->add_option("--floor", fit_args.floor, "Drop rows with eps <= floor");
    double n0_fixed_value = 0.0;
    CLI::Option* n0_opt =
        fit_cmd->add_option("--n0-fixed", n0_fixed_value, "Pin N0 instead of profiling it");

    NoiseStudyArgs noise_args;
    CLI::App* noise_cmd =
        app.add_subcommand("noise-study", "Streak ceiling vs false-negative probability");
    noise_args.flags.attach(noise_cmd);
    noise_cmd->add_option("--q-grid", noise_args.q_grid, "Comma-separated false-negative probs");
    noise_cmd->add_option("--seeds", noise_args.seeds, "Seeds per q");
    noise_cmd->add_option("--shots", noise_args.shots, "Copies per run");
    noise_cmd->add_option("--state", noise_args.state, "fiducial | haar");
    noise_cmd->add_option("--seed", noise_args.master_seed, "Master seed");
    noise_cmd->add_option("--threads", noise_args.threads, "Worker threads");
    noise_cmd->add_option("--out", noise_args.out_path, "Write CSV here instead of stdout");

    AngleStudyArgs angle_args;
    angle_args.flags.m_h = 3000000; // deep convergence is the point of this study
    CLI::App* angle_cmd =
        app.add_subcommand("angle-study", "Dial-angle-deduced infidelity vs true infidelity");
    angle_args.flags.attach(angle_cmd);
    angle_cmd->add_option("--states", angle_args.n_states, "Number of prepared states");
    angle_cmd->add_option("--retardance-error", angle_args.retardance_error,
                          "Fixed retardance offset on every plate (rad)");
    angle_cmd->add_option("--retardance-jitter", angle_args.retardance_jitter,
                          "Half-width of per-plate uniform retardance offset (rad)");
    angle_cmd->add_option("--seed", angle_args.master_seed, "Master seed");
    angle_cmd->add_option("--threads", angle_args.threads, "Worker threads");
    angle_cmd->add_option("--out", angle_args.out_prefix,
                          "Write PREFIX.csv and PREFIX.json instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (*run_cmd) {
            return cmd_run(run_args);
        }
        if (*sweep_cmd) {
            return cmd_sweep(sweep_args, sweep_cmd);
        }
        if (*fit_cmd) {
            if (n0_opt->count() > 0) {
                fit_args.n0_fixed = n0_fixed_value;
            }
            return cmd_fit(fit_args);
        }
        if (*noise_cmd) {
            return cmd_noise_study(noise_args);
        }
        if (*angle_cmd) {
            return cmd_angle_study(angle_args);
        }
    } catch (const ssml::ConfigError& e) {
        if (e.key().empty()) {
            std::cerr << "error: " << e.what() << '\n';
        } else {
            std::cerr << "error: key '" << e.key() << "': " << e.what() << '\n';
        }
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}
