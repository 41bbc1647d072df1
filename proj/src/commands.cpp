#include "transim/commands.hpp"

#include "transim/csv.hpp"
#include "transim/indicators.hpp"
#include "transim/network_io.hpp"
#include "transim/reporting.hpp"
#include "transim/time_format.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>
#include <ostream>

namespace transim {

namespace fs = std::filesystem;

ChoiceSource parse_choice_source(const std::string& text) {
    if (text == "true") return ChoiceSource::true_params;
    if (text == "uniform") return ChoiceSource::uniform;
    if (text == "shortest") return ChoiceSource::shortest;
    if (text == "calibrated") return ChoiceSource::calibrated;
    throw ValidationError(fmt::format("unknown choice model '{}' (expected calibrated|uniform|shortest|true)", text));
}

void RunConfig::validate() const {
    if (tau_s && !(*tau_s > 0.0)) throw ValidationError("config: tau must be > 0");
    if (capacity && *capacity <= 0) throw ValidationError("config: capacity must be > 0");
    if (walk_speed_mps && !(*walk_speed_mps > 0.0)) throw ValidationError("config: walk speed must be > 0");
    if (gamma && !(*gamma > 0.0)) throw ValidationError("config: gamma must be > 0");
    if (max_paths && *max_paths < 1) throw ValidationError("config: max_paths must be >= 1");
    if (detour_cap && !(*detour_cap >= 1.0)) throw ValidationError("config: detour cap must be >= 1");
    if (!(eta >= 0.0)) throw ValidationError("config: eta must be >= 0");
    if (!(q_kl >= 1.0)) throw ValidationError("config: Q_KL must be >= 1");
    if (bounds.dimension() != ChoiceParams::dimension) throw ValidationError("config: bounds need 4 dimensions");
    bounds.validate();
    if (budget < default_design_size(ChoiceParams::dimension)) {
        throw ValidationError(fmt::format("config: budget {} is below the initial design size {}", budget,
                                          default_design_size(ChoiceParams::dimension)));
    }
    if (threads < 1) throw ValidationError("config: threads must be >= 1");
}

RunConfig read_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(fmt::format("cannot open config file '{}'", path.string()));
    RunConfig c;
    try {
        const auto doc = nlohmann::json::parse(in);
        const auto base = path.parent_path();
        auto file = [&](const char* key, std::optional<fs::path>& target) {
            if (doc.contains(key)) target = base / doc.at(key).get<std::string>();
        };
        file("network", c.network_file);
        file("timetable", c.timetable_file);
        file("demand", c.demand_file);
        file("data", c.data_dir);
        file("beta", c.beta_file);
        if (doc.contains("out")) c.out_dir = base / doc.at("out").get<std::string>();
        auto number = [&]<typename T>(const char* key, std::optional<T>& target) {
            if (doc.contains(key)) target = doc.at(key).get<T>();
        };
        number("seed", c.seed);
        number("sim_seed", c.sim_seed);
        number("tau", c.tau_s);
        number("capacity", c.capacity);
        number("walk_speed", c.walk_speed_mps);
        number("walk_noise", c.walk_noise);
        number("gamma", c.gamma);
        number("k_paths", c.max_paths);
        number("detour_cap", c.detour_cap);
        c.eta = doc.value("eta", c.eta);
        c.q_kl = doc.value("qkl", c.q_kl);
        c.budget = doc.value("budget", c.budget);
        c.threads = doc.value("threads", c.threads);
        if (doc.contains("choice")) c.choice = parse_choice_source(doc.at("choice").get<std::string>());
        if (doc.contains("bounds")) {
            c.bounds.lower = doc.at("bounds").at("lower").get<std::vector<double>>();
            c.bounds.upper = doc.at("bounds").at("upper").get<std::vector<double>>();
        }
        if (doc.contains("true_params")) {
            std::array<double, ChoiceParams::dimension> beta{};
            for (std::size_t i = 0; i < beta.size(); ++i) {
                beta[i] = doc.at("true_params").at(ChoiceParams::names[i]).get<double>();
            }
            c.true_params = ChoiceParams::from_array(beta);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(fmt::format("config file '{}': {}", path.string(), e.what()));
    }
    return c;
}

namespace {

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        body();
        return 0;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

SimConfig sim_config_for(const DatasetMetadata& metadata, const RunConfig& config) {
    SimConfig sim = metadata.sim;
    if (config.tau_s) sim.grid.length_s = *config.tau_s;
    if (config.capacity) sim.capacity = config.capacity;
    if (config.walk_speed_mps) sim.walk_speed_mps = *config.walk_speed_mps;
    if (config.walk_noise) sim.walk_noise.enabled = *config.walk_noise;
    return sim;
}

ChoiceSetOptions choice_options_for(const DatasetMetadata& metadata, const RunConfig& config) {
    ChoiceSetOptions options = metadata.choice_sets;
    if (config.gamma) options.gamma = *config.gamma;
    if (config.max_paths) options.max_paths = *config.max_paths;
    if (config.detour_cap) options.detour_cap = *config.detour_cap;
    if (config.walk_speed_mps) options.walk_speed_mps = *config.walk_speed_mps;
    return options;
}

/// Seed shared by every simulation of calibrate and compare. Defaults to the
/// generator's seed so model runs share its random numbers.
std::uint64_t model_seed(const DatasetMetadata& metadata, const RunConfig& config) {
    return config.sim_seed.value_or(metadata.sim.seed);
}

std::vector<AfcRecord> tap_ins(const std::vector<AfcRecord>& afc) {
    auto demand = afc;
    for (auto& r : demand) r.tap_out_s.reset();
    return demand;
}

const fs::path& require_data_dir(const RunConfig& config) {
    if (!config.data_dir) throw ValidationError("a dataset directory is required (--data)");
    return *config.data_dir;
}

ChoiceRule rule_for(const RunConfig& config, const LoadedDataset& data) {
    switch (config.choice) {
        case ChoiceSource::true_params: return data.metadata.true_params;
        case ChoiceSource::uniform: return benchmark_params(BenchmarkKind::uniform);
        case ChoiceSource::shortest: return benchmark_params(BenchmarkKind::shortest_path);
        case ChoiceSource::calibrated: {
            const fs::path beta = config.beta_file.value_or(require_data_dir(config) / "calibration" / "beta_best.json");
            if (!fs::exists(beta)) throw ValidationError(fmt::format("parameter file not found: '{}'", beta.string()));
            return read_params(beta);
        }
    }
    throw ValidationError("unknown choice model");
}

std::string choice_label(ChoiceSource source) {
    switch (source) {
        case ChoiceSource::true_params: return "true";
        case ChoiceSource::uniform: return "uniform";
        case ChoiceSource::shortest: return "shortest";
        case ChoiceSource::calibrated: return "calibrated";
    }
    return "unknown";
}

void write_flows(const fs::path& path, const ExitFlowTensor& flows, const Network& network) {
    CsvTable table;
    table.header = {"origin", "destination", "interval_index", "count"};
    for (const auto& [key, count] : flows.counts()) {
        table.rows.push_back({network.station(key.od.origin).id, network.station(key.od.destination).id,
                              std::to_string(key.interval), std::to_string(count)});
    }
    write_csv(path, table);
}

}  // namespace

int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        const std::uint64_t seed = config.seed.value_or(42);

        NetworkSpec spec;
        std::optional<BundledCase> bundle;
        if (config.network_file) {
            if (!fs::exists(*config.network_file)) {
                throw ValidationError(fmt::format("network file not found: '{}'", config.network_file->string()));
            }
            if (!config.timetable_file || !config.demand_file) {
                throw ValidationError("a custom network needs both a timetable file and a demand file");
            }
            for (const auto& f : {*config.timetable_file, *config.demand_file}) {
                if (!fs::exists(f)) throw ValidationError(fmt::format("input file not found: '{}'", f.string()));
            }
            spec = read_network_spec(*config.network_file);
        } else {
            bundle = bundled_small_network();
            spec = bundle->network;
        }
        for (auto& line : spec.lines) {
            if (config.capacity) line.capacity = *config.capacity;
        }
        const Network network(spec);

        const Timetable timetable = bundle ? generate_timetable(network, bundle->services)
                                           : read_timetable(*config.timetable_file, network);
        timetable.validate(network);

        DatasetMetadata metadata;
        metadata.true_params = config.true_params;
        metadata.demand_seed = seed;
        metadata.sim.seed = seed;
        if (config.tau_s) metadata.sim.grid.length_s = *config.tau_s;
        if (config.walk_speed_mps) metadata.sim.walk_speed_mps = *config.walk_speed_mps;
        if (config.walk_noise) metadata.sim.walk_noise.enabled = *config.walk_noise;
        metadata.choice_sets = choice_options_for(metadata, config);
        metadata.choice_sets.walk_speed_mps = metadata.sim.walk_speed_mps;

        std::vector<AfcRecord> demand;
        if (bundle) {
            const auto profile = bundle->demand(network);
            metadata.warmup_end_s = profile.warmup_end_s;
            metadata.cooldown_start_s = profile.cooldown_start_s;
            demand = generate_demand(profile, seed);
        } else {
            metadata.demand_model = "replayed from " + config.demand_file->filename().string();
            demand = tap_ins(read_afc(*config.demand_file, network));
        }

        const auto choice_sets = build_choice_sets(network, distinct_ods(demand), metadata.choice_sets);
        const auto truth = generate_ground_truth(network, timetable, choice_sets, demand, metadata.true_params,
                                                 metadata.sim);

        fs::create_directories(config.out_dir);
        write_network_spec(config.out_dir / dataset_files::network, network.to_spec());
        write_timetable(config.out_dir / dataset_files::timetable, timetable, network);
        write_afc(config.out_dir / dataset_files::demand, demand, network, false);
        write_afc(config.out_dir / dataset_files::afc, truth.afc, network, true);
        write_true_paths(config.out_dir / dataset_files::true_paths, truth.true_paths);
        write_metadata(config.out_dir / dataset_files::metadata, metadata);
        write_flows(config.out_dir / "ground_truth_flows.out",
                    exit_flows(read_afc(config.out_dir / dataset_files::afc, network), metadata.sim.grid), network);

        std::size_t left_behind = 0;
        for (const auto& r : truth.true_paths) left_behind += r.times_left_behind > 0 ? 1 : 0;
        out << fmt::format("generated {} passengers ({} left behind at least once, {} dropped) into {}\n",
                           demand.size(), left_behind, truth.output.dropped, config.out_dir.string());
        for (const auto& w : truth.output.warnings) err << "warning: " << w << '\n';
    });
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        const auto data = load_dataset(require_data_dir(config));
        const auto& network = *data.network;
        auto sim = sim_config_for(data.metadata, config);
        if (config.seed) sim.seed = *config.seed;
        const auto rule = rule_for(config, data);
        const auto demand = tap_ins(data.afc);
        const auto choice_sets = build_choice_sets(network, distinct_ods(demand), choice_options_for(data.metadata, config));

        const auto output = run_simulation(network, data.timetable, choice_sets, rule, demand, sim);
        const auto tables = extract_indicators(output, network, data.timetable, sim.grid.length_s);
        write_sim_output(config.out_dir, output, tables, network);

        std::size_t exited = 0;
        for (const auto& p : output.passengers) exited += p.status == PassengerStatus::exited ? 1 : 0;
        out << fmt::format("simulated {} passengers under the {} choice model: {} exited, {} dropped -> {}\n",
                           output.passengers.size(), choice_label(config.choice), exited, output.dropped,
                           config.out_dir.string());
        if (!output.warnings.empty()) {
            err << fmt::format("warning: {} unreachable OD pair(s)\n", output.warnings.size());
            for (const auto& w : output.warnings) err << "warning: " << w << '\n';
        }
    });
}

int cmd_calibrate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        const auto data = load_dataset(require_data_dir(config));
        const auto& network = *data.network;

        CalibrationConfig calibration;
        calibration.choice_sets = choice_options_for(data.metadata, config);
        calibration.sim = sim_config_for(data.metadata, config);
        calibration.sim.seed = model_seed(data.metadata, config);
        calibration.objective.grid = calibration.sim.grid;
        calibration.objective.eta = config.eta;
        calibration.objective.q_kl = config.q_kl;
        calibration.objective.window_start_s = data.metadata.warmup_end_s;
        calibration.objective.window_end_s = data.metadata.cooldown_start_s;
        calibration.bounds = config.bounds;
        calibration.cors.budget = config.budget;
        calibration.cors.seed = config.seed.value_or(1);
        calibration.cors.threads = config.threads;

        const auto report = calibrate(data.afc, network, data.timetable, calibration);
        for (const auto& w : report.warnings) err << "warning: " << w << '\n';

        fs::create_directories(config.out_dir);
        write_params(config.out_dir / "beta_best.json", report.best);
        write_calibration_trace(config.out_dir / "trace.csv", report);
        write_calibration_report(config.out_dir / "report.csv", report, data.metadata.true_params);
        out << fmt::format("calibrated beta {} objective {:.3f} (flow {:.3f}, kl {:.6f}) after {} evaluations\n",
                           to_string(report.best), report.best_value.total, report.best_value.flow,
                           report.best_value.kl, report.trace.size());
    });
}

int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        const auto data = load_dataset(require_data_dir(config));
        const auto& network = *data.network;
        auto sim = sim_config_for(data.metadata, config);
        sim.seed = model_seed(data.metadata, config);
        sim.record_boardings = false;
        const auto demand = tap_ins(data.afc);
        const auto choice_sets = build_choice_sets(network, distinct_ods(demand), choice_options_for(data.metadata, config));

        RunConfig calibrated = config;
        calibrated.choice = ChoiceSource::calibrated;
        const std::vector<std::pair<std::string, ChoiceRule>> models = {
            {"calibrated", rule_for(calibrated, data)},
            {"uniform", benchmark_params(BenchmarkKind::uniform)},
            {"shortest", benchmark_params(BenchmarkKind::shortest_path)},
        };
        std::vector<std::pair<std::string, ExitFlowTensor>> flows;
        for (const auto& [name, rule] : models) {
            flows.emplace_back(name, run_simulation(network, data.timetable, choice_sets, rule, demand, sim).exit_flows);
        }

        const double start = data.metadata.warmup_end_s;
        const double end = data.metadata.cooldown_start_s;
        const double mid = start + std::floor((end - start) / 2.0 / sim.grid.length_s) * sim.grid.length_s;
        std::vector<ReportWindow> windows = {{format_clock(start) + "-" + format_clock(end), start, end}};
        if (mid > start && mid < end) {
            windows.push_back({format_clock(start) + "-" + format_clock(mid), start, mid});
            windows.push_back({format_clock(mid) + "-" + format_clock(end), mid, end});
        }

        std::vector<StationIndex> origins;
        for (const auto& od : distinct_ods(demand)) {
            if (origins.empty() || origins.back() != od.origin) origins.push_back(od.origin);
        }
        const auto truth = exit_flows(data.afc, sim.grid);
        const auto comparison =
            compare_models(truth, flows, windows, origins, data.metadata.sim.horizon_start_s, data.metadata.sim.horizon_end_s);
        write_comparison(config.out_dir, comparison, network);
        for (const auto& row : comparison.rmse) {
            out << fmt::format("{:<11} {:<19} rmse {:.4f}\n", row.model, row.window, row.rmse);
        }
    });
}

}  // namespace transim
