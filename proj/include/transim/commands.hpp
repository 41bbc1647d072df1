#pragma once

#include "transim/calibration.hpp"
#include "transim/dataset_io.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace transim {

enum class ChoiceSource { true_params, uniform, shortest, calibrated };

ChoiceSource parse_choice_source(const std::string& text);

/// Every knob of the command-line pipeline in one place. Values left empty
/// fall back to the dataset metadata or the documented defaults.
struct RunConfig {
    std::filesystem::path out_dir = "out";
    std::optional<std::filesystem::path> data_dir;

    // generate
    std::optional<std::filesystem::path> network_file;
    std::optional<std::filesystem::path> timetable_file;
    std::optional<std::filesystem::path> demand_file;
    ChoiceParams true_params = kReferenceParams;

    // shared model knobs
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> sim_seed;  // common random numbers for calibrate/compare
    std::optional<double> tau_s;
    std::optional<int> capacity;
    std::optional<double> walk_speed_mps;
    std::optional<bool> walk_noise;
    std::optional<double> gamma;
    std::optional<std::size_t> max_paths;
    std::optional<double> detour_cap;

    // simulate / compare
    ChoiceSource choice = ChoiceSource::true_params;
    std::optional<std::filesystem::path> beta_file;

    // calibrate
    double eta = 600.0;
    double q_kl = 50.0;
    std::size_t budget = 100;
    Bounds bounds{{-10.0, -10.0, -10.0, -10.0}, {0.0, 0.0, 0.0, 0.0}};
    unsigned threads = 1;

    /// Throws ValidationError for out-of-range knobs.
    void validate() const;
};

/// Reads a JSON run configuration. Keys follow the CLI flag names; file paths
/// are relative to the config file.
RunConfig read_run_config(const std::filesystem::path& path);

/// Command entry points. Each returns the process exit code: 0 success,
/// 1 runtime failure, 2 configuration or validation failure. Messages go to `err`.
int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_calibrate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace transim
