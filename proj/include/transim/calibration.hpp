#pragma once

#include "transim/cors.hpp"
#include "transim/objective.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace transim {

struct CalibrationConfig {
    ChoiceSetOptions choice_sets;
    SimConfig sim;
    ObjectiveConfig objective;
    Bounds bounds{{-10.0, -10.0, -10.0, -10.0}, {0.0, 0.0, 0.0, 0.0}};
    /// Coefficients act through an exponent, so the search is warped towards 0.
    CorsOptions cors{.warp_upper = true};
};

struct CalibrationTraceRow {
    std::size_t iteration = 0;
    ChoiceParams params;
    double flow = 0.0;
    double kl = 0.0;
    double total = 0.0;
    double best = 0.0;
};

struct CalibrationReport {
    ChoiceParams best;
    ObjectiveValue best_value;
    std::vector<CalibrationTraceRow> trace;
    std::size_t kl_keys = 0;
    std::vector<std::string> warnings;
};

/// Estimates C-logit coefficients from AFC records. Tap-ins of `observed`
/// are replayed as demand; tap-outs form the target flows and distributions.
CalibrationReport calibrate(const std::vector<AfcRecord>& observed, const Network& network,
                            const Timetable& timetable, const CalibrationConfig& config);

/// Same as above with prebuilt choice sets.
CalibrationReport calibrate(const std::vector<AfcRecord>& observed, const Network& network,
                            const Timetable& timetable, const ChoiceSetLibrary& choice_sets,
                            const CalibrationConfig& config);

/// trace.csv: iteration,in_vehicle_time,relative_walk_time,transfers,commonality,flow_term,kl_term,total,best
void write_calibration_trace(const std::filesystem::path& path, const CalibrationReport& report);

/// Recovered coefficients next to the reference ones when known.
void write_calibration_report(const std::filesystem::path& path, const CalibrationReport& report,
                              const std::optional<ChoiceParams>& reference);

}  // namespace transim
