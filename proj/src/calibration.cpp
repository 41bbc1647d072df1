#include "transim/calibration.hpp"

#include "transim/csv.hpp"
#include "transim/time_format.hpp"

#include <fmt/format.h>

#include <map>
#include <mutex>

namespace transim {

CalibrationReport calibrate(const std::vector<AfcRecord>& observed, const Network& network,
                            const Timetable& timetable, const CalibrationConfig& config) {
    const auto choice_sets = build_choice_sets(network, distinct_ods(observed), config.choice_sets);
    return calibrate(observed, network, timetable, choice_sets, config);
}

CalibrationReport calibrate(const std::vector<AfcRecord>& observed, const Network& network,
                            const Timetable& timetable, const ChoiceSetLibrary& choice_sets,
                            const CalibrationConfig& config) {
    if (config.bounds.dimension() != ChoiceParams::dimension) {
        throw ValidationError(fmt::format("calibration: bounds must have {} dimensions", ChoiceParams::dimension));
    }
    config.bounds.validate();

    CalibrationReport report;
    auto observation = observe(observed, config.objective);
    report.kl_keys = select_kl_keys(observation.flows, config.objective).size();
    if (report.kl_keys == 0) {
        report.warnings.push_back(fmt::format(
            "insufficient data: no (o,d,t) in the estimation window reaches Q_KL = {}; the KL term is 0",
            config.objective.q_kl));
    }

    const SimulationObjective objective(network, timetable, choice_sets, observed, std::move(observation), config.sim,
                                        config.objective);

    std::mutex mutex;
    std::map<std::vector<double>, ObjectiveValue> evaluated;
    const BlackBox black_box = [&](std::span<const double> x) {
        auto value = objective(ChoiceParams::from_array(x));
        const double total = value.total;
        const std::lock_guard lock(mutex);
        evaluated.emplace(std::vector<double>(x.begin(), x.end()), std::move(value));
        return total;
    };

    const auto result = cors_optimize(black_box, config.bounds, config.cors);

    for (const auto& entry : result.trace) {
        const auto& value = evaluated.at(entry.x);
        report.trace.push_back(
            {entry.iteration, ChoiceParams::from_array(entry.x), value.flow, value.kl, value.total, entry.best});
    }
    report.best = ChoiceParams::from_array(result.best_x);
    report.best_value = evaluated.at(result.best_x);
    return report;
}

void write_calibration_trace(const std::filesystem::path& path, const CalibrationReport& report) {
    CsvTable table;
    table.header = {"iteration", "in_vehicle_time", "relative_walk_time", "transfers", "commonality",
                    "flow_term", "kl_term",         "total",              "best"};
    for (const auto& row : report.trace) {
        std::vector<std::string> cells = {std::to_string(row.iteration)};
        for (double b : row.params.as_array()) cells.push_back(format_number(b, 6));
        cells.push_back(format_number(row.flow, 3));
        cells.push_back(format_number(row.kl, 6));
        cells.push_back(format_number(row.total, 3));
        cells.push_back(format_number(row.best, 3));
        table.rows.push_back(std::move(cells));
    }
    write_csv(path, table);
}

void write_calibration_report(const std::filesystem::path& path, const CalibrationReport& report,
                              const std::optional<ChoiceParams>& reference) {
    CsvTable table;
    table.header = {"coefficient", "estimated"};
    if (reference) table.header.emplace_back("true");
    const auto estimated = report.best.as_array();
    for (std::size_t i = 0; i < ChoiceParams::dimension; ++i) {
        std::vector<std::string> row = {ChoiceParams::names[i], format_number(estimated[i], 4)};
        if (reference) row.push_back(format_number(reference->as_array()[i], 4));
        table.rows.push_back(std::move(row));
    }
    table.rows.push_back({"objective_total", format_number(report.best_value.total, 3)});
    table.rows.push_back({"objective_flow", format_number(report.best_value.flow, 3)});
    table.rows.push_back({"objective_kl", format_number(report.best_value.kl, 6)});
    table.rows.push_back({"kl_keys", std::to_string(report.kl_keys)});
    for (auto& row : table.rows) row.resize(table.header.size());
    write_csv(path, table);
}

}  // namespace transim
