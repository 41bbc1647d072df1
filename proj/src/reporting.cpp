#include "transim/reporting.hpp"

#include "transim/csv.hpp"
#include "transim/time_format.hpp"

#include <fmt/format.h>

#include <cmath>
#include <set>

namespace transim {

std::map<std::pair<StationIndex, int>, long> flows_by_origin(const ExitFlowTensor& flows) {
    std::map<std::pair<StationIndex, int>, long> out;
    for (const auto& [key, count] : flows.counts()) out[{key.od.origin, key.interval}] += count;
    return out;
}

namespace {

std::vector<int> window_intervals(const IntervalGrid& grid, const ReportWindow& window) {
    std::vector<int> out;
    const int first = grid.index_of(window.start_s + 1e-9);
    for (int i = first; grid.end_of(i) <= window.end_s + 1e-9; ++i) {
        if (grid.start_of(i) >= window.start_s - 1e-9) out.push_back(i);
    }
    return out;
}

}  // namespace

double origin_exit_rmse(const ExitFlowTensor& model, const ExitFlowTensor& truth, const ReportWindow& window,
                        const std::vector<StationIndex>& origins) {
    const auto intervals = window_intervals(truth.grid(), window);
    const auto m = flows_by_origin(model);
    const auto t = flows_by_origin(truth);
    std::set<StationIndex> all(origins.begin(), origins.end());
    for (const auto& [key, c] : m) all.insert(key.first);
    for (const auto& [key, c] : t) all.insert(key.first);

    double sum = 0.0;
    std::size_t cells = 0;
    for (auto origin : all) {
        for (int interval : intervals) {
            const auto mi = m.find({origin, interval});
            const auto ti = t.find({origin, interval});
            const double diff = static_cast<double>((mi == m.end() ? 0 : mi->second) - (ti == t.end() ? 0 : ti->second));
            sum += diff * diff;
            ++cells;
        }
    }
    return cells == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(cells));
}

Comparison compare_models(const ExitFlowTensor& truth,
                          const std::vector<std::pair<std::string, ExitFlowTensor>>& models,
                          const std::vector<ReportWindow>& windows, const std::vector<StationIndex>& origins,
                          double horizon_start_s, double horizon_end_s) {
    for (const auto& w : windows) {
        if (w.start_s < horizon_start_s || w.end_s > horizon_end_s || !(w.start_s < w.end_s)) {
            throw ValidationError(fmt::format("window '{}' lies outside the simulation horizon", w.label));
        }
    }
    Comparison comparison;
    const auto t = flows_by_origin(truth);
    for (const auto& [name, flows] : models) {
        const auto m = flows_by_origin(flows);
        for (const auto& w : windows) {
            comparison.rmse.push_back({name, w.label, origin_exit_rmse(flows, truth, w, origins)});
            std::set<StationIndex> all(origins.begin(), origins.end());
            for (const auto& [key, c] : m) all.insert(key.first);
            for (const auto& [key, c] : t) all.insert(key.first);
            for (auto origin : all) {
                for (int interval : window_intervals(truth.grid(), w)) {
                    const auto mi = m.find({origin, interval});
                    const auto ti = t.find({origin, interval});
                    comparison.scatter.push_back({name, w.label, origin, interval, ti == t.end() ? 0 : ti->second,
                                                  mi == m.end() ? 0 : mi->second});
                }
            }
        }
    }
    return comparison;
}

void write_comparison(const std::filesystem::path& dir, const Comparison& comparison, const Network& network) {
    std::filesystem::create_directories(dir);
    CsvTable rmse;
    rmse.header = {"model", "window", "rmse"};
    for (const auto& row : comparison.rmse) rmse.rows.push_back({row.model, row.window, format_number(row.rmse, 4)});
    write_csv(dir / "rmse.csv", rmse);

    CsvTable scatter;
    scatter.header = {"model", "window", "origin", "interval_index", "true_flow", "model_flow"};
    for (const auto& row : comparison.scatter) {
        scatter.rows.push_back({row.model, row.window, network.station(row.origin).id, std::to_string(row.interval),
                                std::to_string(row.truth), std::to_string(row.predicted)});
    }
    write_csv(dir / "scatter.csv", scatter);
}

}  // namespace transim
