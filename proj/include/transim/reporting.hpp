#pragma once

#include "transim/exit_flows.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace transim {

struct ReportWindow {
    std::string label;
    double start_s = 0.0;
    double end_s = 0.0;
};

/// Exit flows summed over destinations: (origin, interval) -> count.
std::map<std::pair<StationIndex, int>, long> flows_by_origin(const ExitFlowTensor& flows);

/// RMSE between per-origin exit flows over the intervals lying inside the
/// window, taken over every (origin, interval) present in either tensor
/// plus all origins in `origins`.
double origin_exit_rmse(const ExitFlowTensor& model, const ExitFlowTensor& truth, const ReportWindow& window,
                        const std::vector<StationIndex>& origins);

struct ComparisonRow {
    std::string model;
    std::string window;
    double rmse = 0.0;
};

struct ScatterRow {
    std::string model;
    std::string window;
    StationIndex origin;
    int interval = 0;
    long truth = 0;
    long predicted = 0;
};

struct Comparison {
    std::vector<ComparisonRow> rmse;
    std::vector<ScatterRow> scatter;
};

/// Throws ValidationError when a window falls outside [horizon_start, horizon_end].
Comparison compare_models(const ExitFlowTensor& truth,
                          const std::vector<std::pair<std::string, ExitFlowTensor>>& models,
                          const std::vector<ReportWindow>& windows, const std::vector<StationIndex>& origins,
                          double horizon_start_s, double horizon_end_s);

void write_comparison(const std::filesystem::path& dir, const Comparison& comparison, const Network& network);

}  // namespace transim
