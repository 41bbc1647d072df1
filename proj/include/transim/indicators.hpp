#pragma once

#include "transim/simulator.hpp"

#include <filesystem>

namespace transim {

struct SegmentLoadRow {
    std::string train_id;
    std::string line_id;
    std::string from_station;
    std::string to_station;
    double departure_s = 0.0;
    int load = 0;
    int capacity = 0;
};

struct JourneyTimeRow {
    FlowKey key;  // keyed by tap-in interval
    std::size_t count = 0;
    double mean_s = 0.0;
    double p50_s = 0.0;
    double p90_s = 0.0;
    double p95_s = 0.0;
};

struct LeftBehindRow {
    Platform platform;
    int interval = 0;
    std::size_t boarded = 0;
    std::size_t left_behind = 0;
    double rate = 0.0;  // left_behind / (boarded + left_behind)
};

struct PeakQueueRow {
    Platform platform;
    std::size_t peak_length = 0;
    double peak_time_s = 0.0;
};

struct IndicatorTables {
    std::vector<SegmentLoadRow> segment_loads;
    std::vector<JourneyTimeRow> journey_times;
    std::vector<LeftBehindRow> left_behind;
    std::vector<PeakQueueRow> peak_queues;
};

/// Aggregates a finished run. Journey-time statistics use exited passengers
/// only; percentiles are nearest-rank.
IndicatorTables extract_indicators(const SimOutput& output, const Network& network, const Timetable& timetable,
                                   double interval_s);

/// Writes passengers.out, od_exit_flows.out, loads.out, queues.out,
/// journey_times.out, left_behind.out and peak_queues.out into `dir`.
void write_sim_output(const std::filesystem::path& dir, const SimOutput& output, const IndicatorTables& tables,
                      const Network& network);

}  // namespace transim
