#pragma once

#include "transim/network.hpp"

#include <filesystem>

namespace transim {

/// Network file (JSON):
///   { "stations": [ { "id", "name", "x_km", "y_km", "gate_distance_m": {line: m},
///                     "default_gate_distance_m", "default_transfer_distance_m",
///                     "transfers": [ {"from", "to", "distance_m"} ] } ],
///     "lines":    [ { "id", "direction", "stops": [...], "run_times_s": [...],
///                     "segment_lengths_m": [...], "capacity" } ] }
NetworkSpec read_network_spec(const std::filesystem::path& path);
void write_network_spec(const std::filesystem::path& path, const NetworkSpec& spec);

/// Timetable file (CSV): train_id,line_id,station_id,arrival_time,departure_time
/// with HH:MM:SS times, rows of one trip in stop order.
Timetable read_timetable(const std::filesystem::path& path, const Network& network);
void write_timetable(const std::filesystem::path& path, const Timetable& timetable, const Network& network);

}  // namespace transim
