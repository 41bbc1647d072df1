#pragma once

#include "transim/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace transim {

struct Coordinates {
    double x_km = 0.0;
    double y_km = 0.0;
};

struct TransferDistance {
    std::string from_line;
    std::string to_line;
    double distance_m = 0.0;
};

/// Station as read from a network file. Line references are by id.
struct StationSpec {
    std::string id;
    std::string name;
    std::optional<Coordinates> position;
    std::map<std::string, double> gate_distance_m;  // line id -> gate-to-platform distance
    double default_gate_distance_m = 0.0;
    std::vector<TransferDistance> transfers;        // symmetric unless both directions are listed
    double default_transfer_distance_m = 0.0;
};

struct LineSpec {
    std::string id;
    std::string direction;
    std::vector<std::string> stops;
    std::vector<double> run_times_s;
    std::vector<double> segment_lengths_m;  // optional, empty when unknown
    int capacity = 200;
};

struct NetworkSpec {
    std::vector<StationSpec> stations;
    std::vector<LineSpec> lines;
};

struct Station {
    std::string id;
    std::string name;
    std::optional<Coordinates> position;
    std::map<LineIndex, double> gate_distance_m;
    double default_gate_distance_m = 0.0;
    std::map<std::pair<LineIndex, LineIndex>, double> transfer_distance_m;
    double default_transfer_distance_m = 0.0;
};

struct Line {
    std::string id;
    std::string direction;
    std::vector<StationIndex> stops;
    std::vector<double> run_times_s;
    std::vector<double> segment_lengths_m;
    int capacity = 200;

    /// Position of `station` in the stop sequence.
    std::optional<std::size_t> position_of(StationIndex station) const;
};

/// Validated, immutable transit network. Safe to share read-only between threads.
class Network {
public:
    /// Throws ValidationError naming the violated invariant.
    explicit Network(const NetworkSpec& spec);

    std::size_t station_count() const { return stations_.size(); }
    std::size_t line_count() const { return lines_.size(); }

    const Station& station(StationIndex s) const { return stations_.at(s.get()); }
    const Line& line(LineIndex l) const { return lines_.at(l.get()); }
    const std::vector<Station>& stations() const { return stations_; }
    const std::vector<Line>& lines() const { return lines_; }

    std::optional<StationIndex> find_station(std::string_view id) const;
    std::optional<LineIndex> find_line(std::string_view id) const;
    /// Like find_station but throws ValidationError for unknown ids.
    StationIndex station_index(std::string_view id) const;
    LineIndex line_index(std::string_view id) const;

    const std::vector<LineIndex>& lines_serving(StationIndex s) const { return serving_.at(s.get()); }

    double gate_distance_m(StationIndex s, LineIndex l) const;
    double transfer_distance_m(StationIndex s, LineIndex from, LineIndex to) const;

    /// Straight-line distance between two stations, if both have coordinates.
    std::optional<double> straight_distance_km(StationIndex a, StationIndex b) const;

    /// Round-trips back to the file representation.
    NetworkSpec to_spec() const;

private:
    std::vector<Station> stations_;
    std::vector<Line> lines_;
    std::vector<std::vector<LineIndex>> serving_;
    std::unordered_map<std::string, StationIndex> station_ids_;
    std::unordered_map<std::string, LineIndex> line_ids_;
};

struct TripStop {
    StationIndex station;
    double arrival_s = 0.0;
    double departure_s = 0.0;
};

struct Trip {
    std::string train_id;
    LineIndex line;
    std::vector<TripStop> stops;

    std::optional<std::size_t> stop_position(StationIndex station) const;
};

struct Timetable {
    std::vector<Trip> trips;

    /// Throws ValidationError when a trip's times do not increase, a trip
    /// skips a stop of its line, or train ids repeat.
    void validate(const Network& network) const;
};

}  // namespace transim
