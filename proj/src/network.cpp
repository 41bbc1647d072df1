#include "transim/network.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace transim {

std::optional<std::size_t> Line::position_of(StationIndex station) const {
    const auto it = std::find(stops.begin(), stops.end(), station);
    if (it == stops.end()) return std::nullopt;
    return static_cast<std::size_t>(it - stops.begin());
}

std::optional<std::size_t> Trip::stop_position(StationIndex station) const {
    for (std::size_t i = 0; i < stops.size(); ++i) {
        if (stops[i].station == station) return i;
    }
    return std::nullopt;
}

namespace {

void require(bool condition, const std::string& message) {
    if (!condition) throw ValidationError(message);
}

bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

Network::Network(const NetworkSpec& spec) {
    require(!spec.stations.empty(), "network: no stations");
    require(!spec.lines.empty(), "network: no lines");

    for (const auto& s : spec.stations) {
        require(!s.id.empty(), "network: station with empty id");
        const StationIndex index(stations_.size());
        require(station_ids_.emplace(s.id, index).second, fmt::format("network: duplicate station id '{}'", s.id));
        Station station;
        station.id = s.id;
        station.name = s.name.empty() ? s.id : s.name;
        station.position = s.position;
        require(finite_nonnegative(s.default_gate_distance_m),
                fmt::format("station '{}': gate distance must be >= 0", s.id));
        require(finite_nonnegative(s.default_transfer_distance_m),
                fmt::format("station '{}': transfer distance must be >= 0", s.id));
        station.default_gate_distance_m = s.default_gate_distance_m;
        station.default_transfer_distance_m = s.default_transfer_distance_m;
        stations_.push_back(std::move(station));
    }

    for (const auto& l : spec.lines) {
        require(!l.id.empty(), "network: line with empty id");
        const LineIndex index(lines_.size());
        require(line_ids_.emplace(l.id, index).second, fmt::format("network: duplicate line id '{}'", l.id));
        require(l.stops.size() >= 2, fmt::format("line '{}': needs at least 2 stops", l.id));
        require(l.run_times_s.size() + 1 == l.stops.size(),
                fmt::format("line '{}': expected {} run times, got {}", l.id, l.stops.size() - 1, l.run_times_s.size()));
        require(l.segment_lengths_m.empty() || l.segment_lengths_m.size() + 1 == l.stops.size(),
                fmt::format("line '{}': segment length count does not match stops", l.id));
        require(l.capacity > 0, fmt::format("line '{}': capacity must be positive", l.id));

        Line line;
        line.id = l.id;
        line.direction = l.direction;
        line.capacity = l.capacity;
        for (const auto& stop : l.stops) {
            const auto it = station_ids_.find(stop);
            require(it != station_ids_.end(), fmt::format("line '{}': unknown station '{}'", l.id, stop));
            require(line.stops.empty() || line.stops.back() != it->second,
                    fmt::format("line '{}': station '{}' repeated consecutively", l.id, stop));
            line.stops.push_back(it->second);
        }
        for (double rt : l.run_times_s) {
            require(std::isfinite(rt) && rt > 0.0, fmt::format("line '{}': run times must be > 0", l.id));
        }
        for (double len : l.segment_lengths_m) {
            require(std::isfinite(len) && len > 0.0, fmt::format("line '{}': segment lengths must be > 0", l.id));
        }
        line.run_times_s = l.run_times_s;
        line.segment_lengths_m = l.segment_lengths_m;
        lines_.push_back(std::move(line));
    }

    serving_.assign(stations_.size(), {});
    for (std::size_t li = 0; li < lines_.size(); ++li) {
        std::set<StationIndex> seen;
        for (auto s : lines_[li].stops) {
            if (seen.insert(s).second) serving_[s.get()].push_back(LineIndex(li));
        }
    }

    // Platform-specific distances must refer to lines that serve the station.
    for (std::size_t si = 0; si < spec.stations.size(); ++si) {
        const auto& s = spec.stations[si];
        auto& station = stations_[si];
        const auto& serving = serving_[si];
        auto serving_line = [&](const std::string& id) {
            const auto it = line_ids_.find(id);
            require(it != line_ids_.end(), fmt::format("station '{}': unknown line '{}'", s.id, id));
            require(std::find(serving.begin(), serving.end(), it->second) != serving.end(),
                    fmt::format("station '{}': line '{}' does not serve it", s.id, id));
            return it->second;
        };
        for (const auto& [line_id, distance] : s.gate_distance_m) {
            require(finite_nonnegative(distance), fmt::format("station '{}': gate distance must be >= 0", s.id));
            station.gate_distance_m[serving_line(line_id)] = distance;
        }
        for (const auto& t : s.transfers) {
            require(finite_nonnegative(t.distance_m), fmt::format("station '{}': transfer distance must be >= 0", s.id));
            const auto from = serving_line(t.from_line);
            const auto to = serving_line(t.to_line);
            station.transfer_distance_m[{from, to}] = t.distance_m;
            station.transfer_distance_m.try_emplace({to, from}, t.distance_m);
        }
    }
}

std::optional<StationIndex> Network::find_station(std::string_view id) const {
    const auto it = station_ids_.find(std::string(id));
    if (it == station_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<LineIndex> Network::find_line(std::string_view id) const {
    const auto it = line_ids_.find(std::string(id));
    if (it == line_ids_.end()) return std::nullopt;
    return it->second;
}

StationIndex Network::station_index(std::string_view id) const {
    if (auto s = find_station(id)) return *s;
    throw ValidationError(fmt::format("unknown station '{}'", id));
}

LineIndex Network::line_index(std::string_view id) const {
    if (auto l = find_line(id)) return *l;
    throw ValidationError(fmt::format("unknown line '{}'", id));
}

double Network::gate_distance_m(StationIndex s, LineIndex l) const {
    const auto& station = this->station(s);
    const auto it = station.gate_distance_m.find(l);
    return it == station.gate_distance_m.end() ? station.default_gate_distance_m : it->second;
}

double Network::transfer_distance_m(StationIndex s, LineIndex from, LineIndex to) const {
    const auto& station = this->station(s);
    const auto it = station.transfer_distance_m.find({from, to});
    return it == station.transfer_distance_m.end() ? station.default_transfer_distance_m : it->second;
}

std::optional<double> Network::straight_distance_km(StationIndex a, StationIndex b) const {
    const auto& pa = station(a).position;
    const auto& pb = station(b).position;
    if (!pa || !pb) return std::nullopt;
    return std::hypot(pa->x_km - pb->x_km, pa->y_km - pb->y_km);
}

NetworkSpec Network::to_spec() const {
    NetworkSpec spec;
    for (const auto& s : stations_) {
        StationSpec out;
        out.id = s.id;
        out.name = s.name;
        out.position = s.position;
        out.default_gate_distance_m = s.default_gate_distance_m;
        out.default_transfer_distance_m = s.default_transfer_distance_m;
        for (const auto& [line, distance] : s.gate_distance_m) out.gate_distance_m[lines_[line.get()].id] = distance;
        for (const auto& [pair, distance] : s.transfer_distance_m) {
            out.transfers.push_back({lines_[pair.first.get()].id, lines_[pair.second.get()].id, distance});
        }
        spec.stations.push_back(std::move(out));
    }
    for (const auto& l : lines_) {
        LineSpec out;
        out.id = l.id;
        out.direction = l.direction;
        out.run_times_s = l.run_times_s;
        out.segment_lengths_m = l.segment_lengths_m;
        out.capacity = l.capacity;
        for (auto s : l.stops) out.stops.push_back(stations_[s.get()].id);
        spec.lines.push_back(std::move(out));
    }
    return spec;
}

void Timetable::validate(const Network& network) const {
    std::set<std::string> ids;
    for (const auto& trip : trips) {
        require(ids.insert(trip.train_id).second, fmt::format("timetable: duplicate train id '{}'", trip.train_id));
        require(trip.line.get() < network.line_count(), fmt::format("trip '{}': unknown line", trip.train_id));
        require(trip.stops.size() >= 2, fmt::format("trip '{}': needs at least 2 stops", trip.train_id));
        const auto& line = network.line(trip.line);
        const auto first = line.position_of(trip.stops.front().station);
        require(first.has_value(),
                fmt::format("trip '{}': first stop is not on line '{}'", trip.train_id, line.id));
        for (std::size_t i = 0; i < trip.stops.size(); ++i) {
            const auto& stop = trip.stops[i];
            const std::size_t expected = *first + i;
            require(expected < line.stops.size() && line.stops[expected] == stop.station,
                    fmt::format("trip '{}': stop {} does not follow line '{}'", trip.train_id, i, line.id));
            require(std::isfinite(stop.arrival_s) && std::isfinite(stop.departure_s),
                    fmt::format("trip '{}': non-finite time", trip.train_id));
            require(stop.departure_s >= stop.arrival_s,
                    fmt::format("trip '{}': departure before arrival at stop {}", trip.train_id, i));
            if (i > 0) {
                require(stop.arrival_s > trip.stops[i - 1].departure_s,
                        fmt::format("trip '{}': times must increase along the stop sequence", trip.train_id));
            }
        }
    }
}

}  // namespace transim
