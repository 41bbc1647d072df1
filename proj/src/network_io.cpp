#include "transim/network_io.hpp"

#include "transim/csv.hpp"
#include "transim/time_format.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>
#include <map>

namespace transim {

using nlohmann::json;

NetworkSpec read_network_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(fmt::format("cannot open network file '{}'", path.string()));
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("network file '{}': {}", path.string(), e.what()));
    }

    NetworkSpec spec;
    try {
        for (const auto& s : doc.at("stations")) {
            StationSpec station;
            station.id = s.at("id").get<std::string>();
            station.name = s.value("name", station.id);
            if (s.contains("x_km") && s.contains("y_km")) {
                station.position = Coordinates{s.at("x_km").get<double>(), s.at("y_km").get<double>()};
            }
            station.default_gate_distance_m = s.value("default_gate_distance_m", 0.0);
            station.default_transfer_distance_m = s.value("default_transfer_distance_m", 0.0);
            if (s.contains("gate_distance_m")) {
                for (const auto& [line, distance] : s.at("gate_distance_m").items()) {
                    station.gate_distance_m[line] = distance.get<double>();
                }
            }
            if (s.contains("transfers")) {
                for (const auto& t : s.at("transfers")) {
                    station.transfers.push_back({t.at("from").get<std::string>(), t.at("to").get<std::string>(),
                                                 t.at("distance_m").get<double>()});
                }
            }
            spec.stations.push_back(std::move(station));
        }
        for (const auto& l : doc.at("lines")) {
            LineSpec line;
            line.id = l.at("id").get<std::string>();
            line.direction = l.value("direction", std::string{});
            line.stops = l.at("stops").get<std::vector<std::string>>();
            line.run_times_s = l.at("run_times_s").get<std::vector<double>>();
            line.segment_lengths_m = l.value("segment_lengths_m", std::vector<double>{});
            line.capacity = l.value("capacity", 200);
            spec.lines.push_back(std::move(line));
        }
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("network file '{}': {}", path.string(), e.what()));
    }
    return spec;
}

void write_network_spec(const std::filesystem::path& path, const NetworkSpec& spec) {
    json doc;
    doc["stations"] = json::array();
    for (const auto& s : spec.stations) {
        json station = {{"id", s.id}, {"name", s.name}};
        if (s.position) {
            station["x_km"] = s.position->x_km;
            station["y_km"] = s.position->y_km;
        }
        station["default_gate_distance_m"] = s.default_gate_distance_m;
        station["default_transfer_distance_m"] = s.default_transfer_distance_m;
        station["gate_distance_m"] = json::object();
        for (const auto& [line, distance] : s.gate_distance_m) station["gate_distance_m"][line] = distance;
        station["transfers"] = json::array();
        for (const auto& t : s.transfers) {
            station["transfers"].push_back({{"from", t.from_line}, {"to", t.to_line}, {"distance_m", t.distance_m}});
        }
        doc["stations"].push_back(std::move(station));
    }
    doc["lines"] = json::array();
    for (const auto& l : spec.lines) {
        json line = {{"id", l.id},
                     {"direction", l.direction},
                     {"stops", l.stops},
                     {"run_times_s", l.run_times_s},
                     {"capacity", l.capacity}};
        if (!l.segment_lengths_m.empty()) line["segment_lengths_m"] = l.segment_lengths_m;
        doc["lines"].push_back(std::move(line));
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << doc.dump(2) << '\n';
}

Timetable read_timetable(const std::filesystem::path& path, const Network& network) {
    const auto table = read_csv(path);
    const auto c_train = table.column("train_id");
    const auto c_line = table.column("line_id");
    const auto c_station = table.column("station_id");
    const auto c_arr = table.column("arrival_time");
    const auto c_dep = table.column("departure_time");

    Timetable timetable;
    std::map<std::string, std::size_t> trip_of;
    for (const auto& row : table.rows) {
        const auto& train = row[c_train];
        auto [it, inserted] = trip_of.try_emplace(train, timetable.trips.size());
        if (inserted) {
            Trip trip;
            trip.train_id = train;
            trip.line = network.line_index(row[c_line]);
            timetable.trips.push_back(std::move(trip));
        }
        auto& trip = timetable.trips[it->second];
        if (network.line(trip.line).id != row[c_line]) {
            throw ValidationError(fmt::format("timetable: train '{}' changes line", train));
        }
        trip.stops.push_back({network.station_index(row[c_station]), parse_clock(row[c_arr]), parse_clock(row[c_dep])});
    }
    timetable.validate(network);
    return timetable;
}

void write_timetable(const std::filesystem::path& path, const Timetable& timetable, const Network& network) {
    CsvTable table;
    table.header = {"train_id", "line_id", "station_id", "arrival_time", "departure_time"};
    for (const auto& trip : timetable.trips) {
        for (const auto& stop : trip.stops) {
            table.rows.push_back({trip.train_id, network.line(trip.line).id, network.station(stop.station).id,
                                  format_clock(stop.arrival_s), format_clock(stop.departure_s)});
        }
    }
    write_csv(path, table);
}

}  // namespace transim
