#pragma once

#include "transim/choice_set.hpp"
#include "transim/network.hpp"
#include "transim/simulator.hpp"
#include "transim/time_format.hpp"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace fixtures {

using namespace transim;

struct StationDef {
    std::string id;
    double x_km = 0.0;
    double y_km = 0.0;
    double gate_m = 0.0;
};

struct LineDef {
    std::string id;
    std::vector<std::string> stops;
    std::vector<double> run_times_s;
    int capacity = 200;
};

inline NetworkSpec make_spec(const std::vector<StationDef>& stations, const std::vector<LineDef>& lines,
                             double transfer_m = 0.0) {
    NetworkSpec spec;
    for (const auto& s : stations) {
        StationSpec out;
        out.id = s.id;
        out.name = s.id;
        out.position = Coordinates{s.x_km, s.y_km};
        out.default_gate_distance_m = s.gate_m;
        out.default_transfer_distance_m = transfer_m;
        spec.stations.push_back(std::move(out));
    }
    for (const auto& l : lines) {
        LineSpec out;
        out.id = l.id;
        out.direction = "F";
        out.stops = l.stops;
        out.run_times_s = l.run_times_s;
        out.capacity = l.capacity;
        spec.lines.push_back(std::move(out));
    }
    return spec;
}

/// Trip over consecutive stops of `line_id` starting at `first_stop`;
/// times are (arrival, departure) pairs in seconds.
inline Trip make_trip(const Network& network, const std::string& train_id, const std::string& line_id,
                      const std::vector<std::pair<double, double>>& times, std::size_t first_stop = 0) {
    Trip trip;
    trip.train_id = train_id;
    trip.line = network.line_index(line_id);
    const auto& line = network.line(trip.line);
    for (std::size_t i = 0; i < times.size(); ++i) {
        trip.stops.push_back({line.stops.at(first_stop + i), times[i].first, times[i].second});
    }
    return trip;
}

inline AfcRecord tap_in(const Network& network, const std::string& id, const std::string& origin,
                        const std::string& destination, const std::string& clock) {
    return {id, {network.station_index(origin), network.station_index(destination)}, parse_clock(clock), std::nullopt};
}

inline double at(const std::string& clock) { return parse_clock(clock); }

/// `rows` x `cols` grid with one line per row and column in each direction;
/// run times vary so paths differ.
inline NetworkSpec grid_spec(std::size_t rows, std::size_t cols, double transfer_m = 100.0) {
    std::vector<StationDef> stations;
    auto name = [](std::size_t r, std::size_t c) { return "S" + std::to_string(r) + std::to_string(c); };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            stations.push_back({name(r, c), static_cast<double>(c), static_cast<double>(r), 50.0 + 10.0 * r + 5.0 * c});
        }
    }
    std::vector<LineDef> lines;
    for (std::size_t r = 0; r < rows; ++r) {
        LineDef east{"ROW" + std::to_string(r) + "E", {}, {}};
        for (std::size_t c = 0; c < cols; ++c) east.stops.push_back(name(r, c));
        for (std::size_t c = 0; c + 1 < cols; ++c) east.run_times_s.push_back(90.0 + 30.0 * ((r + c) % 3));
        LineDef west = east;
        west.id = "ROW" + std::to_string(r) + "W";
        std::reverse(west.stops.begin(), west.stops.end());
        std::reverse(west.run_times_s.begin(), west.run_times_s.end());
        lines.push_back(east);
        lines.push_back(west);
    }
    for (std::size_t c = 0; c < cols; ++c) {
        LineDef north{"COL" + std::to_string(c) + "N", {}, {}};
        for (std::size_t r = 0; r < rows; ++r) north.stops.push_back(name(r, c));
        for (std::size_t r = 0; r + 1 < rows; ++r) north.run_times_s.push_back(100.0 + 40.0 * ((r * 2 + c) % 3));
        LineDef south = north;
        south.id = "COL" + std::to_string(c) + "S";
        std::reverse(south.stops.begin(), south.stops.end());
        std::reverse(south.run_times_s.begin(), south.run_times_s.end());
        lines.push_back(north);
        lines.push_back(south);
    }
    return make_spec(stations, lines, transfer_m);
}

/// Random small network: a chain backbone plus a few random lines.
inline NetworkSpec random_spec(std::mt19937_64& rng, std::size_t stations, std::size_t extra_lines) {
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    std::uniform_real_distribution<double> run(60.0, 300.0);
    std::uniform_real_distribution<double> gate(0.0, 200.0);
    std::vector<StationDef> defs;
    for (std::size_t i = 0; i < stations; ++i) defs.push_back({"N" + std::to_string(i), coord(rng), coord(rng), gate(rng)});
    std::vector<LineDef> lines;
    LineDef backbone{"L0", {}, {}};
    for (std::size_t i = 0; i < stations; ++i) backbone.stops.push_back(defs[i].id);
    for (std::size_t i = 0; i + 1 < stations; ++i) backbone.run_times_s.push_back(run(rng));
    lines.push_back(backbone);
    for (std::size_t l = 0; l < extra_lines; ++l) {
        std::vector<std::size_t> order(stations);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        const std::size_t len = 2 + rng() % (stations - 1);
        LineDef line{"L" + std::to_string(l + 1), {}, {}};
        for (std::size_t i = 0; i < len; ++i) line.stops.push_back(defs[order[i]].id);
        for (std::size_t i = 0; i + 1 < len; ++i) line.run_times_s.push_back(run(rng));
        lines.push_back(line);
    }
    return make_spec(defs, lines, 120.0);
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("transim_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace fixtures
