#include "transim/datagen.hpp"

#include <algorithm>
#include <map>

namespace transim {

namespace {

struct Corridor {
    const char* name;
    const char* forward_direction;
    const char* backward_direction;
    std::vector<std::string> stops;
    std::vector<double> run_times_s;
    double headway_s;
    int capacity;
};

// Evening-peak shape over 17:00-20:00 in 15-minute steps; 18:00-19:00 is the peak hour.
constexpr double kPeakShape[12] = {0.45, 0.6, 0.75, 0.9, 1.0, 1.0, 1.0, 0.95, 0.7, 0.5, 0.35, 0.25};

}  // namespace

BundledCase bundled_small_network() {
    BundledCase bundle;
    auto& spec = bundle.network;

    struct StationRow {
        const char* id;
        const char* name;
        double x;
        double y;
        double gate_m;
    };
    const StationRow rows[] = {
        {"A", "Admiralty Sq", 0.0, 0.0, 90.0},  {"B", "Bay Road", 2.0, 0.0, 70.0},
        {"C", "Central Cross", 4.0, 0.0, 110.0}, {"D", "Dock Street", 6.0, 0.0, 70.0},
        {"E", "East Hub", 8.0, 0.0, 100.0},      {"F", "Fort Hill", 3.0, 2.5, 130.0},
        {"G", "Garden Gate", 6.0, 2.5, 120.0},   {"H", "Harbour", 4.0, -2.0, 80.0},
        {"I", "Island End", 10.0, 0.0, 80.0},    {"J", "Jade Park", 3.0, 4.5, 90.0},
    };
    for (const auto& r : rows) {
        StationSpec s;
        s.id = r.id;
        s.name = r.name;
        s.position = Coordinates{r.x, r.y};
        s.default_gate_distance_m = r.gate_m;
        s.default_transfer_distance_m = 150.0;
        spec.stations.push_back(std::move(s));
    }

    const std::vector<Corridor> corridors = {
        {"RED", "E", "W", {"A", "B", "C", "D", "E", "I"}, {180, 180, 180, 180, 180}, 180.0, 110},
        {"BLU", "E", "W", {"A", "F", "G", "E"}, {270, 210, 230}, 240.0, 200},
        {"GRN", "N", "S", {"H", "C", "F", "J"}, {150, 200, 150}, 300.0, 200},
    };
    for (const auto& c : corridors) {
        LineSpec forward;
        forward.id = std::string(c.name) + "_" + c.forward_direction;
        forward.direction = c.forward_direction;
        forward.stops = c.stops;
        forward.run_times_s = c.run_times_s;
        forward.capacity = c.capacity;
        LineSpec backward = forward;
        backward.id = std::string(c.name) + "_" + c.backward_direction;
        backward.direction = c.backward_direction;
        std::reverse(backward.stops.begin(), backward.stops.end());
        std::reverse(backward.run_times_s.begin(), backward.run_times_s.end());
        for (const auto* line : {&forward, &backward}) {
            bundle.services.push_back({line->id, 16 * 3600.0 + 45 * 60.0, 20 * 3600.0 + 15 * 60.0, c.headway_s, 30.0});
        }
        spec.lines.push_back(std::move(forward));
        spec.lines.push_back(std::move(backward));
    }

    // Deep blue-line platforms make that line's walking legs longer.
    auto station = [&](const std::string& id) -> StationSpec& {
        return *std::find_if(spec.stations.begin(), spec.stations.end(), [&](const auto& s) { return s.id == id; });
    };
    for (const char* id : {"A", "F", "G", "E"}) {
        station(id).gate_distance_m["BLU_E"] = 220.0;
        station(id).gate_distance_m["BLU_W"] = 220.0;
    }
    auto link = [&](const char* at, const char* from_corridor, const char* to_corridor, double meters) {
        for (const char* a : {"_E", "_W", "_N", "_S"}) {
            for (const char* b : {"_E", "_W", "_N", "_S"}) {
                const std::string from = std::string(from_corridor) + a;
                const std::string to = std::string(to_corridor) + b;
                const auto has = [&](const std::string& id) {
                    return std::any_of(spec.lines.begin(), spec.lines.end(), [&](const auto& l) { return l.id == id; });
                };
                if (has(from) && has(to)) station(at).transfers.push_back({from, to, meters});
            }
        }
    };
    link("A", "RED", "BLU", 200.0);
    link("E", "RED", "BLU", 180.0);
    link("C", "RED", "GRN", 120.0);
    link("F", "BLU", "GRN", 250.0);

    bundle.target_ods = {{"A", "E"}, {"E", "A"}, {"A", "I"}, {"I", "A"}, {"H", "E"},
                         {"E", "H"}, {"J", "A"}, {"A", "J"}, {"B", "G"}, {"G", "B"}};
    return bundle;
}

DemandProfile BundledCase::demand(const Network& network) const {
    DemandProfile profile;
    const std::size_t intervals = profile.interval_count();

    // Peak-hour rates (passengers/hour) for the corridors with real alternatives.
    const std::map<std::pair<std::string, std::string>, double> heavy = {
        {{"A", "E"}, 1100.0}, {{"E", "A"}, 500.0}, {{"A", "I"}, 600.0}, {{"I", "A"}, 250.0}, {{"H", "E"}, 450.0},
        {{"E", "H"}, 200.0},  {{"J", "A"}, 450.0}, {{"A", "J"}, 200.0}, {{"B", "G"}, 300.0}, {{"G", "B"}, 150.0},
    };
    constexpr double background = 12.0;

    for (std::size_t o = 0; o < network.station_count(); ++o) {
        for (std::size_t d = 0; d < network.station_count(); ++d) {
            if (o == d) continue;
            const auto key = std::make_pair(network.station(StationIndex(o)).id, network.station(StationIndex(d)).id);
            const auto it = heavy.find(key);
            const double peak = it == heavy.end() ? background : it->second;
            OdDemand od{{StationIndex(o), StationIndex(d)}, {}};
            for (std::size_t i = 0; i < intervals; ++i) od.rates_per_hour.push_back(peak * kPeakShape[i]);
            profile.ods.push_back(std::move(od));
        }
    }
    return profile;
}

}  // namespace transim
