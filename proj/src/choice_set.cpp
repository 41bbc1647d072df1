#include "transim/choice_set.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace transim {

namespace {

struct LegSpan {
    std::size_t board_pos;
    std::size_t alight_pos;
};

LegSpan leg_span(const Network& network, const Leg& leg) {
    const auto& line = network.line(leg.line);
    const auto board = line.position_of(leg.board);
    if (!board) {
        throw MissingRunTimeError(fmt::format("line '{}' does not serve station '{}'", line.id,
                                              network.station(leg.board).id));
    }
    // Alight at the first occurrence after boarding.
    for (std::size_t q = *board + 1; q < line.stops.size(); ++q) {
        if (line.stops[q] == leg.alight) return {*board, q};
    }
    throw MissingRunTimeError(fmt::format("line '{}' has no segment run from '{}' to '{}'", line.id,
                                          network.station(leg.board).id, network.station(leg.alight).id));
}

double in_vehicle_seconds(const Network& network, const std::vector<Leg>& legs) {
    double total = 0.0;
    for (const auto& leg : legs) {
        const auto span = leg_span(network, leg);
        const auto& runs = network.line(leg.line).run_times_s;
        for (std::size_t q = span.board_pos; q < span.alight_pos; ++q) total += runs[q];
    }
    return total;
}

void check_chain(const Network& network, OdPair od, const std::vector<Leg>& legs) {
    if (legs.empty()) throw ValidationError("path has no legs");
    if (legs.front().board != od.origin || legs.back().alight != od.destination) {
        throw ValidationError(fmt::format("path does not connect '{}' to '{}'", network.station(od.origin).id,
                                          network.station(od.destination).id));
    }
    for (std::size_t i = 1; i < legs.size(); ++i) {
        if (legs[i].board != legs[i - 1].alight) throw ValidationError("path legs are not contiguous");
    }
}

}  // namespace

std::vector<StationIndex> path_stations(const Network& network, const std::vector<Leg>& legs) {
    std::vector<StationIndex> stations;
    for (const auto& leg : legs) {
        const auto span = leg_span(network, leg);
        const auto& stops = network.line(leg.line).stops;
        for (std::size_t q = span.board_pos; q <= span.alight_pos; ++q) {
            if (!stations.empty() && q == span.board_pos && stations.back() == stops[q]) continue;
            stations.push_back(stops[q]);
        }
    }
    return stations;
}

double map_distance_km(const Network& network, const std::vector<Leg>& legs) {
    const auto stations = path_stations(network, legs);
    bool have_coordinates = std::all_of(stations.begin(), stations.end(),
                                        [&](StationIndex s) { return network.station(s).position.has_value(); });
    if (have_coordinates) {
        double km = 0.0;
        for (std::size_t i = 1; i < stations.size(); ++i) km += *network.straight_distance_km(stations[i - 1], stations[i]);
        return km;
    }
    double meters = 0.0;
    for (const auto& leg : legs) {
        const auto& line = network.line(leg.line);
        if (line.segment_lengths_m.empty()) {
            throw ValidationError(fmt::format("no coordinates or segment lengths for the map distance on line '{}'",
                                              line.id));
        }
        const auto span = leg_span(network, leg);
        for (std::size_t q = span.board_pos; q < span.alight_pos; ++q) meters += line.segment_lengths_m[q];
    }
    return meters / 1000.0;
}

double walk_minutes(const Network& network, const std::vector<Leg>& legs, double walk_speed_mps) {
    if (legs.empty()) return 0.0;
    double meters = network.gate_distance_m(legs.front().board, legs.front().line);
    for (std::size_t i = 1; i < legs.size(); ++i) {
        meters += network.transfer_distance_m(legs[i].board, legs[i - 1].line, legs[i].line);
    }
    meters += network.gate_distance_m(legs.back().alight, legs.back().line);
    return meters / walk_speed_mps / 60.0;
}

PathAttributes path_attributes(const Network& network, const Path& path, double walk_speed_mps) {
    check_chain(network, path.od, path.legs);
    PathAttributes attributes;
    attributes.in_vehicle_min = in_vehicle_seconds(network, path.legs) / 60.0;
    const double km = map_distance_km(network, path.legs);
    if (!(km > 0.0)) throw ValidationError("path map distance must be positive");
    attributes.relative_walk = walk_minutes(network, path.legs, walk_speed_mps) / km;
    attributes.transfers = static_cast<double>(path.legs.size() - 1);
    return attributes;
}

Path make_path(const Network& network, OdPair od, std::vector<Leg> legs, double walk_speed_mps) {
    Path path;
    path.od = od;
    path.legs = std::move(legs);
    path.attributes = path_attributes(network, path, walk_speed_mps);
    path.stations = path_stations(network, path.legs);
    path.walk_min = walk_minutes(network, path.legs, walk_speed_mps);
    path.map_distance_km = map_distance_km(network, path.legs);
    return path;
}

int compare_legs_lexicographic(const Network& network, const std::vector<Leg>& a, const std::vector<Leg>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto key = [&](const Leg& leg) {
            return std::tie(network.station(leg.board).id, network.line(leg.line).id, network.station(leg.alight).id);
        };
        const auto ka = key(a[i]);
        const auto kb = key(b[i]);
        if (ka < kb) return -1;
        if (kb < ka) return 1;
    }
    if (a.size() == b.size()) return 0;
    return a.size() < b.size() ? -1 : 1;
}

bool path_rank_less(const Network& network, const Path& a, const Path& b) {
    const double ga = a.generalized_min();
    const double gb = b.generalized_min();
    if (ga != gb) return ga < gb;
    if (a.legs.size() != b.legs.size()) return a.legs.size() < b.legs.size();
    return compare_legs_lexicographic(network, a.legs, b.legs) < 0;
}

std::optional<double> min_in_vehicle_min(const Network& network, OdPair od) {
    const std::size_t n = network.station_count();
    std::vector<std::vector<std::pair<std::size_t, double>>> adjacency(n);
    for (const auto& line : network.lines()) {
        for (std::size_t q = 0; q + 1 < line.stops.size(); ++q) {
            adjacency[line.stops[q].get()].emplace_back(line.stops[q + 1].get(), line.run_times_s[q]);
        }
    }
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
    dist[od.origin.get()] = 0.0;
    frontier.emplace(0.0, od.origin.get());
    while (!frontier.empty()) {
        auto [d, u] = frontier.top();
        frontier.pop();
        if (d > dist[u]) continue;
        for (auto [v, w] : adjacency[u]) {
            if (d + w < dist[v]) {
                dist[v] = d + w;
                frontier.emplace(dist[v], v);
            }
        }
    }
    const double seconds = dist[od.destination.get()];
    if (!std::isfinite(seconds)) return std::nullopt;
    return seconds / 60.0;
}

namespace {

enum class RankBy { generalized, in_vehicle };

struct Partial {
    double bound = 0.0;  // lower bound on the completed key
    double ivt_s = 0.0;
    double walk_m = 0.0;
    std::vector<Leg> legs;
    std::vector<bool> visited;
    bool complete = false;
    std::uint64_t order = 0;
};

struct PartialAfter {
    bool operator()(const Partial& a, const Partial& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.order > b.order;
    }
};

/// Best-first search over loop-free leg sequences. Entries pop in nondecreasing
/// key order because every extension only adds time. Returns every complete
/// path whose key does not exceed the k-th smallest one.
std::vector<Path> best_first_paths(const Network& network, OdPair od, const ChoiceSetOptions& options, RankBy rank,
                                   double ivt_cap_s, std::size_t k) {
    const double speed = options.walk_speed_mps;
    std::priority_queue<Partial, std::vector<Partial>, PartialAfter> frontier;
    std::uint64_t order = 0;

    auto key_of = [&](double ivt_s, double walk_m) {
        return rank == RankBy::generalized ? ivt_s / 60.0 + walk_m / speed / 60.0 : ivt_s / 60.0;
    };

    auto extend = [&](const Partial& from, StationIndex at, std::optional<LineIndex> arrived_on) {
        for (auto line_index : network.lines_serving(at)) {
            if (arrived_on && *arrived_on == line_index) continue;
            const auto& line = network.line(line_index);
            const auto board_pos = line.position_of(at);
            double walk_m = from.walk_m + (arrived_on ? network.transfer_distance_m(at, *arrived_on, line_index)
                                                      : network.gate_distance_m(at, line_index));
            double ivt_s = from.ivt_s;
            for (std::size_t q = *board_pos + 1; q < line.stops.size(); ++q) {
                const auto station = line.stops[q];
                if (from.visited[station.get()]) break;
                ivt_s += line.run_times_s[q - 1];
                if (ivt_s > ivt_cap_s) break;
                Partial next;
                next.ivt_s = ivt_s;
                next.walk_m = walk_m;
                next.legs = from.legs;
                next.legs.push_back({at, station, line_index});
                next.visited = from.visited;
                for (std::size_t r = *board_pos + 1; r <= q; ++r) next.visited[line.stops[r].get()] = true;
                next.order = order++;
                if (station == od.destination) {
                    next.complete = true;
                    next.bound = key_of(ivt_s, walk_m + network.gate_distance_m(station, line_index));
                    frontier.push(std::move(next));
                    break;  // riding past the destination can never come back to it
                }
                next.bound = key_of(ivt_s, walk_m);
                frontier.push(std::move(next));
            }
        }
    };

    Partial root;
    root.visited.assign(network.station_count(), false);
    root.visited[od.origin.get()] = true;
    extend(root, od.origin, std::nullopt);

    std::vector<Path> complete;
    double kth_key = std::numeric_limits<double>::infinity();
    while (!frontier.empty()) {
        Partial top = frontier.top();
        frontier.pop();
        if (complete.size() >= k && top.bound > kth_key) break;
        if (top.complete) {
            complete.push_back(make_path(network, od, top.legs, speed));
            if (complete.size() == k) kth_key = top.bound;
            continue;
        }
        extend(top, top.legs.back().alight, top.legs.back().line);
    }
    return complete;
}

bool ivt_rank_less(const Network& network, const Path& a, const Path& b) {
    if (a.attributes.in_vehicle_min != b.attributes.in_vehicle_min) {
        return a.attributes.in_vehicle_min < b.attributes.in_vehicle_min;
    }
    if (a.legs.size() != b.legs.size()) return a.legs.size() < b.legs.size();
    return compare_legs_lexicographic(network, a.legs, b.legs) < 0;
}

}  // namespace

ChoiceSet enumerate_choice_set(const Network& network, OdPair od, const ChoiceSetOptions& options) {
    if (od.origin.get() >= network.station_count() || od.destination.get() >= network.station_count()) {
        throw ValidationError("choice set: unknown station");
    }
    if (od.origin == od.destination) throw ValidationError("choice set: origin equals destination");
    if (options.max_paths < 1) throw ValidationError("choice set: max_paths must be >= 1");
    if (!(options.detour_cap >= 1.0)) throw ValidationError("choice set: detour cap must be >= 1");

    const auto shortest_min = min_in_vehicle_min(network, od);
    if (!shortest_min) {
        throw NoPathError(fmt::format("no path from '{}' to '{}'", network.station(od.origin).id,
                                      network.station(od.destination).id));
    }
    const double cap_s = options.detour_cap * *shortest_min * 60.0 * (1.0 + 1e-12);

    auto by_rank = [&](const Path& a, const Path& b) { return path_rank_less(network, a, b); };
    auto paths = best_first_paths(network, od, options, RankBy::generalized, cap_s, options.max_paths);
    std::sort(paths.begin(), paths.end(), by_rank);
    if (paths.size() > options.max_paths) paths.resize(options.max_paths);

    auto fastest = best_first_paths(network, od, options, RankBy::in_vehicle, cap_s, 1);
    std::sort(fastest.begin(), fastest.end(), [&](const Path& a, const Path& b) { return ivt_rank_less(network, a, b); });
    if (fastest.empty()) throw NoPathError("choice set: minimum in-vehicle-time path not found");
    const auto& best_ivt = fastest.front();
    const bool present = std::any_of(paths.begin(), paths.end(), [&](const Path& p) { return p.legs == best_ivt.legs; });
    if (!present) {
        if (paths.size() == options.max_paths) paths.pop_back();
        paths.push_back(best_ivt);
        std::sort(paths.begin(), paths.end(), by_rank);
    }

    ChoiceSet choice_set{od, std::move(paths)};
    assign_commonality(choice_set, options.gamma);
    return choice_set;
}

double commonality_factor(const ChoiceSet& choice_set, std::size_t path_index, double gamma) {
    if (path_index >= choice_set.paths.size()) throw ValidationError("commonality: path index out of range");
    if (!(gamma > 0.0)) throw ValidationError("commonality: gamma must be positive");

    auto sorted_stations = [](const Path& p) {
        auto s = p.stations;
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return s;
    };
    const auto mine = sorted_stations(choice_set.paths[path_index]);
    if (mine.empty()) throw ValidationError("commonality: path has no stations");
    const double n_i = static_cast<double>(mine.size());

    double sum = 0.0;
    for (const auto& other : choice_set.paths) {
        const auto theirs = sorted_stations(other);
        if (theirs.empty()) throw ValidationError("commonality: path has no stations");
        std::vector<StationIndex> shared;
        std::set_intersection(mine.begin(), mine.end(), theirs.begin(), theirs.end(), std::back_inserter(shared));
        const double ratio = static_cast<double>(shared.size()) / (n_i * static_cast<double>(theirs.size()));
        sum += std::pow(ratio, gamma);
    }
    return std::log(sum);
}

void assign_commonality(ChoiceSet& choice_set, double gamma) {
    std::vector<double> factors(choice_set.paths.size());
    for (std::size_t i = 0; i < factors.size(); ++i) factors[i] = commonality_factor(choice_set, i, gamma);
    for (std::size_t i = 0; i < factors.size(); ++i) choice_set.paths[i].commonality = factors[i];
}

ChoiceSetLibrary build_choice_sets(const Network& network, const std::vector<OdPair>& ods,
                                   const ChoiceSetOptions& options) {
    ChoiceSetLibrary library;
    for (const auto& od : ods) {
        if (library.contains(od)) continue;
        try {
            library.emplace(od, enumerate_choice_set(network, od, options));
        } catch (const NoPathError&) {
        }
    }
    return library;
}

}  // namespace transim
