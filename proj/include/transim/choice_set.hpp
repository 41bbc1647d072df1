#pragma once

#include "transim/network.hpp"

#include <array>
#include <map>
#include <vector>

namespace transim {

struct Leg {
    StationIndex board;
    StationIndex alight;
    LineIndex line;
    friend auto operator<=>(const Leg&, const Leg&) = default;
};

/// Path attributes entering the utility, in choice-model units.
struct PathAttributes {
    double in_vehicle_min = 0.0;
    double relative_walk = 0.0;  // walk minutes per km of map distance
    double transfers = 0.0;

    std::array<double, 3> as_array() const { return {in_vehicle_min, relative_walk, transfers}; }
};

struct Path {
    OdPair od;
    std::vector<Leg> legs;
    std::vector<StationIndex> stations;  // every station traversed, once each
    PathAttributes attributes;
    double walk_min = 0.0;               // access + transfers + egress
    double map_distance_km = 0.0;
    double commonality = 0.0;

    /// In-vehicle plus walking minutes; the ranking key of the choice set.
    double generalized_min() const { return attributes.in_vehicle_min + walk_min; }
    std::size_t transfer_count() const { return legs.empty() ? 0 : legs.size() - 1; }
};

struct ChoiceSet {
    OdPair od;
    std::vector<Path> paths;
};

struct ChoiceSetOptions {
    std::size_t max_paths = 5;
    double detour_cap = 2.0;
    double walk_speed_mps = 1.5;
    double gamma = 5.0;
};

using ChoiceSetLibrary = std::map<OdPair, ChoiceSet>;

/// Stations traversed by the legs, in order. Throws MissingRunTimeError when a
/// leg does not follow its line forward.
std::vector<StationIndex> path_stations(const Network& network, const std::vector<Leg>& legs);

/// Map distance of a station sequence: straight-line hops when every station
/// has coordinates, otherwise summed segment lengths.
double map_distance_km(const Network& network, const std::vector<Leg>& legs);

/// Builds a Path with stations, attributes and walk time filled in.
Path make_path(const Network& network, OdPair od, std::vector<Leg> legs, double walk_speed_mps);

PathAttributes path_attributes(const Network& network, const Path& path, double walk_speed_mps);

/// Total walking minutes (access, transfers, egress) for the legs.
double walk_minutes(const Network& network, const std::vector<Leg>& legs, double walk_speed_mps);

/// Strict weak order used to rank paths: generalized time, then transfers,
/// then leg sequence compared by station and line ids.
bool path_rank_less(const Network& network, const Path& a, const Path& b);

/// Lexicographic comparison of leg sequences by (board id, line id, alight id).
int compare_legs_lexicographic(const Network& network, const std::vector<Leg>& a, const std::vector<Leg>& b);

/// Up to `max_paths` loop-free paths ranked by generalized time, restricted to
/// in-vehicle time within detour_cap x the minimum, always containing the
/// minimum in-vehicle-time path. Commonality factors are filled in.
/// Throws NoPathError when the destination is unreachable.
ChoiceSet enumerate_choice_set(const Network& network, OdPair od, const ChoiceSetOptions& options);

/// Minimum in-vehicle minutes between two stations over the segment graph.
std::optional<double> min_in_vehicle_min(const Network& network, OdPair od);

/// ln sum_j (N_ij / (N_i N_j))^gamma over the paths of the set.
double commonality_factor(const ChoiceSet& choice_set, std::size_t path_index, double gamma);

/// Recomputes the commonality factor of every path in place.
void assign_commonality(ChoiceSet& choice_set, double gamma);

/// Choice sets for every listed OD pair. Unreachable pairs are left out.
ChoiceSetLibrary build_choice_sets(const Network& network, const std::vector<OdPair>& ods,
                                   const ChoiceSetOptions& options);

}  // namespace transim
