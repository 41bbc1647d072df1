#pragma once

#include "transim/network.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace transim {

/// One smart-card transaction: tap-in always, tap-out once the trip is complete.
struct AfcRecord {
    std::string passenger_id;
    OdPair od;
    double tap_in_s = 0.0;
    std::optional<double> tap_out_s;
};

/// Demand / AFC file (CSV): passenger_id,origin,destination,tap_in_time[,tap_out_time]
/// An empty tap_out_time cell means the passenger never tapped out.
std::vector<AfcRecord> read_afc(const std::filesystem::path& path, const Network& network);
void write_afc(const std::filesystem::path& path, const std::vector<AfcRecord>& records,
               const Network& network, bool with_tap_out);

/// Distinct OD pairs in the records, sorted.
std::vector<OdPair> distinct_ods(const std::vector<AfcRecord>& records);

}  // namespace transim
