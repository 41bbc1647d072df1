#pragma once

#include "transim/choice_set.hpp"
#include "transim/datagen.hpp"

#include <filesystem>
#include <optional>

namespace transim {

/// Everything needed to regenerate a synthetic dataset bit-for-bit.
struct DatasetMetadata {
    std::string demand_model = "poisson arrivals, uniform within profile interval (synthetic stand-in)";
    ChoiceParams true_params = kReferenceParams;
    std::uint64_t demand_seed = 1;
    SimConfig sim;
    ChoiceSetOptions choice_sets;
    double warmup_end_s = 18 * 3600.0;
    double cooldown_start_s = 19 * 3600.0;
};

/// File names inside a dataset directory.
namespace dataset_files {
inline constexpr const char* network = "network.json";
inline constexpr const char* timetable = "timetable.csv";
inline constexpr const char* demand = "demand.csv";
inline constexpr const char* afc = "afc.csv";
inline constexpr const char* true_paths = "true_paths.csv";
inline constexpr const char* metadata = "metadata.json";
}  // namespace dataset_files

void write_metadata(const std::filesystem::path& path, const DatasetMetadata& metadata);
DatasetMetadata read_metadata(const std::filesystem::path& path);

void write_true_paths(const std::filesystem::path& path, const std::vector<TruePathRecord>& records);
std::vector<TruePathRecord> read_true_paths(const std::filesystem::path& path);

/// A dataset directory loaded into memory. The network is heap-held so the
/// timetable and choice sets can keep references across moves.
struct LoadedDataset {
    std::unique_ptr<Network> network;
    Timetable timetable;
    std::vector<AfcRecord> afc;
    DatasetMetadata metadata;
};

/// Throws ValidationError naming the missing file.
LoadedDataset load_dataset(const std::filesystem::path& dir);

}  // namespace transim
