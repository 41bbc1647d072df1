#include "transim/dataset_io.hpp"

#include "transim/csv.hpp"
#include "transim/network_io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>

namespace transim {

using nlohmann::ordered_json;

void write_metadata(const std::filesystem::path& path, const DatasetMetadata& m) {
    ordered_json doc;
    doc["demand_model"] = m.demand_model;
    for (std::size_t i = 0; i < ChoiceParams::dimension; ++i) {
        doc["true_params"][ChoiceParams::names[i]] = m.true_params.as_array()[i];
    }
    doc["demand_seed"] = m.demand_seed;
    auto& sim = doc["simulation"];
    sim["seed"] = m.sim.seed;
    sim["interval_s"] = m.sim.grid.length_s;
    sim["interval_origin_s"] = m.sim.grid.origin_s;
    sim["horizon_start_s"] = m.sim.horizon_start_s;
    sim["horizon_end_s"] = m.sim.horizon_end_s;
    sim["walk_speed_mps"] = m.sim.walk_speed_mps;
    sim["capacity"] = m.sim.capacity ? ordered_json(*m.sim.capacity) : ordered_json(nullptr);
    sim["unlimited_capacity"] = m.sim.unlimited_capacity;
    sim["walk_noise"] = m.sim.walk_noise.enabled;
    sim["walk_noise_cv"] = m.sim.walk_noise.cv;
    auto& cs = doc["choice_sets"];
    cs["max_paths"] = m.choice_sets.max_paths;
    cs["detour_cap"] = m.choice_sets.detour_cap;
    cs["gamma"] = m.choice_sets.gamma;
    doc["warmup_end_s"] = m.warmup_end_s;
    doc["cooldown_start_s"] = m.cooldown_start_s;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << doc.dump(2) << '\n';
}

DatasetMetadata read_metadata(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(fmt::format("cannot open metadata file '{}'", path.string()));
    DatasetMetadata m;
    try {
        const auto doc = nlohmann::json::parse(in);
        m.demand_model = doc.value("demand_model", m.demand_model);
        std::array<double, ChoiceParams::dimension> beta{};
        for (std::size_t i = 0; i < ChoiceParams::dimension; ++i) {
            beta[i] = doc.at("true_params").at(ChoiceParams::names[i]).get<double>();
        }
        m.true_params = ChoiceParams::from_array(beta);
        m.demand_seed = doc.at("demand_seed").get<std::uint64_t>();
        const auto& sim = doc.at("simulation");
        m.sim.seed = sim.at("seed").get<std::uint64_t>();
        m.sim.grid.length_s = sim.at("interval_s").get<double>();
        m.sim.grid.origin_s = sim.at("interval_origin_s").get<double>();
        m.sim.horizon_start_s = sim.at("horizon_start_s").get<double>();
        m.sim.horizon_end_s = sim.at("horizon_end_s").get<double>();
        m.sim.walk_speed_mps = sim.at("walk_speed_mps").get<double>();
        if (!sim.at("capacity").is_null()) m.sim.capacity = sim.at("capacity").get<int>();
        m.sim.unlimited_capacity = sim.value("unlimited_capacity", false);
        m.sim.walk_noise.enabled = sim.value("walk_noise", false);
        m.sim.walk_noise.cv = sim.value("walk_noise_cv", 0.2);
        const auto& cs = doc.at("choice_sets");
        m.choice_sets.max_paths = cs.at("max_paths").get<std::size_t>();
        m.choice_sets.detour_cap = cs.at("detour_cap").get<double>();
        m.choice_sets.gamma = cs.at("gamma").get<double>();
        m.choice_sets.walk_speed_mps = m.sim.walk_speed_mps;
        m.warmup_end_s = doc.at("warmup_end_s").get<double>();
        m.cooldown_start_s = doc.at("cooldown_start_s").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(fmt::format("metadata file '{}': {}", path.string(), e.what()));
    }
    return m;
}

void write_true_paths(const std::filesystem::path& path, const std::vector<TruePathRecord>& records) {
    CsvTable table;
    table.header = {"passenger_id", "path", "times_left_behind"};
    for (const auto& r : records) {
        table.rows.push_back({r.passenger_id, std::to_string(r.path), std::to_string(r.times_left_behind)});
    }
    write_csv(path, table);
}

std::vector<TruePathRecord> read_true_paths(const std::filesystem::path& path) {
    const auto table = read_csv(path);
    const auto c_id = table.column("passenger_id");
    const auto c_path = table.column("path");
    const auto c_left = table.column("times_left_behind");
    std::vector<TruePathRecord> out;
    for (const auto& row : table.rows) {
        out.push_back({row[c_id], static_cast<std::size_t>(std::stoul(row[c_path])), std::stoi(row[c_left])});
    }
    return out;
}

LoadedDataset load_dataset(const std::filesystem::path& dir) {
    for (const char* name : {dataset_files::network, dataset_files::timetable, dataset_files::afc,
                             dataset_files::metadata}) {
        if (!std::filesystem::exists(dir / name)) {
            throw ValidationError(fmt::format("dataset file not found: '{}'", (dir / name).string()));
        }
    }
    LoadedDataset data;
    data.network = std::make_unique<Network>(read_network_spec(dir / dataset_files::network));
    data.timetable = read_timetable(dir / dataset_files::timetable, *data.network);
    data.afc = read_afc(dir / dataset_files::afc, *data.network);
    data.metadata = read_metadata(dir / dataset_files::metadata);
    return data;
}

}  // namespace transim
