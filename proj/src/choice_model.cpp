#include "transim/choice_model.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace transim {

ChoiceParams ChoiceParams::from_array(std::span<const double> values) {
    if (values.size() != dimension) {
        throw ValidationError(fmt::format("choice params: expected {} values, got {}", dimension, values.size()));
    }
    return {values[0], values[1], values[2], values[3]};
}

double utility(const Path& path, const ChoiceParams& params) {
    const auto x = path.attributes.as_array();
    return params.in_vehicle_time * x[0] + params.relative_walk_time * x[1] + params.transfers * x[2] +
           params.commonality * path.commonality;
}

PathProbabilities choice_probabilities(const ChoiceSet& choice_set, const ChoiceParams& params) {
    if (choice_set.paths.empty()) throw ValidationError("choice probabilities: empty choice set");
    for (double b : params.as_array()) {
        if (!std::isfinite(b)) throw NonFiniteUtilityError("choice probabilities: non-finite coefficient");
    }

    std::vector<double> utilities;
    utilities.reserve(choice_set.paths.size());
    for (const auto& path : choice_set.paths) {
        for (double x : path.attributes.as_array()) {
            if (!std::isfinite(x)) throw NonFiniteUtilityError("choice probabilities: non-finite attribute");
        }
        if (!std::isfinite(path.commonality)) {
            throw NonFiniteUtilityError("choice probabilities: non-finite commonality factor");
        }
        const double u = utility(path, params);
        if (!std::isfinite(u)) throw NonFiniteUtilityError("choice probabilities: non-finite utility");
        utilities.push_back(u);
    }

    const double top = *std::max_element(utilities.begin(), utilities.end());
    double sum = 0.0;
    for (auto& u : utilities) {
        u = std::exp(u - top);
        sum += u;
    }
    for (auto& u : utilities) u /= sum;
    return {choice_set.od, std::move(utilities)};
}

std::size_t shortest_path_index(const Network& network, const ChoiceSet& choice_set) {
    if (choice_set.paths.empty()) throw ValidationError("shortest path: empty choice set");
    std::size_t best = 0;
    for (std::size_t i = 1; i < choice_set.paths.size(); ++i) {
        const auto& a = choice_set.paths[i];
        const auto& b = choice_set.paths[best];
        const double da = a.attributes.in_vehicle_min;
        const double db = b.attributes.in_vehicle_min;
        if (std::abs(da - db) > 1e-9) {
            if (da < db) best = i;
            continue;
        }
        if (a.legs.size() != b.legs.size()) {
            if (a.legs.size() < b.legs.size()) best = i;
            continue;
        }
        if (compare_legs_lexicographic(network, a.legs, b.legs) < 0) best = i;
    }
    return best;
}

PathProbabilities rule_probabilities(const Network& network, const ChoiceSet& choice_set, const ChoiceRule& rule) {
    if (const auto* params = std::get_if<ChoiceParams>(&rule)) return choice_probabilities(choice_set, *params);
    PathProbabilities out{choice_set.od, std::vector<double>(choice_set.paths.size(), 0.0)};
    out.probs[shortest_path_index(network, choice_set)] = 1.0;
    return out;
}

std::size_t sample_path(std::span<const double> probs, RandomStream& stream) {
    const double u = stream.uniform();
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        last_positive = i;
        cumulative += probs[i];
        if (u < cumulative) return i;
    }
    // Rounding left the cumulative sum slightly below one.
    return last_positive;
}

ChoiceRule benchmark_params(BenchmarkKind kind) {
    if (kind == BenchmarkKind::uniform) return ChoiceParams{};
    return ShortestPathRule{};
}

std::string to_string(const ChoiceParams& params) {
    return fmt::format("(ivt={:.4f}, walk={:.4f}, transfers={:.4f}, commonality={:.4f})", params.in_vehicle_time,
                       params.relative_walk_time, params.transfers, params.commonality);
}

void write_params(const std::filesystem::path& path, const ChoiceParams& params) {
    nlohmann::ordered_json doc;
    const auto values = params.as_array();
    for (std::size_t i = 0; i < ChoiceParams::dimension; ++i) doc[ChoiceParams::names[i]] = values[i];
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << doc.dump(2) << '\n';
}

ChoiceParams read_params(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(fmt::format("cannot open parameter file '{}'", path.string()));
    try {
        const auto doc = nlohmann::json::parse(in);
        std::array<double, ChoiceParams::dimension> values{};
        for (std::size_t i = 0; i < ChoiceParams::dimension; ++i) values[i] = doc.at(ChoiceParams::names[i]).get<double>();
        return ChoiceParams::from_array(values);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(fmt::format("parameter file '{}': {}", path.string(), e.what()));
    }
}

}  // namespace transim
