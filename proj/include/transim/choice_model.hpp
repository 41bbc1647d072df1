#pragma once

#include "transim/choice_set.hpp"
#include "transim/random_stream.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace transim {

/// C-logit coefficients: one per path attribute plus the commonality coefficient.
struct ChoiceParams {
    static constexpr std::size_t dimension = 4;
    static constexpr std::array<const char*, dimension> names = {
        "in_vehicle_time", "relative_walk_time", "transfers", "commonality"};

    double in_vehicle_time = 0.0;
    double relative_walk_time = 0.0;
    double transfers = 0.0;
    double commonality = 0.0;

    std::array<double, dimension> as_array() const {
        return {in_vehicle_time, relative_walk_time, transfers, commonality};
    }
    static ChoiceParams from_array(std::span<const double> values);

    friend bool operator==(const ChoiceParams&, const ChoiceParams&) = default;
};

/// Coefficients used to generate the synthetic ground truth.
inline constexpr ChoiceParams kReferenceParams{-0.147, -1.271, -0.573, -3.679};

/// Assigns every passenger to the minimum in-vehicle-time path.
struct ShortestPathRule {
    friend bool operator==(const ShortestPathRule&, const ShortestPathRule&) = default;
};

using ChoiceRule = std::variant<ChoiceParams, ShortestPathRule>;

struct PathProbabilities {
    OdPair od;
    std::vector<double> probs;
};

double utility(const Path& path, const ChoiceParams& params);

/// Softmax of the C-logit utilities with the maximum subtracted first.
/// Throws NonFiniteUtilityError for non-finite attributes or coefficients.
PathProbabilities choice_probabilities(const ChoiceSet& choice_set, const ChoiceParams& params);

/// Index of the minimum in-vehicle-time path; ties go to fewer transfers,
/// then to the lexicographically smaller leg sequence.
std::size_t shortest_path_index(const Network& network, const ChoiceSet& choice_set);

PathProbabilities rule_probabilities(const Network& network, const ChoiceSet& choice_set, const ChoiceRule& rule);

/// Inverse-CDF draw. Consumes exactly one value from the stream.
std::size_t sample_path(std::span<const double> probs, RandomStream& stream);

enum class BenchmarkKind { uniform, shortest_path };

ChoiceRule benchmark_params(BenchmarkKind kind);

std::string to_string(const ChoiceParams& params);

/// {"in_vehicle_time": ..., "relative_walk_time": ..., "transfers": ..., "commonality": ...}
void write_params(const std::filesystem::path& path, const ChoiceParams& params);
ChoiceParams read_params(const std::filesystem::path& path);

}  // namespace transim
