#include "transim/objective.hpp"

#include <cmath>

namespace transim {

bool ObjectiveConfig::in_window(int interval) const {
    return grid.start_of(interval) >= window_start_s - 1e-9 && grid.end_of(interval) <= window_end_s + 1e-9;
}

FlowObservation observe(const std::vector<AfcRecord>& records, const ObjectiveConfig& config) {
    return {exit_flows(records, config.grid), journey_time_distributions(records, config.grid, config.bins)};
}

std::set<FlowKey> select_kl_keys(const ExitFlowTensor& observed, const ObjectiveConfig& config) {
    std::set<FlowKey> keys;
    for (const auto& [key, count] : observed.counts()) {
        if (config.in_window(key.interval) && static_cast<double>(count) >= config.q_kl) keys.insert(key);
    }
    return keys;
}

ObjectiveValue evaluate_objective(const FlowObservation& model, const FlowObservation& observed,
                                  const ObjectiveConfig& config) {
    ObjectiveValue value;

    std::set<FlowKey> keys;
    for (const auto& [key, count] : model.flows.counts()) {
        if (config.in_window(key.interval)) keys.insert(key);
    }
    for (const auto& [key, count] : observed.flows.counts()) {
        if (config.in_window(key.interval)) keys.insert(key);
    }
    for (const auto& key : keys) {
        const double diff = static_cast<double>(model.flows.count(key) - observed.flows.count(key));
        value.flow += diff * diff;
    }

    for (const auto& key : select_kl_keys(observed.flows, config)) {
        const auto obs = observed.distributions.find(key);
        const auto mod = model.distributions.find(key);
        if (obs == observed.distributions.end() || mod == model.distributions.end()) continue;
        const auto smoothed = smooth_against(obs->second, mod->second, config.smoothing_epsilon);
        const double d = kl_divergence(mod->second, smoothed);
        value.kl_terms.emplace(key, d);
        value.kl += d;
    }
    value.total = value.flow + config.eta * value.kl;
    return value;
}

SimulationObjective::SimulationObjective(const Network& network, const Timetable& timetable,
                                         const ChoiceSetLibrary& choice_sets, std::vector<AfcRecord> demand,
                                         FlowObservation observed, SimConfig sim_config, ObjectiveConfig config)
    : network_(network),
      timetable_(timetable),
      choice_sets_(choice_sets),
      demand_(std::move(demand)),
      observed_(std::move(observed)),
      sim_config_(sim_config),
      config_(config) {
    if (!(config_.eta >= 0.0)) throw ValidationError("objective: eta must be >= 0");
    if (!(config_.q_kl >= 1.0)) throw ValidationError("objective: Q_KL must be >= 1");
    for (auto& r : demand_) r.tap_out_s.reset();
    sim_config_.grid = config_.grid;
    sim_config_.record_boardings = false;
}

ObjectiveValue SimulationObjective::evaluate_rule(const ChoiceRule& rule) const {
    const auto output = run_simulation(network_, timetable_, choice_sets_, rule, demand_, sim_config_);
    return evaluate_objective(observe(output.afc_records(), config_), observed_, config_);
}

ObjectiveValue SimulationObjective::operator()(const ChoiceParams& params) const { return evaluate_rule(params); }

}  // namespace transim
