#pragma once

#include "transim/journey_time.hpp"
#include "transim/simulator.hpp"

#include <map>
#include <set>

namespace transim {

struct ObjectiveConfig {
    IntervalGrid grid;
    HistogramBins bins;
    double eta = 600.0;
    double q_kl = 50.0;
    double window_start_s = 18 * 3600.0;
    double window_end_s = 19 * 3600.0;
    double smoothing_epsilon = 1e-6;

    bool in_window(int interval) const;
};

/// Aggregated view of a set of AFC records: exit flows and journey-time
/// distributions, the two quantities compared by the objective.
struct FlowObservation {
    ExitFlowTensor flows;
    std::map<FlowKey, JourneyTimeDistribution> distributions;
};

FlowObservation observe(const std::vector<AfcRecord>& records, const ObjectiveConfig& config);

struct ObjectiveValue {
    double total = 0.0;
    double flow = 0.0;
    double kl = 0.0;
    std::map<FlowKey, double> kl_terms;
};

/// (o,d,t) inside the window whose observed exit flow reaches q_kl.
std::set<FlowKey> select_kl_keys(const ExitFlowTensor& observed, const ObjectiveConfig& config);

/// Squared exit-flow error over every in-window (o,d,t) plus eta times the
/// KL divergence summed over select_kl_keys. The KL keys carry exit
/// intervals; each is matched with the distributions of passengers who
/// tapped in during that same interval.
ObjectiveValue evaluate_objective(const FlowObservation& model, const FlowObservation& observed,
                                  const ObjectiveConfig& config);

/// Simulator-backed objective. Every evaluation reuses the same seed, so
/// Z(beta) is a deterministic function. Thread-safe: each call owns its run.
class SimulationObjective {
public:
    SimulationObjective(const Network& network, const Timetable& timetable, const ChoiceSetLibrary& choice_sets,
                        std::vector<AfcRecord> demand, FlowObservation observed, SimConfig sim_config,
                        ObjectiveConfig config);

    ObjectiveValue operator()(const ChoiceParams& params) const;
    ObjectiveValue evaluate_rule(const ChoiceRule& rule) const;

    const FlowObservation& observed() const { return observed_; }
    const ObjectiveConfig& config() const { return config_; }

private:
    const Network& network_;
    const Timetable& timetable_;
    const ChoiceSetLibrary& choice_sets_;
    std::vector<AfcRecord> demand_;
    FlowObservation observed_;
    SimConfig sim_config_;
    ObjectiveConfig config_;
};

}  // namespace transim
