#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "forage/rng.hpp"

namespace forage {

/// Raised for configuration values outside their documented bounds.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct EnvConfig {
    std::size_t num_agents = 1;
    double initial_resource_per_agent = 500.0;
    double growth_rate = 1.005;
    double max_gather = 5.0;
    double survival_cost = 2.0;
    double initial_energy = 100.0;
    std::vector<double> thresholds{50.0, 5000.0};
    std::size_t horizon = 1000;
    /// Sensitivity switch: replenish the stock before agents gather instead of after.
    bool replenish_first = false;

    /// Throws ConfigError naming the first violated bound.
    void validate() const;

    std::size_t num_choices() const { return thresholds.size(); }
};

inline const std::vector<double> kBinaryThresholds{50.0, 5000.0};
inline const std::vector<double> kRangeThresholds{30.0, 50.0, 80.0, 5000.0};

struct AgentState {
    std::size_t id = 0;
    double energy = 0.0;
    bool alive = true;
    static constexpr int kNoChoice = -1;
    int last_choice = kNoChoice;
    double gathered_last = 0.0;
};

struct EnvState {
    double resource = 0.0;
    std::size_t step = 0;
    std::vector<AgentState> agents;
    std::uint64_t rng_seed = 0;

    std::size_t alive_count() const;
};

/// Outcome of one environment step. Per-agent vectors are indexed by agent id.
struct StepReport {
    std::vector<double> gathered;
    std::vector<int> choices;  ///< AgentState::kNoChoice for agents dead before the step
    std::vector<std::size_t> choice_counts;
    std::size_t gatherers = 0;  ///< agents that actually received resource
    std::size_t deaths = 0;
    double consumed = 0.0;

    /// Report standing in for "the step before step 0": no choices, no gathering.
    static StepReport initial(std::size_t num_agents, std::size_t num_choices);
};

EnvState init_env(const EnvConfig& config, std::uint64_t seed = 0);

/// Strict: an agent at exactly its threshold does not gather.
constexpr bool wants_gather(double energy, double threshold) { return energy < threshold; }

/// Serves gatherers in a shuffled order, each taking min(max_gather, remaining).
/// The returned allocations are aligned with `gatherer_ids`, not with the shuffled order.
std::vector<double> gather_allocation(double resource, std::span<const std::size_t> gatherer_ids,
                                      double max_gather, Rng& rng);

/// Advances one step: decide, gather, pay survival cost, death check, replenish.
/// `choices` holds one threshold index per agent; entries for dead agents are ignored.
StepReport step_env(EnvState& state, const EnvConfig& config, std::span<const int> choices, Rng& rng);

}  // namespace forage
