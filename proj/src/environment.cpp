#include "forage/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace forage {

void EnvConfig::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("invalid environment config: " + what); };
    if (!(growth_rate > 0.0) || !std::isfinite(growth_rate)) fail("growth_rate must be > 0");
    if (!(max_gather > 0.0) || !std::isfinite(max_gather)) fail("max_gather must be > 0");
    if (!(survival_cost >= 0.0) || !std::isfinite(survival_cost)) fail("survival_cost must be >= 0");
    if (!(initial_resource_per_agent >= 0.0)) fail("initial_resource_per_agent must be >= 0");
    if (!(initial_energy > 0.0)) fail("initial_energy must be > 0");
    if (thresholds.empty()) fail("thresholds must be non-empty");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] > 0.0)) fail("thresholds must all be > 0");
        if (i > 0 && !(thresholds[i] > thresholds[i - 1])) fail("thresholds must be strictly increasing");
    }
}

std::size_t EnvState::alive_count() const {
    return static_cast<std::size_t>(
        std::count_if(agents.begin(), agents.end(), [](const AgentState& a) { return a.alive; }));
}

StepReport StepReport::initial(std::size_t num_agents, std::size_t num_choices) {
    StepReport r;
    r.gathered.assign(num_agents, 0.0);
    r.choices.assign(num_agents, AgentState::kNoChoice);
    r.choice_counts.assign(num_choices, 0);
    return r;
}

EnvState init_env(const EnvConfig& config, std::uint64_t seed) {
    config.validate();
    EnvState state;
    state.resource = config.initial_resource_per_agent * static_cast<double>(config.num_agents);
    state.rng_seed = seed;
    state.agents.resize(config.num_agents);
    for (std::size_t i = 0; i < config.num_agents; ++i) {
        state.agents[i].id = i;
        state.agents[i].energy = config.initial_energy;
    }
    return state;
}

std::vector<double> gather_allocation(double resource, std::span<const std::size_t> gatherer_ids,
                                      double max_gather, Rng& rng) {
    std::vector<std::size_t> order(gatherer_ids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<double> alloc(gatherer_ids.size(), 0.0);
    double remaining = std::max(resource, 0.0);
    for (std::size_t pos : order) {
        const double take = std::min(max_gather, remaining);
        alloc[pos] = take;
        remaining -= take;
    }
    return alloc;
}

StepReport step_env(EnvState& state, const EnvConfig& config, std::span<const int> choices, Rng& rng) {
    const std::size_t n = state.agents.size();
    const std::size_t k = config.num_choices();
    if (choices.size() != n) {
        throw std::invalid_argument("step_env: expected one choice per agent");
    }

    StepReport report = StepReport::initial(n, k);

    if (config.replenish_first) state.resource *= config.growth_rate;

    std::vector<std::size_t> willing;
    for (std::size_t i = 0; i < n; ++i) {
        const AgentState& agent = state.agents[i];
        if (!agent.alive) continue;
        const int c = choices[i];
        if (c < 0 || static_cast<std::size_t>(c) >= k) {
            throw std::out_of_range("step_env: choice index " + std::to_string(c) + " out of range for agent " +
                                    std::to_string(i));
        }
        report.choices[i] = c;
        ++report.choice_counts[static_cast<std::size_t>(c)];
        if (wants_gather(agent.energy, config.thresholds[static_cast<std::size_t>(c)])) willing.push_back(i);
    }

    const std::vector<double> alloc = gather_allocation(state.resource, willing, config.max_gather, rng);
    for (std::size_t j = 0; j < willing.size(); ++j) {
        AgentState& agent = state.agents[willing[j]];
        agent.energy += alloc[j];
        report.gathered[agent.id] = alloc[j];
        report.consumed += alloc[j];
        if (alloc[j] > 0.0) ++report.gatherers;
    }
    state.resource = std::max(state.resource - report.consumed, 0.0);

    for (AgentState& agent : state.agents) {
        if (!agent.alive) continue;
        agent.energy -= config.survival_cost;
        agent.last_choice = report.choices[agent.id];
        agent.gathered_last = report.gathered[agent.id];
        if (agent.energy <= 0.0) {
            agent.alive = false;
            agent.energy = 0.0;
            ++report.deaths;
        }
    }

    if (!config.replenish_first) state.resource *= config.growth_rate;
    ++state.step;
    return report;
}

}  // namespace forage
