#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "forage/scenario.hpp"
#include "forage/series.hpp"

namespace forage {

/// Reward for one step given the agent's energy before it and its state after it.
double energy_reward(const RewardConfig& reward, const EnvConfig& env, double energy_before, const AgentState& after);

/// One closed-loop run. Deterministic per (scenario, seed).
TimeSeries run_simulation(const Scenario& scenario, std::uint64_t seed);

struct BatchResult {
    std::vector<TimeSeries> runs;
    AggregateSeries aggregate;
};

/// Runs seeds base_seed + i for i < num_runs across `parallelism` OpenMP threads.
/// The result does not depend on the thread count.
BatchResult run_batch(const Scenario& scenario, std::size_t parallelism);

/// Single-threaded reference executor used to check run_batch.
BatchResult run_batch_serial(const Scenario& scenario);

}  // namespace forage
