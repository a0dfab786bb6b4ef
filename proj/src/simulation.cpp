#include "forage/simulation.hpp"

#include <exception>
#include <memory>
#include <variant>

#include "forage/drqn.hpp"
#include "forage/neuroevolution.hpp"
#include "forage/policy.hpp"

namespace forage {
namespace {

struct Baseline {
    std::size_t choice;
};

using Controller = std::variant<Baseline, NeAgent, DrqnAgent>;

Controller make_controller(const Scenario& s, Rng& rng) {
    const std::size_t k = s.env.num_choices();
    const std::size_t dim = observation_dim(k);
    const Architecture arch = s.agent.lstm ? Architecture::Lstm : Architecture::Feedforward;
    const std::size_t window = s.agent.lstm ? s.window_length : 1;
    switch (s.agent.kind) {
        case AgentKind::BaselineModerate: return Baseline{baseline_policy(BaselineKind::Moderate, s.env).index};
        case AgentKind::BaselineGreedy: return Baseline{baseline_policy(BaselineKind::Greedy, s.env).index};
        case AgentKind::NeuroEvolution: return NeAgent(make_population(rng, s.ne, arch, dim, k), s.ne, window);
        case AgentKind::Drqn: return DrqnAgent(init_params(rng, arch, dim, k), s.drqn, window);
    }
    throw std::logic_error("unhandled agent kind");
}

StepRecord record(const EnvState& state, const StepReport& report) {
    StepRecord r;
    r.step = state.step;
    r.resource = state.resource;
    r.gatherers = report.gatherers;
    r.deaths = report.deaths;
    r.choice_counts = report.choice_counts;
    double energy = 0.0;
    for (const AgentState& a : state.agents) {
        if (!a.alive) continue;
        ++r.alive;
        energy += a.energy;
    }
    r.mean_energy = r.alive > 0 ? energy / static_cast<double>(r.alive) : 0.0;
    return r;
}

}  // namespace

double energy_reward(const RewardConfig& reward, const EnvConfig& env, double energy_before, const AgentState& after) {
    const double level = after.alive ? after.energy : 0.0;
    const double raw = reward.kind == RewardKind::Level ? level : level - energy_before;
    return raw / env.initial_energy;
}

TimeSeries run_simulation(const Scenario& scenario, std::uint64_t seed) {
    scenario.validate();
    const EnvConfig& env = scenario.env;
    const std::size_t n = env.num_agents;

    EnvState state = init_env(env, seed);
    Rng env_rng = make_stream(seed, 0);
    std::vector<Rng> agent_rngs;
    std::vector<Controller> controllers;
    agent_rngs.reserve(n);
    controllers.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        agent_rngs.push_back(make_stream(seed, i + 1));
        controllers.push_back(make_controller(scenario, agent_rngs.back()));
    }

    TimeSeries ts;
    ts.thresholds = env.thresholds;
    ts.rows.reserve(env.horizon);

    StepReport last = StepReport::initial(n, env.num_choices());
    std::vector<double> pending_reward(n, 0.0);
    std::vector<int> choices(n, AgentState::kNoChoice);
    std::vector<double> energy_before(n, 0.0);

    for (std::size_t t = 0; t < env.horizon; ++t) {
        if (scenario.early_stop && state.alive_count() == 0) break;
        const Observation obs = build_observation(state, last, env, scenario.observation);

        for (std::size_t i = 0; i < n; ++i) {
            choices[i] = AgentState::kNoChoice;
            if (!state.agents[i].alive) continue;
            Rng& rng = agent_rngs[i];
            const std::size_t c = std::visit(
                [&](auto& ctl) -> std::size_t {
                    using T = std::decay_t<decltype(ctl)>;
                    if constexpr (std::is_same_v<T, Baseline>) {
                        return ctl.choice;
                    } else if constexpr (std::is_same_v<T, NeAgent>) {
                        return ctl.decide(obs, rng);
                    } else {
                        return ctl.decide_and_learn(obs, pending_reward[i], rng);
                    }
                },
                controllers[i]);
            choices[i] = static_cast<int>(c);
        }

        for (std::size_t i = 0; i < n; ++i) energy_before[i] = state.agents[i].energy;
        last = step_env(state, env, choices, env_rng);

        for (std::size_t i = 0; i < n; ++i) {
            if (choices[i] == AgentState::kNoChoice) continue;
            const AgentState& agent = state.agents[i];
            const double reward = energy_reward(scenario.reward, env, energy_before[i], agent);
            if (auto* ne = std::get_if<NeAgent>(&controllers[i])) {
                ne->learn(reward, agent_rngs[i]);
            } else if (auto* q = std::get_if<DrqnAgent>(&controllers[i])) {
                if (agent.alive) {
                    pending_reward[i] = reward;
                } else {
                    q->finish_terminal(reward);
                }
            }
        }
        ts.rows.push_back(record(state, last));
    }
    return ts;
}

BatchResult run_batch(const Scenario& scenario, std::size_t parallelism) {
    scenario.validate();
    const auto runs = static_cast<std::int64_t>(scenario.num_runs);
    BatchResult result;
    result.runs.resize(scenario.num_runs);
    const int threads = static_cast<int>(parallelism == 0 ? 1 : parallelism);

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t i = 0; i < runs; ++i) {
        try {
            result.runs[static_cast<std::size_t>(i)] =
                run_simulation(scenario, scenario.base_seed + static_cast<std::uint64_t>(i));
        } catch (...) {
#pragma omp critical(forage_batch_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    result.aggregate = aggregate(result.runs);
    return result;
}

BatchResult run_batch_serial(const Scenario& scenario) {
    BatchResult result;
    result.runs.reserve(scenario.num_runs);
    for (std::size_t i = 0; i < scenario.num_runs; ++i) {
        result.runs.push_back(run_simulation(scenario, scenario.base_seed + i));
    }
    result.aggregate = aggregate(result.runs);
    return result;
}

}  // namespace forage
