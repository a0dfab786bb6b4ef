#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "forage/drqn.hpp"
#include "forage/environment.hpp"
#include "forage/neuroevolution.hpp"
#include "forage/policy.hpp"

namespace forage {

enum class AgentKind { BaselineModerate, BaselineGreedy, NeuroEvolution, Drqn };

struct AgentSpec {
    AgentKind kind = AgentKind::BaselineModerate;
    bool lstm = false;
};

std::string to_string(AgentKind kind);

enum class RewardKind {
    Level,  ///< end-of-step energy
    Delta,  ///< energy change over the step
};

/// Reward shared by both learners, in units of the initial energy. Death counts as
/// an energy level of 0.
struct RewardConfig {
    RewardKind kind = RewardKind::Delta;
};
AgentKind parse_agent_kind(std::string_view text);

struct Scenario {
    std::string name;
    std::string note;
    EnvConfig env;
    AgentSpec agent;
    std::size_t num_runs = 100;
    std::uint64_t base_seed = 1;
    NeConfig ne;
    DrqnConfig drqn;
    RewardConfig reward;
    ObservationMode observation = ObservationMode::Normalized;
    std::size_t window_length = kWindowLength;
    /// Stop recording once every agent is dead; off by default so regrowth is visible.
    bool early_stop = false;

    std::size_t horizon() const { return env.horizon; }
    void validate() const;
};

const std::vector<Scenario>& scenario_registry();

/// Throws std::out_of_range for unknown names.
const Scenario& find_scenario(std::string_view name);

struct BundleEntry {
    std::string scenario;
    std::size_t runs;
    std::size_t horizon;
};

/// One bundle per published figure (fig1..fig13).
struct FigureBundle {
    std::string figure;
    std::string title;
    std::vector<BundleEntry> entries;
    std::string note;
};

const std::vector<FigureBundle>& figure_registry();
const FigureBundle& find_figure(std::string_view id);

/// Materializes a bundle entry: the registry scenario with runs and horizon applied.
Scenario bundle_scenario(const BundleEntry& entry);

/// Applies one dotted-key override, e.g. "env.growth_rate" = "1.01".
/// Throws std::invalid_argument naming the key on unknown keys or bad values.
void apply_override(Scenario& scenario, std::string_view key, std::string_view value);

/// Parses "key=value" and forwards to apply_override.
void apply_assignment(Scenario& scenario, std::string_view assignment);

/// Reads a JSON config ({"schema_version": 1, ...}); nested objects flatten to dotted keys.
void apply_config_file(Scenario& scenario, const std::string& path);
void apply_config_json(Scenario& scenario, std::string_view json_text);

}  // namespace forage
