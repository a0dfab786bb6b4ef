#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "forage/environment.hpp"

namespace forage {

/// Network input: resource, alive and gatherer features followed by one
/// feature per threshold choice (share of agents that picked it last step).
struct Observation {
    std::vector<double> values;

    double resource_norm() const { return values[0]; }
    double alive_norm() const { return values[1]; }
    double gathering_norm() const { return values[2]; }
    std::span<const double> per_threshold() const { return std::span<const double>(values).subspan(3); }
    std::size_t size() const { return values.size(); }
};

constexpr std::size_t kGlobalFeatures = 3;

constexpr std::size_t observation_dim(std::size_t num_choices) { return kGlobalFeatures + num_choices; }

enum class ObservationMode {
    Normalized,  ///< divide by the initial stock and the agent count
    Raw,         ///< raw resource units and raw counts (ablation)
};

/// `previous` must be the report of the step that produced `state`, or StepReport::initial.
Observation build_observation(const EnvState& state, const StepReport& previous, const EnvConfig& config,
                              ObservationMode mode = ObservationMode::Normalized);

struct ActionChoice {
    std::size_t index = 0;
    double threshold = 0.0;
};

enum class BaselineKind { Moderate, Greedy };

inline constexpr double kModerateThreshold = 50.0;

/// Moderate picks the threshold equal to 50; greedy picks the largest threshold.
/// Throws ConfigError when the moderate threshold is not on offer.
ActionChoice baseline_policy(BaselineKind kind, const EnvConfig& config);

}  // namespace forage
