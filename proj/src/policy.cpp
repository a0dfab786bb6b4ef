#include "forage/policy.hpp"

#include <algorithm>

namespace forage {

Observation build_observation(const EnvState& state, const StepReport& previous, const EnvConfig& config,
                              ObservationMode mode) {
    const std::size_t k = config.num_choices();
    Observation obs;
    obs.values.assign(observation_dim(k), 0.0);

    const double n = static_cast<double>(config.num_agents);
    const double stock = config.initial_resource_per_agent * n;
    const bool raw = mode == ObservationMode::Raw;
    auto share = [&](double count) { return raw ? count : (n > 0.0 ? count / n : 0.0); };

    if (raw) {
        obs.values[0] = state.resource;
    } else {
        obs.values[0] = stock > 0.0 ? state.resource / stock : 0.0;
    }
    obs.values[1] = share(static_cast<double>(state.alive_count()));
    obs.values[2] = share(static_cast<double>(previous.gatherers));
    for (std::size_t c = 0; c < k && c < previous.choice_counts.size(); ++c) {
        obs.values[kGlobalFeatures + c] = share(static_cast<double>(previous.choice_counts[c]));
    }
    return obs;
}

ActionChoice baseline_policy(BaselineKind kind, const EnvConfig& config) {
    const auto& t = config.thresholds;
    if (kind == BaselineKind::Greedy) {
        return {t.size() - 1, t.back()};
    }
    auto it = std::find(t.begin(), t.end(), kModerateThreshold);
    if (it == t.end()) throw ConfigError("baseline moderate policy needs a threshold of 50 on offer");
    return {static_cast<std::size_t>(it - t.begin()), *it};
}

}  // namespace forage
