#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "forage/nets.hpp"
#include "forage/rng.hpp"

namespace forage {

struct EpsilonSchedule {
    double start = 1.0;
    double min = 0.05;
    double decay = 0.995;  ///< multiplicative, per step
};

/// max(min, start * decay^step)
double epsilon_step(const EpsilonSchedule& schedule, std::size_t step);

struct DrqnConfig {
    double learning_rate = 0.01;
    double gamma = 0.9;
    EpsilonSchedule epsilon;

    void validate() const;
};

/// Q-network parameters together with the learning hyperparameters that drive them.
struct QNetParams {
    NetParams net;
    DrqnConfig hyper;
};

struct Transition {
    ObservationWindow prev;
    std::size_t action = 0;
    double reward = 0.0;
    ObservationWindow next;  ///< unused when terminal
    bool terminal = false;
};

std::vector<double> q_values(const NetParams& net, const ObservationWindow& input);

/// Uniform action with probability epsilon, otherwise argmax with uniform tie-break.
std::size_t epsilon_greedy(std::span<const double> q, double epsilon, Rng& rng);

/// TD target for `t` under the current network (no separate target network).
double td_target(const NetParams& net, const Transition& t, double gamma);

/// One semi-gradient step on (y - Q(prev, action))^2 / 2. Returns the TD error y - Q.
double td_update(NetParams& net, const Transition& t, double learning_rate, double gamma);

/// Online Q-learner owned by one agent; one update per step, no replay buffer.
class DrqnAgent {
public:
    DrqnAgent(NetParams net, DrqnConfig config, std::size_t window_length);

    /// Closes the pending transition with `reward` and the incoming observation, applies
    /// the TD update, then picks this step's action epsilon-greedily.
    std::size_t decide_and_learn(const Observation& obs, double reward, Rng& rng);

    /// Closes the pending transition as terminal (the agent died this step).
    void finish_terminal(double reward);

    const NetParams& net() const { return net_; }
    const ObservationWindow& window() const { return window_; }
    std::size_t updates() const { return updates_; }
    std::size_t decisions() const { return decisions_; }
    bool has_pending() const { return pending_.has_value(); }

private:
    struct Pending {
        ObservationWindow prev;
        std::size_t action;
    };

    NetParams net_;
    DrqnConfig config_;
    ObservationWindow window_;
    std::optional<Pending> pending_;
    std::size_t updates_ = 0;
    std::size_t decisions_ = 0;
};

}  // namespace forage
