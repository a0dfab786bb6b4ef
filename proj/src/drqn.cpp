#include "forage/drqn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "forage/neuroevolution.hpp"

namespace forage {

double epsilon_step(const EpsilonSchedule& s, std::size_t step) {
    return std::max(s.min, s.start * std::pow(s.decay, static_cast<double>(step)));
}

void DrqnConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("drqn: learning_rate must be > 0");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("drqn: gamma must be in [0, 1]");
    if (!(epsilon.min >= 0.0 && epsilon.min <= epsilon.start && epsilon.start <= 1.0)) {
        throw std::invalid_argument("drqn: epsilon must satisfy 0 <= min <= start <= 1");
    }
    if (!(epsilon.decay > 0.0 && epsilon.decay <= 1.0)) throw std::invalid_argument("drqn: epsilon decay must be in (0, 1]");
}

std::vector<double> q_values(const NetParams& net, const ObservationWindow& input) { return forward(net, input); }

std::size_t epsilon_greedy(std::span<const double> q, double epsilon, Rng& rng) {
    if (uniform01(rng) < epsilon) return uniform_index(rng, q.size());
    return argmax_random_tie(q, rng);
}

double td_target(const NetParams& net, const Transition& t, double gamma) {
    if (t.terminal || gamma == 0.0) return t.reward;
    const std::vector<double> next_q = q_values(net, t.next);
    return t.reward + gamma * *std::max_element(next_q.begin(), next_q.end());
}

double td_update(NetParams& net, const Transition& t, double learning_rate, double gamma) {
    const double target = td_target(net, t, gamma);
    const std::vector<double> q = q_values(net, t.prev);
    if (t.action >= q.size()) throw std::out_of_range("td_update: action index out of range");
    const double error = target - q[t.action];
    if (error == 0.0) return 0.0;

    std::vector<double> selector(q.size(), 0.0);
    selector[t.action] = 1.0;
    const NetParams grad = gradient(net, t.prev, selector);
    auto w = flat(net);
    auto g = flat(grad);
    const double step = learning_rate * error;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += step * g[i];
    return error;
}

DrqnAgent::DrqnAgent(NetParams net, DrqnConfig config, std::size_t window_length)
    : net_(std::move(net)), config_(config), window_(window_length) {
    config_.validate();
}

std::size_t DrqnAgent::decide_and_learn(const Observation& obs, double reward, Rng& rng) {
    window_.push(obs);
    if (pending_) {
        Transition t{std::move(pending_->prev), pending_->action, reward, window_, false};
        td_update(net_, t, config_.learning_rate, config_.gamma);
        ++updates_;
        pending_.reset();
    }
    const std::vector<double> q = q_values(net_, window_);
    const std::size_t action = epsilon_greedy(q, epsilon_step(config_.epsilon, decisions_), rng);
    ++decisions_;
    pending_ = Pending{window_, action};
    return action;
}

void DrqnAgent::finish_terminal(double reward) {
    if (!pending_) return;
    Transition t{std::move(pending_->prev), pending_->action, reward, ObservationWindow(1), true};
    td_update(net_, t, config_.learning_rate, config_.gamma);
    ++updates_;
    pending_.reset();
}

}  // namespace forage
