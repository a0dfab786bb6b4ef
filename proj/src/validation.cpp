#include "forage/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "forage/environment.hpp"
#include "forage/nets.hpp"
#include "forage/neuroevolution.hpp"
#include "forage/simulation.hpp"

namespace forage {
namespace {

CheckResult check(std::string name, const std::function<std::string()>& body) {
    try {
        std::string failure = body();
        return {std::move(name), failure.empty(), failure.empty() ? "ok" : failure};
    } catch (const std::exception& e) {
        return {std::move(name), false, std::string("exception: ") + e.what()};
    }
}

std::string conservation() {
    EnvConfig cfg;
    cfg.num_agents = 10;
    cfg.thresholds = kRangeThresholds;
    EnvState state = init_env(cfg, 3);
    Rng rng = make_stream(3, 0);
    for (std::size_t t = 0; t < 1000; ++t) {
        std::vector<int> choices(cfg.num_agents);
        for (auto& c : choices) c = static_cast<int>(uniform_index(rng, cfg.num_choices()));
        double energy_before = 0.0;
        for (const auto& a : state.agents) energy_before += a.alive ? a.energy : 0.0;
        const double stock_before = cfg.replenish_first ? state.resource * cfg.growth_rate : state.resource;
        const StepReport rep = step_env(state, cfg, choices, rng);
        double gained = 0.0;
        for (double g : rep.gathered) gained += g;
        const double removed = stock_before - state.resource / cfg.growth_rate;
        if (std::abs(gained - rep.consumed) > 1e-9 || std::abs(removed - gained) > 1e-6 * std::max(1.0, stock_before)) {
            return "step " + std::to_string(t) + ": gathered " + std::to_string(gained) + " vs removed " +
                   std::to_string(removed);
        }
    }
    return {};
}

std::string recurrence() {
    EnvConfig cfg;
    cfg.thresholds = {1e12};
    cfg.initial_energy = 1e6;
    EnvState state = init_env(cfg);
    Rng rng(1);
    double expected = state.resource;
    const std::vector<int> greedy{0};
    for (std::size_t t = 0; t < 1000 && expected >= cfg.max_gather; ++t) {
        step_env(state, cfg, greedy, rng);
        expected = (expected - cfg.max_gather) * cfg.growth_rate;
        if (std::abs(state.resource - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
            return "step " + std::to_string(t + 1) + " diverges from the closed form";
        }
    }
    return {};
}

std::string monotone_death_and_determinism() {
    Scenario s = find_scenario("NE-10-binary");
    s.env.horizon = 300;
    const TimeSeries a = run_simulation(s, 11);
    const TimeSeries b = run_simulation(s, 11);
    if (!(a == b)) return "replay differs";
    std::size_t deaths = 0;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        deaths += a.rows[i].deaths;
        if (i > 0 && a.rows[i].alive > a.rows[i - 1].alive) return "alive count increased";
    }
    if (deaths != s.env.num_agents - a.rows.back().alive) return "deaths do not reconcile with alive count";
    return {};
}

std::string gradient_agreement(Architecture arch) {
    Rng rng(99);
    const std::size_t k = 4;
    const std::size_t dim = observation_dim(k);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        NetParams p = init_params(rng, arch, dim, k);
        for (double& v : flat(p)) v = u(rng);
        ObservationWindow win(arch == Architecture::Lstm ? kWindowLength : 1);
        for (std::size_t t = 0; t < win.capacity(); ++t) {
            Observation o;
            for (std::size_t i = 0; i < dim; ++i) o.values.push_back(u(rng));
            win.push(std::move(o));
        }
        std::vector<double> og(k);
        for (double& g : og) g = u(rng);
        const NetParams g = gradient(p, win, og);
        auto objective = [&](const NetParams& q) {
            const auto s = forward(q, win);
            double v = 0.0;
            for (std::size_t i = 0; i < k; ++i) v += s[i] * og[i];
            return v;
        };
        const auto gv = flat(g);
        for (std::size_t i = 0; i < gv.size(); ++i) {
            NetParams hi = p, lo = p;
            flat(hi)[i] += 1e-6;
            flat(lo)[i] -= 1e-6;
            const double fd = (objective(hi) - objective(lo)) / 2e-6;
            const double err = std::abs(fd - gv[i]) / std::max(1.0, std::max(std::abs(fd), std::abs(gv[i])));
            if (err > 1e-4) return "parameter " + std::to_string(i) + " relative error " + std::to_string(err);
        }
    }
    return {};
}

std::string population_size() {
    Rng rng(5);
    NeConfig cfg;
    Population pop = make_population(rng, cfg, Architecture::Feedforward, 7, 4);
    for (int i = 0; i < 500; ++i) {
        update_fitness(pop.genomes[select_network(pop, rng)], uniform01(rng));
        evolve_step(pop, cfg, rng);
        if (pop.size() != cfg.population_size) return "size changed to " + std::to_string(pop.size());
    }
    return {};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite() {
    return {
        check("resource-conservation", conservation),
        check("constant-consumption-recurrence", recurrence),
        check("monotone-death-and-replay", monotone_death_and_determinism),
        check("ffn-gradient-vs-finite-difference", [] { return gradient_agreement(Architecture::Feedforward); }),
        check("lstm-gradient-vs-finite-difference", [] { return gradient_agreement(Architecture::Lstm); }),
        check("population-size-fixed", population_size),
    };
}

}  // namespace forage
