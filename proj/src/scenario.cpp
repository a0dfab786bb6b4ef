#include "forage/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "forage/format.hpp"

namespace forage {
namespace {

Scenario make(std::string name, std::size_t agents, const std::vector<double>& thresholds, AgentSpec spec,
              std::size_t horizon, std::size_t runs, std::string note = {}) {
    Scenario s;
    s.name = std::move(name);
    s.note = std::move(note);
    s.env.num_agents = agents;
    s.env.thresholds = thresholds;
    s.env.horizon = horizon;
    s.agent = spec;
    s.num_runs = runs;
    return s;
}

std::vector<Scenario> build_registry() {
    using K = AgentKind;
    const auto& bin = kBinaryThresholds;
    const auto& range = kRangeThresholds;
    return {
        make("baseline-moderate-1", 1, bin, {K::BaselineModerate}, 1000, 100),
        make("baseline-greedy-1", 1, bin, {K::BaselineGreedy}, 1000, 100),
        make("baseline-moderate-10", 10, bin, {K::BaselineModerate}, 1000, 100),
        make("baseline-greedy-10", 10, bin, {K::BaselineGreedy}, 1000, 100),
        make("NE-1-binary", 1, bin, {K::NeuroEvolution}, 1000, 100),
        make("NE-10-binary", 10, bin, {K::NeuroEvolution}, 500, 100,
             "500 steps as captioned; the other binary scenarios run 1000"),
        make("DRQN-1-binary", 1, bin, {K::Drqn}, 1000, 100),
        make("DRQN-10-binary", 10, bin, {K::Drqn}, 1000, 100),
        make("NE-1-range", 1, range, {K::NeuroEvolution}, 1000, 100,
             "100 runs as captioned (body text mentions 1000)"),
        make("DRQN-1-range", 1, range, {K::Drqn}, 1000, 30),
        make("LSTM-NE-1-range", 1, range, {K::NeuroEvolution, true}, 1000, 30),
        make("LSTM-DRQN-1-range", 1, range, {K::Drqn, true}, 1000, 30),
        make("NE-10-range", 10, range, {K::NeuroEvolution}, 1000, 100),
        make("DRQN-10-range", 10, range, {K::Drqn}, 3000, 30, "member of the 10-agent comparison only"),
        make("LSTM-NE-10-range", 10, range, {K::NeuroEvolution, true}, 3000, 100),
        make("LSTM-DRQN-10-range", 10, range, {K::Drqn, true}, 3000, 30, "member of the 10-agent comparison only"),
    };
}

std::vector<FigureBundle> build_figures() {
    auto single = [](std::string fig, std::string title, std::string scenario) {
        const Scenario& s = find_scenario(scenario);
        return FigureBundle{std::move(fig), std::move(title), {{s.name, s.num_runs, s.horizon()}}, {}};
    };
    return {
        FigureBundle{"fig1",
                     "Baseline moderate and greedy agents",
                     {{"baseline-moderate-1", 100, 1000}, {"baseline-greedy-1", 100, 1000}},
                     {}},
        single("fig2", "Single online NE agent, binary actions", "NE-1-binary"),
        single("fig3", "Ten online NE agents, binary actions", "NE-10-binary"),
        single("fig4", "Single DRQN agent, binary actions", "DRQN-1-binary"),
        single("fig5", "Ten DRQN agents, binary actions", "DRQN-10-binary"),
        single("fig6", "Single online NE agent, threshold range", "NE-1-range"),
        single("fig7", "Single DRQN agent, threshold range", "DRQN-1-range"),
        single("fig8", "Single online NE agent with LSTM, threshold range", "LSTM-NE-1-range"),
        single("fig9", "Single DRQN agent with LSTM, threshold range", "LSTM-DRQN-1-range"),
        single("fig10", "Ten online NE agents, threshold range", "NE-10-range"),
        single("fig11", "Ten online NE agents with LSTM, threshold range", "LSTM-NE-10-range"),
        FigureBundle{"fig12",
                     "Agent type comparison, single agent",
                     {{"NE-1-range", 100, 1000},
                      {"DRQN-1-range", 100, 1000},
                      {"LSTM-NE-1-range", 100, 1000},
                      {"LSTM-DRQN-1-range", 100, 1000}},
                     {}},
        FigureBundle{"fig13",
                     "Agent type comparison, ten agents",
                     {{"NE-10-range", 30, 3000},
                      {"DRQN-10-range", 30, 3000},
                      {"LSTM-NE-10-range", 30, 3000},
                      {"LSTM-DRQN-10-range", 30, 3000}},
                     "captioned as single-agent but plots ten agents; treated as the ten-agent comparison"},
    };
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("bad boolean for '" + std::string(key) + "': " + std::string(v));
}

double parse_real(std::string_view key, std::string_view v) {
    try {
        return parse_double(v);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad number for '" + std::string(key) + "': " + std::string(v));
    }
}

std::uint64_t parse_count(std::string_view key, std::string_view v) {
    const double d = parse_real(key, v);
    if (d < 0.0 || d != static_cast<double>(static_cast<std::uint64_t>(d))) {
        throw std::invalid_argument("expected a non-negative integer for '" + std::string(key) + "': " +
                                    std::string(v));
    }
    return static_cast<std::uint64_t>(d);
}

std::vector<double> parse_list(std::string_view key, std::string_view v) {
    std::string text(v);
    if (!text.empty() && text.front() == '[') text = text.substr(1);
    if (!text.empty() && text.back() == ']') text.pop_back();
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(parse_real(key, item));
    }
    return out;
}

void flatten_json(const nlohmann::json& j, const std::string& prefix,
                  std::vector<std::pair<std::string, std::string>>& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        const auto& v = it.value();
        if (v.is_object()) {
            flatten_json(v, key, out);
        } else if (v.is_string()) {
            out.emplace_back(key, v.get<std::string>());
        } else if (v.is_number_float()) {
            out.emplace_back(key, format_double(v.get<double>()));
        } else {
            out.emplace_back(key, v.dump());
        }
    }
}

}  // namespace

std::string to_string(AgentKind kind) {
    switch (kind) {
        case AgentKind::BaselineModerate: return "moderate";
        case AgentKind::BaselineGreedy: return "greedy";
        case AgentKind::NeuroEvolution: return "ne";
        case AgentKind::Drqn: return "drqn";
    }
    return "?";
}

AgentKind parse_agent_kind(std::string_view text) {
    if (text == "moderate") return AgentKind::BaselineModerate;
    if (text == "greedy") return AgentKind::BaselineGreedy;
    if (text == "ne") return AgentKind::NeuroEvolution;
    if (text == "drqn") return AgentKind::Drqn;
    throw std::invalid_argument("unknown agent kind '" + std::string(text) + "' (moderate|greedy|ne|drqn)");
}

void Scenario::validate() const {
    env.validate();
    ne.validate();
    drqn.validate();
    if (num_runs < 1) throw ConfigError("scenario '" + name + "': runs must be >= 1");
    if (window_length < 1) throw ConfigError("scenario '" + name + "': window_length must be >= 1");
    if (agent.kind == AgentKind::BaselineModerate) baseline_policy(BaselineKind::Moderate, env);
}

const std::vector<Scenario>& scenario_registry() {
    static const std::vector<Scenario> registry = build_registry();
    return registry;
}

const Scenario& find_scenario(std::string_view name) {
    for (const Scenario& s : scenario_registry()) {
        if (s.name == name) return s;
    }
    throw std::out_of_range("unknown scenario '" + std::string(name) + "'");
}

const std::vector<FigureBundle>& figure_registry() {
    static const std::vector<FigureBundle> figures = build_figures();
    return figures;
}

const FigureBundle& find_figure(std::string_view id) {
    for (const FigureBundle& f : figure_registry()) {
        if (f.figure == id) return f;
    }
    throw std::out_of_range("unknown figure '" + std::string(id) + "' (expected fig1..fig13)");
}

Scenario bundle_scenario(const BundleEntry& entry) {
    Scenario s = find_scenario(entry.scenario);
    s.num_runs = entry.runs;
    s.env.horizon = entry.horizon;
    return s;
}

void apply_override(Scenario& s, std::string_view key, std::string_view v) {
    auto count = [&] { return parse_count(key, v); };
    auto real = [&] { return parse_real(key, v); };

    if (key == "name") s.name = std::string(v);
    else if (key == "runs") s.num_runs = count();
    else if (key == "base_seed") s.base_seed = count();
    else if (key == "early_stop") s.early_stop = parse_bool(key, v);
    else if (key == "window_length") s.window_length = count();
    else if (key == "agent.kind") s.agent.kind = parse_agent_kind(v);
    else if (key == "agent.lstm") s.agent.lstm = parse_bool(key, v);
    else if (key == "observation") {
        if (v == "normalized") s.observation = ObservationMode::Normalized;
        else if (v == "raw") s.observation = ObservationMode::Raw;
        else throw std::invalid_argument("observation must be normalized|raw");
    }
    else if (key == "reward.kind") {
        if (v == "level") s.reward.kind = RewardKind::Level;
        else if (v == "delta") s.reward.kind = RewardKind::Delta;
        else throw std::invalid_argument("reward.kind must be level|delta");
    }
    else if (key == "env.num_agents") s.env.num_agents = count();
    else if (key == "env.initial_resource_per_agent") s.env.initial_resource_per_agent = real();
    else if (key == "env.growth_rate") s.env.growth_rate = real();
    else if (key == "env.max_gather") s.env.max_gather = real();
    else if (key == "env.survival_cost") s.env.survival_cost = real();
    else if (key == "env.initial_energy") s.env.initial_energy = real();
    else if (key == "env.thresholds") s.env.thresholds = parse_list(key, v);
    else if (key == "env.horizon") s.env.horizon = count();
    else if (key == "env.replenish_first") s.env.replenish_first = parse_bool(key, v);
    else if (key == "ne.population_size") s.ne.population_size = count();
    else if (key == "ne.temperature") s.ne.temperature = real();
    else if (key == "ne.tournament_size") s.ne.tournament_size = count();
    else if (key == "ne.mutation_rate") s.ne.mutation_rate = real();
    else if (key == "ne.mutation_sigma") s.ne.mutation_sigma = real();
    else if (key == "drqn.learning_rate") s.drqn.learning_rate = real();
    else if (key == "drqn.gamma") s.drqn.gamma = real();
    else if (key == "drqn.epsilon_start") s.drqn.epsilon.start = real();
    else if (key == "drqn.epsilon_min") s.drqn.epsilon.min = real();
    else if (key == "drqn.epsilon_decay") s.drqn.epsilon.decay = real();
    else throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
}

void apply_assignment(Scenario& scenario, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw std::invalid_argument("expected key=value, got '" + std::string(assignment) + "'");
    }
    apply_override(scenario, assignment.substr(0, eq), assignment.substr(eq + 1));
}

void apply_config_json(Scenario& scenario, std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    if (!j.contains("schema_version") || j["schema_version"] != 1) {
        throw std::invalid_argument("config: schema_version 1 required");
    }
    j.erase("schema_version");
    std::vector<std::pair<std::string, std::string>> pairs;
    flatten_json(j, "", pairs);
    for (const auto& [k, v] : pairs) apply_override(scenario, k, v);
}

void apply_config_file(Scenario& scenario, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_json(scenario, ss.str());
}

}  // namespace forage
