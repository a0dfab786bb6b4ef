#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "forage/csv.hpp"
#include "forage/metrics.hpp"
#include "forage/simulation.hpp"

using namespace forage;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "forage_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

Scenario small(const std::string& name, std::size_t runs, std::size_t horizon) {
    Scenario s = find_scenario(name);
    s.num_runs = runs;
    s.env.horizon = horizon;
    return s;
}

StepRecord row(std::size_t step, double resource, std::size_t alive, std::vector<std::size_t> choices,
               std::size_t deaths = 0) {
    StepRecord r;
    r.step = step;
    r.resource = resource;
    r.alive = alive;
    r.mean_energy = alive ? 10.0 : 0.0;
    r.deaths = deaths;
    r.choice_counts = std::move(choices);
    return r;
}

}  // namespace

TEST_CASE("baseline runs") {
    SUBCASE("moderate single agent survives with a growing stock") {
        const TimeSeries ts = run_simulation(find_scenario("baseline-moderate-1"), 3);
        REQUIRE(ts.size() == 1000);
        CHECK(ts.rows.front().step == 1);
        CHECK(ts.rows.back().step == 1000);
        CHECK(survived(ts));
        CHECK(ts.rows.back().resource > ts.rows.front().resource);
        CHECK(ts.rows.back().mean_energy >= 47.0);
        CHECK(ts.rows.back().mean_energy <= 53.0);
    }
    SUBCASE("greedy single agent depletes the stock and dies") {
        const TimeSeries ts = run_simulation(find_scenario("baseline-greedy-1"), 3);
        CHECK_FALSE(survived(ts));
        CHECK(depletion_step(ts).has_value());
        CHECK(extinction_step(ts).has_value());
        CHECK(*depletion_step(ts) < *extinction_step(ts));
    }
}

TEST_CASE("deaths bookkeeping") {
    const TimeSeries ts = run_simulation(small("NE-10-binary", 1, 500), 9);
    std::size_t deaths = 0;
    std::size_t prev_alive = 10;
    for (const StepRecord& r : ts.rows) {
        deaths += r.deaths;
        CHECK(r.alive + r.deaths == prev_alive);
        CHECK(std::accumulate(r.choice_counts.begin(), r.choice_counts.end(), std::size_t{0}) == prev_alive);
        CHECK(r.gatherers <= prev_alive);
        prev_alive = r.alive;
    }
    CHECK(deaths + ts.rows.back().alive == 10);
    CHECK(initial_agents(ts) == 10);
}

TEST_CASE("run_simulation is deterministic per seed") {
    const Scenario s = small("NE-10-binary", 1, 200);
    CHECK(run_simulation(s, 5) == run_simulation(s, 5));
    CHECK_FALSE(run_simulation(s, 5) == run_simulation(s, 6));
}

TEST_CASE("batch results do not depend on the worker count") {
    const Scenario s = small("DRQN-10-binary", 12, 150);
    const BatchResult serial = run_batch_serial(s);
    const BatchResult one = run_batch(s, 1);
    const BatchResult eight = run_batch(s, 8);
    CHECK(one.runs == eight.runs);
    CHECK(one.aggregate == eight.aggregate);
    CHECK(serial.runs == eight.runs);
    CHECK(serial.aggregate == eight.aggregate);
    for (std::size_t i = 0; i < s.num_runs; ++i) CHECK(serial.runs[i] == run_simulation(s, s.base_seed + i));
}

TEST_CASE("aggregate") {
    const std::vector<double> thr{50, 5000};
    SUBCASE("a single run aggregates to itself with zero spread") {
        const Scenario s = small("NE-1-binary", 1, 100);
        const BatchResult b = run_batch(s, 2);
        REQUIRE(b.aggregate.size() == 100);
        for (std::size_t t = 0; t < 100; ++t) {
            CHECK(b.aggregate.mean[t] == metric_values(b.runs[0].rows[t]));
            for (double sd : b.aggregate.sd[t]) CHECK(sd == 0.0);
        }
    }
    SUBCASE("identical series have zero spread") {
        TimeSeries a{thr, {row(1, 100, 1, {1, 0}), row(2, 90, 1, {0, 1})}};
        const std::vector<TimeSeries> runs{a, a, a};
        const AggregateSeries agg = aggregate(runs);
        CHECK(agg.runs == 3);
        CHECK(agg.mean[1] == metric_values(a.rows[1]));
        for (const auto& sd : agg.sd)
            for (double v : sd) CHECK(v == 0.0);
        CHECK(agg.survival_fraction() == 1.0);
    }
    SUBCASE("hand-computed mean, sd and survival") {
        TimeSeries a{thr, {row(1, 100, 1, {1, 0})}};
        TimeSeries b{thr, {row(1, 60, 0, {0, 1}, 1)}};
        const std::vector<TimeSeries> runs{a, b};
        const AggregateSeries agg = aggregate(runs);
        CHECK(agg.mean[0][0] == 80.0);
        CHECK(agg.sd[0][0] == doctest::Approx(std::sqrt(800.0)));
        CHECK(agg.survival[0] == 0.5);
    }
    SUBCASE("early-stopped runs are padded with the final resource") {
        TimeSeries a{thr, {row(1, 100, 1, {1, 0}), row(2, 100, 1, {1, 0})}};
        TimeSeries b{thr, {row(1, 40, 0, {0, 1}, 1)}};
        const std::vector<TimeSeries> runs{a, b};
        const AggregateSeries agg = aggregate(runs);
        REQUIRE(agg.size() == 2);
        CHECK(agg.mean[1][0] == 70.0);
        CHECK(agg.mean[1][1] == 0.5);
        CHECK(agg.survival[1] == 0.5);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(aggregate(std::vector<TimeSeries>{}), std::invalid_argument);
        TimeSeries a{thr, {row(1, 1, 1, {1, 0})}};
        TimeSeries b{{30, 50, 80, 5000}, {row(1, 1, 1, {1, 0, 0, 0})}};
        CHECK_THROWS_AS(aggregate(std::vector<TimeSeries>{a, b}), std::invalid_argument);
    }
    SUBCASE("choice means add up to the agents that decided") {
        const BatchResult r = run_batch(small("NE-10-range", 10, 200), 4);
        const auto names = metric_names(r.aggregate.thresholds);
        const std::size_t alive = 1, deaths = 4, first_choice = 5;
        REQUIRE(names[alive] == "alive");
        REQUIRE(names[deaths] == "deaths");
        double prev_alive = 10.0;
        for (const auto& m : r.aggregate.mean) {
            const double total = std::accumulate(m.begin() + first_choice, m.end(), 0.0);
            CHECK(total == doctest::Approx(prev_alive));
            CHECK(total == doctest::Approx(m[alive] + m[deaths]));
            prev_alive = m[alive];
        }
    }
}

TEST_CASE("series CSV") {
    SUBCASE("round trip") {
        const TimeSeries ts = run_simulation(small("DRQN-1-range", 1, 300), 4);
        const fs::path p = scratch("series.csv");
        write_csv(ts, p);
        CHECK(read_series_csv(p) == ts);
        std::istringstream in(slurp(p));
        std::string header;
        std::getline(in, header);
        CHECK(header == "step,resource,alive,mean_energy,gatherers,deaths,choice_30,choice_50,choice_80,choice_5000");
        CHECK(std::count(header.begin(), header.end(), ',') + 1 == 6 + 4);
    }
    SUBCASE("empty series writes the header only") {
        const TimeSeries ts{{50, 5000}, {}};
        const fs::path p = scratch("empty.csv");
        write_csv(ts, p);
        CHECK(slurp(p) == "step,resource,alive,mean_energy,gatherers,deaths,choice_50,choice_5000\n");
        CHECK(read_series_csv(p) == ts);
    }
    SUBCASE("malformed input names the line") {
        const fs::path p = scratch("bad.csv");
        spit(p, "step,resource,alive,mean_energy,gatherers,deaths,choice_50,choice_5000\n1,2,1,3,1,0,1,0\n2,x,1,3,1,0,1,0\n");
        try {
            read_series_csv(p);
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            CHECK(std::string(e.what()).find("bad.csv:3") != std::string::npos);
        }
        spit(p, "step,resource,alive,mean_energy,gatherers,deaths,choice_50,choice_5000\n1,2,1,3,1,0,1\n");
        CHECK_THROWS_AS(read_series_csv(p), CsvError);
        spit(p, "step,resource\n");
        CHECK_THROWS_AS(read_series_csv(p), CsvError);
    }
}

TEST_CASE("aggregate CSV round trip") {
    const BatchResult r = run_batch(small("NE-1-range", 5, 120), 2);
    const fs::path p = scratch("agg.csv");
    write_csv(r.aggregate, p);
    CHECK(read_aggregate_csv(p) == r.aggregate);
    std::istringstream in(slurp(p));
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("step,resource_mean,resource_sd,alive_mean,alive_sd", 0) == 0);
    CHECK(header.size() >= 14);
    CHECK(header.substr(header.size() - 14) == ",survival,runs");
}

TEST_CASE("configuration overrides") {
    Scenario s = find_scenario("NE-1-binary");
    SUBCASE("dotted assignments") {
        apply_assignment(s, "env.growth_rate=1.01");
        apply_assignment(s, "ne.temperature=0.5");
        apply_assignment(s, "agent.lstm=true");
        apply_assignment(s, "runs=7");
        apply_assignment(s, "reward.kind=level");
        CHECK(s.env.growth_rate == 1.01);
        CHECK(s.ne.temperature == 0.5);
        CHECK(s.agent.lstm);
        CHECK(s.num_runs == 7);
        CHECK(s.reward.kind == RewardKind::Level);
    }
    SUBCASE("json with nested objects") {
        apply_config_json(s, R"({"schema_version": 1, "env": {"num_agents": 4, "thresholds": [20, 60, 5000]},
                                 "drqn": {"gamma": 0.5}, "agent": {"kind": "drqn"}})");
        CHECK(s.env.num_agents == 4);
        CHECK(s.env.thresholds == std::vector<double>{20, 60, 5000});
        CHECK(s.drqn.gamma == 0.5);
        CHECK(s.agent.kind == AgentKind::Drqn);
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(apply_assignment(s, "env.growth=1"), std::invalid_argument);
        CHECK_THROWS_AS(apply_assignment(s, "runs"), std::invalid_argument);
        CHECK_THROWS_AS(apply_assignment(s, "runs=abc"), std::invalid_argument);
        CHECK_THROWS_AS(apply_config_json(s, R"({"schema_version": 2})"), std::invalid_argument);
        CHECK_THROWS_AS(apply_config_json(s, R"({"schema_version": 1, "bogus": 1})"), std::invalid_argument);
        CHECK_THROWS_AS(apply_config_json(s, "{not json"), std::invalid_argument);
        try {
            apply_assignment(s, "env.nope=3");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("env.nope") != std::string::npos);
        }
    }
}

TEST_CASE("registry") {
    std::set<std::string> names;
    for (const Scenario& s : scenario_registry()) {
        CHECK(names.insert(s.name).second);
        CHECK_NOTHROW(s.validate());
    }
    CHECK_THROWS_AS(find_scenario("nope"), std::out_of_range);
    for (int i = 1; i <= 13; ++i) {
        const FigureBundle& f = find_figure("fig" + std::to_string(i));
        CHECK_FALSE(f.entries.empty());
        for (const BundleEntry& e : f.entries) {
            CHECK(names.count(e.scenario) == 1);
            const Scenario s = bundle_scenario(e);
            CHECK(s.num_runs == e.runs);
            CHECK(s.horizon() == e.horizon);
        }
    }
    CHECK(find_figure("fig1").entries.size() == 2);
    CHECK(find_figure("fig12").entries.size() == 4);
    CHECK(find_figure("fig13").entries.size() == 4);
    CHECK(find_figure("fig3").entries[0].horizon == 500);
    CHECK_THROWS(find_figure("fig14"));
}

TEST_CASE("metrics") {
    const std::vector<double> thr{50, 5000};
    TimeSeries ts{thr,
                  {row(1, 10, 2, {2, 0}), row(2, 8, 2, {1, 1}), row(3, 0, 2, {0, 2}), row(4, 0, 1, {0, 2}, 1),
                   row(5, 0, 0, {0, 1}, 1)}};
    CHECK(depletion_step(ts) == 3);
    CHECK(extinction_step(ts) == 5);
    CHECK_FALSE(survived(ts));
    CHECK(initial_agents(ts) == 2);
    CHECK(*choice_share(ts, 1, 1, 2) == 0.25);
    CHECK(*choice_share(ts, 1, 3, 5) == 1.0);
    CHECK_FALSE(choice_share(ts, 1, 6, 9).has_value());
    // window 2: steps 1-2 give 1/4, steps 2-3 give 3/4
    CHECK(majority_onset(ts, 1, 2) == 3);
    CHECK(majority_onset(ts, 1, 1) == 3);
    CHECK_FALSE(majority_onset(ts, 0, 3).has_value());
    CHECK(majority_onset(ts, 0, 1) == 1);
}
