// Command-line front end: scenario registry, single runs, batches and figure bundles.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "forage/csv.hpp"
#include "forage/format.hpp"
#include "forage/metrics.hpp"
#include "forage/scenario.hpp"
#include "forage/simulation.hpp"
#include "forage/validation.hpp"

namespace fs = std::filesystem;
using namespace forage;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunError = 1;
constexpr int kExitUsage = 2;

struct Overrides {
    std::string config_file;
    std::vector<std::string> assignments;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "JSON config file (schema_version 1)")->check(CLI::ExistingFile);
        cmd->add_option("--set", assignments, "Override a dotted key, e.g. --set env.growth_rate=1.01");
    }

    Scenario apply(Scenario s) const {
        if (!config_file.empty()) apply_config_file(s, config_file);
        for (const auto& a : assignments) apply_assignment(s, a);
        s.validate();
        return s;
    }
};

void print_summary(const std::string& label, const BatchResult& b) {
    std::size_t depleted = 0;
    for (const auto& r : b.runs) depleted += depletion_step(r) ? 1 : 0;
    const auto& last = b.aggregate.mean.back();
    std::printf("%-22s runs=%zu survival=%.3f depleted=%zu mean_alive=%.3f mean_resource=%.2f\n", label.c_str(),
                b.runs.size(), b.aggregate.survival_fraction(), depleted, last[1], last[0]);
}

fs::path ensure_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sustainable foraging simulator and learning harness"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "Print the scenario and figure registries");

    std::string scenario_name;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    Overrides run_ovr;
    auto* run = app.add_subcommand("run", "Run one simulation and write its time series");
    run->add_option("--scenario", scenario_name, "Registry scenario name")->required();
    run->add_option("--seed", seed, "Run seed")->required();
    run->add_option("--out", out_dir, "Output directory");
    run_ovr.attach(run);

    std::size_t runs = 0;
    std::size_t parallel = 1;
    bool per_run = false;
    Overrides batch_ovr;
    auto* batch = app.add_subcommand("batch", "Run a seeded batch and write the aggregate");
    batch->add_option("--scenario", scenario_name, "Registry scenario name")->required();
    batch->add_option("--runs", runs, "Number of runs (default: registry value)");
    batch->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
    batch->add_option("--out", out_dir, "Output directory");
    batch->add_flag("--per-run", per_run, "Also write every run's time series");
    batch_ovr.attach(batch);

    std::string figure;
    Overrides repro_ovr;
    auto* repro = app.add_subcommand("reproduce", "Run a figure bundle and write its aggregates");
    repro->add_option("--figure", figure, "fig1..fig13")->required();
    repro->add_option("--out", out_dir, "Output directory")->required();
    repro->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
    repro->add_option("--runs", runs, "Override the run count of every bundle entry");
    repro_ovr.attach(repro);

    auto* validate = app.add_subcommand("validate", "Run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*list) {
            std::printf("%-22s %6s %3s %7s %5s  %s\n", "scenario", "agents", "K", "horizon", "runs", "agent");
            for (const Scenario& s : scenario_registry()) {
                std::printf("%-22s %6zu %3zu %7zu %5zu  %s%s\n", s.name.c_str(), s.env.num_agents,
                            s.env.num_choices(), s.horizon(), s.num_runs, to_string(s.agent.kind).c_str(),
                            s.agent.lstm ? "+lstm" : "");
            }
            std::printf("\n");
            for (const FigureBundle& f : figure_registry()) {
                std::printf("%-6s %s:", f.figure.c_str(), f.title.c_str());
                for (const auto& e : f.entries) std::printf(" %s(%zux%zu)", e.scenario.c_str(), e.runs, e.horizon);
                std::printf("\n");
            }
            return kExitOk;
        }

        if (*validate) {
            bool ok = true;
            for (const CheckResult& r : run_invariant_suite()) {
                std::printf("[%s] %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
                ok = ok && r.passed;
            }
            return ok ? kExitOk : kExitRunError;
        }

        if (*run || *batch) {
            Scenario base;
            try {
                base = find_scenario(scenario_name);
            } catch (const std::out_of_range& e) {
                std::cerr << e.what() << "\n\n" << app.help() << '\n';
                return kExitUsage;
            }
            const fs::path dir = ensure_dir(out_dir);
            if (*run) {
                const Scenario s = run_ovr.apply(base);
                const TimeSeries ts = run_simulation(s, seed);
                const fs::path file = dir / (s.name + "_seed" + std::to_string(seed) + ".csv");
                write_csv(ts, file);
                const auto& last = ts.rows.back();
                std::printf("%s seed=%llu alive=%zu resource=%s -> %s\n", s.name.c_str(),
                            static_cast<unsigned long long>(seed), last.alive, format_double(last.resource).c_str(),
                            file.string().c_str());
                return kExitOk;
            }
            Scenario s = batch_ovr.apply(base);
            if (runs > 0) s.num_runs = runs;
            const BatchResult b = run_batch(s, parallel);
            write_csv(b.aggregate, dir / (s.name + ".aggregate.csv"));
            if (per_run) {
                for (std::size_t i = 0; i < b.runs.size(); ++i) {
                    write_csv(b.runs[i], dir / (s.name + "_seed" + std::to_string(s.base_seed + i) + ".csv"));
                }
            }
            print_summary(s.name, b);
            return kExitOk;
        }

        if (*repro) {
            const FigureBundle* bundle = nullptr;
            try {
                bundle = &find_figure(figure);
            } catch (const std::out_of_range& e) {
                std::cerr << e.what() << '\n';
                return kExitUsage;
            }
            const fs::path dir = ensure_dir(out_dir);
            nlohmann::json manifest{{"figure", bundle->figure}, {"title", bundle->title}, {"note", bundle->note},
                                    {"series", nlohmann::json::array()}};
            for (const BundleEntry& e : bundle->entries) {
                Scenario s = repro_ovr.apply(bundle_scenario(e));
                if (runs > 0) s.num_runs = runs;
                const BatchResult b = run_batch(s, parallel);
                const std::string file = bundle->figure + "_" + e.scenario + ".aggregate.csv";
                write_csv(b.aggregate, dir / file);
                manifest["series"].push_back({{"scenario", e.scenario}, {"csv", file}, {"runs", s.num_runs},
                                              {"horizon", s.horizon()}});
                print_summary(e.scenario, b);
            }
            std::ofstream(dir / (bundle->figure + ".json")) << manifest.dump(2) << '\n';
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRunError;
    }
    return kExitUsage;
}
