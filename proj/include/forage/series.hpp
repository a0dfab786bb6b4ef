#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace forage {

/// State after one executed step.
struct StepRecord {
    std::size_t step = 0;
    double resource = 0.0;
    std::size_t alive = 0;
    double mean_energy = 0.0;  ///< over alive agents; 0 when none remain
    std::size_t gatherers = 0;
    std::size_t deaths = 0;
    std::vector<std::size_t> choice_counts;

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct TimeSeries {
    std::vector<double> thresholds;
    std::vector<StepRecord> rows;

    std::size_t size() const { return rows.size(); }
    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;
};

/// Names of the metric columns shared by TimeSeries and AggregateSeries, without "step".
std::vector<std::string> metric_names(std::span<const double> thresholds);

/// Metric values of a row in metric_names order.
std::vector<double> metric_values(const StepRecord& row);

struct AggregateSeries {
    std::vector<double> thresholds;
    std::size_t runs = 0;
    std::vector<std::vector<double>> mean;  ///< [step][metric]
    std::vector<std::vector<double>> sd;    ///< sample standard deviation, 0 for a single run
    std::vector<double> survival;           ///< fraction of runs with an alive agent at each step

    std::size_t size() const { return mean.size(); }
    double survival_fraction() const { return survival.empty() ? 0.0 : survival.back(); }
    friend bool operator==(const AggregateSeries&, const AggregateSeries&) = default;
};

/// Per-step mean and sample standard deviation across runs. Runs that stopped early
/// are padded with empty rows that carry the final resource level forward.
/// Throws std::invalid_argument on an empty list or mismatched threshold sets.
AggregateSeries aggregate(std::span<const TimeSeries> runs);

}  // namespace forage
