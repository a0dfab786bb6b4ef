#include "forage/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "forage/format.hpp"

namespace forage {

std::vector<std::string> metric_names(std::span<const double> thresholds) {
    std::vector<std::string> names{"resource", "alive", "mean_energy", "gatherers", "deaths"};
    for (double t : thresholds) names.push_back("choice_" + format_double(t));
    return names;
}

std::vector<double> metric_values(const StepRecord& row) {
    std::vector<double> v{row.resource, static_cast<double>(row.alive), row.mean_energy,
                          static_cast<double>(row.gatherers), static_cast<double>(row.deaths)};
    for (std::size_t c : row.choice_counts) v.push_back(static_cast<double>(c));
    return v;
}

AggregateSeries aggregate(std::span<const TimeSeries> runs) {
    if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
    const auto& thresholds = runs.front().thresholds;
    std::size_t length = 0;
    for (const TimeSeries& ts : runs) {
        if (ts.thresholds != thresholds) throw std::invalid_argument("aggregate: runs use different thresholds");
        length = std::max(length, ts.size());
    }

    const std::size_t m = metric_names(thresholds).size();
    const double n = static_cast<double>(runs.size());
    AggregateSeries agg;
    agg.thresholds = thresholds;
    agg.runs = runs.size();
    agg.mean.assign(length, std::vector<double>(m, 0.0));
    agg.sd.assign(length, std::vector<double>(m, 0.0));
    agg.survival.assign(length, 0.0);

    auto row_at = [&](const TimeSeries& ts, std::size_t t) {
        if (t < ts.size()) return ts.rows[t];
        StepRecord pad;
        pad.step = t + 1;
        pad.resource = ts.rows.empty() ? 0.0 : ts.rows.back().resource;
        pad.choice_counts.assign(thresholds.size(), 0);
        return pad;
    };

    for (std::size_t t = 0; t < length; ++t) {
        std::vector<std::vector<double>> per_run;
        per_run.reserve(runs.size());
        std::size_t surviving = 0;
        for (const TimeSeries& ts : runs) {
            const StepRecord r = row_at(ts, t);
            surviving += r.alive > 0 ? 1 : 0;
            per_run.push_back(metric_values(r));
        }
        agg.survival[t] = static_cast<double>(surviving) / n;
        for (std::size_t j = 0; j < m; ++j) {
            double sum = 0.0;
            for (const auto& v : per_run) sum += v[j];
            const double mean = sum / n;
            double ss = 0.0;
            for (const auto& v : per_run) ss += (v[j] - mean) * (v[j] - mean);
            agg.mean[t][j] = mean;
            agg.sd[t][j] = runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        }
    }
    return agg;
}

}  // namespace forage
