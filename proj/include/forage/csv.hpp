#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "forage/series.hpp"

namespace forage {

/// Malformed CSV; the message carries the file and 1-based line number.
class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Columns: step, resource, alive, mean_energy, gatherers, deaths, choice_<threshold>...
void write_csv(const TimeSeries& series, const std::filesystem::path& path);
TimeSeries read_series_csv(const std::filesystem::path& path);

/// Columns: step, then <metric>_mean and <metric>_sd per metric, then survival and runs.
void write_csv(const AggregateSeries& agg, const std::filesystem::path& path);
AggregateSeries read_aggregate_csv(const std::filesystem::path& path);

std::string series_header(const TimeSeries& series);
std::string aggregate_header(const AggregateSeries& agg);

}  // namespace forage
