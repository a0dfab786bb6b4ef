#include "forage/csv.hpp"

#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "forage/format.hpp"

namespace forage {
namespace {

constexpr std::string_view kChoicePrefix = "choice_";
constexpr std::size_t kFixedSeriesColumns = 6;

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

class Reader {
public:
    explicit Reader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
        if (!in_) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    }

    bool next(std::vector<std::string>& cells) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            cells = split(line);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw CsvError(path_.string() + ":" + std::to_string(line_) + ": " + what);
    }

    double number(const std::string& cell) const {
        try {
            return parse_double(cell);
        } catch (const std::invalid_argument&) {
            fail("not a number: '" + cell + "'");
        }
    }

    std::size_t count(const std::string& cell) const {
        const double v = number(cell);
        if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
            fail("expected a non-negative integer: '" + cell + "'");
        }
        return static_cast<std::size_t>(v);
    }

    std::size_t line() const { return line_; }

private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::size_t line_ = 0;
};

std::vector<double> thresholds_from_header(const Reader& r, const std::vector<std::string>& names) {
    std::vector<double> out;
    for (const std::string& n : names) {
        if (n.rfind(kChoicePrefix, 0) != 0) r.fail("unexpected column '" + n + "'");
        out.push_back(r.number(n.substr(kChoicePrefix.size())));
    }
    return out;
}

}  // namespace

std::string series_header(const TimeSeries& series) {
    std::vector<std::string> cols{"step"};
    for (auto& n : metric_names(series.thresholds)) cols.push_back(std::move(n));
    return join(cols);
}

std::string aggregate_header(const AggregateSeries& agg) {
    std::vector<std::string> cols{"step"};
    for (const auto& n : metric_names(agg.thresholds)) {
        cols.push_back(n + "_mean");
        cols.push_back(n + "_sd");
    }
    cols.emplace_back("survival");
    cols.emplace_back("runs");
    return join(cols);
}

void write_csv(const TimeSeries& series, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << series_header(series) << '\n';
    for (const StepRecord& r : series.rows) {
        out << r.step << ',' << format_double(r.resource) << ',' << r.alive << ',' << format_double(r.mean_energy)
            << ',' << r.gatherers << ',' << r.deaths;
        for (std::size_t c : r.choice_counts) out << ',' << c;
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
    Reader r(path);
    std::vector<std::string> cells;
    if (!r.next(cells)) r.fail("missing header");
    if (cells.size() < kFixedSeriesColumns) r.fail("header has too few columns");
    const std::vector<std::string> fixed{"step", "resource", "alive", "mean_energy", "gatherers", "deaths"};
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (cells[i] != fixed[i]) r.fail("expected column '" + fixed[i] + "', found '" + cells[i] + "'");
    }
    TimeSeries ts;
    ts.thresholds = thresholds_from_header(
        r, std::vector<std::string>(cells.begin() + kFixedSeriesColumns, cells.end()));
    const std::size_t width = cells.size();

    while (r.next(cells)) {
        if (cells.size() != width) {
            r.fail("expected " + std::to_string(width) + " fields, found " + std::to_string(cells.size()));
        }
        StepRecord row;
        row.step = r.count(cells[0]);
        row.resource = r.number(cells[1]);
        row.alive = r.count(cells[2]);
        row.mean_energy = r.number(cells[3]);
        row.gatherers = r.count(cells[4]);
        row.deaths = r.count(cells[5]);
        for (std::size_t i = kFixedSeriesColumns; i < width; ++i) row.choice_counts.push_back(r.count(cells[i]));
        ts.rows.push_back(std::move(row));
    }
    return ts;
}

void write_csv(const AggregateSeries& agg, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << aggregate_header(agg) << '\n';
    for (std::size_t t = 0; t < agg.size(); ++t) {
        out << (t + 1);
        for (std::size_t j = 0; j < agg.mean[t].size(); ++j) {
            out << ',' << format_double(agg.mean[t][j]) << ',' << format_double(agg.sd[t][j]);
        }
        out << ',' << format_double(agg.survival[t]) << ',' << agg.runs << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

AggregateSeries read_aggregate_csv(const std::filesystem::path& path) {
    Reader r(path);
    std::vector<std::string> cells;
    if (!r.next(cells)) r.fail("missing header");
    if (cells.size() < 4 || cells.front() != "step" || cells[cells.size() - 2] != "survival" ||
        cells.back() != "runs" || (cells.size() - 3) % 2 != 0) {
        r.fail("not an aggregate header");
    }
    std::vector<std::string> metrics;
    for (std::size_t i = 1; i + 2 < cells.size(); i += 2) {
        const std::string& m = cells[i];
        if (m.size() < 5 || m.substr(m.size() - 5) != "_mean" || cells[i + 1] != m.substr(0, m.size() - 5) + "_sd") {
            r.fail("malformed metric columns near '" + m + "'");
        }
        metrics.push_back(m.substr(0, m.size() - 5));
    }
    const std::vector<std::string> fixed{"resource", "alive", "mean_energy", "gatherers", "deaths"};
    if (metrics.size() < fixed.size() || !std::equal(fixed.begin(), fixed.end(), metrics.begin())) {
        r.fail("aggregate header lacks the fixed metric columns");
    }

    AggregateSeries agg;
    agg.thresholds =
        thresholds_from_header(r, std::vector<std::string>(metrics.begin() + static_cast<std::ptrdiff_t>(fixed.size()),
                                                            metrics.end()));
    const std::size_t width = cells.size();
    while (r.next(cells)) {
        if (cells.size() != width) {
            r.fail("expected " + std::to_string(width) + " fields, found " + std::to_string(cells.size()));
        }
        if (r.count(cells[0]) != agg.size() + 1) r.fail("steps must be consecutive from 1");
        std::vector<double> mean, sd;
        for (std::size_t i = 1; i + 2 < width; i += 2) {
            mean.push_back(r.number(cells[i]));
            sd.push_back(r.number(cells[i + 1]));
        }
        agg.mean.push_back(std::move(mean));
        agg.sd.push_back(std::move(sd));
        agg.survival.push_back(r.number(cells[width - 2]));
        agg.runs = r.count(cells[width - 1]);
    }
    return agg;
}

}  // namespace forage
