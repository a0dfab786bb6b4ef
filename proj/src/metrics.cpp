#include "forage/metrics.hpp"

namespace forage {

bool survived(const TimeSeries& ts) { return !ts.rows.empty() && ts.rows.back().alive > 0; }

std::size_t initial_agents(const TimeSeries& ts) {
    return ts.rows.empty() ? 0 : ts.rows.front().alive + ts.rows.front().deaths;
}

std::optional<std::size_t> depletion_step(const TimeSeries& ts) {
    for (const StepRecord& r : ts.rows) {
        if (r.resource == 0.0) return r.step;
    }
    return std::nullopt;
}

std::optional<std::size_t> extinction_step(const TimeSeries& ts) {
    for (const StepRecord& r : ts.rows) {
        if (r.alive == 0) return r.step;
    }
    return std::nullopt;
}

std::optional<double> choice_share(const TimeSeries& ts, std::size_t choice, std::size_t first, std::size_t last) {
    std::size_t picked = 0;
    std::size_t total = 0;
    for (const StepRecord& r : ts.rows) {
        if (r.step < first || r.step > last) continue;
        for (std::size_t c = 0; c < r.choice_counts.size(); ++c) {
            total += r.choice_counts[c];
            if (c == choice) picked += r.choice_counts[c];
        }
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(picked) / static_cast<double>(total);
}

std::optional<std::size_t> majority_onset(const TimeSeries& ts, std::size_t choice, std::size_t window) {
    std::size_t picked = 0;
    std::size_t total = 0;
    const auto& rows = ts.rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto add = [&](const StepRecord& r, int sign) {
            for (std::size_t c = 0; c < r.choice_counts.size(); ++c) {
                const auto v = static_cast<long long>(r.choice_counts[c]) * sign;
                total = static_cast<std::size_t>(static_cast<long long>(total) + v);
                if (c == choice) picked = static_cast<std::size_t>(static_cast<long long>(picked) + v);
            }
        };
        add(rows[i], 1);
        if (i >= window) add(rows[i - window], -1);
        if (i + 1 >= window && total > 0 && 2 * picked > total) return rows[i].step;
    }
    return std::nullopt;
}

}  // namespace forage
