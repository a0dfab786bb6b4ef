#pragma once

#include <cstddef>
#include <optional>

#include "forage/series.hpp"

namespace forage {

/// At least one agent alive in the final recorded row.
bool survived(const TimeSeries& ts);

std::size_t initial_agents(const TimeSeries& ts);

/// First step whose post-step resource is exactly zero.
std::optional<std::size_t> depletion_step(const TimeSeries& ts);

/// First step after which no agent is alive.
std::optional<std::size_t> extinction_step(const TimeSeries& ts);

/// Share of decisions in steps [first, last] that picked `choice`; nullopt when no decisions were made.
std::optional<double> choice_share(const TimeSeries& ts, std::size_t choice, std::size_t first, std::size_t last);

/// First step t at which `choice` holds a strict majority of the decisions made in
/// the trailing `window` steps ending at t.
std::optional<std::size_t> majority_onset(const TimeSeries& ts, std::size_t choice, std::size_t window);

}  // namespace forage
