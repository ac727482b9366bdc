#pragma once

#include "segscore/mask.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace segscore {

/// Name and revision of the generator behind random scenarios. Bump the
/// revision whenever the mapping from seed to mask changes.
inline constexpr std::string_view kScenarioRng = "mt19937_64/top53-bernoulli/v1";

enum class ScenarioKind { NoSegmentation, FullSegmentation, RandomSegmentation };

std::string_view scenario_name(ScenarioKind k) noexcept;

struct Scenario {
    ScenarioKind kind = ScenarioKind::NoSegmentation;
    std::optional<std::uint64_t> seed;  // required for RandomSegmentation
    double probability = 0.5;           // foreground probability for RandomSegmentation
    ClassId foreground = 1;
    ClassId background = 0;
};

/// Synthetic prediction for the binary setting, shaped like `gt`:
/// all background, all foreground, or an independent Bernoulli draw per
/// element. A random element is foreground iff the top 53 bits of the next
/// mt19937_64 output, scaled to [0, 1), are below `probability`.
LabelMask make_scenario(const LabelMask& gt, const Scenario& scenario);

}  // namespace segscore
