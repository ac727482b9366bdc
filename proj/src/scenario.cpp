#include "segscore/scenario.hpp"

#include <random>

namespace segscore {

std::string_view scenario_name(ScenarioKind k) noexcept {
    switch (k) {
        case ScenarioKind::NoSegmentation: return "no_segmentation";
        case ScenarioKind::FullSegmentation: return "full_segmentation";
        case ScenarioKind::RandomSegmentation: return "random_segmentation";
    }
    return "unknown";
}

LabelMask make_scenario(const LabelMask& gt, const Scenario& scenario) {
    switch (scenario.kind) {
        case ScenarioKind::NoSegmentation:
            return LabelMask::filled(gt.shape(), scenario.background, gt.spacing());
        case ScenarioKind::FullSegmentation:
            return LabelMask::filled(gt.shape(), scenario.foreground, gt.spacing());
        case ScenarioKind::RandomSegmentation: break;
    }
    if (!scenario.seed) throw Error("MISSING_SEED", "random scenario requires an explicit seed");
    if (!(scenario.probability >= 0.0 && scenario.probability <= 1.0)) {
        throw Error("INVALID_PROBABILITY", "scenario probability must lie in [0,1]");
    }
    std::mt19937_64 rng(*scenario.seed);
    std::vector<ClassId> labels(gt.size());
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    for (auto& v : labels) {
        const double u = static_cast<double>(rng() >> 11) * kScale;
        v = u < scenario.probability ? scenario.foreground : scenario.background;
    }
    return LabelMask(gt.shape(), std::move(labels), gt.spacing());
}

}  // namespace segscore
