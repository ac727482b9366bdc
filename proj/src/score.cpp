#include "segscore/score.hpp"

#include <array>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

namespace segscore {

namespace {

constexpr std::array<std::pair<Reason, std::string_view>, 9> kReasonNames = {{
    {Reason::EmptyBoth, "EMPTY_BOTH"},
    {Reason::NoPositivesInGt, "NO_POSITIVES_IN_GT"},
    {Reason::NoNegativesInGt, "NO_NEGATIVES_IN_GT"},
    {Reason::DegenerateMarginals, "DEGENERATE_MARGINALS"},
    {Reason::EmptyGt, "EMPTY_GT"},
    {Reason::EmptyPred, "EMPTY_PRED"},
    {Reason::NoEligibleClasses, "NO_ELIGIBLE_CLASSES"},
    {Reason::PropagatedUndefined, "PROPAGATED_UNDEFINED"},
    {Reason::NotComputed, "NOT_COMPUTED"},
}};

}  // namespace

std::string_view reason_name(Reason r) noexcept {
    for (const auto& [reason, name] : kReasonNames) {
        if (reason == r) return name;
    }
    return "UNKNOWN";
}

std::optional<Reason> parse_reason(std::string_view name) noexcept {
    for (const auto& [reason, n] : kReasonNames) {
        if (n == name) return reason;
    }
    return std::nullopt;
}

double Score::value() const {
    if (reason_) throw std::logic_error(fmt::format("value() on UNDEFINED score ({})", reason_name(*reason_)));
    return value_;
}

Reason Score::reason() const {
    if (!reason_) throw std::logic_error("reason() on a defined score");
    return *reason_;
}

std::string to_string(const Score& s) {
    if (s.defined()) return fmt::format("{:.17g}", s.value());
    return fmt::format("UNDEFINED({})", reason_name(s.reason()));
}

}  // namespace segscore
