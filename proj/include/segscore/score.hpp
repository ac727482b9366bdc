#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace segscore {

/// Why a metric has no value.
enum class Reason {
    EmptyBoth,            // 0/0 overlap with the undefined empty policy
    NoPositivesInGt,      // TP + FN == 0
    NoNegativesInGt,      // TN + FP == 0
    DegenerateMarginals,  // kappa denominator N - fc == 0
    EmptyGt,              // no ground-truth points for a distance metric
    EmptyPred,            // no predicted points for a distance metric
    NoEligibleClasses,    // nothing left to average
    PropagatedUndefined,  // an averaged input was undefined under PROPAGATE
    NotComputed,          // metric switched off by configuration
};

std::string_view reason_name(Reason r) noexcept;
std::optional<Reason> parse_reason(std::string_view name) noexcept;

/// A metric value or an explicit UNDEFINED marker with its reason.
class Score {
public:
    static Score of(double v) noexcept { return Score(v); }
    static Score undefined(Reason r) noexcept { return Score(r); }

    bool defined() const noexcept { return !reason_.has_value(); }
    explicit operator bool() const noexcept { return defined(); }

    /// Throws std::logic_error if undefined.
    double value() const;
    double value_or(double fallback) const noexcept { return defined() ? value_ : fallback; }
    Reason reason() const;

    friend bool operator==(const Score&, const Score&) = default;

private:
    explicit Score(double v) noexcept : value_(v) {}
    explicit Score(Reason r) noexcept : reason_(r) {}

    double value_ = 0.0;
    std::optional<Reason> reason_;
};

std::string to_string(const Score& s);

}  // namespace segscore
