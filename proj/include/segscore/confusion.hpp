#pragma once

#include "segscore/mask.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace segscore {

/// One-vs-rest confusion cells of a single class.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + fp + tn + fn; }

    ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }

    friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) noexcept { return a += b; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Exchanges the roles of ground truth and prediction (fp <-> fn).
constexpr ConfusionCounts swap_roles(const ConfusionCounts& c) noexcept { return {c.tp, c.fn, c.tn, c.fp}; }

/// Exchanges positive and negative (tp <-> tn, fp <-> fn).
constexpr ConfusionCounts swap_polarity(const ConfusionCounts& c) noexcept { return {c.tn, c.fn, c.tp, c.fp}; }

struct ConfusionTable {
    std::map<ClassId, ConfusionCounts> per_class;
    std::uint64_t total = 0;

    /// True when the class has no positive element in the ground truth.
    bool absent_in_gt(ClassId c) const;
};

/// Per-class one-vs-rest counts for every requested class in one pass over
/// the mask pair. Classes absent from both masks get tn = total.
ConfusionTable confuse(const LabelMask& gt, const LabelMask& pred, const std::vector<ClassId>& classes);

ConfusionCounts confuse_binary(const LabelMask& gt, const LabelMask& pred, ClassId positive_class);

/// Counts over a flat index range [begin, end) of two label arrays, for
/// tiled or parallel accumulation. `slot_of` maps a label to its class slot
/// (or -1), and `out` must hold one entry per slot.
void accumulate_range(const ClassId* gt, const ClassId* pred, std::size_t begin, std::size_t end,
                      const std::vector<int>& slot_of, std::vector<ConfusionCounts>& out);

}  // namespace segscore
