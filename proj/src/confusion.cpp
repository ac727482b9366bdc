#include "segscore/confusion.hpp"

#include <algorithm>

namespace segscore {

bool ConfusionTable::absent_in_gt(ClassId c) const {
    auto it = per_class.find(c);
    return it == per_class.end() || (it->second.tp + it->second.fn) == 0;
}

void accumulate_range(const ClassId* gt, const ClassId* pred, std::size_t begin, std::size_t end,
                      const std::vector<int>& slot_of, std::vector<ConfusionCounts>& out) {
    std::vector<ConfusionCounts> local(out.size());
    for (std::size_t i = begin; i < end; ++i) {
        const ClassId g = gt[i];
        const ClassId p = pred[i];
        const int sg = slot_of[g];
        if (g == p) {
            if (sg >= 0) ++local[sg].tp;
            continue;
        }
        if (sg >= 0) ++local[sg].fn;
        if (const int sp = slot_of[p]; sp >= 0) ++local[sp].fp;
    }
    // Everything not touched by a class is a true negative for it.
    const std::uint64_t n = end - begin;
    for (std::size_t s = 0; s < out.size(); ++s) {
        local[s].tn = n - local[s].tp - local[s].fp - local[s].fn;
        out[s] += local[s];
    }
}

ConfusionTable confuse(const LabelMask& gt, const LabelMask& pred, const std::vector<ClassId>& classes) {
    if (!shape_compatible(gt, pred)) {
        throw Error("SHAPE_MISMATCH",
                    "shape mismatch: gt " + shape_string(gt.shape()) + " vs pred " + shape_string(pred.shape()));
    }
    if (classes.empty()) throw Error("EMPTY_CLASS_LIST", "class list must not be empty");

    std::vector<int> slot_of(65536, -1);
    for (std::size_t s = 0; s < classes.size(); ++s) {
        if (slot_of[classes[s]] >= 0) {
            throw Error("DUPLICATE_CLASS", "class " + std::to_string(classes[s]) + " listed twice");
        }
        slot_of[classes[s]] = static_cast<int>(s);
    }

    std::vector<ConfusionCounts> counts(classes.size());
    accumulate_range(gt.labels().data(), pred.labels().data(), 0, gt.size(), slot_of, counts);

    ConfusionTable table;
    table.total = gt.size();
    for (std::size_t s = 0; s < classes.size(); ++s) table.per_class.emplace(classes[s], counts[s]);
    return table;
}

ConfusionCounts confuse_binary(const LabelMask& gt, const LabelMask& pred, ClassId positive_class) {
    return confuse(gt, pred, {positive_class}).per_class.at(positive_class);
}

}  // namespace segscore
