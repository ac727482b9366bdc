#include "segscore/mask.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

namespace segscore {

namespace {

void check_shape(const Shape& shape) {
    if (shape.size() != 2 && shape.size() != 3) {
        throw Error("INVALID_SHAPE", "mask must have 2 or 3 axes, got " + std::to_string(shape.size()));
    }
    for (std::size_t d : shape) {
        if (d == 0) {
            throw Error("INVALID_SHAPE", "axis length must be >= 1 in shape " + shape_string(shape));
        }
    }
}

std::vector<double> checked_spacing(const Shape& shape, std::vector<double> spacing) {
    if (spacing.empty()) {
        return std::vector<double>(shape.size(), 1.0);
    }
    if (spacing.size() != shape.size()) {
        throw Error("INVALID_SPACING", "spacing needs one entry per axis");
    }
    for (double s : spacing) {
        if (!(s > 0.0) || s == std::numeric_limits<double>::infinity()) {
            throw Error("INVALID_SPACING", "spacing entries must be finite and > 0");
        }
    }
    return spacing;
}

}  // namespace

std::size_t element_count(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

std::string shape_string(const Shape& shape) {
    std::string out = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(shape[i]);
    }
    return out + ")";
}

LabelMask::LabelMask(Shape shape, std::vector<ClassId> labels, std::vector<double> spacing)
    : shape_(std::move(shape)), labels_(std::move(labels)) {
    check_shape(shape_);
    if (labels_.size() != element_count(shape_)) {
        throw Error("PAYLOAD_LENGTH", "payload length mismatch: shape " + shape_string(shape_) + " needs " +
                                          std::to_string(element_count(shape_)) + " labels, got " +
                                          std::to_string(labels_.size()));
    }
    spacing_ = checked_spacing(shape_, std::move(spacing));
}

LabelMask LabelMask::filled(Shape shape, ClassId label, std::vector<double> spacing) {
    const std::size_t n = element_count(shape);
    return LabelMask(std::move(shape), std::vector<ClassId>(n, label), std::move(spacing));
}

ClassId LabelMask::max_label() const noexcept {
    return labels_.empty() ? ClassId{0} : *std::max_element(labels_.begin(), labels_.end());
}

LabelMask LabelMask::with_spacing(std::vector<double> spacing) const {
    return LabelMask(shape_, labels_, std::move(spacing));
}

ProbabilityGrid::ProbabilityGrid(Shape shape, std::vector<float> values, std::vector<double> spacing)
    : shape_(std::move(shape)), values_(std::move(values)) {
    check_shape(shape_);
    if (values_.size() != element_count(shape_)) {
        throw Error("PAYLOAD_LENGTH", "payload length mismatch: shape " + shape_string(shape_) + " needs " +
                                          std::to_string(element_count(shape_)) + " values, got " +
                                          std::to_string(values_.size()));
    }
    for (float v : values_) {
        if (!(v >= 0.0f && v <= 1.0f)) {
            throw Error("PROBABILITY_RANGE", "probability out of range [0,1]: " + std::to_string(v));
        }
    }
    spacing_ = checked_spacing(shape_, std::move(spacing));
}

bool shape_compatible(const LabelMask& a, const LabelMask& b) { return a.shape() == b.shape(); }

bool spacing_equal(const LabelMask& a, const LabelMask& b) { return a.spacing() == b.spacing(); }

ClassCatalog::ClassCatalog(std::vector<ClassEntry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const ClassEntry& x, const ClassEntry& y) { return x.id < y.id; });
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (entries_[i].id == entries_[i - 1].id) {
            throw Error("INVALID_CATALOG", "duplicate class id " + std::to_string(entries_[i].id));
        }
    }
    const auto backgrounds =
        std::count_if(entries_.begin(), entries_.end(), [](const ClassEntry& e) { return e.is_background; });
    if (backgrounds > 1) {
        throw Error("INVALID_CATALOG", "at most one class may be marked background");
    }
}

ClassCatalog ClassCatalog::from_ids(const std::vector<ClassId>& ids) {
    std::vector<ClassEntry> entries;
    for (ClassId id : ids) {
        if (std::any_of(entries.begin(), entries.end(), [&](const ClassEntry& e) { return e.id == id; })) continue;
        entries.push_back({id, id == 0 ? std::string("background") : "class_" + std::to_string(id), id == 0});
    }
    return ClassCatalog(std::move(entries));
}

const ClassEntry* ClassCatalog::find(ClassId id) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                               [](const ClassEntry& e, ClassId v) { return e.id < v; });
    return (it != entries_.end() && it->id == id) ? &*it : nullptr;
}

bool ClassCatalog::contains(ClassId id) const { return find(id) != nullptr; }

std::optional<ClassId> ClassCatalog::background() const {
    for (const auto& e : entries_) {
        if (e.is_background) return e.id;
    }
    return std::nullopt;
}

std::string ClassCatalog::name_of(ClassId id) const {
    const ClassEntry* e = find(id);
    return e ? e->name : "class_" + std::to_string(id);
}

std::vector<ClassId> ClassCatalog::ids() const {
    std::vector<ClassId> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.id);
    return out;
}

std::vector<ClassId> ClassCatalog::foreground_ids() const {
    std::vector<ClassId> out;
    for (const auto& e : entries_) {
        if (!e.is_background) out.push_back(e.id);
    }
    return out;
}

std::vector<ClassId> labels_present(const LabelMask& a, const LabelMask& b) {
    std::vector<bool> seen(65536, false);
    for (ClassId v : a.labels()) seen[v] = true;
    for (ClassId v : b.labels()) seen[v] = true;
    std::vector<ClassId> out;
    for (std::size_t v = 0; v < seen.size(); ++v) {
        if (seen[v]) out.push_back(static_cast<ClassId>(v));
    }
    return out;
}

}  // namespace segscore
