#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace segscore {

using ClassId = std::uint16_t;

/// Error raised for malformed inputs. `code` is a stable machine-readable tag
/// (e.g. "SHAPE_MISMATCH"); `what()` carries the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

using Shape = std::vector<std::size_t>;

std::size_t element_count(const Shape& shape);
std::string shape_string(const Shape& shape);

/// Dense row-major raster of class IDs, 2D (rows, cols) or 3D (slices, rows, cols).
///
/// Immutable after construction. The last axis varies fastest, so for a 2D
/// mask the element at (r, c) lives at index r * cols + c.
class LabelMask {
public:
    LabelMask(Shape shape, std::vector<ClassId> labels, std::vector<double> spacing = {});

    /// Mask of the given shape filled with a single label.
    static LabelMask filled(Shape shape, ClassId label, std::vector<double> spacing = {});

    const Shape& shape() const noexcept { return shape_; }
    const std::vector<ClassId>& labels() const noexcept { return labels_; }
    const std::vector<double>& spacing() const noexcept { return spacing_; }
    std::size_t ndim() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return labels_.size(); }

    ClassId operator[](std::size_t i) const { return labels_[i]; }
    ClassId max_label() const noexcept;

    /// Same labels and shape with a different spacing.
    LabelMask with_spacing(std::vector<double> spacing) const;

    friend bool operator==(const LabelMask&, const LabelMask&) = default;

private:
    Shape shape_;
    std::vector<ClassId> labels_;
    std::vector<double> spacing_;
};

/// Soft prediction map: per-element foreground probability in [0, 1].
class ProbabilityGrid {
public:
    ProbabilityGrid(Shape shape, std::vector<float> values, std::vector<double> spacing = {});

    const Shape& shape() const noexcept { return shape_; }
    const std::vector<float>& values() const noexcept { return values_; }
    const std::vector<double>& spacing() const noexcept { return spacing_; }
    std::size_t size() const noexcept { return values_.size(); }

    friend bool operator==(const ProbabilityGrid&, const ProbabilityGrid&) = default;

private:
    Shape shape_;
    std::vector<float> values_;
    std::vector<double> spacing_;
};

/// True iff both masks have the same axis count and axis lengths. Spacing is
/// not compared; see `spacing_equal`.
bool shape_compatible(const LabelMask& a, const LabelMask& b);
bool spacing_equal(const LabelMask& a, const LabelMask& b);

struct ClassEntry {
    ClassId id = 0;
    std::string name;
    bool is_background = false;

    friend bool operator==(const ClassEntry&, const ClassEntry&) = default;
};

/// Named classes of a dataset, kept sorted by id.
class ClassCatalog {
public:
    ClassCatalog() = default;
    explicit ClassCatalog(std::vector<ClassEntry> entries);

    /// Catalog covering the given ids; class 0 is marked background.
    static ClassCatalog from_ids(const std::vector<ClassId>& ids);

    const std::vector<ClassEntry>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    bool contains(ClassId id) const;
    const ClassEntry* find(ClassId id) const;
    std::optional<ClassId> background() const;
    std::string name_of(ClassId id) const;

    std::vector<ClassId> ids() const;
    std::vector<ClassId> foreground_ids() const;

    friend bool operator==(const ClassCatalog&, const ClassCatalog&) = default;

private:
    std::vector<ClassEntry> entries_;
};

/// Sorted set of labels occurring in either mask.
std::vector<ClassId> labels_present(const LabelMask& a, const LabelMask& b);

}  // namespace segscore
