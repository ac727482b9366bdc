#pragma once

#include "segscore/mask.hpp"
#include "segscore/score.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace segscore {

/// Grid coordinate; unused trailing axes are zero.
using Coord = std::array<std::uint32_t, 3>;

/// Foreground coordinates of one class, sorted lexicographically (which is
/// row-major order), together with the grid they came from.
struct PointSet {
    Shape shape;
    std::vector<double> spacing;
    std::vector<Coord> points;

    bool empty() const noexcept { return points.empty(); }
    std::size_t size() const noexcept { return points.size(); }
    std::size_t flat_index(const Coord& p) const;

    friend bool operator==(const PointSet&, const PointSet&) = default;
};

/// All elements with label == class_id, or with `surface_only` just those with
/// a face-adjacent neighbour outside the class (the grid border counts as
/// outside).
PointSet extract_points(const LabelMask& mask, ClassId class_id, bool surface_only = false);

/// Spacing-weighted Euclidean distance from each element to the nearest
/// reference point.
struct DistanceField {
    Shape shape;
    std::vector<double> values;

    double at(std::size_t flat) const { return values[flat]; }
};

/// Exact Euclidean distance transform to the points of `reference`: one
/// separable lower-envelope-of-parabolas pass per axis over squared
/// distances, with the axis spacing folded into the parabola positions.
/// Throws Error("EMPTY_REFERENCE") on an empty set.
DistanceField distance_field(const PointSet& reference);

/// `distance_field(extract_points(mask, class_id))`.
DistanceField edt(const LabelMask& mask, ClassId class_id);

/// Mean over the points of `a` of their distance in `b_field` (directed
/// average distance). Throws Error("EMPTY_SET") when `a` is empty.
double directed_ahd(const PointSet& a, const DistanceField& b_field);

/// Largest distance of any point of `a` in `b_field`.
double directed_max(const PointSet& a, const DistanceField& b_field);

/// Symmetric average Hausdorff distance: max of both directed averages. The
/// ground-truth spacing is used if the two masks disagree.
Score ahd(const LabelMask& gt, const LabelMask& pred, ClassId class_id, bool surface_only = false);

/// Classic Hausdorff distance: max over both directions of the largest
/// nearest-point distance.
Score hausdorff_max(const LabelMask& gt, const LabelMask& pred, ClassId class_id, bool surface_only = false);

}  // namespace segscore
