#include "segscore/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

namespace segscore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Axis lengths padded to 3 (leading axes of length 1 for 2D grids).
std::array<std::size_t, 3> dims3(const Shape& shape) {
    std::array<std::size_t, 3> d{1, 1, 1};
    const std::size_t off = 3 - shape.size();
    for (std::size_t i = 0; i < shape.size(); ++i) d[off + i] = shape[i];
    return d;
}

Coord coord_of(std::size_t flat, const Shape& shape) {
    Coord c{0, 0, 0};
    for (std::size_t k = shape.size(); k-- > 0;) {
        c[k] = static_cast<std::uint32_t>(flat % shape[k]);
        flat /= shape[k];
    }
    return c;
}

// Lower envelope of parabolas (x - pos(q))^2 + f[q] over the finite samples
// of one line, evaluated at every sample. `f` is read and overwritten.
// Scratch buffers are owned by the caller and reused across lines.
void envelope_1d(std::vector<double>& f, double step, std::vector<std::size_t>& sites, std::vector<double>& bounds,
                 std::vector<double>& out) {
    const std::size_t n = f.size();
    sites.clear();
    bounds.clear();
    auto pos = [step](std::size_t q) { return step * static_cast<double>(q); };

    for (std::size_t q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        const double fq = f[q] + pos(q) * pos(q);
        while (!sites.empty()) {
            const std::size_t p = sites.back();
            const double fp = f[p] + pos(p) * pos(p);
            const double cross = (fq - fp) / (2.0 * (pos(q) - pos(p)));
            if (cross <= bounds.back()) {
                sites.pop_back();
                bounds.pop_back();
            } else {
                bounds.push_back(cross);
                break;
            }
        }
        if (sites.empty()) bounds.assign(1, -kInf);
        sites.push_back(q);
    }
    // bounds[k] is where sites[k] starts to dominate.
    if (sites.empty()) return;

    out.resize(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k + 1 < sites.size() && bounds[k + 1] < pos(i)) ++k;
        const double dx = step * (static_cast<double>(i) - static_cast<double>(sites[k]));
        out[i] = dx * dx + f[sites[k]];
    }
    std::copy(out.begin(), out.end(), f.begin());
}

}  // namespace

std::size_t PointSet::flat_index(const Coord& p) const {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < shape.size(); ++k) flat = flat * shape[k] + p[k];
    return flat;
}

PointSet extract_points(const LabelMask& mask, ClassId class_id, bool surface_only) {
    PointSet set{mask.shape(), mask.spacing(), {}};
    const auto d = dims3(mask.shape());
    const auto& labels = mask.labels();
    const std::size_t plane = d[1] * d[2];
    const bool volumetric = mask.ndim() == 3;

    auto outside = [&](std::size_t z, std::size_t y, std::size_t x) {
        return labels[z * plane + y * d[2] + x] != class_id;
    };

    for (std::size_t z = 0; z < d[0]; ++z) {
        for (std::size_t y = 0; y < d[1]; ++y) {
            for (std::size_t x = 0; x < d[2]; ++x) {
                if (labels[z * plane + y * d[2] + x] != class_id) continue;
                if (surface_only) {
                    bool boundary = y == 0 || y + 1 == d[1] || x == 0 || x + 1 == d[2] ||
                                    (volumetric && (z == 0 || z + 1 == d[0]));
                    boundary = boundary || outside(z, y - 1, x) || outside(z, y + 1, x) || outside(z, y, x - 1) ||
                               outside(z, y, x + 1) ||
                               (volumetric && (outside(z - 1, y, x) || outside(z + 1, y, x)));
                    if (!boundary) continue;
                }
                set.points.push_back(coord_of(z * plane + y * d[2] + x, mask.shape()));
            }
        }
    }
    return set;
}

DistanceField distance_field(const PointSet& reference) {
    if (reference.empty()) throw Error("EMPTY_REFERENCE", "distance transform needs a non-empty reference set");

    const Shape& shape = reference.shape;
    const std::size_t total = element_count(shape);
    std::vector<double> sq(total, kInf);
    for (const auto& p : reference.points) sq[reference.flat_index(p)] = 0.0;

    std::vector<double> line;
    std::vector<double> scratch;
    std::vector<double> bounds;
    std::vector<std::size_t> sites;

    for (std::size_t axis = 0; axis < shape.size(); ++axis) {
        const std::size_t len = shape[axis];
        std::size_t stride = 1;
        for (std::size_t k = axis + 1; k < shape.size(); ++k) stride *= shape[k];
        const std::size_t outer = total / (len * stride);
        line.resize(len);

        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t inner = 0; inner < stride; ++inner) {
                const std::size_t base = o * len * stride + inner;
                for (std::size_t i = 0; i < len; ++i) line[i] = sq[base + i * stride];
                envelope_1d(line, reference.spacing[axis], sites, bounds, scratch);
                for (std::size_t i = 0; i < len; ++i) sq[base + i * stride] = line[i];
            }
        }
    }

    DistanceField field{shape, std::move(sq)};
    for (double& v : field.values) v = std::sqrt(v);
    return field;
}

DistanceField edt(const LabelMask& mask, ClassId class_id) {
    return distance_field(extract_points(mask, class_id, false));
}

double directed_ahd(const PointSet& a, const DistanceField& b_field) {
    if (a.empty()) throw Error("EMPTY_SET", "directed distance of an empty point set");
    if (a.shape != b_field.shape) throw Error("SHAPE_MISMATCH", "point set and distance field shapes differ");
    double sum = 0.0;
    for (const auto& p : a.points) sum += b_field.at(a.flat_index(p));
    return sum / static_cast<double>(a.size());
}

double directed_max(const PointSet& a, const DistanceField& b_field) {
    if (a.empty()) throw Error("EMPTY_SET", "directed distance of an empty point set");
    if (a.shape != b_field.shape) throw Error("SHAPE_MISMATCH", "point set and distance field shapes differ");
    double worst = 0.0;
    for (const auto& p : a.points) worst = std::max(worst, b_field.at(a.flat_index(p)));
    return worst;
}

namespace {

struct SetPair {
    PointSet gt;
    PointSet pred;
};

std::variant<SetPair, Reason> point_sets(const LabelMask& gt, const LabelMask& pred, ClassId class_id,
                                         bool surface_only) {
    if (!shape_compatible(gt, pred)) {
        throw Error("SHAPE_MISMATCH",
                    "shape mismatch: gt " + shape_string(gt.shape()) + " vs pred " + shape_string(pred.shape()));
    }
    SetPair sets{extract_points(gt, class_id, surface_only), extract_points(pred, class_id, surface_only)};
    sets.pred.spacing = gt.spacing();
    if (sets.gt.empty()) return Reason::EmptyGt;
    if (sets.pred.empty()) return Reason::EmptyPred;
    return sets;
}

}  // namespace

Score ahd(const LabelMask& gt, const LabelMask& pred, ClassId class_id, bool surface_only) {
    auto sets = point_sets(gt, pred, class_id, surface_only);
    if (auto* r = std::get_if<Reason>(&sets)) return Score::undefined(*r);
    const auto& [a, b] = std::get<SetPair>(sets);
    const double forward = directed_ahd(a, distance_field(b));
    const double backward = directed_ahd(b, distance_field(a));
    return Score::of(std::max(forward, backward));
}

Score hausdorff_max(const LabelMask& gt, const LabelMask& pred, ClassId class_id, bool surface_only) {
    auto sets = point_sets(gt, pred, class_id, surface_only);
    if (auto* r = std::get_if<Reason>(&sets)) return Score::undefined(*r);
    const auto& [a, b] = std::get<SetPair>(sets);
    return Score::of(std::max(directed_max(a, distance_field(b)), directed_max(b, distance_field(a))));
}

}  // namespace segscore
