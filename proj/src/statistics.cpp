#include "segscore/statistics.hpp"

#include "segscore/mask.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace segscore {

std::size_t Histogram::in_range() const noexcept {
    std::size_t n = 0;
    for (const auto& b : bins) n += b.count;
    return n;
}

Histogram histogram(const std::vector<double>& values, std::size_t bins, double lo, double hi) {
    if (bins == 0) throw Error("INVALID_HISTOGRAM", "histogram needs at least one bin");
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error("INVALID_HISTOGRAM", "histogram range must satisfy lo < hi");
    }
    Histogram h;
    h.bins.resize(bins);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        h.bins[i].lo = lo + width * static_cast<double>(i);
        h.bins[i].hi = i + 1 == bins ? hi : lo + width * static_cast<double>(i + 1);
    }
    for (double v : values) {
        if (v < lo) {
            ++h.below;
        } else if (v > hi) {
            ++h.above;
        } else {
            const double pos = std::ceil((v - lo) / width) - 1.0;
            auto idx = pos <= 0.0 ? std::size_t{0} : std::min(static_cast<std::size_t>(pos), bins - 1);
            // Guard against rounding in the division disagreeing with the edges.
            while (idx > 0 && v <= h.bins[idx].lo) --idx;
            while (idx + 1 < bins && v > h.bins[idx].hi) ++idx;
            ++h.bins[idx].count;
        }
    }
    return h;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto below = static_cast<std::size_t>(std::floor(pos));
    const std::size_t above = std::min(below + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(below);
    return sorted[below] + frac * (sorted[above] - sorted[below]);
}

Distribution describe(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("describe() of an empty sample");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    Distribution d;
    d.n = sorted.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    d.mean = sum / static_cast<double>(d.n);
    double ss = 0.0;
    for (double v : values) ss += (v - d.mean) * (v - d.mean);
    d.std = std::sqrt(ss / static_cast<double>(d.n));
    d.min = sorted.front();
    d.max = sorted.back();
    d.q1 = quantile_sorted(sorted, 0.25);
    d.median = quantile_sorted(sorted, 0.5);
    d.q3 = quantile_sorted(sorted, 0.75);
    return d;
}

}  // namespace segscore
