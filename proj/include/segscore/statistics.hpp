#pragma once

#include <cstddef>
#include <vector>

namespace segscore {

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;

    friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

struct Histogram {
    std::vector<HistogramBin> bins;
    std::size_t below = 0;  // values < lo
    std::size_t above = 0;  // values > hi

    std::size_t in_range() const noexcept;
};

/// Equal-width bins over [lo, hi]. Bins are closed on the right, (a, b], and
/// the first is also closed on the left so that `lo` itself is counted:
/// [lo, e1], (e1, e2], ..., (e_{n-1}, hi].
Histogram histogram(const std::vector<double>& values, std::size_t bins, double lo, double hi);

/// Quantile with linear interpolation between order statistics
/// (position q * (n - 1) in the sorted sample). `sorted` must be ascending
/// and non-empty.
double quantile_sorted(const std::vector<double>& sorted, double q);

/// Summary of a sample: box-plot quartiles and moments. `std` is the
/// population standard deviation.
struct Distribution {
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Throws std::invalid_argument on an empty sample.
Distribution describe(const std::vector<double>& values);

}  // namespace segscore
