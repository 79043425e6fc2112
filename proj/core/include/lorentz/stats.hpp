#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "lorentz/errors.hpp"

namespace lorentz {

/// Half the L1 distance between two mass vectors, each normalized to 1.
inline double total_variation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw BinMismatch("total_variation: size mismatch");
    const double ma = std::accumulate(a.begin(), a.end(), 0.0);
    const double mb = std::accumulate(b.begin(), b.end(), 0.0);
    if (!(ma > 0.0) || !(mb > 0.0)) throw EmptyEnsemble("total_variation: empty histogram");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] / ma - b[i] / mb);
    return 0.5 * sum;
}

/// Median of a copy of the data.
inline double median(std::vector<double> v) {
    if (v.empty()) throw EmptyEnsemble("median of empty sample");
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("loglog_slope needs >= 2 matched points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

} // namespace lorentz
