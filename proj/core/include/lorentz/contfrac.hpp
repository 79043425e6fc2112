#pragma once

#include <cstdint>
#include <vector>

#include "lorentz/billiard.hpp"

namespace lorentz {

/**
 * Continued-fraction data of a slope alpha = [0; a_0, a_1, ...] in (0, 1).
 *
 * Index n runs over convergents and errors:
 *   p_0 = 1, p_1 = 0, q_0 = 0, q_1 = 1,
 *   p_{n+1} = a_{n-1} p_n + p_{n-1},  q_{n+1} = a_{n-1} q_n + q_{n-1},
 *   d_n = (-1)^{n-1} (q_n alpha - p_n) > 0, d_0 = 1, d_1 = alpha,
 * so digits[n-1] is the multiplier taking (n-1, n) to n+1 and
 * d_{n+1} = d_{n-1} - a_{n-1} d_n.
 */
struct CFData {
    long double alpha = 0.0L;
    std::vector<std::int64_t> digits;
    std::vector<std::int64_t> p;
    std::vector<std::int64_t> q;
    std::vector<long double> d;

    /// Index of the last computed error (d.size() - 1).
    std::size_t last() const { return d.size() - 1; }
};

/// Digits above this are beyond double resolution and flag a rational slope.
inline constexpr long double kRationalDigit = 1e15L;

/**
 * Expands alpha until the first d_n <= stop_threshold.
 *
 * The errors follow the three-term recursion in 80-bit arithmetic, each digit
 * taken as floor(d_{n-1} / d_n) and corrected by +-1 so that
 * 0 <= d_{n+1} < d_n holds exactly in the working precision.
 *
 * Throws RationalSlope when an error vanishes or the next digit would exceed
 * kRationalDigit; InvalidArgument when alpha is outside (0, 1).
 */
CFData expand(long double alpha, long double stop_threshold);

/// The quadruple (A, B, Q, N mod 2) plus k, eps and the raw errors it came from.
struct PartitionParams {
    double A = 0.0;
    double B = 0.0;
    double Q = 0.0;
    int parity = 0;
    std::int64_t k = 0;
    double eps = 0.0;
    int N = 0;
    long double d_prev = 0.0L; ///< d_{N-1}
    long double d_N = 0.0L;
    std::int64_t q_N = 0;
};

/**
 * eps = 2 r sqrt(1 + alpha^2), N = min{n : d_n <= eps},
 * k = -floor((eps - d_{N-1}) / d_N),
 * A = 1 - d_N/eps, B = 1 - (d_{N-1} - k d_N)/eps, Q = eps q_N.
 */
PartitionParams partition_params(long double alpha, ObstacleRadius r);

} // namespace lorentz
