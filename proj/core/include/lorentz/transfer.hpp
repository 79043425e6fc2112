#pragma once

#include <cstdint>
#include <vector>

#include "lorentz/billiard.hpp"
#include "lorentz/contfrac.hpp"
#include "lorentz/parallel.hpp"

namespace lorentz {

/// Flight lengths are reported as s = kFlightScale * r * tau. With this scale
/// the three-branch asymptotic map below is exact to O(r^2) and the mean of s
/// over the limiting law is 1 (the mean free path is 1/(2r)).
inline constexpr double kFlightScale = 2.0;

struct TransferResult {
    double s = 0.0;
    double h = 0.0;
};

/// Reduction of an arbitrary direction to the sector theta~ in [-pi/4, pi/4)
/// by a lattice rotation of m * pi/2, followed by the mirror y -> -y when
/// theta~ < 0. Rotations preserve h, the mirror flips it.
struct ReducedDirection {
    Vec2 omega_tilde;    ///< R[-m pi/2] omega
    double theta_tilde;  ///< angle of omega_tilde
    int sign_flip;       ///< sign(tan theta~)
    int quadrant_m;      ///< floor((2/pi)(theta + pi/4)), theta = atan2 in (-pi, pi]
    Vec2 canonical;      ///< omega_tilde mirrored into 0 < angle < pi/4

    /// Slope of the canonical direction, in (0, 1).
    long double alpha() const {
        return static_cast<long double>(canonical.y) / static_cast<long double>(canonical.x);
    }
};

/// Throws DegenerateDirection for slopes 0 and +-1 (theta~ = 0 or |theta~| = pi/4).
ReducedDirection reduce_direction(Vec2 omega);

/// Exact T_r: leave obstacle (0,0) with impact parameter h' in direction omega
/// and report (2 r tau, h) at the next obstacle. Throws NoCollisionWithinHorizon.
TransferResult transfer_exact(double h_prime, Vec2 omega, ObstacleRadius r, const FlightOptions &opts = {});

/// Which of the three h'-intervals of the asymptotic map contains h':
/// 1 for (-1)^N h' in (1-2A, 1], 2 for [-1, -1+2B), 3 for [-1+2B, 1-2A].
int asymptotic_branch(double A, double B, int parity, double h_prime);

/// The asymptotic map T_{A,B,Q,N}(h') with Q' = (1 - Q(1-B)) / (1-A).
TransferResult transfer_asymptotic(double A, double B, double Q, int parity, double h_prime);

inline TransferResult transfer_asymptotic(const PartitionParams &p, double h_prime) {
    return transfer_asymptotic(p.A, p.B, p.Q, p.parity, h_prime);
}

/// Asymptotic transfer for an arbitrary direction: reduce, expand the slope,
/// apply T_{A,B,Q,N} and undo the mirror. Throws DegenerateDirection, RationalSlope.
TransferResult transfer_asymptotic(double h_prime, Vec2 omega, ObstacleRadius r);

struct TransferComparison {
    double theta = 0.0;
    TransferResult exact;
    TransferResult asymptotic;
};

struct TransferSweep {
    double h_prime = 0.0;
    double r = 0.0;
    std::uint64_t seed = 0;
    std::vector<TransferComparison> samples;
    std::uint64_t skipped = 0; ///< directions with a rational slope or no collision

    /// Median of |s_exact - s_asym|. Throws EmptyEnsemble when nothing was kept.
    double median_s_error() const;
    /// Fraction of samples with |h_exact - h_asym| <= tol.
    double h_match_fraction(double tol) const;
};

/// Exact vs asymptotic transfer for n directions with angle uniform in [theta_lo, theta_hi).
TransferSweep compare_transfer(double h_prime, ObstacleRadius r, std::uint64_t n, std::uint64_t seed,
                               double theta_lo, double theta_hi, const ParallelOptions &par = {});

} // namespace lorentz
