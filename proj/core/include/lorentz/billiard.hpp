#pragma once
/**
 * Exact periodic Lorentz billiard: a point particle moving at unit speed among
 * disks of radius r centered at the integer lattice, reflecting specularly.
 *
 * Conventions:
 *   - n_x is the unit normal at a boundary point pointing out of the obstacle
 *     (into the free domain). Outgoing states satisfy omega . n_x > 0.
 *   - The impact parameter is h = omega x n_x (sin of the ccw angle from omega
 *     to n_x). Reflection preserves it, so the same h labels the incoming and
 *     the outgoing velocity at a collision.
 *   - reflect() takes either the incoming or the outgoing velocity; the formula
 *     omega - 2 (omega . n) n is its own inverse.
 */

#include <cstdint>
#include <optional>

#include "lorentz/parallel.hpp"
#include "lorentz/rng.hpp"
#include "lorentz/vec2.hpp"

namespace lorentz {

/// Obstacle radius in lattice units, 0 < r <= 0.35.
class ObstacleRadius {
public:
    static constexpr double kMax = 0.35;

    explicit ObstacleRadius(double r);
    double value() const { return r_; }

private:
    double r_;
};

struct LatticePoint {
    std::int64_t i = 0;
    std::int64_t j = 0;

    friend constexpr bool operator==(LatticePoint, LatticePoint) = default;
    Vec2 position() const { return {static_cast<double>(i), static_cast<double>(j)}; }
};

struct PhasePoint {
    Vec2 x;
    Vec2 omega;
};

/// A point of Gamma^+_r: obstacle center, impact parameter and outgoing direction.
struct BoundaryState {
    LatticePoint center;
    double h = 0.0;
    Vec2 omega;
};

struct FlightOutcome {
    double tau = 0.0;
    Vec2 hit_point;
    LatticePoint hit_center;
    double h_next = 0.0;
    /// Outward normal of the hit obstacle at hit_point.
    Vec2 normal;
};

struct FlightOptions {
    /// Maximal number of lattice columns walked before giving up.
    std::int64_t max_cells = 10'000'000;
};

/// Distance from x to the nearest lattice point.
double lattice_distance(Vec2 x);

/// Impact parameter of direction omega at a boundary point with normal n.
inline double impact_parameter(Vec2 omega, Vec2 n) { return cross(omega, n); }

/// Specular reflection omega - 2 (omega . n) n, renormalized.
Vec2 reflect(Vec2 omega, Vec2 n);

/**
 * First obstacle hit by the ray x + t omega, t > 0.
 *
 * The walk runs along the dominant axis of omega, one lattice column per step.
 * With r <= 0.35 each column holds at most one disk within reach of the ray
 * (the nearest row), and hits in successive columns are ordered along the ray,
 * so the first column with a hit gives the first collision.
 *
 * `exclude` names an obstacle the particle is sitting on (it can never be the
 * next one hit since disks are convex).
 *
 * Throws NoCollisionWithinHorizon.
 */
FlightOutcome flight(const PhasePoint &p, ObstacleRadius r, const FlightOptions &opts = {},
                     std::optional<LatticePoint> exclude = std::nullopt);

/// Like flight() but returns nullopt when no obstacle is met within
/// `max_columns` columns along the dominant axis.
std::optional<FlightOutcome> first_hit(const PhasePoint &p, ObstacleRadius r, std::int64_t max_columns,
                                       std::optional<LatticePoint> exclude = std::nullopt);

/// Y_r: the boundary point of `b.center` with impact parameter b.h for the
/// outgoing direction b.omega, n = sqrt(1-h^2) omega + h omega_perp.
PhasePoint boundary_lift(const BoundaryState &b, ObstacleRadius r);

/// Outward normal at the lifted boundary point (exact, without going through x).
Vec2 boundary_normal(double h, Vec2 omega);

/// One step of the billiard map B_r on Gamma^+_r: lift, fly, reflect.
BoundaryState billiard_map(const BoundaryState &b, ObstacleRadius r, const FlightOptions &opts = {});

/// Time reversal on Gamma^+_r: the state retracing the incoming ray of `b`.
/// Involution; billiard_map(time_reversal(billiard_map(b))) == time_reversal(b).
BoundaryState time_reversal(const BoundaryState &b);

/// Billiard flow for time t >= 0 (free flight plus specular reflections).
PhasePoint evolve(const PhasePoint &p, ObstacleRadius r, double t, const FlightOptions &opts = {});

/// Counts flights performed by evolve(); used for collision budgets.
struct EvolveStats {
    std::uint64_t collisions = 0;
};
PhasePoint evolve(const PhasePoint &p, ObstacleRadius r, double t, const FlightOptions &opts, EvolveStats &stats);

/// A draw from gamma^+_r (density proportional to omega . n_x dx domega) on the
/// obstacle at the origin. In (h, theta) coordinates this is uniform on [-1, 1] x [0, 2 pi).
BoundaryState sample_gamma_plus(RngStream &rng);

struct InvarianceCheck {
    double tv_mapped = 0.0;  ///< TV(image histogram, exact gamma^+_r cell masses)
    double tv_initial = 0.0; ///< same for the draws themselves (sampling noise floor)
    std::uint64_t n = 0;
    std::uint64_t skipped = 0; ///< draws with no collision within the horizon
};

/// Pushes n gamma^+_r draws through billiard_map once and bins the image in
/// (h, theta of omega) on n_h x n_theta equal cells.
InvarianceCheck gamma_invariance(ObstacleRadius r, std::uint64_t n, std::uint64_t seed, std::size_t n_h = 32,
                                 std::size_t n_theta = 32, const ParallelOptions &par = {});

} // namespace lorentz
