#pragma once
/**
 * The Markov chain on (s, h) driven by i.i.d. mu-draws, the jump process it
 * generates on the extended phase space (x, omega, s, h), and an empirical
 * probe of the independence of successive partition parameters along true
 * billiard orbits.
 *
 * Positions and times here are in s-units (flight length 2 r tau).
 */

#include <cstdint>
#include <span>
#include <vector>

#include "lorentz/parallel.hpp"
#include "lorentz/rng.hpp"
#include "lorentz/transition.hpp"
#include "lorentz/vec2.hpp"

namespace lorentz {

/// In flight at x with direction omega; the next collision happens after s
/// more units of time with impact parameter h.
struct ChainState {
    double s = 0.0;
    double h = 0.0;
    Vec2 omega{1.0, 0.0};
    Vec2 x;
};

/// Direction change at a collision with impact parameter h:
/// omega_out = R[pi - 2 asin h] omega_in (counterclockwise).
double collision_rotation(double h);

/// Collision at the end of the current flight: new direction by
/// collision_rotation(state.h), new (s, h) = T_beta(state.h). Position unchanged.
ChainState chain_step(const ChainState &state, const MuSample &beta);

struct JumpEvent {
    double t = 0.0;
    ChainState state; ///< state right after the event (the initial state at t = 0)
};

struct JumpTrajectory {
    std::vector<JumpEvent> events;
    double t_max = 0.0;
    ChainState final_state; ///< state at t_max

    /// Linear interpolation of the position at time t in [0, t_max].
    Vec2 position_at(double t) const;
};

/// Free flight while the countdown s runs down at unit rate, a chain_step
/// with a fresh mu-draw whenever it hits 0, until t_max.
JumpTrajectory jump_evolve(const ChainState &init, double t_max, RngStream &rng);

/// State at time t without recording the events; `jumps` counts collisions.
ChainState jump_state_at(const ChainState &init, double t, RngStream &rng, std::uint64_t *jumps = nullptr);

/// Coarse cells of the partition parameters used by independence_stats:
/// A, B, Q in 4 equal bins each on (0,1), times N mod 2 (128 cells), and a
/// pair code A, B in 2 bins times N mod 2 (8 cells).
std::size_t mu_cell(double A, double B, double Q, int parity);
inline constexpr std::size_t kMuCells = 128;
std::size_t mu_pair_cell(double A, double B, int parity);
inline constexpr std::size_t kMuPairCells = 8;

/// Counts of n exact mu-draws in the 128 coarse cells.
std::vector<double> mu_reference_cells(std::uint64_t n, std::uint64_t seed, const ParallelOptions &par = {});

struct IndependenceRow {
    double r = 0.0;
    int step = 0;                ///< collision index n >= 1
    double marginal_tv = 0.0;    ///< TV(law of b^n, mu) on the 128 cells
    double pair_tv = 0.0;        ///< TV(law of (b^n, b^{n+1}), product of marginals); NaN for the last step
    std::uint64_t samples = 0;
    std::uint64_t skipped = 0;   ///< orbits dropped on rational/degenerate directions
};

struct IndependenceReport {
    std::vector<IndependenceRow> rows;
    std::uint64_t seed = 0;
};

/// Samples (x_0, omega_0) from gamma^+_r (h uniform, omega uniform), iterates
/// the billiard map n_steps times and bins b^n_r = (A, B, Q, N mod 2) of each
/// post-collision direction.
IndependenceReport independence_stats(std::span<const double> radii, int n_steps, std::uint64_t n_samples,
                                      std::uint64_t seed, const ParallelOptions &par = {});

} // namespace lorentz
