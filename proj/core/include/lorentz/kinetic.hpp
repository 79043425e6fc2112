#pragma once
/**
 * Particle solvers on the macroscopic scale for
 *   - the true periodic billiard observed at time t/r on the lattice scaled by r,
 *   - the extended kinetic model on (x, omega, s, h) (jump process driven by P),
 *   - the classical Lorentz equation (exponential flights of rate 2, kernel (omega.n)_+),
 *   - free transport,
 * all binned on a common (x, y, theta) grid and compared in total variation.
 *
 * All solvers draw particle i's initial (x, omega) from the same sub-stream
 * for a given seed, so runs with a common seed share their initial ensemble.
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/billiard.hpp"
#include "lorentz/chain.hpp"
#include "lorentz/parallel.hpp"
#include "lorentz/rng.hpp"

namespace lorentz {

/// Macroscopic time per unit of s (s = 2 r tau, macroscopic length = r tau).
inline constexpr double kMacroPerS = 0.5;

/// A continuous (or piecewise continuous) compactly supported probability
/// density on R^2 x S^1, with respect to dx dtheta.
class InitialDensity {
public:
    virtual ~InitialDensity() = default;
    virtual PhasePoint sample(RngStream &rng) const = 0;
    virtual double density(Vec2 x, double theta) const = 0;
    /// All mass lies in the disk of this radius around center().
    virtual double support_radius() const = 0;
    virtual Vec2 center() const = 0;
    virtual std::string name() const = 0;
};

/// Uniform on a disk times uniform direction.
class UniformDiskDensity final : public InitialDensity {
public:
    explicit UniformDiskDensity(double radius = 1.0, Vec2 center = {});
    PhasePoint sample(RngStream &rng) const override;
    double density(Vec2 x, double theta) const override;
    double support_radius() const override { return radius_; }
    Vec2 center() const override { return center_; }
    std::string name() const override { return "uniform-disk"; }

private:
    double radius_;
    Vec2 center_;
};

/// (3 / (pi R^2)) (1 - |x-c|^2/R^2)^2 on the disk times
/// (1 + kappa cos(theta - theta0)) / (2 pi); continuous, |kappa| <= 1.
class BumpDensity final : public InitialDensity {
public:
    BumpDensity(double radius, Vec2 center, double kappa, double theta0);
    PhasePoint sample(RngStream &rng) const override;
    double density(Vec2 x, double theta) const override;
    double support_radius() const override { return radius_; }
    Vec2 center() const override { return center_; }
    std::string name() const override { return "bump"; }

private:
    double radius_;
    Vec2 center_;
    double kappa_;
    double theta0_;
};

/// Builds "uniform-disk" or "bump" (kappa 0.8, theta0 0, unit radius).
std::unique_ptr<InitialDensity> make_initial_density(const std::string &name);

struct GridSpec {
    double half_width = 3.0;
    Vec2 center;
    std::size_t nx = 32;
    std::size_t ny = 32;
    std::size_t ntheta = 16;

    friend bool operator==(const GridSpec &, const GridSpec &) = default;
};

/// Weighted empirical measure on the (x, y, theta) grid plus an overflow cell
/// for positions outside the box.
class DensityGrid {
public:
    DensityGrid() = default;
    DensityGrid(GridSpec spec, double t);

    void add(Vec2 x, Vec2 omega, double weight = 1.0);
    void merge(const DensityGrid &other);

    const GridSpec &spec() const { return spec_; }
    double t() const { return t_; }
    std::size_t cells() const { return weights_.size() - 1; }
    std::size_t index(std::size_t ix, std::size_t iy, std::size_t it) const {
        return (ix * spec_.ny + iy) * spec_.ntheta + it;
    }
    double weight(std::size_t ix, std::size_t iy, std::size_t it) const { return weights_[index(ix, iy, it)]; }
    double &weight(std::size_t ix, std::size_t iy, std::size_t it) { return weights_[index(ix, iy, it)]; }
    double overflow() const { return weights_.back(); }
    double &overflow() { return weights_.back(); }
    double mass() const;
    /// Cell weights followed by the overflow cell.
    const std::vector<double> &weights() const { return weights_; }

    // Provenance carried into CSV output.
    std::string solver;          ///< "direct", "limit", "lorentz", "transport", "initial"
    std::optional<double> r;     ///< obstacle radius for "direct"
    std::uint64_t n = 0;
    std::uint64_t seed = 0;

private:
    GridSpec spec_;
    double t_ = 0.0;
    std::vector<double> weights_;
};

/// TV distance on the common grid. Throws BinMismatch on different grids or times.
double compare_densities(const DensityGrid &a, const DensityGrid &b);

/// Extended initial state: (x, omega) ~ f_in and (s, h) from the normalized
/// density proportional to the tail integral of P(tau, h | h') over tau > s and h'.
/// Positions and s are returned in s-units (macroscopic x / kMacroPerS).
std::vector<ChainState> sample_initial_extended(const InitialDensity &f_in, std::uint64_t n, std::uint64_t seed,
                                                const ParallelOptions &par = {});

/// (s, h) part of the extended initial law for one particle.
/// Draw beta ~ mu; pick the branch of T_beta with probability
/// (interval width / 2) * flight length, which sums to 1 for every beta;
/// h' uniform inside that branch; s uniform on [0, sigma].
ChainState sample_residual_flight(RngStream &rng);

/// Bins f_in itself (t = 0 for every solver).
DensityGrid bin_initial(const InitialDensity &f_in, std::uint64_t n, std::uint64_t seed, const GridSpec &grid = {},
                        const ParallelOptions &par = {});

/// Particle solution of the extended kinetic model, marginalized over (s, h).
DensityGrid solve_limit(const InitialDensity &f_in, double t, std::uint64_t n, std::uint64_t seed,
                        const GridSpec &grid = {}, const ParallelOptions &par = {});

struct DirectStats {
    std::uint64_t rejections = 0; ///< initial points inside an obstacle, redrawn
    std::uint64_t collisions = 0;
};

/// f_r(t, .) as an empirical measure: x -> x/r, billiard flow for t/r, x -> r x.
DensityGrid simulate_direct(const InitialDensity &f_in, ObstacleRadius r, double t, std::uint64_t n,
                            std::uint64_t seed, const GridSpec &grid = {}, const ParallelOptions &par = {},
                            DirectStats *stats = nullptr);

/// Classical Lorentz kinetic equation: exponential free flights of rate 2
/// (the mass of the kernel (omega.n)_+ over S^1), deflection omega - 2 (omega.n) n
/// with n drawn with density (omega.n)_+ / 2.
DensityGrid lorentz_baseline(const InitialDensity &f_in, double t, std::uint64_t n, std::uint64_t seed,
                             const GridSpec &grid = {}, const ParallelOptions &par = {});

/// Pure transport x + t omega.
DensityGrid free_transport(const InitialDensity &f_in, double t, std::uint64_t n, std::uint64_t seed,
                           const GridSpec &grid = {}, const ParallelOptions &par = {});

} // namespace lorentz
