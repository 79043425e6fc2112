#include "lorentz/kinetic.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "lorentz/errors.hpp"
#include "lorentz/stats.hpp"

namespace lorentz {

namespace {

using std::numbers::pi;

enum StreamTag : std::uint64_t {
    kTagInitial = 31,
    kTagLimit = 32,
    kTagDirect = 33,
    kTagLorentz = 34,
};

template <class PerParticle>
DensityGrid run_particles(const InitialDensity &f_in, double t, std::uint64_t n, std::uint64_t seed,
                          const GridSpec &grid, const ParallelOptions &par, std::uint64_t dyn_tag,
                          PerParticle &&per_particle) {
    if (n == 0) throw EmptyEnsemble("particle solver: n = 0");
    if (!(t >= 0.0)) throw InvalidArgument("particle solver: negative time");
    const auto parts = run_tasks<DensityGrid>(n, par, [&](std::uint64_t task, std::size_t begin, std::size_t end) {
        RngStream init(seed, task, kTagInitial);
        RngStream dyn(seed, task, dyn_tag);
        DensityGrid g(grid, t);
        for (std::size_t i = begin; i < end; ++i) {
            const PhasePoint p = per_particle(f_in.sample(init), init, dyn);
            g.add(p.x, p.omega);
        }
        return g;
    });
    DensityGrid out(grid, t);
    for (const auto &g : parts) out.merge(g);
    out.n = n;
    out.seed = seed;
    return out;
}

} // namespace

// --- initial densities -------------------------------------------------------

UniformDiskDensity::UniformDiskDensity(double radius, Vec2 center) : radius_(radius), center_(center) {
    if (!(radius > 0.0)) throw InvalidArgument("UniformDiskDensity: radius must be positive");
}

PhasePoint UniformDiskDensity::sample(RngStream &rng) const {
    const double rho = radius_ * std::sqrt(rng.uniform());
    const Vec2 x = center_ + rho * unit_from_angle(rng.uniform(0.0, 2.0 * pi));
    return {x, unit_from_angle(rng.uniform(0.0, 2.0 * pi))};
}

double UniformDiskDensity::density(Vec2 x, double) const {
    return norm(x - center_) < radius_ ? 1.0 / (pi * radius_ * radius_ * 2.0 * pi) : 0.0;
}

BumpDensity::BumpDensity(double radius, Vec2 center, double kappa, double theta0)
    : radius_(radius), center_(center), kappa_(kappa), theta0_(theta0) {
    if (!(radius > 0.0) || !(std::abs(kappa) <= 1.0)) throw InvalidArgument("BumpDensity: bad parameters");
}

PhasePoint BumpDensity::sample(RngStream &rng) const {
    // u = |x-c|^2 / R^2 has density 3 (1-u)^2 on [0,1].
    const double u = 1.0 - std::cbrt(1.0 - rng.uniform());
    const Vec2 x = center_ + radius_ * std::sqrt(u) * unit_from_angle(rng.uniform(0.0, 2.0 * pi));
    double theta;
    do {
        theta = rng.uniform(0.0, 2.0 * pi);
    } while (rng.uniform() * (1.0 + std::abs(kappa_)) > 1.0 + kappa_ * std::cos(theta - theta0_));
    return {x, unit_from_angle(theta)};
}

double BumpDensity::density(Vec2 x, double theta) const {
    const double u = dot(x - center_, x - center_) / (radius_ * radius_);
    if (u >= 1.0) return 0.0;
    const double radial = 3.0 / (pi * radius_ * radius_) * (1.0 - u) * (1.0 - u);
    return radial * (1.0 + kappa_ * std::cos(theta - theta0_)) / (2.0 * pi);
}

std::unique_ptr<InitialDensity> make_initial_density(const std::string &name) {
    if (name == "uniform-disk") return std::make_unique<UniformDiskDensity>(1.0, Vec2{});
    if (name == "bump") return std::make_unique<BumpDensity>(1.0, Vec2{}, 0.8, 0.0);
    throw InvalidArgument("unknown initial density '" + name + "' (expected uniform-disk or bump)");
}

// --- density grid ------------------------------------------------------------

DensityGrid::DensityGrid(GridSpec spec, double t)
    : spec_(spec), t_(t), weights_(spec.nx * spec.ny * spec.ntheta + 1, 0.0) {
    if (spec.nx == 0 || spec.ny == 0 || spec.ntheta == 0 || !(spec.half_width > 0.0))
        throw InvalidArgument("grid spec needs positive bin counts and half width");
}

void DensityGrid::add(Vec2 x, Vec2 omega, double w) {
    const double fx = (x.x - spec_.center.x + spec_.half_width) / (2.0 * spec_.half_width);
    const double fy = (x.y - spec_.center.y + spec_.half_width) / (2.0 * spec_.half_width);
    if (!(fx >= 0.0 && fx < 1.0 && fy >= 0.0 && fy < 1.0)) {
        weights_.back() += w;
        return;
    }
    const auto ix = std::min(spec_.nx - 1, static_cast<std::size_t>(fx * static_cast<double>(spec_.nx)));
    const auto iy = std::min(spec_.ny - 1, static_cast<std::size_t>(fy * static_cast<double>(spec_.ny)));
    const auto it = std::min(spec_.ntheta - 1, static_cast<std::size_t>(polar_angle(omega) / (2.0 * pi) *
                                                                        static_cast<double>(spec_.ntheta)));
    weights_[index(ix, iy, it)] += w;
}

void DensityGrid::merge(const DensityGrid &other) {
    if (!(other.spec_ == spec_)) throw BinMismatch("merge: density grids differ");
    for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] += other.weights_[i];
}

double DensityGrid::mass() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

double compare_densities(const DensityGrid &a, const DensityGrid &b) {
    if (!(a.spec() == b.spec())) throw BinMismatch("compare_densities: grids differ");
    if (std::abs(a.t() - b.t()) > 1e-12) throw BinMismatch("compare_densities: time stamps differ");
    return total_variation(std::span<const double>(a.weights()), std::span<const double>(b.weights()));
}

// --- extended initial condition ------------------------------------------------

ChainState sample_residual_flight(RngStream &rng) {
    const MuSample beta = sample_mu(rng);
    const double A = beta.A, B = beta.B, Q = beta.Q;
    const double q_prime = (1.0 - Q * (1.0 - B)) / (1.0 - A);
    const double w1 = A * Q;
    const double w2 = B * q_prime;
    // w1 + w2 + (1-A-B)(Q+Q') = Q(1-B) + (1-A)Q' = 1.
    const double u = rng.uniform();
    double x; // (-1)^N h'
    if (u < w1)
        x = 1.0 - 2.0 * A * rng.uniform();
    else if (u < w1 + w2)
        x = -1.0 + 2.0 * B * rng.uniform();
    else
        x = -1.0 + 2.0 * B + 2.0 * (1.0 - A - B) * rng.uniform();
    const double h_prime = beta.parity ? -x : x;
    const TransferResult t = transfer_asymptotic(beta, h_prime);
    ChainState st;
    st.s = t.s * rng.uniform_open();
    st.h = t.h;
    return st;
}

std::vector<ChainState> sample_initial_extended(const InitialDensity &f_in, std::uint64_t n, std::uint64_t seed,
                                                const ParallelOptions &par) {
    if (n == 0) throw EmptyEnsemble("sample_initial_extended: n = 0");
    const auto parts =
        run_tasks<std::vector<ChainState>>(n, par, [&](std::uint64_t task, std::size_t begin, std::size_t end) {
            RngStream init(seed, task, kTagInitial);
            RngStream dyn(seed, task, kTagLimit);
            std::vector<ChainState> out;
            out.reserve(end - begin);
            for (std::size_t i = begin; i < end; ++i) {
                const PhasePoint p = f_in.sample(init);
                ChainState st = sample_residual_flight(dyn);
                st.x = (1.0 / kMacroPerS) * p.x;
                st.omega = p.omega;
                out.push_back(st);
            }
            return out;
        });
    std::vector<ChainState> all;
    all.reserve(n);
    for (const auto &p : parts) all.insert(all.end(), p.begin(), p.end());
    return all;
}

// --- solvers -------------------------------------------------------------------

DensityGrid bin_initial(const InitialDensity &f_in, std::uint64_t n, std::uint64_t seed, const GridSpec &grid,
                        const ParallelOptions &par) {
    auto g = run_particles(f_in, 0.0, n, seed, grid, par, kTagInitial,
                           [](const PhasePoint &p, RngStream &, RngStream &) { return p; });
    g.solver = "initial";
    return g;
}

DensityGrid solve_limit(const InitialDensity &f_in, double t, std::uint64_t n, std::uint64_t seed,
                        const GridSpec &grid, const ParallelOptions &par) {
    auto g = run_particles(f_in, t, n, seed, grid, par, kTagLimit, [t](const PhasePoint &p, RngStream &, RngStream &dyn) {
        ChainState st = sample_residual_flight(dyn);
        st.x = (1.0 / kMacroPerS) * p.x;
        st.omega = p.omega;
        const ChainState end = jump_state_at(st, t / kMacroPerS, dyn);
        return PhasePoint{kMacroPerS * end.x, end.omega};
    });
    g.solver = "limit";
    return g;
}

DensityGrid simulate_direct(const InitialDensity &f_in, ObstacleRadius r, double t, std::uint64_t n,
                            std::uint64_t seed, const GridSpec &grid, const ParallelOptions &par,
                            DirectStats *stats) {
    if (n == 0) throw EmptyEnsemble("simulate_direct: n = 0");
    if (!(t >= 0.0)) throw InvalidArgument("simulate_direct: negative time");
    const double rv = r.value();
    struct Partial {
        DensityGrid grid;
        DirectStats stats;
    };
    const auto parts = run_tasks<Partial>(n, par, [&](std::uint64_t task, std::size_t begin, std::size_t end) {
        RngStream init(seed, task, kTagInitial);
        // Redraws come from a separate stream so that the i-th particle starts
        // where it does for the other solvers with the same seed.
        RngStream redraw(seed, task, kTagDirect);
        Partial part{DensityGrid(grid, t), {}};
        EvolveStats ev;
        for (std::size_t i = begin; i < end; ++i) {
            PhasePoint p = f_in.sample(init);
            PhasePoint micro{(1.0 / rv) * p.x, p.omega};
            while (lattice_distance(micro.x) <= rv) {
                ++part.stats.rejections;
                p = f_in.sample(redraw);
                micro = {(1.0 / rv) * p.x, p.omega};
            }
            const PhasePoint out = evolve(micro, r, t / rv, FlightOptions{}, ev);
            part.grid.add(rv * out.x, out.omega);
        }
        part.stats.collisions = ev.collisions;
        return part;
    });
    DensityGrid out(grid, t);
    DirectStats total;
    for (const auto &p : parts) {
        out.merge(p.grid);
        total.rejections += p.stats.rejections;
        total.collisions += p.stats.collisions;
    }
    if (stats) *stats = total;
    out.solver = "direct";
    out.r = rv;
    out.n = n;
    out.seed = seed;
    return out;
}

DensityGrid lorentz_baseline(const InitialDensity &f_in, double t, std::uint64_t n, std::uint64_t seed,
                             const GridSpec &grid, const ParallelOptions &par) {
    constexpr double kRate = 2.0;
    auto g = run_particles(f_in, t, n, seed, grid, par, kTagLorentz, [t](PhasePoint p, RngStream &, RngStream &dyn) {
        double remaining = t;
        for (;;) {
            const double tau = -std::log(dyn.uniform_open()) / kRate;
            if (tau >= remaining) {
                p.x += remaining * p.omega;
                return p;
            }
            p.x += tau * p.omega;
            remaining -= tau;
            // n at angle phi from omega, density cos(phi)/2 on (-pi/2, pi/2).
            const Vec2 n = rotate(p.omega, std::asin(dyn.uniform(-1.0, 1.0)));
            p.omega = reflect(p.omega, n);
        }
    });
    g.solver = "lorentz";
    return g;
}

DensityGrid free_transport(const InitialDensity &f_in, double t, std::uint64_t n, std::uint64_t seed,
                           const GridSpec &grid, const ParallelOptions &par) {
    auto g = run_particles(f_in, t, n, seed, grid, par, kTagInitial, [t](PhasePoint p, RngStream &, RngStream &) {
        p.x += t * p.omega;
        return p;
    });
    g.solver = "transport";
    return g;
}

} // namespace lorentz
