#include "lorentz/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lorentz/billiard.hpp"
#include "lorentz/errors.hpp"
#include "lorentz/stats.hpp"

namespace lorentz {

namespace {

enum StreamTag : std::uint64_t { kTagReference = 21, kTagOrbit = 22 };

std::size_t bin4(double v) { return std::min<std::size_t>(3, static_cast<std::size_t>(std::max(0.0, v) * 4.0)); }
std::size_t bin2(double v) { return v < 0.5 ? 0 : 1; }

} // namespace

double collision_rotation(double h) { return std::numbers::pi - 2.0 * std::asin(std::clamp(h, -1.0, 1.0)); }

ChainState chain_step(const ChainState &state, const MuSample &beta) {
    const TransferResult t = transfer_asymptotic(beta, state.h);
    ChainState next;
    next.s = t.s;
    next.h = t.h;
    next.omega = normalized(rotate(state.omega, collision_rotation(state.h)));
    next.x = state.x;
    return next;
}

Vec2 JumpTrajectory::position_at(double t) const {
    if (events.empty()) throw EmptyEnsemble("position_at: empty trajectory");
    auto it = std::upper_bound(events.begin(), events.end(), t,
                               [](double v, const JumpEvent &e) { return v < e.t; });
    const JumpEvent &e = it == events.begin() ? events.front() : *std::prev(it);
    return e.state.x + (t - e.t) * e.state.omega;
}

ChainState jump_state_at(const ChainState &init, double t, RngStream &rng, std::uint64_t *jumps) {
    if (!(t >= 0.0)) throw InvalidArgument("jump_state_at: negative time");
    ChainState st = init;
    double now = 0.0;
    while (now + st.s <= t) {
        now += st.s;
        st.x += st.s * st.omega;
        st.s = 0.0;
        st = chain_step(st, sample_mu(rng));
        if (jumps) ++*jumps;
    }
    const double dt = t - now;
    st.x += dt * st.omega;
    st.s -= dt;
    return st;
}

JumpTrajectory jump_evolve(const ChainState &init, double t_max, RngStream &rng) {
    if (!(t_max > 0.0)) throw InvalidArgument("jump_evolve: t_max must be positive");
    JumpTrajectory traj;
    traj.t_max = t_max;
    traj.events.push_back({0.0, init});
    ChainState st = init;
    double now = 0.0;
    while (now + st.s <= t_max) {
        now += st.s;
        st.x += st.s * st.omega;
        st.s = 0.0;
        st = chain_step(st, sample_mu(rng));
        traj.events.push_back({now, st});
    }
    const double dt = t_max - now;
    st.x += dt * st.omega;
    st.s -= dt;
    traj.final_state = st;
    return traj;
}

std::size_t mu_cell(double A, double B, double Q, int parity) {
    return ((bin4(A) * 4 + bin4(B)) * 4 + bin4(Q)) * 2 + static_cast<std::size_t>(parity & 1);
}

std::size_t mu_pair_cell(double A, double B, int parity) {
    return (bin2(A) * 2 + bin2(B)) * 2 + static_cast<std::size_t>(parity & 1);
}

std::vector<double> mu_reference_cells(std::uint64_t n, std::uint64_t seed, const ParallelOptions &par) {
    const auto parts =
        run_tasks<std::vector<double>>(n, par, [&](std::uint64_t task, std::size_t begin, std::size_t end) {
            RngStream rng(seed, task, kTagReference);
            std::vector<double> cells(kMuCells, 0.0);
            for (std::size_t i = begin; i < end; ++i) {
                const MuSample m = sample_mu(rng);
                cells[mu_cell(m.A, m.B, m.Q, m.parity)] += 1.0;
            }
            return cells;
        });
    std::vector<double> out(kMuCells, 0.0);
    for (const auto &p : parts)
        for (std::size_t c = 0; c < kMuCells; ++c) out[c] += p[c];
    return out;
}

IndependenceReport independence_stats(std::span<const double> radii, int n_steps, std::uint64_t n_samples,
                                      std::uint64_t seed, const ParallelOptions &par) {
    if (n_steps < 1) throw InvalidArgument("independence_stats: n_steps must be >= 1");
    if (n_samples == 0) throw EmptyEnsemble("independence_stats: no samples");
    const auto steps = static_cast<std::size_t>(n_steps);
    const std::vector<double> reference = mu_reference_cells(std::max<std::uint64_t>(n_samples, 1'000'000), seed, par);

    struct Partial {
        std::vector<double> marginal;     // steps x kMuCells
        std::vector<double> pair_single;  // steps x kMuPairCells
        std::vector<double> pair_joint;   // (steps-1) x kMuPairCells^2
        std::uint64_t skipped = 0;
    };

    IndependenceReport report;
    report.seed = seed;
    for (const double rv : radii) {
        const ObstacleRadius r(rv);
        const auto parts = run_tasks<Partial>(n_samples, par, [&](std::uint64_t task, std::size_t begin, std::size_t end) {
            RngStream rng(seed, task, kTagOrbit);
            Partial p;
            p.marginal.assign(steps * kMuCells, 0.0);
            p.pair_single.assign(steps * kMuPairCells, 0.0);
            p.pair_joint.assign((steps - 1) * kMuPairCells * kMuPairCells, 0.0);
            std::vector<std::size_t> cell(steps), pcell(steps);
            for (std::size_t i = begin; i < end; ++i) {
                BoundaryState b = sample_gamma_plus(rng);
                try {
                    for (std::size_t n = 0; n < steps; ++n) {
                        b = billiard_map(b, r);
                        b.center = {0, 0};
                        const ReducedDirection rd = reduce_direction(b.omega);
                        const PartitionParams pp = partition_params(rd.alpha(), r);
                        cell[n] = mu_cell(pp.A, pp.B, pp.Q, pp.parity);
                        pcell[n] = mu_pair_cell(pp.A, pp.B, pp.parity);
                    }
                } catch (const Error &) {
                    ++p.skipped;
                    continue;
                }
                for (std::size_t n = 0; n < steps; ++n) {
                    p.marginal[n * kMuCells + cell[n]] += 1.0;
                    p.pair_single[n * kMuPairCells + pcell[n]] += 1.0;
                    if (n + 1 < steps)
                        p.pair_joint[(n * kMuPairCells + pcell[n]) * kMuPairCells + pcell[n + 1]] += 1.0;
                }
            }
            return p;
        });

        Partial total;
        total.marginal.assign(steps * kMuCells, 0.0);
        total.pair_single.assign(steps * kMuPairCells, 0.0);
        total.pair_joint.assign((steps - 1) * kMuPairCells * kMuPairCells, 0.0);
        for (const auto &p : parts) {
            for (std::size_t k = 0; k < total.marginal.size(); ++k) total.marginal[k] += p.marginal[k];
            for (std::size_t k = 0; k < total.pair_single.size(); ++k) total.pair_single[k] += p.pair_single[k];
            for (std::size_t k = 0; k < total.pair_joint.size(); ++k) total.pair_joint[k] += p.pair_joint[k];
            total.skipped += p.skipped;
        }

        for (std::size_t n = 0; n < steps; ++n) {
            IndependenceRow row;
            row.r = rv;
            row.step = static_cast<int>(n + 1);
            row.samples = n_samples - total.skipped;
            row.skipped = total.skipped;
            row.marginal_tv = total_variation(std::span<const double>(total.marginal).subspan(n * kMuCells, kMuCells),
                                              std::span<const double>(reference));
            row.pair_tv = std::numeric_limits<double>::quiet_NaN();
            if (n + 1 < steps) {
                std::vector<double> product(kMuPairCells * kMuPairCells);
                for (std::size_t a = 0; a < kMuPairCells; ++a)
                    for (std::size_t c = 0; c < kMuPairCells; ++c)
                        product[a * kMuPairCells + c] =
                            total.pair_single[n * kMuPairCells + a] * total.pair_single[(n + 1) * kMuPairCells + c];
                row.pair_tv = total_variation(
                    std::span<const double>(total.pair_joint).subspan(n * kMuPairCells * kMuPairCells,
                                                                      kMuPairCells * kMuPairCells),
                    std::span<const double>(product));
            }
            report.rows.push_back(row);
        }
    }
    return report;
}

} // namespace lorentz
