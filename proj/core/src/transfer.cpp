#include "lorentz/transfer.hpp"

#include <cmath>
#include <numbers>

#include "lorentz/errors.hpp"
#include "lorentz/rng.hpp"
#include "lorentz/stats.hpp"

namespace lorentz {

namespace {

// R[-m pi/2] applied exactly through component permutations.
Vec2 rotate_quarter_turns_back(Vec2 w, int m) {
    switch (((m % 4) + 4) % 4) {
    case 1: return {w.y, -w.x};
    case 2: return {-w.x, -w.y};
    case 3: return {-w.y, w.x};
    default: return w;
    }
}

} // namespace

ReducedDirection reduce_direction(Vec2 omega) {
    const double ax = std::abs(omega.x);
    const double ay = std::abs(omega.y);
    if (ax == 0.0 || ay == 0.0 || ax == ay)
        throw DegenerateDirection("direction has a lattice-axis or diagonal slope");

    using std::numbers::pi;
    const double theta = std::atan2(omega.y, omega.x);
    int m = static_cast<int>(std::floor((2.0 / pi) * (theta + pi / 4.0)));
    Vec2 wt = rotate_quarter_turns_back(omega, m);
    // Rounding in theta can misplace directions within an ulp of the sector edge.
    if (wt.x < std::abs(wt.y)) {
        m += wt.y > 0.0 ? 1 : -1;
        wt = rotate_quarter_turns_back(omega, m);
    }

    ReducedDirection rd;
    rd.omega_tilde = wt;
    rd.theta_tilde = std::atan2(wt.y, wt.x);
    rd.quadrant_m = m;
    rd.sign_flip = wt.y > 0.0 ? 1 : -1;
    rd.canonical = {wt.x, std::abs(wt.y)};
    return rd;
}

TransferResult transfer_exact(double h_prime, Vec2 omega, ObstacleRadius r, const FlightOptions &opts) {
    if (!(std::abs(h_prime) < 1.0)) throw InvalidArgument("transfer_exact: |h'| must be < 1");
    const PhasePoint start{r.value() * boundary_normal(h_prime, omega), omega};
    const FlightOutcome f = flight(start, r, opts, LatticePoint{0, 0});
    return {kFlightScale * r.value() * f.tau, f.h_next};
}

int asymptotic_branch(double A, double B, int parity, double h_prime) {
    const double x = parity ? -h_prime : h_prime;
    if (x > 1.0 - 2.0 * A) return 1;
    if (x < -1.0 + 2.0 * B) return 2;
    return 3;
}

TransferResult transfer_asymptotic(double A, double B, double Q, int parity, double h_prime) {
    const double sign = parity ? -1.0 : 1.0;
    const double q_prime = (1.0 - Q * (1.0 - B)) / (1.0 - A);
    switch (asymptotic_branch(A, B, parity, h_prime)) {
    case 1: return {Q, h_prime - 2.0 * sign * (1.0 - A)};
    case 2: return {q_prime, h_prime + 2.0 * sign * (1.0 - B)};
    default: return {q_prime + Q, h_prime + 2.0 * sign * (A - B)};
    }
}

TransferResult transfer_asymptotic(double h_prime, Vec2 omega, ObstacleRadius r) {
    const ReducedDirection rd = reduce_direction(omega);
    const PartitionParams pp = partition_params(rd.alpha(), r);
    const double sign = rd.sign_flip;
    const TransferResult res = transfer_asymptotic(pp, sign * h_prime);
    return {res.s, sign * res.h};
}

double TransferSweep::median_s_error() const {
    if (samples.empty()) throw EmptyEnsemble("median_s_error: no samples");
    std::vector<double> err(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        err[i] = std::abs(samples[i].exact.s - samples[i].asymptotic.s);
    return median(std::move(err));
}

double TransferSweep::h_match_fraction(double tol) const {
    if (samples.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto &c : samples) hits += std::abs(c.exact.h - c.asymptotic.h) <= tol ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

TransferSweep compare_transfer(double h_prime, ObstacleRadius r, std::uint64_t n, std::uint64_t seed,
                               double theta_lo, double theta_hi, const ParallelOptions &par) {
    if (!(std::abs(h_prime) < 1.0)) throw InvalidArgument("compare_transfer: |h'| must be < 1");
    if (!(theta_lo < theta_hi)) throw InvalidArgument("compare_transfer: empty angle range");
    struct Part {
        std::vector<TransferComparison> samples;
        std::uint64_t skipped = 0;
    };
    constexpr std::uint64_t kTagCompare = 15;
    const auto parts = run_tasks<Part>(n, par, [&](std::uint64_t task, std::size_t begin, std::size_t end) {
        RngStream rng(seed, task, kTagCompare);
        Part p;
        p.samples.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) {
            TransferComparison c;
            c.theta = rng.uniform(theta_lo, theta_hi);
            const Vec2 omega = unit_from_angle(c.theta);
            try {
                c.asymptotic = transfer_asymptotic(h_prime, omega, r);
                const ReducedDirection rd = reduce_direction(omega);
                const double sign = rd.sign_flip;
                const TransferResult e = transfer_exact(sign * h_prime, rd.canonical, r);
                c.exact = {e.s, sign * e.h};
                p.samples.push_back(c);
            } catch (const RationalSlope &) {
                ++p.skipped;
            } catch (const DegenerateDirection &) {
                ++p.skipped;
            } catch (const NoCollisionWithinHorizon &) {
                ++p.skipped;
            }
        }
        return p;
    });
    TransferSweep out;
    out.h_prime = h_prime;
    out.r = r.value();
    out.seed = seed;
    out.samples.reserve(n);
    for (const auto &p : parts) {
        out.samples.insert(out.samples.end(), p.samples.begin(), p.samples.end());
        out.skipped += p.skipped;
    }
    return out;
}

} // namespace lorentz
