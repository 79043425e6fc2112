#include "lorentz/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lorentz/errors.hpp"
#include "lorentz/stats.hpp"

namespace lorentz {

namespace {

// Squared half-chord below which a ray counts as tangent (relative to r^2).
constexpr double kTangencyTol = 1e-14;

// The lattice symmetry taking omega to the octant 0 <= omega_v <= omega_u.
struct Octant {
    bool swap;
    double su;
    double sv;

    static Octant of(Vec2 w) {
        const bool swap = std::abs(w.y) > std::abs(w.x);
        const double dom = swap ? w.y : w.x;
        const double minor = swap ? w.x : w.y;
        return {swap, dom < 0.0 ? -1.0 : 1.0, minor < 0.0 ? -1.0 : 1.0};
    }
    Vec2 to_canonical(Vec2 a) const {
        return swap ? Vec2{su * a.y, sv * a.x} : Vec2{su * a.x, sv * a.y};
    }
    Vec2 from_canonical(Vec2 c) const {
        const double a = su * c.x;
        const double b = sv * c.y;
        return swap ? Vec2{b, a} : Vec2{a, b};
    }
};

} // namespace

ObstacleRadius::ObstacleRadius(double r) : r_(r) {
    if (!(r > 0.0 && r <= kMax))
        throw InvalidArgument("obstacle radius must lie in (0, 0.35], got " + std::to_string(r));
}

double lattice_distance(Vec2 x) { return std::hypot(x.x - std::nearbyint(x.x), x.y - std::nearbyint(x.y)); }

Vec2 reflect(Vec2 omega, Vec2 n) { return normalized(omega - 2.0 * dot(omega, n) * n); }

std::optional<FlightOutcome> first_hit(const PhasePoint &p, ObstacleRadius radius, std::int64_t max_columns,
                                       std::optional<LatticePoint> exclude) {
    const double r = radius.value();
    const Vec2 w = p.omega;

    // Work relative to the cell containing x so that coordinates stay O(1).
    const double bx = std::floor(p.x.x);
    const double by = std::floor(p.x.y);
    const auto base = LatticePoint{static_cast<std::int64_t>(bx), static_cast<std::int64_t>(by)};
    const Vec2 local{p.x.x - bx, p.x.y - by};

    const Octant oct = Octant::of(w);
    const Vec2 x0 = oct.to_canonical(local);
    const Vec2 wc = oct.to_canonical(w);
    const double slope = wc.y / wc.x;
    const double reach = r / wc.x;
    const double tangency = kTangencyTol * r * r;

    const auto i_first = static_cast<std::int64_t>(std::floor(x0.x)) - 1;
    for (std::int64_t step = 0; step <= max_columns; ++step) {
        const std::int64_t i = i_first + step;
        const double di = static_cast<double>(i);
        const double v = x0.y + slope * (di - x0.x);
        const double j = std::nearbyint(v);
        if (std::abs(j - v) >= reach) continue;

        const Vec2 c{di, j};
        const Vec2 cl = oct.from_canonical(c);
        const LatticePoint center{base.i + static_cast<std::int64_t>(cl.x), base.j + static_cast<std::int64_t>(cl.y)};
        if (exclude && *exclude == center) continue;

        // b: position of x along the ray relative to the center's foot point,
        // p: signed perpendicular offset. Extended precision keeps h accurate
        // when |d| ~ 1/r.
        // tau is measured along omega / |omega|.
        using ld = long double;
        const ld inv_norm = 1.0L / std::sqrt(static_cast<ld>(w.x) * w.x + static_cast<ld>(w.y) * w.y);
        const ld ux = w.x * inv_norm;
        const ld uy = w.y * inv_norm;
        const ld dx = static_cast<ld>(local.x) - static_cast<ld>(cl.x);
        const ld dy = static_cast<ld>(local.y) - static_cast<ld>(cl.y);
        const ld b = dx * ux + dy * uy;
        if (b >= 0.0L) continue; // center not ahead
        const ld p_off = ux * dy - uy * dx;
        const ld rl = r;
        const ld disc = rl * rl - p_off * p_off;
        if (disc < tangency) continue;
        const ld root = std::sqrt(disc);
        // Smaller root from the product of the roots: tau * (-b + root) = |d|^2 - r^2.
        const ld tau = std::max(0.0L, (dx * dx + dy * dy - rl * rl) / (-b + root));

        FlightOutcome out;
        out.tau = static_cast<double>(tau);
        out.hit_center = center;
        const ld nx = (-p_off * uy - root * ux) / rl;
        const ld ny = (p_off * ux - root * uy) / rl;
        out.normal = normalized({static_cast<double>(nx), static_cast<double>(ny)});
        out.hit_point = {static_cast<double>(p.x.x + tau * ux), static_cast<double>(p.x.y + tau * uy)};
        out.h_next = std::clamp(static_cast<double>(p_off / rl), -1.0, 1.0);
        return out;
    }
    return std::nullopt;
}

FlightOutcome flight(const PhasePoint &p, ObstacleRadius r, const FlightOptions &opts,
                     std::optional<LatticePoint> exclude) {
    auto hit = first_hit(p, r, opts.max_cells, exclude);
    if (!hit)
        throw NoCollisionWithinHorizon("no obstacle within " + std::to_string(opts.max_cells) +
                                       " cells; direction close to a rational corridor");
    return *hit;
}

Vec2 boundary_normal(double h, Vec2 omega) {
    const double c = std::sqrt(std::max(0.0, 1.0 - h * h));
    const Vec2 perp{-omega.y, omega.x};
    return c * omega + h * perp;
}

PhasePoint boundary_lift(const BoundaryState &b, ObstacleRadius r) {
    return {b.center.position() + r.value() * boundary_normal(b.h, b.omega), b.omega};
}

BoundaryState billiard_map(const BoundaryState &b, ObstacleRadius r, const FlightOptions &opts) {
    // Lift around the origin; only the lattice offset is carried globally.
    const PhasePoint start{r.value() * boundary_normal(b.h, b.omega), b.omega};
    const FlightOutcome f = flight(start, r, opts, LatticePoint{0, 0});
    return {LatticePoint{b.center.i + f.hit_center.i, b.center.j + f.hit_center.j}, f.h_next,
            reflect(b.omega, f.normal)};
}

BoundaryState time_reversal(const BoundaryState &b) {
    const Vec2 n = boundary_normal(b.h, b.omega);
    return {b.center, -b.h, -reflect(b.omega, n)};
}

PhasePoint evolve(const PhasePoint &p, ObstacleRadius r, double t, const FlightOptions &opts, EvolveStats &stats) {
    if (!(t >= 0.0)) throw InvalidArgument("evolve: negative time");
    PhasePoint cur = p;
    double remaining = t;
    std::optional<LatticePoint> on_obstacle;
    while (remaining > 0.0) {
        const double span = remaining * std::max(std::abs(cur.omega.x), std::abs(cur.omega.y));
        const auto columns = static_cast<std::int64_t>(std::ceil(span)) + 2;
        // Beyond the horizon the throwing variant reports corridor directions.
        const std::optional<FlightOutcome> f = columns > opts.max_cells
                                                   ? std::optional<FlightOutcome>(flight(cur, r, opts, on_obstacle))
                                                   : first_hit(cur, r, columns, on_obstacle);
        if (!f || f->tau >= remaining) {
            cur.x += remaining * cur.omega;
            return cur;
        }
        cur.x = f->hit_point;
        cur.omega = reflect(cur.omega, f->normal);
        remaining -= f->tau;
        on_obstacle = f->hit_center;
        ++stats.collisions;
    }
    return cur;
}

PhasePoint evolve(const PhasePoint &p, ObstacleRadius r, double t, const FlightOptions &opts) {
    EvolveStats stats;
    return evolve(p, r, t, opts, stats);
}

BoundaryState sample_gamma_plus(RngStream &rng) {
    const double h = rng.uniform(-1.0, 1.0);
    return {LatticePoint{0, 0}, h, unit_from_angle(rng.uniform(0.0, 2.0 * std::numbers::pi))};
}

InvarianceCheck gamma_invariance(ObstacleRadius r, std::uint64_t n, std::uint64_t seed, std::size_t n_h,
                                 std::size_t n_theta, const ParallelOptions &par) {
    if (n == 0) throw EmptyEnsemble("gamma_invariance: n = 0");
    if (n_h == 0 || n_theta == 0) throw InvalidArgument("gamma_invariance: empty grid");
    constexpr std::uint64_t kTagGamma = 1;
    const std::size_t cells = n_h * n_theta;
    const auto cell = [&](const BoundaryState &b) {
        const auto ih = std::min(n_h - 1, static_cast<std::size_t>((b.h + 1.0) * 0.5 * static_cast<double>(n_h)));
        double theta = std::atan2(b.omega.y, b.omega.x);
        if (theta < 0.0) theta += 2.0 * std::numbers::pi;
        const auto it = std::min(n_theta - 1,
                                 static_cast<std::size_t>(theta / (2.0 * std::numbers::pi) * static_cast<double>(n_theta)));
        return ih * n_theta + it;
    };
    struct Partial {
        std::vector<double> before, after;
        std::uint64_t skipped = 0;
    };
    const auto parts = run_tasks<Partial>(n, par, [&](std::uint64_t task, std::size_t begin, std::size_t end) {
        RngStream rng(seed, task, kTagGamma);
        Partial p;
        p.before.assign(cells, 0.0);
        p.after.assign(cells, 0.0);
        for (std::size_t i = begin; i < end; ++i) {
            const BoundaryState b = sample_gamma_plus(rng);
            p.before[cell(b)] += 1.0;
            try {
                p.after[cell(billiard_map(b, r))] += 1.0;
            } catch (const NoCollisionWithinHorizon &) {
                ++p.skipped;
            }
        }
        return p;
    });
    std::vector<double> before(cells, 0.0), after(cells, 0.0);
    InvarianceCheck out;
    out.n = n;
    for (const auto &p : parts) {
        for (std::size_t c = 0; c < cells; ++c) {
            before[c] += p.before[c];
            after[c] += p.after[c];
        }
        out.skipped += p.skipped;
    }
    const std::vector<double> uniform(cells, 1.0);
    out.tv_initial = total_variation(before, uniform);
    out.tv_mapped = total_variation(after, uniform);
    return out;
}

} // namespace lorentz
