#include "integrator.hpp"

#include <cmath>

namespace oracle {

namespace {

// Signed distance from the nearest disk boundary; negative inside.
long double gap(long double x, long double y, long double r, long double &cx, long double &cy) {
    cx = std::nearbyint(x);
    cy = std::nearbyint(y);
    return std::hypot(x - cx, y - cy) - r;
}

} // namespace

FlowState integrate(FlowState s, long double r, long double t, long double dt) {
    long double done = 0.0L;
    long double cx = 0, cy = 0;
    while (done < t) {
        const long double step = std::fmin(dt, t - done);
        if (gap(s.x + step * s.wx, s.y + step * s.wy, r, cx, cy) >= 0.0L) {
            s.x += step * s.wx;
            s.y += step * s.wy;
            done += step;
            continue;
        }
        long double lo = 0.0L, hi = step;
        for (int it = 0; it < 200 && hi - lo > 1e-18L; ++it) {
            const long double mid = 0.5L * (lo + hi);
            if (gap(s.x + mid * s.wx, s.y + mid * s.wy, r, cx, cy) >= 0.0L)
                lo = mid;
            else
                hi = mid;
        }
        s.x += lo * s.wx;
        s.y += lo * s.wy;
        done += lo;
        gap(s.x + hi * s.wx - lo * s.wx, s.y + hi * s.wy - lo * s.wy, r, cx, cy);
        long double nx = s.x - cx, ny = s.y - cy;
        const long double nn = std::hypot(nx, ny);
        nx /= nn;
        ny /= nn;
        const long double dn = s.wx * nx + s.wy * ny;
        s.wx -= 2.0L * dn * nx;
        s.wy -= 2.0L * dn * ny;
        ++s.collisions;
    }
    return s;
}

} // namespace oracle
