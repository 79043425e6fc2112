#include "lorentz/contfrac.hpp"

#include <cmath>
#include <sstream>

#include "lorentz/errors.hpp"

namespace lorentz {

namespace {

[[noreturn]] void throw_rational(long double alpha, std::size_t n) {
    std::ostringstream os;
    os.precision(21);
    os << "slope " << alpha << " is rational to working precision (expansion stops at index " << n << ")";
    throw RationalSlope(os.str());
}

} // namespace

CFData expand(long double alpha, long double stop_threshold) {
    if (!(alpha > 0.0L && alpha < 1.0L)) throw InvalidArgument("expand: alpha must lie in (0, 1)");
    if (!(stop_threshold > 0.0L)) throw InvalidArgument("expand: stop threshold must be positive");

    CFData cf;
    cf.alpha = alpha;
    cf.p = {1, 0};
    cf.q = {0, 1};
    cf.d = {1.0L, alpha};

    for (std::size_t n = 1; cf.d[n] > stop_threshold; ++n) {
        const long double prev = cf.d[n - 1];
        const long double cur = cf.d[n];
        const long double ratio = std::floor(prev / cur);
        if (ratio > kRationalDigit) throw_rational(alpha, n);
        auto a = static_cast<std::int64_t>(ratio);
        long double next = prev - static_cast<long double>(a) * cur;
        while (next >= cur) {
            ++a;
            next -= cur;
        }
        while (next < 0.0L && a > 0) {
            --a;
            next += cur;
        }
        if (!(next > 0.0L) || cur / next > kRationalDigit) throw_rational(alpha, n + 1);

        cf.digits.push_back(a);
        cf.p.push_back(a * cf.p[n] + cf.p[n - 1]);
        cf.q.push_back(a * cf.q[n] + cf.q[n - 1]);
        cf.d.push_back(next);
    }
    return cf;
}

PartitionParams partition_params(long double alpha, ObstacleRadius r) {
    const long double eps = 2.0L * static_cast<long double>(r.value()) * std::sqrt(1.0L + alpha * alpha);
    const CFData cf = expand(alpha, eps);
    const std::size_t N = cf.last();
    // r <= 0.35 keeps eps < 1 = d_0, so N >= 1 and d_{N-1} > eps.
    const long double d_prev = cf.d[N - 1];
    const long double d_N = cf.d[N];
    const auto k = static_cast<std::int64_t>(-std::floor((eps - d_prev) / d_N));

    PartitionParams pp;
    pp.eps = static_cast<double>(eps);
    pp.N = static_cast<int>(N);
    pp.parity = static_cast<int>(N % 2);
    pp.k = k;
    pp.d_prev = d_prev;
    pp.d_N = d_N;
    pp.q_N = cf.q[N];
    pp.A = static_cast<double>(1.0L - d_N / eps);
    pp.B = static_cast<double>(1.0L - (d_prev - static_cast<long double>(k) * d_N) / eps);
    pp.Q = static_cast<double>(eps * static_cast<long double>(cf.q[N]));
    return pp;
}

} // namespace lorentz
