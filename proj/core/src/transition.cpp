#include "lorentz/transition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lorentz/errors.hpp"
#include "lorentz/stats.hpp"

namespace lorentz {

namespace {

constexpr double kMuMaxWeight = 12.0 / (std::numbers::pi * std::numbers::pi);

enum StreamTag : std::uint64_t { kTagMuMass = 11, kTagPushforward = 12, kTagYoung = 13, kTagSurvival = 14 };

} // namespace

bool in_support(const MuSample &m) {
    return m.A > 0.0 && m.A < 1.0 && m.B > 0.0 && m.B < 1.0 - m.A && m.Q > 0.0 && m.Q < 1.0 / (2.0 - m.A - m.B) &&
           (m.parity == 0 || m.parity == 1);
}

double mu_density(double A, double B, double Q) {
    const MuSample m{A, B, Q, 0};
    return in_support(m) ? (6.0 / (std::numbers::pi * std::numbers::pi)) / (1.0 - A) : 0.0;
}

WeightedMuSample sample_mu_proposal(RngStream &rng) {
    WeightedMuSample w;
    w.sample.A = rng.uniform_open();
    w.sample.B = (1.0 - w.sample.A) * rng.uniform_open();
    const double two_minus = 2.0 - w.sample.A - w.sample.B;
    w.sample.Q = rng.uniform_open() / two_minus;
    w.sample.parity = rng.coin() ? 1 : 0;
    w.weight = kMuMaxWeight / two_minus;
    return w;
}

MuSample sample_mu(RngStream &rng) {
    for (;;) {
        const WeightedMuSample w = sample_mu_proposal(rng);
        if (rng.uniform() * kMuMaxWeight < w.weight) return w.sample;
    }
}

MuMassEstimate estimate_mu_mass(std::uint64_t n, std::uint64_t seed, const ParallelOptions &par) {
    if (n == 0) throw EmptyEnsemble("estimate_mu_mass: n = 0");
    struct Partial {
        double sum = 0.0;
        double sum_sq = 0.0;
        std::uint64_t parity0 = 0;
    };
    const auto parts = run_tasks<Partial>(n, par, [&](std::uint64_t task, std::size_t begin, std::size_t end) {
        RngStream rng(seed, task, kTagMuMass);
        Partial p;
        for (std::size_t i = begin; i < end; ++i) {
            const WeightedMuSample w = sample_mu_proposal(rng);
            p.sum += w.weight;
            p.sum_sq += w.weight * w.weight;
            p.parity0 += w.sample.parity == 0 ? 1 : 0;
        }
        return p;
    });
    Partial total;
    for (const auto &p : parts) {
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
        total.parity0 += p.parity0;
    }
    const double dn = static_cast<double>(n);
    MuMassEstimate est;
    est.n = n;
    est.mass = total.sum / dn;
    est.std_error = std::sqrt(std::max(0.0, total.sum_sq / dn - est.mass * est.mass) / dn);
    est.parity0_fraction = static_cast<double>(total.parity0) / dn;
    return est;
}

TransitionHistogram::TransitionHistogram(HistogramSpec spec, double h_prime)
    : spec_(spec), h_prime_(h_prime), counts_(spec.s_bins * spec.h_bins, 0.0) {
    if (spec.s_bins == 0 || spec.h_bins == 0 || !(spec.s_max > 0.0))
        throw InvalidArgument("histogram spec needs positive bin counts and s_max");
}

std::size_t TransitionHistogram::h_bin(double h) const {
    const auto hi = static_cast<std::size_t>((std::clamp(h, -1.0, 1.0) + 1.0) * 0.5 * static_cast<double>(spec_.h_bins));
    return std::min(hi, spec_.h_bins - 1);
}

void TransitionHistogram::add(double s, double h) {
    ++total_;
    if (!(s < spec_.s_max)) {
        overflow_ += 1.0;
        return;
    }
    const auto si = static_cast<std::size_t>(std::max(0.0, s) / spec_.s_max * static_cast<double>(spec_.s_bins));
    counts_[std::min(si, spec_.s_bins - 1) * spec_.h_bins + h_bin(h)] += 1.0;
}

void TransitionHistogram::add_segment(double s_a, double s_b, double h) {
    double lo = std::max(0.0, std::min(s_a, s_b));
    const double hi = std::max(0.0, std::max(s_a, s_b));
    const double len = hi - lo;
    if (!(len > 1e-12 * std::max(1.0, hi))) {
        add(0.5 * (lo + hi), h);
        return;
    }
    ++total_;
    if (hi > spec_.s_max) {
        overflow_ += (hi - std::max(lo, spec_.s_max)) / len;
        if (lo >= spec_.s_max) return;
    }
    const double width = spec_.s_max / static_cast<double>(spec_.s_bins);
    const std::size_t hb = h_bin(h);
    auto si = std::min(static_cast<std::size_t>(lo / width), spec_.s_bins - 1);
    for (; si < spec_.s_bins && lo < hi && lo < spec_.s_max; ++si) {
        const double upper = std::min(hi, static_cast<double>(si + 1) * width);
        if (upper > lo) counts_[si * spec_.h_bins + hb] += (upper - lo) / len;
        lo = std::max(lo, upper);
    }
}

void TransitionHistogram::merge(const TransitionHistogram &other) {
    if (!(other.spec_ == spec_)) throw BinMismatch("merge: histogram specs differ");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    overflow_ += other.overflow_;
    total_ += other.total_;
    skipped += other.skipped;
}

std::vector<double> TransitionHistogram::s_edges() const {
    std::vector<double> e(spec_.s_bins + 1);
    for (std::size_t i = 0; i <= spec_.s_bins; ++i)
        e[i] = spec_.s_max * static_cast<double>(i) / static_cast<double>(spec_.s_bins);
    return e;
}

std::vector<double> TransitionHistogram::h_edges() const {
    std::vector<double> e(spec_.h_bins + 1);
    for (std::size_t i = 0; i <= spec_.h_bins; ++i)
        e[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(spec_.h_bins);
    return e;
}

std::vector<double> TransitionHistogram::masses() const {
    std::vector<double> m(counts_.size() + 1);
    std::copy(counts_.begin(), counts_.end(), m.begin());
    m.back() = overflow_;
    return m;
}

double total_variation(const TransitionHistogram &a, const TransitionHistogram &b) {
    if (!(a.spec() == b.spec())) throw BinMismatch("histograms use different grids");
    const auto ma = a.masses();
    const auto mb = b.masses();
    return total_variation(std::span<const double>(ma), std::span<const double>(mb));
}

double symmetry_distance(const TransitionHistogram &at, const TransitionHistogram &at_negated) {
    if (!(at.spec() == at_negated.spec())) throw BinMismatch("symmetry_distance: histograms use different grids");
    const HistogramSpec &sp = at.spec();
    TransitionHistogram mirrored(sp, -at_negated.h_prime());
    for (std::size_t si = 0; si < sp.s_bins; ++si)
        for (std::size_t hi = 0; hi < sp.h_bins; ++hi) mirrored.count(si, sp.h_bins - 1 - hi) = at_negated.count(si, hi);
    mirrored.set_overflow(at_negated.overflow());
    mirrored.set_total(at_negated.total());
    return total_variation(at, mirrored);
}

TransitionHistogram pushforward_histogram(double h_prime, std::uint64_t n, std::uint64_t seed,
                                          const ParallelOptions &par, const HistogramSpec &spec,
                                          PushforwardEstimator estimator) {
    if (n == 0) throw EmptyEnsemble("pushforward_histogram: n = 0");
    if (!(std::abs(h_prime) < 1.0)) throw InvalidArgument("pushforward_histogram: |h'| must be < 1");
    const auto parts =
        run_tasks<TransitionHistogram>(n, par, [&](std::uint64_t task, std::size_t begin, std::size_t end) {
            RngStream rng(seed, task, kTagPushforward);
            TransitionHistogram h(spec, h_prime);
            for (std::size_t i = begin; i < end; ++i) {
                const MuSample m = sample_mu(rng);
                if (estimator == PushforwardEstimator::sampled) {
                    const TransferResult t = transfer_asymptotic(m, h_prime);
                    h.add(t.s, t.h);
                    continue;
                }
                const double q_max = 1.0 / (2.0 - m.A - m.B);
                const TransferResult a = transfer_asymptotic(m.A, m.B, 0.0, m.parity, h_prime);
                const TransferResult b = transfer_asymptotic(m.A, m.B, q_max, m.parity, h_prime);
                h.add_segment(a.s, b.s, a.h);
            }
            return h;
        });
    TransitionHistogram out(spec, h_prime);
    for (const auto &p : parts) out.merge(p);
    out.seed = seed;
    return out;
}

TransitionHistogram young_histogram(double h_prime, ObstacleRadius r, std::uint64_t n_dirs, std::uint64_t seed,
                                    const ParallelOptions &par, const HistogramSpec &spec, AngleRange angles) {
    if (n_dirs == 0) throw EmptyEnsemble("young_histogram: n_dirs = 0");
    if (!(std::abs(h_prime) < 1.0)) throw InvalidArgument("young_histogram: |h'| must be < 1");
    const auto parts =
        run_tasks<TransitionHistogram>(n_dirs, par, [&](std::uint64_t task, std::size_t begin, std::size_t end) {
            RngStream rng(seed, task, kTagYoung);
            TransitionHistogram h(spec, h_prime);
            for (std::size_t i = begin; i < end; ++i) {
                const Vec2 omega = unit_from_angle(rng.uniform(angles.lo, angles.hi));
                try {
                    const ReducedDirection rd = reduce_direction(omega);
                    const double sign = rd.sign_flip;
                    const TransferResult t = transfer_exact(sign * h_prime, rd.canonical, r);
                    h.add(t.s, sign * t.h);
                } catch (const DegenerateDirection &) {
                    ++h.skipped;
                } catch (const NoCollisionWithinHorizon &) {
                    ++h.skipped;
                }
            }
            return h;
        });
    TransitionHistogram out(spec, h_prime);
    for (const auto &p : parts) out.merge(p);
    out.r = r.value();
    out.seed = seed;
    return out;
}

std::vector<double> pushforward_survival(double h_prime, std::uint64_t n, std::uint64_t seed,
                                         const std::vector<double> &thresholds, const ParallelOptions &par) {
    if (n == 0) throw EmptyEnsemble("pushforward_survival: n = 0");
    const auto parts =
        run_tasks<std::vector<std::uint64_t>>(n, par, [&](std::uint64_t task, std::size_t begin, std::size_t end) {
            RngStream rng(seed, task, kTagSurvival);
            std::vector<std::uint64_t> above(thresholds.size(), 0);
            for (std::size_t i = begin; i < end; ++i) {
                const double s = transfer_asymptotic(sample_mu(rng), h_prime).s;
                for (std::size_t k = 0; k < thresholds.size(); ++k) above[k] += s > thresholds[k] ? 1 : 0;
            }
            return above;
        });
    std::vector<double> out(thresholds.size(), 0.0);
    for (const auto &p : parts)
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += static_cast<double>(p[k]);
    for (auto &v : out) v /= static_cast<double>(n);
    return out;
}

} // namespace lorentz
