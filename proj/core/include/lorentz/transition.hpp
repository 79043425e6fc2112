#pragma once
/**
 * The limiting transition law P(s,h|h'): the image of the measure
 *
 *   dmu(A,B,Q,N) = 6/pi^2 1{0<A<1} 1{0<B<1-A} 1{0<Q<1/(2-A-B)} dA dB dQ / (1-A)
 *                  x (delta_{N=0} + delta_{N=1})
 *
 * under (A,B,Q,N) -> T_{A,B,Q,N}(h'), and its empirical counterpart, the
 * Young measure of omega -> T_r(h', omega) for uniformly random omega.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "lorentz/parallel.hpp"
#include "lorentz/rng.hpp"
#include "lorentz/transfer.hpp"

namespace lorentz {

struct MuSample {
    double A = 0.0;
    double B = 0.0;
    double Q = 0.0;
    int parity = 0;
};

bool in_support(const MuSample &m);

/// Density of mu with respect to dA dB dQ on one parity atom.
double mu_density(double A, double B, double Q);

/// Draw from the proposal A ~ U(0,1), B ~ U(0,1-A), Q ~ U(0, 1/(2-A-B)), N a
/// fair coin, with importance weight dmu/dproposal = (12/pi^2) / (2-A-B).
/// The weights average to the total mass of mu.
struct WeightedMuSample {
    MuSample sample;
    double weight = 0.0;
};
WeightedMuSample sample_mu_proposal(RngStream &rng);

/// Exact draw from mu: the proposal above accepted with probability
/// 1/(2-A-B) (the weight over its supremum 12/pi^2).
MuSample sample_mu(RngStream &rng);

inline TransferResult transfer_asymptotic(const MuSample &m, double h_prime) {
    return transfer_asymptotic(m.A, m.B, m.Q, m.parity, h_prime);
}

struct MuMassEstimate {
    double mass = 0.0;
    double std_error = 0.0;
    double parity0_fraction = 0.0;
    std::uint64_t n = 0;
};

/// Importance-sampling estimate of the total mass of mu (expected 1).
MuMassEstimate estimate_mu_mass(std::uint64_t n, std::uint64_t seed, const ParallelOptions &par = {});

struct HistogramSpec {
    std::size_t s_bins = 64;
    double s_max = 6.0;
    std::size_t h_bins = 64;

    friend bool operator==(const HistogramSpec &, const HistogramSpec &) = default;
};

/// Empirical law of (s, h) on [0, s_max) x [-1, 1] with an overflow bin for s >= s_max.
/// Counts are integral unless mass was spread with add_segment.
class TransitionHistogram {
public:
    TransitionHistogram() = default;
    TransitionHistogram(HistogramSpec spec, double h_prime);

    void add(double s, double h);
    /// One unit of mass spread uniformly over s in [s_a, s_b] (either order) at fixed h.
    void add_segment(double s_a, double s_b, double h);
    void merge(const TransitionHistogram &other);

    const HistogramSpec &spec() const { return spec_; }
    double h_prime() const { return h_prime_; }
    double count(std::size_t s_bin, std::size_t h_bin) const { return counts_[s_bin * spec_.h_bins + h_bin]; }
    double &count(std::size_t s_bin, std::size_t h_bin) { return counts_[s_bin * spec_.h_bins + h_bin]; }
    double overflow() const { return overflow_; }
    std::uint64_t total() const { return total_; }
    std::vector<double> s_edges() const;
    std::vector<double> h_edges() const;

    /// Bin masses (row-major s then h) followed by the overflow bin.
    std::vector<double> masses() const;

    // Provenance carried into CSV output.
    std::optional<double> r;
    std::uint64_t seed = 0;
    std::uint64_t skipped = 0;

    void set_overflow(double v) { overflow_ = v; }
    void set_total(std::uint64_t v) { total_ = v; }

private:
    std::size_t h_bin(double h) const;

    HistogramSpec spec_;
    double h_prime_ = 0.0;
    std::vector<double> counts_;
    double overflow_ = 0.0;
    std::uint64_t total_ = 0;
};

/// TV distance of two histograms on the same grid (BinMismatch otherwise).
double total_variation(const TransitionHistogram &a, const TransitionHistogram &b);

/// TV between `at` and the h -> -h mirror of `at_negated` (P(s,h|h') = P(s,-h|-h')).
double symmetry_distance(const TransitionHistogram &at, const TransitionHistogram &at_negated);

enum class PushforwardEstimator {
    /// One count per exact mu-draw.
    sampled,
    /// Q integrated out: given (A, B, N) the branch and h are fixed and s is affine
    /// in Q, so each draw deposits its conditional law, a uniform segment in s.
    conditional_q,
};

/// n mu-draws pushed through T_{A,B,Q,N}(h'). Throws EmptyEnsemble for n = 0.
TransitionHistogram pushforward_histogram(double h_prime, std::uint64_t n, std::uint64_t seed,
                                          const ParallelOptions &par = {}, const HistogramSpec &spec = {},
                                          PushforwardEstimator estimator = PushforwardEstimator::sampled);

/// Directions drawn uniformly with polar angle in [lo, hi).
struct AngleRange {
    double lo = 0.0;
    double hi = 6.283185307179586476925286766559;
};

/// Empirical Young measure: T_r(h', omega) for n_dirs uniform directions.
/// Degenerate or corridor directions are skipped and counted in `skipped`.
TransitionHistogram young_histogram(double h_prime, ObstacleRadius r, std::uint64_t n_dirs, std::uint64_t seed,
                                    const ParallelOptions &par = {}, const HistogramSpec &spec = {},
                                    AngleRange angles = {});

/// Fraction of the pushforward law with s > S for each threshold.
std::vector<double> pushforward_survival(double h_prime, std::uint64_t n, std::uint64_t seed,
                                         const std::vector<double> &thresholds, const ParallelOptions &par = {});

} // namespace lorentz
