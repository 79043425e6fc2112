// lorentz_cli: experiment driver for the periodic Lorentz gas lab.
//
// Every subcommand writes its CSV files into --out (created if missing), each
// with the full configuration in its metadata header, and prints one summary
// line on stdout. Exit status: 0 success, 1 bad configuration, 2 numeric failure.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lorentz/billiard.hpp"
#include "lorentz/chain.hpp"
#include "lorentz/contfrac.hpp"
#include "lorentz/csv.hpp"
#include "lorentz/errors.hpp"
#include "lorentz/kinetic.hpp"
#include "lorentz/rng.hpp"
#include "lorentz/stats.hpp"
#include "lorentz/transfer.hpp"
#include "lorentz/transition.hpp"

namespace fs = std::filesystem;
using namespace lorentz;

namespace {

constexpr const char *kVersion = "0.1.0";

/// Numeric failure: reported with exit status 2.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Common {
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string out = ".";
    double max_skip_fraction = 0.01;

    ParallelOptions par() const { return ParallelOptions{workers}; }
};

std::string format_long_double(long double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string join(const std::vector<std::string> &parts, char sep = ',') {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += sep;
        s += parts[i];
    }
    return s;
}

// CLI keys live under config. and result. so they never shadow the keys a
// histogram or density writer emits itself.
void append(CsvMeta &meta, const std::string &prefix, const CsvMeta &more) {
    for (const auto &[k, v] : more) meta.emplace_back(prefix + k, v);
}
void append_config(CsvMeta &meta, const CsvMeta &more) { append(meta, "config.", more); }
void append_result(CsvMeta &meta, const CsvMeta &more) { append(meta, "result.", more); }

CsvMeta base_meta(const std::string &command, const Common &c) {
    CsvMeta meta{{"program", "lorentz_cli"}, {"version", kVersion}, {"command", command}};
    append_config(meta, {{"seed", std::to_string(c.seed)},
                         {"workers", std::to_string(c.workers)},
                         {"max_skip_fraction", format_double(c.max_skip_fraction)}});
    return meta;
}

fs::path output_path(const Common &c, const std::string &name) {
    const fs::path dir(c.out);
    fs::create_directories(dir);
    return dir / name;
}

void check_skips(const std::string &what, std::uint64_t skipped, std::uint64_t total, double limit) {
    if (total == 0) return;
    const double frac = static_cast<double>(skipped) / static_cast<double>(total);
    if (frac > limit) {
        std::ostringstream os;
        os << what << ": skipped fraction " << frac << " exceeds --max-skip-fraction " << limit;
        throw NumericFailure(os.str());
    }
}

/// sqrt2-1 and golden are evaluated in extended precision; anything else is a decimal.
long double parse_alpha(const std::string &expr) {
    if (expr == "sqrt2-1") return std::sqrt(2.0L) - 1.0L;
    if (expr == "golden") return (std::sqrt(5.0L) - 1.0L) / 2.0L;
    std::size_t used = 0;
    long double v = 0.0L;
    try {
        v = std::stold(expr, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != expr.size()) throw InvalidArgument("--alpha-expr: expected sqrt2-1, golden or a decimal");
    return v;
}

std::string radius_tag(double r) { return "r" + format_double(r); }

// ---- cf ----

struct CfConfig {
    std::string alpha_expr = "sqrt2-1";
    double threshold = 1e-6;
    std::optional<double> r;
};

int run_cf(const CfConfig &cfg, const Common &c) {
    const long double alpha = parse_alpha(cfg.alpha_expr);
    const CFData cf = expand(alpha, cfg.threshold);
    std::optional<PartitionParams> pp;
    if (cfg.r) pp = partition_params(alpha, ObstacleRadius(*cfg.r));

    CsvMeta meta = base_meta("cf", c);
    append_config(meta, {{"alpha_expr", cfg.alpha_expr},
                         {"alpha", format_long_double(alpha)},
                         {"threshold", format_double(cfg.threshold)},
                         {"digit_column", "a_n with alpha = [0; a_0, a_1, ...]"}});
    if (pp) {
        append_config(meta, {{"r", format_double(*cfg.r)}});
        append_result(meta, {{"A", format_double(pp->A)},
                             {"B", format_double(pp->B)},
                             {"Q", format_double(pp->Q)},
                             {"N", std::to_string(pp->N)},
                             {"k", std::to_string(pp->k)},
                             {"eps", format_double(pp->eps)}});
    }
    const fs::path path = output_path(c, "cf.csv");
    write_file_atomic(path, [&](std::ostream &os) {
        write_meta(os, meta);
        os << "n,digit,p,q,d\n";
        for (std::size_t n = 0; n < cf.d.size(); ++n) {
            os << n << ',';
            if (n < cf.digits.size()) os << cf.digits[n];
            os << ',' << cf.p[n] << ',' << cf.q[n] << ',' << format_long_double(cf.d[n]) << '\n';
        }
    });
    std::cout << "cf alpha=" << format_long_double(alpha) << " terms=" << cf.d.size()
              << " d_last=" << format_long_double(cf.d.back());
    if (pp) std::cout << " A=" << pp->A << " B=" << pp->B << " Q=" << pp->Q << " N=" << pp->N;
    std::cout << " -> " << path.string() << '\n';
    return 0;
}

// ---- mu-check ----

struct MuConfig {
    std::uint64_t n = 1000000;
};

int run_mu_check(const MuConfig &cfg, const Common &c) {
    const MuMassEstimate est = estimate_mu_mass(cfg.n, c.seed, c.par());
    CsvMeta meta = base_meta("mu-check", c);
    append_config(meta, {{"n", std::to_string(cfg.n)}});
    const fs::path path = output_path(c, "mu_check.csv");
    write_file_atomic(path, [&](std::ostream &os) {
        write_meta(os, meta);
        os << "n,mass,std_error,parity0_fraction\n";
        os << est.n << ',' << format_double(est.mass) << ',' << format_double(est.std_error) << ','
           << format_double(est.parity0_fraction) << '\n';
    });
    std::cout << std::fixed << std::setprecision(4) << "mu mass " << est.mass << " +- " << est.std_error
              << " (n=" << est.n << ", parity0=" << est.parity0_fraction << ") -> " << path.string() << '\n';
    return 0;
}

// ---- transfer-compare ----

struct TransferConfig {
    std::vector<double> radii{1e-2, 3e-3, 1e-3};
    std::vector<double> h_primes{-0.5, 0.2, 0.9};
    std::uint64_t n = 100000;
    double theta_lo = 0.0;
    double theta_hi = std::numbers::pi / 4.0;
    double h_tol = 1e-8;
};

int run_transfer_compare(const TransferConfig &cfg, const Common &c) {
    std::vector<TransferSweep> sweeps;
    for (const double hp : cfg.h_primes)
        for (const double r : cfg.radii) {
            sweeps.push_back(compare_transfer(hp, ObstacleRadius(r), cfg.n, c.seed, cfg.theta_lo, cfg.theta_hi, c.par()));
            check_skips("transfer-compare", sweeps.back().skipped, cfg.n, c.max_skip_fraction);
        }

    // One slope per h' across the radii, plus the pooled slope of the per-r medians.
    std::vector<std::string> slopes;
    std::vector<double> pooled_median;
    double min_match = 1.0;
    for (std::size_t i = 0; i < cfg.h_primes.size(); ++i) {
        std::vector<double> med;
        for (std::size_t j = 0; j < cfg.radii.size(); ++j) {
            const auto &sw = sweeps[i * cfg.radii.size() + j];
            med.push_back(sw.median_s_error());
            min_match = std::min(min_match, sw.h_match_fraction(cfg.h_tol));
        }
        slopes.push_back(cfg.radii.size() >= 2 ? format_double(loglog_slope(cfg.radii, med)) : "nan");
    }
    for (std::size_t j = 0; j < cfg.radii.size(); ++j) {
        std::vector<double> err;
        for (std::size_t i = 0; i < cfg.h_primes.size(); ++i)
            for (const auto &s : sweeps[i * cfg.radii.size() + j].samples)
                err.push_back(std::abs(s.exact.s - s.asymptotic.s));
        pooled_median.push_back(median(std::move(err)));
    }
    const std::string pooled = cfg.radii.size() >= 2 ? format_double(loglog_slope(cfg.radii, pooled_median)) : "nan";

    CsvMeta meta = base_meta("transfer-compare", c);
    std::vector<std::string> rs, hs;
    for (const double r : cfg.radii) rs.push_back(format_double(r));
    for (const double h : cfg.h_primes) hs.push_back(format_double(h));
    append_config(meta, {{"r", join(rs, ';')},
                         {"h_prime", join(hs, ';')},
                         {"n", std::to_string(cfg.n)},
                         {"theta_lo", format_double(cfg.theta_lo)},
                         {"theta_hi", format_double(cfg.theta_hi)},
                         {"h_tol", format_double(cfg.h_tol)}});
    append_result(meta, {{"slope_per_h_prime", join(slopes, ';')},
                         {"slope_pooled", pooled},
                         {"min_h_match_fraction", format_double(min_match)}});

    const fs::path path = output_path(c, "transfer_compare.csv");
    write_file_atomic(path, [&](std::ostream &os) {
        write_meta(os, meta);
        os << "r,h_prime,theta,s_exact,s_asym,h_exact,h_asym,s_err,h_err\n";
        for (const auto &sw : sweeps)
            for (const auto &s : sw.samples)
                os << format_double(sw.r) << ',' << format_double(sw.h_prime) << ',' << format_double(s.theta) << ','
                   << format_double(s.exact.s) << ',' << format_double(s.asymptotic.s) << ','
                   << format_double(s.exact.h) << ',' << format_double(s.asymptotic.h) << ','
                   << format_double(std::abs(s.exact.s - s.asymptotic.s)) << ','
                   << format_double(std::abs(s.exact.h - s.asymptotic.h)) << '\n';
    });
    const fs::path summary = output_path(c, "transfer_compare_summary.csv");
    write_file_atomic(summary, [&](std::ostream &os) {
        write_meta(os, meta);
        os << "r,h_prime,samples,skipped,median_s_err,h_match_fraction\n";
        for (const auto &sw : sweeps)
            os << format_double(sw.r) << ',' << format_double(sw.h_prime) << ',' << sw.samples.size() << ','
               << sw.skipped << ',' << format_double(sw.median_s_error()) << ','
               << format_double(sw.h_match_fraction(cfg.h_tol)) << '\n';
    });
    std::cout << "transfer-compare slope=" << pooled << " slopes[h']=" << join(slopes, ';')
              << " min_h_match=" << min_match << " -> " << path.string() << '\n';
    return 0;
}

// ---- transition ----

struct TransitionConfig {
    double h_prime = 0.3;
    std::vector<double> radii;
    std::uint64_t n = 1000000;
    std::uint64_t n_dirs = 0; // 0: same as n
    std::string estimator = "sampled";
    HistogramSpec spec;
};

int run_transition(const TransitionConfig &cfg, const Common &c) {
    const PushforwardEstimator est =
        cfg.estimator == "conditional-q" ? PushforwardEstimator::conditional_q : PushforwardEstimator::sampled;
    const std::uint64_t n_dirs = cfg.n_dirs ? cfg.n_dirs : cfg.n;
    const TransitionHistogram push = pushforward_histogram(cfg.h_prime, cfg.n, c.seed, c.par(), cfg.spec, est);
    const TransitionHistogram mirror =
        pushforward_histogram(-cfg.h_prime, cfg.n, c.seed + 1, c.par(), cfg.spec, est);
    const double sym = symmetry_distance(push, mirror);

    std::vector<TransitionHistogram> young;
    std::vector<double> tv;
    for (const double r : cfg.radii) {
        young.push_back(young_histogram(cfg.h_prime, ObstacleRadius(r), n_dirs, c.seed, c.par(), cfg.spec));
        check_skips("transition", young.back().skipped, n_dirs, c.max_skip_fraction);
        tv.push_back(total_variation(young.back(), push));
    }

    CsvMeta meta = base_meta("transition", c);
    std::vector<std::string> rs;
    for (const double r : cfg.radii) rs.push_back(format_double(r));
    append_config(meta, {{"h_prime", format_double(cfg.h_prime)},
                         {"radii", join(rs, ';')},
                         {"n", std::to_string(cfg.n)},
                         {"n_dirs", std::to_string(n_dirs)},
                         {"estimator", cfg.estimator},
                         {"mirror_seed", std::to_string(c.seed + 1)}});

    const auto write_hist = [&](const std::string &name, const TransitionHistogram &h, const std::string &kind) {
        CsvMeta m = meta;
        append_result(m, {{"histogram", kind}});
        write_file_atomic(output_path(c, name), [&](std::ostream &os) { write_histogram_csv(os, h, m); });
    };
    write_hist("transition_pushforward.csv", push, "pushforward");
    write_hist("transition_pushforward_mirror.csv", mirror, "pushforward-mirror");
    for (std::size_t i = 0; i < young.size(); ++i)
        write_hist("transition_young_" + radius_tag(cfg.radii[i]) + ".csv", young[i], "young");

    const fs::path summary = output_path(c, "transition_summary.csv");
    write_file_atomic(summary, [&](std::ostream &os) {
        write_meta(os, meta);
        os << "kind,r,tv,skipped\n";
        os << "symmetry,," << format_double(sym) << ",0\n";
        for (std::size_t i = 0; i < young.size(); ++i)
            os << "young_vs_pushforward," << format_double(cfg.radii[i]) << ',' << format_double(tv[i]) << ','
               << young[i].skipped << '\n';
    });
    std::cout << "transition h'=" << cfg.h_prime << " symmetry_tv=" << sym;
    for (std::size_t i = 0; i < tv.size(); ++i) std::cout << " tv[r=" << cfg.radii[i] << "]=" << tv[i];
    std::cout << " -> " << summary.string() << '\n';
    return 0;
}

// ---- independence ----

struct IndependenceConfig {
    std::vector<double> radii{1e-1, 1e-2};
    int steps = 4;
    std::uint64_t n = 100000;
};

int run_independence(const IndependenceConfig &cfg, const Common &c) {
    const IndependenceReport rep = independence_stats(cfg.radii, cfg.steps, cfg.n, c.seed, c.par());
    for (const auto &row : rep.rows) check_skips("independence", row.skipped, cfg.n, c.max_skip_fraction);

    CsvMeta meta = base_meta("independence", c);
    std::vector<std::string> rs;
    for (const double r : cfg.radii) rs.push_back(format_double(r));
    append_config(meta, {{"radii", join(rs, ';')}, {"steps", std::to_string(cfg.steps)}, {"n", std::to_string(cfg.n)}});
    const fs::path path = output_path(c, "independence.csv");
    write_file_atomic(path, [&](std::ostream &os) {
        write_meta(os, meta);
        os << "r,step,marginal_tv,pair_tv,samples,skipped\n";
        for (const auto &row : rep.rows)
            os << format_double(row.r) << ',' << row.step << ',' << format_double(row.marginal_tv) << ','
               << format_double(row.pair_tv) << ',' << row.samples << ',' << row.skipped << '\n';
    });
    double worst_marginal = 0.0, worst_pair = 0.0;
    for (const auto &row : rep.rows) {
        worst_marginal = std::max(worst_marginal, row.marginal_tv);
        if (!std::isnan(row.pair_tv)) worst_pair = std::max(worst_pair, row.pair_tv);
    }
    std::cout << "independence rows=" << rep.rows.size() << " max_marginal_tv=" << worst_marginal
              << " max_pair_tv=" << worst_pair << " -> " << path.string() << '\n';
    return 0;
}

// ---- evolve ----

struct EvolveConfig {
    std::vector<std::string> solvers{"direct", "limit", "lorentz"};
    std::vector<double> radii{5e-2, 1e-2, 5e-3};
    double t = 1.0;
    std::uint64_t n = 100000;
    std::uint64_t limit_n = 0; // 0: same as n
    std::string initial = "uniform-disk";
    GridSpec grid;
    double max_collisions = 1e10;
};

int run_evolve(const EvolveConfig &cfg, const Common &c) {
    const std::uint64_t limit_n = cfg.limit_n ? cfg.limit_n : cfg.n;
    // Every scattering solver makes about 2 collisions per unit of macroscopic time.
    double budget = 0.0;
    for (const auto &s : cfg.solvers) {
        if (s == "direct") budget += 2.0 * cfg.t * static_cast<double>(cfg.n) * static_cast<double>(cfg.radii.size());
        if (s == "limit") budget += 2.0 * cfg.t * static_cast<double>(limit_n);
        if (s == "lorentz") budget += 2.0 * cfg.t * static_cast<double>(cfg.n);
    }
    if (budget > cfg.max_collisions) {
        std::ostringstream os;
        os << "evolve: about " << budget << " collision events exceed --max-collisions " << cfg.max_collisions;
        throw InvalidArgument(os.str());
    }
    const auto f_in = make_initial_density(cfg.initial);

    struct Named {
        std::string label;
        DensityGrid grid;
    };
    std::vector<Named> grids;
    std::uint64_t collisions = 0;
    for (const auto &s : cfg.solvers) {
        if (s == "direct") {
            for (const double r : cfg.radii) {
                DirectStats st;
                grids.push_back({"direct_" + radius_tag(r),
                                 simulate_direct(*f_in, ObstacleRadius(r), cfg.t, cfg.n, c.seed, cfg.grid, c.par(), &st)});
                collisions += st.collisions;
            }
        } else if (s == "limit") {
            grids.push_back({"limit", solve_limit(*f_in, cfg.t, limit_n, c.seed, cfg.grid, c.par())});
        } else if (s == "lorentz") {
            grids.push_back({"lorentz", lorentz_baseline(*f_in, cfg.t, cfg.n, c.seed, cfg.grid, c.par())});
        } else if (s == "transport") {
            grids.push_back({"transport", free_transport(*f_in, cfg.t, cfg.n, c.seed, cfg.grid, c.par())});
        }
    }

    CsvMeta meta = base_meta("evolve", c);
    std::vector<std::string> rs;
    for (const double r : cfg.radii) rs.push_back(format_double(r));
    append_config(meta, {{"solvers", join(cfg.solvers, ';')},
                         {"radii", join(rs, ';')},
                         {"t", format_double(cfg.t)},
                         {"n", std::to_string(cfg.n)},
                         {"limit_n", std::to_string(limit_n)},
                         {"initial", cfg.initial},
                         {"max_collisions", format_double(cfg.max_collisions)}});
    for (const auto &g : grids)
        write_file_atomic(output_path(c, "evolve_" + g.label + ".csv"),
                          [&](std::ostream &os) { write_density_csv(os, g.grid, meta); });

    const fs::path summary = output_path(c, "evolve_summary.csv");
    std::string headline;
    write_file_atomic(summary, [&](std::ostream &os) {
        CsvMeta m = meta;
        append_result(m, {{"direct_collisions", std::to_string(collisions)}});
        write_meta(os, m);
        os << "a,b,tv\n";
        for (std::size_t i = 0; i < grids.size(); ++i)
            for (std::size_t j = i + 1; j < grids.size(); ++j)
                os << grids[i].label << ',' << grids[j].label << ','
                   << format_double(compare_densities(grids[i].grid, grids[j].grid)) << '\n';
    });
    std::cout << "evolve t=" << cfg.t << " n=" << cfg.n;
    for (const auto &g : grids) {
        if (g.label.rfind("direct_", 0) != 0) continue;
        for (const auto &ref : grids)
            if (ref.label == "limit") std::cout << " tv[" << g.label << ",limit]=" << compare_densities(g.grid, ref.grid);
    }
    std::cout << " -> " << summary.string() << '\n';
    return 0;
}

// ---- jump ----

struct JumpConfig {
    double t = 20.0;
};

int run_jump(const JumpConfig &cfg, const Common &c) {
    constexpr std::uint64_t kTagCliJump = 41;
    RngStream rng(c.seed, 0, kTagCliJump);
    ChainState init = sample_residual_flight(rng);
    init.x = {0.0, 0.0};
    init.omega = unit_from_angle(rng.uniform(0.0, 2.0 * std::numbers::pi));
    const JumpTrajectory traj = jump_evolve(init, cfg.t, rng);

    CsvMeta meta = base_meta("jump", c);
    append_config(meta, {{"t", format_double(cfg.t)}, {"units", "s"}});
    const fs::path path = output_path(c, "jump.csv");
    write_file_atomic(path, [&](std::ostream &os) {
        write_meta(os, meta);
        os << "t,x,y,omega_x,omega_y,s,h\n";
        for (const auto &e : traj.events)
            os << format_double(e.t) << ',' << format_double(e.state.x.x) << ',' << format_double(e.state.x.y) << ','
               << format_double(e.state.omega.x) << ',' << format_double(e.state.omega.y) << ','
               << format_double(e.state.s) << ',' << format_double(e.state.h) << '\n';
    });
    std::cout << "jump t=" << cfg.t << " events=" << traj.events.size() << " -> " << path.string() << '\n';
    return 0;
}

void add_common(CLI::App *sub, Common &c) {
    sub->add_option("--seed", c.seed, "64-bit seed")->capture_default_str();
    sub->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--max-skip-fraction", c.max_skip_fraction,
                    "numeric failure when more samples than this fraction are skipped")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
}

void add_histogram_spec(CLI::App *sub, HistogramSpec &spec) {
    sub->add_option("--s-bins", spec.s_bins)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--h-bins", spec.h_bins)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--s-max", spec.s_max)->check(CLI::PositiveNumber)->capture_default_str();
}

void add_grid_spec(CLI::App *sub, GridSpec &grid) {
    sub->add_option("--half-width", grid.half_width)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--nx", grid.nx)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--ny", grid.ny)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--ntheta", grid.ntheta)->check(CLI::PositiveNumber)->capture_default_str();
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Periodic Lorentz gas numerical lab"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Common common;
    std::function<int()> action;

    CfConfig cf;
    auto *cf_cmd = app.add_subcommand("cf", "continued-fraction digits, convergents and errors");
    cf_cmd->add_option("--alpha-expr", cf.alpha_expr, "sqrt2-1, golden or a decimal in (0,1)")->capture_default_str();
    cf_cmd->add_option("--threshold", cf.threshold, "stop at the first d_n <= threshold")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cf_cmd->add_option("--r", cf.r, "also print the partition parameters at this radius");
    add_common(cf_cmd, common);
    cf_cmd->callback([&] { action = [&] { return run_cf(cf, common); }; });

    MuConfig mu;
    auto *mu_cmd = app.add_subcommand("mu-check", "mass of the partition-parameter measure");
    mu_cmd->add_option("--n", mu.n)->check(CLI::PositiveNumber)->capture_default_str();
    add_common(mu_cmd, common);
    mu_cmd->callback([&] { action = [&] { return run_mu_check(mu, common); }; });

    TransferConfig tc;
    auto *tc_cmd = app.add_subcommand("transfer-compare", "exact vs asymptotic transfer map");
    tc_cmd->add_option("--r", tc.radii, "obstacle radii")->check(CLI::Range(1e-12, 0.35))->capture_default_str();
    tc_cmd->add_option("--hprime", tc.h_primes, "incoming impact parameters")
        ->check(CLI::Range(-0.999999, 0.999999))
        ->capture_default_str();
    tc_cmd->add_option("--n", tc.n, "directions per (r, h')")->check(CLI::PositiveNumber)->capture_default_str();
    tc_cmd->add_option("--theta-lo", tc.theta_lo)->capture_default_str();
    tc_cmd->add_option("--theta-hi", tc.theta_hi)->capture_default_str();
    tc_cmd->add_option("--h-tol", tc.h_tol, "h match tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    add_common(tc_cmd, common);
    tc_cmd->callback([&] { action = [&] { return run_transfer_compare(tc, common); }; });

    TransitionConfig tr;
    auto *tr_cmd = app.add_subcommand("transition", "pushforward and Young-measure histograms of (s, h)");
    tr_cmd->add_option("--hprime", tr.h_prime)->check(CLI::Range(-0.999999, 0.999999))->capture_default_str();
    tr_cmd->add_option("--r", tr.radii, "radii for Young-measure histograms")->check(CLI::Range(1e-12, 0.35));
    tr_cmd->add_option("--n", tr.n, "pushforward draws")->check(CLI::PositiveNumber)->capture_default_str();
    tr_cmd->add_option("--n-dirs", tr.n_dirs, "directions per radius (default: --n)");
    tr_cmd->add_option("--estimator", tr.estimator)
        ->check(CLI::IsMember({"sampled", "conditional-q"}))
        ->capture_default_str();
    add_histogram_spec(tr_cmd, tr.spec);
    add_common(tr_cmd, common);
    tr_cmd->callback([&] { action = [&] { return run_transition(tr, common); }; });

    IndependenceConfig ind;
    auto *ind_cmd = app.add_subcommand("independence", "independence of successive partition parameters");
    ind_cmd->add_option("--r", ind.radii)->check(CLI::Range(1e-12, 0.35))->capture_default_str();
    ind_cmd->add_option("--steps", ind.steps)->check(CLI::PositiveNumber)->capture_default_str();
    ind_cmd->add_option("--n", ind.n)->check(CLI::PositiveNumber)->capture_default_str();
    add_common(ind_cmd, common);
    ind_cmd->callback([&] { action = [&] { return run_independence(ind, common); }; });

    EvolveConfig ev;
    auto *ev_cmd = app.add_subcommand("evolve", "direct billiard vs kinetic solvers at time t");
    ev_cmd->add_option("--solver", ev.solvers)
        ->check(CLI::IsMember({"direct", "limit", "lorentz", "transport"}))
        ->capture_default_str();
    ev_cmd->add_option("--r", ev.radii, "radii for the direct solver")
        ->check(CLI::Range(1e-12, 0.35))
        ->capture_default_str();
    ev_cmd->add_option("--t", ev.t)->check(CLI::NonNegativeNumber)->capture_default_str();
    ev_cmd->add_option("--n", ev.n)->check(CLI::PositiveNumber)->capture_default_str();
    ev_cmd->add_option("--limit-n", ev.limit_n, "particles for the limit solver (default: --n)");
    ev_cmd->add_option("--initial", ev.initial)
        ->check(CLI::IsMember({"uniform-disk", "bump"}))
        ->capture_default_str();
    ev_cmd->add_option("--max-collisions", ev.max_collisions, "collision budget for the run")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_grid_spec(ev_cmd, ev.grid);
    add_common(ev_cmd, common);
    ev_cmd->callback([&] { action = [&] { return run_evolve(ev, common); }; });

    JumpConfig jp;
    auto *jp_cmd = app.add_subcommand("jump", "one trajectory of the (x, omega, s, h) jump process");
    jp_cmd->add_option("--t", jp.t, "horizon in s-units")->check(CLI::PositiveNumber)->capture_default_str();
    add_common(jp_cmd, common);
    jp_cmd->callback([&] { action = [&] { return run_jump(jp, common); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    try {
        return action();
    } catch (const InvalidArgument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericFailure &e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 2;
    } catch (const Error &e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
