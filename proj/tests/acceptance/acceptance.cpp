// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   lorentz_acceptance --cli <path to lorentz_cli> [--workers N] [--only name]

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <unistd.h>
#include <vector>

#include "lorentz/billiard.hpp"
#include "lorentz/contfrac.hpp"
#include "lorentz/errors.hpp"
#include "lorentz/kinetic.hpp"
#include "lorentz/rng.hpp"
#include "lorentz/stats.hpp"
#include "lorentz/transfer.hpp"
#include "lorentz/transition.hpp"
#include "cf_exact.hpp"
#include "quadrature.hpp"
#include "ray_tracer.hpp"

namespace fs = std::filesystem;
using namespace lorentz;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double max_seconds;
    std::function<Outcome()> run;
};

std::string fmt(double v, int precision = 4) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

ParallelOptions g_par;

Outcome mu_normalization() {
    const MuMassEstimate est = estimate_mu_mass(1'000'000, 7, g_par);
    const double quad = oracle::mu_mass();
    const bool pass = std::abs(est.mass - 1.0) <= 0.005 && std::abs(quad - 1.0) <= 1e-6;
    return {pass, "mc mass " + fmt(est.mass, 6) + " +- " + fmt(est.std_error, 2) + ", quadrature " + fmt(quad, 10)};
}

Outcome transfer_map_scaling() {
    const std::vector<double> radii{1e-2, 3e-3, 1e-3};
    const std::vector<double> h_primes{-0.5, 0.2, 0.9};
    bool pass = true;
    std::ostringstream os;
    std::vector<double> pooled(radii.size());
    std::vector<std::vector<double>> errors(radii.size());
    for (const double hp : h_primes) {
        std::vector<double> med;
        for (std::size_t j = 0; j < radii.size(); ++j) {
            const TransferSweep sw =
                compare_transfer(hp, ObstacleRadius(radii[j]), 100'000, 11, 0.0, std::numbers::pi / 4, g_par);
            med.push_back(sw.median_s_error());
            const double match = sw.h_match_fraction(1e-8);
            pass = pass && match >= 0.99 && sw.samples.size() + sw.skipped == 100'000;
            os << "h'=" << hp << " r=" << radii[j] << " match=" << fmt(match, 6) << " skipped=" << sw.skipped
               << "; ";
            for (const auto &c : sw.samples) errors[j].push_back(std::abs(c.exact.s - c.asymptotic.s));
        }
        const double slope = loglog_slope(radii, med);
        pass = pass && std::abs(slope - 2.0) <= 0.3;
        os << "slope[h'=" << hp << "]=" << fmt(slope) << "; ";
    }
    for (std::size_t j = 0; j < radii.size(); ++j) pooled[j] = median(std::move(errors[j]));
    os << "pooled slope=" << fmt(loglog_slope(radii, pooled));
    return {pass, os.str()};
}

Outcome young_measure_limit() {
    const std::vector<double> radii{1e-1, 1e-2, 1e-3};
    bool pass = true;
    std::ostringstream os;
    for (const double hp : {-0.5, 0.0, 0.5}) {
        const TransitionHistogram push =
            pushforward_histogram(hp, 1'000'000, 21, g_par, {}, PushforwardEstimator::conditional_q);
        std::vector<double> tv;
        for (const double r : radii) {
            const TransitionHistogram y = young_histogram(hp, ObstacleRadius(r), 1'000'000, 22, g_par);
            tv.push_back(total_variation(y, push));
        }
        const bool decreasing = tv[0] > tv[1] && tv[1] > tv[2];
        pass = pass && decreasing && tv[2] < 0.03;
        os << "h'=" << hp << " tv=" << fmt(tv[0]) << "," << fmt(tv[1]) << "," << fmt(tv[2]) << "; ";
    }
    return {pass, os.str()};
}

Outcome transition_symmetry() {
    bool pass = true;
    std::ostringstream os;
    for (const double hp : {0.3, 0.7}) {
        const auto a = pushforward_histogram(hp, 1'000'000, 31, g_par, {}, PushforwardEstimator::conditional_q);
        const auto b = pushforward_histogram(-hp, 1'000'000, 32, g_par, {}, PushforwardEstimator::conditional_q);
        const double d = symmetry_distance(a, b);
        pass = pass && d < 0.02;
        os << "h'=" << hp << " tv=" << fmt(d) << "; ";
    }
    return {pass, os.str()};
}

Outcome gamma_plus_invariance() {
    const InvarianceCheck c = gamma_invariance(ObstacleRadius(0.1), 1'000'000, 41, 32, 32, g_par);
    return {c.tv_mapped < 0.02 && c.skipped == 0, "tv(image)=" + fmt(c.tv_mapped) +
                                                      " tv(draws)=" + fmt(c.tv_initial) +
                                                      " skipped=" + std::to_string(c.skipped)};
}

Outcome kinetic_limit_trend() {
    const UniformDiskDensity f_in;
    constexpr std::uint64_t kN = 1'000'000;
    constexpr std::uint64_t kSeed = 51;
    const DensityGrid reference = solve_limit(f_in, 1.0, 16 * kN, kSeed, {}, g_par);
    std::vector<double> tv;
    std::ostringstream os;
    for (const double r : {5e-2, 1e-2, 5e-3}) {
        const DensityGrid d = simulate_direct(f_in, ObstacleRadius(r), 1.0, kN, kSeed, {}, g_par);
        tv.push_back(compare_densities(d, reference));
        os << "tv[r=" << r << "]=" << fmt(tv.back()) << " ";
    }
    const bool trend = tv[0] > tv[1] && tv[1] > tv[2] && tv[2] < 0.05;

    // Negative control at r = 5e-3 with n and 2n particles.
    double control[2];
    for (int k = 0; k < 2; ++k) {
        const std::uint64_t n = kN << k;
        const DensityGrid d = simulate_direct(f_in, ObstacleRadius(5e-3), 1.0, n, kSeed + 1, {}, g_par);
        const DensityGrid b = lorentz_baseline(f_in, 1.0, n, kSeed + 1, {}, g_par);
        control[k] = compare_densities(d, b);
    }
    const bool negative = control[0] > 0.0 && control[1] >= 0.8 * control[0];
    os << "lorentz control n=" << fmt(control[0]) << " 2n=" << fmt(control[1]);
    return {trend && negative, os.str()};
}

Outcome oracle_equivalence() {
    RngStream rng(61, 0);
    int cf_bad = 0, cf_checked = 0;
    double worst_d = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const long double alpha = rng.uniform_open();
        CFData cf;
        try {
            cf = expand(alpha, 1e-6L);
        } catch (const RationalSlope &) {
            ++cf_bad;
            continue;
        }
        const oracle::ExactCF ex = oracle::expand_exact(alpha, 1e-6L);
        ++cf_checked;
        bool ok = cf.digits.size() == ex.digits.size() && cf.d.size() == ex.d.size();
        for (std::size_t n = 0; ok && n < cf.digits.size(); ++n) ok = cf.digits[n] == ex.digits[n];
        for (std::size_t n = 0; ok && n < cf.d.size(); ++n) {
            ok = cf.p[n] == ex.p[n] && cf.q[n] == ex.q[n];
            const double err = static_cast<double>(std::abs(cf.d[n] - oracle::to_ld(ex.d[n])));
            worst_d = std::max(worst_d, err);
            ok = ok && err <= 1e-12;
        }
        cf_bad += ok ? 0 : 1;
    }

    int tr_bad = 0;
    double worst_t = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double r = std::exp(rng.uniform(std::log(1e-3), std::log(0.3)));
        const double hp = rng.uniform(-0.999, 0.999);
        const Vec2 w = unit_from_angle(rng.uniform(0.0, 2.0 * std::numbers::pi));
        const auto o = oracle::transfer(hp, w.x, w.y, r, 1e6L);
        TransferResult t;
        try {
            t = transfer_exact(hp, w, ObstacleRadius(r));
        } catch (const Error &) {
            tr_bad += o ? 1 : 0;
            continue;
        }
        if (!o) {
            ++tr_bad;
            continue;
        }
        const double err = std::max(std::abs(t.s - static_cast<double>(o->first)),
                                    std::abs(t.h - static_cast<double>(o->second)));
        worst_t = std::max(worst_t, err);
        tr_bad += err <= 1e-10 ? 0 : 1;
    }
    return {cf_bad == 0 && tr_bad == 0 && cf_checked == 1000,
            "cf mismatches " + std::to_string(cf_bad) + "/1000 (max d err " + fmt(worst_d, 3) +
                "), transfer mismatches " + std::to_string(tr_bad) + "/1000 (max err " + fmt(worst_t, 3) + ")"};
}

std::string read_bytes(const fs::path &p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism(const std::string &cli) {
    if (cli.empty()) return {false, "no --cli path given"};
    const std::vector<std::string> commands{
        "cf --alpha-expr sqrt2-1 --threshold 1e-6 --r 0.01",
        "cf --alpha-expr golden --threshold 1e-9",
        "mu-check --n 100000 --seed 7",
        "transfer-compare --r 1e-2 --r 1e-3 --hprime 0.2 --n 3000 --seed 7",
        "transition --hprime 0.3 --r 0.05 --n 50000 --estimator conditional-q --seed 3",
        "independence --r 0.1 --steps 3 --n 5000 --seed 4",
        "evolve --solver direct --solver limit --solver lorentz --solver transport --r 0.05 --n 20000 --seed 5",
        "jump --t 50 --seed 6",
    };
    const fs::path root = fs::temp_directory_path() / ("lorentz_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    int differing = 0, failed = 0, files = 0;
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::vector<std::vector<std::pair<std::string, std::string>>> runs(2);
        // Both runs use the same output path, since stdout names it.
        const fs::path dir = root / ("cmd" + std::to_string(c));
        const fs::path log = root / "stdout.txt";
        for (int k = 0; k < 2; ++k) {
            fs::remove_all(dir);
            fs::create_directories(dir);
            const std::string cmd = "\"" + cli + "\" " + commands[c] + " --workers 2 --out \"" + dir.string() +
                                    "\" > \"" + log.string() + "\" 2>&1";
            if (std::system(cmd.c_str()) != 0) ++failed;
            runs[k].emplace_back("<stdout>", read_bytes(log));
            for (const auto &e : fs::directory_iterator(dir))
                runs[k].emplace_back(e.path().filename().string(), read_bytes(e.path()));
            std::sort(runs[k].begin(), runs[k].end());
        }
        files += static_cast<int>(runs[0].size()) - 1;
        differing += runs[0] == runs[1] ? 0 : 1;
    }
    fs::remove_all(root);
    return {differing == 0 && failed == 0,
            std::to_string(commands.size()) + " commands, " + std::to_string(files) + " files per run, " +
                std::to_string(differing) + " differing, " + std::to_string(failed) + " failed runs"};
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"acceptance criteria"};
    std::string cli;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::string only;
    app.add_option("--cli", cli, "path to lorentz_cli");
    app.add_option("--workers", workers);
    app.add_option("--only", only, "run a single criterion");
    CLI11_PARSE(app, argc, argv);
    g_par.workers = workers;

    const std::vector<Criterion> criteria{
        {"mu_normalization", 60, mu_normalization},
        {"transfer_map_scaling", 600, transfer_map_scaling},
        {"young_measure_limit", 1200, young_measure_limit},
        {"transition_symmetry", 1200, transition_symmetry},
        {"gamma_plus_invariance", 1200, gamma_plus_invariance},
        {"kinetic_limit_trend", 3600, kinetic_limit_trend},
        {"oracle_equivalence", 1200, oracle_equivalence},
        {"cli_determinism", 1200, [&] { return cli_determinism(cli); }},
    };

    int failures = 0;
    for (const auto &c : criteria) {
        if (!only.empty() && c.name != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.max_seconds;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::cout << (pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << " [" << fmt(secs, 3) << " s"
                  << (in_time ? "" : ", over the " + fmt(c.max_seconds) + " s budget") << "]" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
