#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lorentz/csv.hpp"
#include "lorentz/errors.hpp"
#include "lorentz/kinetic.hpp"
#include "lorentz/stats.hpp"
#include "quadrature.hpp"

using namespace lorentz;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(InitialDensity, UniformDisk) {
    UniformDiskDensity f(2.0, {1.0, -1.0});
    RngStream rng(1, 0);
    double mean_r2 = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const PhasePoint p = f.sample(rng);
        const double d2 = dot(p.x - Vec2{1.0, -1.0}, p.x - Vec2{1.0, -1.0});
        ASSERT_LT(d2, 4.0);
        ASSERT_NEAR(norm(p.omega), 1.0, 1e-15);
        mean_r2 += d2;
    }
    // E|x-c|^2 = R^2 / 2.
    EXPECT_NEAR(mean_r2 / n, 2.0, 0.02);
    EXPECT_NEAR(f.density({1.0, -1.0}, 0.0), 1.0 / (4 * kPi * 2 * kPi), 1e-15);
    EXPECT_EQ(f.density({4.0, 0.0}, 0.0), 0.0);
    EXPECT_EQ(f.support_radius(), 2.0);
}

TEST(InitialDensity, BumpMoments) {
    BumpDensity f(1.0, {}, 0.8, 0.5);
    RngStream rng(2, 0);
    double mean_u = 0, mean_cos = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const PhasePoint p = f.sample(rng);
        mean_u += dot(p.x, p.x);
        mean_cos += std::cos(polar_angle(p.omega) - 0.5);
    }
    EXPECT_NEAR(mean_u / n, 0.25, 0.005);
    EXPECT_NEAR(mean_cos / n, 0.4, 0.01);
}

TEST(InitialDensity, DensityIntegratesToOne) {
    for (const char *name : {"uniform-disk", "bump"}) {
        const auto f = make_initial_density(name);
        const int m = 200;
        double total = 0;
        const double R = f->support_radius();
        const double dx = 2 * R / m, dt = 2 * kPi / 32;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < 32; ++k)
                    total += f->density({-R + (i + 0.5) * dx, -R + (j + 0.5) * dx}, (k + 0.5) * dt) * dx * dx * dt;
        EXPECT_NEAR(total, 1.0, 0.01) << name;
    }
    EXPECT_THROW(make_initial_density("gaussian"), InvalidArgument);
}

TEST(DensityGrid, BinsOverflowAndMismatch) {
    GridSpec spec{1.0, {}, 2, 2, 4};
    DensityGrid g(spec, 0.5);
    g.add({-0.5, 0.5}, {0.0, 1.0});
    g.add({3.0, 0.0}, {1.0, 0.0});
    EXPECT_EQ(g.weight(0, 1, 1), 1.0);
    EXPECT_EQ(g.overflow(), 1.0);
    EXPECT_EQ(g.mass(), 2.0);
    EXPECT_EQ(g.cells(), 16u);
    EXPECT_EQ(compare_densities(g, g), 0.0);
    DensityGrid later(spec, 0.7);
    EXPECT_THROW(compare_densities(g, later), BinMismatch);
    DensityGrid finer({1.0, {}, 4, 2, 4}, 0.5);
    EXPECT_THROW(compare_densities(g, finer), BinMismatch);
    EXPECT_THROW(g.merge(finer), BinMismatch);
    EXPECT_THROW(DensityGrid({0.0, {}, 2, 2, 2}, 0.0), InvalidArgument);
}

TEST(ResidualFlight, MatchesQuadratureOfTheDefiningIntegral) {
    const std::size_t ns = 16, nh = 16;
    const double s_max = 4.0;
    const auto expected = oracle::residual_flight_cells(ns, s_max, nh, 48);
    std::vector<double> observed(expected.size(), 0.0);
    RngStream rng(5, 0);
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const ChainState st = sample_residual_flight(rng);
        ASSERT_GT(st.s, 0.0);
        ASSERT_LE(std::abs(st.h), 1.0 + 1e-12);
        if (st.s >= s_max) {
            observed.back() += 1;
            continue;
        }
        const auto js = static_cast<std::size_t>(st.s / s_max * ns);
        const auto jh = std::min(nh - 1, static_cast<std::size_t>((st.h + 1) / 2 * nh));
        observed[js * nh + jh] += 1;
    }
    EXPECT_LT(total_variation(std::span<const double>(observed), std::span<const double>(expected)), 0.03);
}

TEST(InitialExtended, PositionsInSUnits) {
    UniformDiskDensity f(1.0);
    const auto ens = sample_initial_extended(f, 1000, 4);
    ASSERT_EQ(ens.size(), 1000u);
    for (const auto &st : ens) EXPECT_LT(norm(st.x), 1.0 / kMacroPerS);
    EXPECT_THROW(sample_initial_extended(f, 0, 4), EmptyEnsemble);
}

TEST(Solvers, TimeZeroRecoversInitialBinning) {
    UniformDiskDensity f(1.0);
    const auto init = bin_initial(f, 100000, 3);
    EXPECT_EQ(compare_densities(solve_limit(f, 0.0, 100000, 3), init), 0.0);
    EXPECT_EQ(compare_densities(lorentz_baseline(f, 0.0, 100000, 3), init), 0.0);
    EXPECT_EQ(compare_densities(free_transport(f, 0.0, 100000, 3), init), 0.0);
    DirectStats st;
    const auto direct = simulate_direct(f, ObstacleRadius(0.05), 0.0, 100000, 3, {}, {}, &st);
    EXPECT_LE(compare_densities(direct, init), static_cast<double>(st.rejections) / 100000.0 + 1e-12);
    EXPECT_GT(st.rejections, 0u);
    EXPECT_EQ(st.collisions, 0u);

    const GridSpec coarse{2.0, {}, 8, 8, 4};
    EXPECT_LT(compare_densities(solve_limit(f, 0.0, 200000, 7, coarse), bin_initial(f, 200000, 8, coarse)), 0.02);
}

TEST(Solvers, FreeTransportMovesEachParticle) {
    UniformDiskDensity f(0.5);
    const GridSpec spec{2.0, {}, 16, 16, 8};
    const auto moved = free_transport(f, 0.7, 20000, 5, spec);
    DensityGrid manual(spec, 0.7);
    // One chunk; the initial-condition stream of task 0 has tag 31.
    RngStream rng(5, 0, 31);
    for (int i = 0; i < 20000; ++i) {
        const PhasePoint p = f.sample(rng);
        manual.add(p.x + 0.7 * p.omega, p.omega);
    }
    EXPECT_EQ(compare_densities(moved, manual), 0.0);
}

TEST(Solvers, ShortTimesAgreeWithTransport) {
    // Before the first collision all dynamics are free transport; about
    // 1 - exp(-2t) of the particles have collided by time t.
    UniformDiskDensity f(1.0);
    const GridSpec spec{2.0, {}, 16, 16, 8};
    const double t = 0.01;
    const auto ref = free_transport(f, t, 200000, 2, spec);
    EXPECT_LT(compare_densities(solve_limit(f, t, 200000, 2, spec), ref), 0.03);
    EXPECT_LT(compare_densities(lorentz_baseline(f, t, 200000, 2, spec), ref), 0.03);
    EXPECT_LT(compare_densities(simulate_direct(f, ObstacleRadius(0.01), t, 200000, 2, spec), ref), 0.03);
}

TEST(Solvers, DirectApproachesLimitOnCoarseGrid) {
    UniformDiskDensity f(1.0);
    const GridSpec spec{3.0, {}, 8, 8, 8};
    const auto limit = solve_limit(f, 1.0, 400000, 11, spec);
    DirectStats st;
    const auto direct = simulate_direct(f, ObstacleRadius(0.01), 1.0, 200000, 12, spec, {}, &st);
    EXPECT_LT(compare_densities(direct, limit), 0.04);
    // Mean number of collisions per unit macroscopic time is 2.
    EXPECT_NEAR(static_cast<double>(st.collisions) / 200000.0, 2.0, 0.05);
    EXPECT_EQ(direct.solver, "direct");
    EXPECT_EQ(*direct.r, 0.01);
}

TEST(Solvers, WorkerCountDoesNotChangeResult) {
    UniformDiskDensity f(1.0);
    ParallelOptions one, four;
    four.workers = 4;
    one.chunk = four.chunk = 3000;
    EXPECT_EQ(simulate_direct(f, ObstacleRadius(0.02), 1.0, 20000, 6, {}, one).weights(),
              simulate_direct(f, ObstacleRadius(0.02), 1.0, 20000, 6, {}, four).weights());
    EXPECT_EQ(solve_limit(f, 1.0, 20000, 6, {}, one).weights(), solve_limit(f, 1.0, 20000, 6, {}, four).weights());
}

TEST(Solvers, RejectEmptyAndNegative) {
    UniformDiskDensity f(1.0);
    EXPECT_THROW(solve_limit(f, 1.0, 0, 1), EmptyEnsemble);
    EXPECT_THROW(simulate_direct(f, ObstacleRadius(0.1), 1.0, 0, 1), EmptyEnsemble);
    EXPECT_THROW(lorentz_baseline(f, -1.0, 10, 1), InvalidArgument);
}

TEST(Golden, LimitSolutionRegression) {
    // Uniform disk, t = 1, validated against simulate_direct before being frozen.
    UniformDiskDensity f(1.0);
    const auto g = solve_limit(f, 1.0, 20000, 2024);
    std::ostringstream os;
    write_density_csv(os, g);
    const std::string path = std::string(LORENTZ_TEST_DATA) + "/limit_uniform_disk_t1.csv";
    if (std::getenv("LORENTZ_REGENERATE_GOLDEN")) {
        std::ofstream(path) << os.str();
        GTEST_SKIP() << "regenerated " << path;
    }
    std::ifstream in(path);
    ASSERT_TRUE(in.good()) << path;
    std::stringstream want;
    want << in.rdbuf();
    EXPECT_EQ(os.str(), want.str());
}
