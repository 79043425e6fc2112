#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <numbers>

#include "lorentz/billiard.hpp"
#include "lorentz/contfrac.hpp"
#include "lorentz/errors.hpp"
#include "lorentz/kinetic.hpp"
#include "lorentz/rng.hpp"
#include "lorentz/transfer.hpp"
#include "lorentz/transition.hpp"

using namespace lorentz;

namespace {

// Free flight from a random point of the unit cell; range(0) is 1/r.
void BM_Flight(benchmark::State &state) {
    const ObstacleRadius r(1.0 / static_cast<double>(state.range(0)));
    RngStream rng(1, 0, 1);
    std::int64_t misses = 0;
    for (auto _ : state) {
        PhasePoint p{{rng.uniform(0.4, 0.6), rng.uniform(0.4, 0.6)}, unit_from_angle(rng.uniform(0.0, 2.0 * std::numbers::pi))};
        try {
            benchmark::DoNotOptimize(flight(p, r));
        } catch (const NoCollisionWithinHorizon &) {
            ++misses;
        }
    }
    state.counters["misses"] = static_cast<double>(misses);
}
BENCHMARK(BM_Flight)->Arg(10)->Arg(100)->Arg(1000);

void BM_PartitionParams(benchmark::State &state) {
    const ObstacleRadius r(1.0 / static_cast<double>(state.range(0)));
    RngStream rng(1, 0, 2);
    for (auto _ : state) benchmark::DoNotOptimize(partition_params(std::tan(rng.uniform(0.01, 0.78)), r));
}
BENCHMARK(BM_PartitionParams)->Arg(100)->Arg(10000);

void BM_SampleMu(benchmark::State &state) {
    RngStream rng(1, 0, 3);
    for (auto _ : state) benchmark::DoNotOptimize(sample_mu(rng));
}
BENCHMARK(BM_SampleMu);

void BM_TransferExact(benchmark::State &state) {
    const ObstacleRadius r(1.0 / static_cast<double>(state.range(0)));
    RngStream rng(1, 0, 4);
    std::int64_t misses = 0;
    for (auto _ : state) {
        try {
            benchmark::DoNotOptimize(
                transfer_exact(rng.uniform(-0.9, 0.9), unit_from_angle(rng.uniform(0.01, 0.78)), r));
        } catch (const NoCollisionWithinHorizon &) {
            ++misses;
        }
    }
    state.counters["misses"] = static_cast<double>(misses);
}
BENCHMARK(BM_TransferExact)->Arg(100)->Arg(1000);

void BM_TransferAsymptotic(benchmark::State &state) {
    const ObstacleRadius r(1e-3);
    RngStream rng(1, 0, 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            transfer_asymptotic(rng.uniform(-0.9, 0.9), unit_from_angle(rng.uniform(0.01, 0.78)), r));
}
BENCHMARK(BM_TransferAsymptotic);

void BM_ResidualFlight(benchmark::State &state) {
    RngStream rng(1, 0, 6);
    for (auto _ : state) benchmark::DoNotOptimize(sample_residual_flight(rng));
}
BENCHMARK(BM_ResidualFlight);

} // namespace

BENCHMARK_MAIN();
