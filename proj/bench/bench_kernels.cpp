// Serial reference kernels against the OpenMP versions.

#include <benchmark/benchmark.h>

#include "pslab/field.hpp"
#include "pslab/sampling.hpp"
#include "pslab/studies.hpp"

using namespace pslab;

namespace {

CMatrix bench_matrix(std::size_t n) {
    Lcg64 rng(0x5EED);
    CMatrix a = random_gaussian_matrix(n, n, rng);
    a *= Cx{1.0 / std::sqrt(static_cast<double>(n))};
    return a;
}

void BM_FieldSerial(benchmark::State& st) {
    const CMatrix a = bench_matrix(static_cast<std::size_t>(st.range(0)));
    const GridSpec g{-2, 2, -2, 2, 48, 48};
    for (auto _ : st) benchmark::DoNotOptimize(reference::compute_field(a, g));
}

void BM_FieldParallel(benchmark::State& st) {
    const CMatrix a = bench_matrix(static_cast<std::size_t>(st.range(0)));
    const GridSpec g{-2, 2, -2, 2, 48, 48};
    for (auto _ : st) benchmark::DoNotOptimize(compute_field(a, g));
}

const GridSpec kStudyGrid{-2, 2, -2, 2, 12, 12};
const std::vector<std::size_t> kStudySizes{16, 32, 64};

void BM_StudySerial(benchmark::State& st) {
    for (auto _ : st)
        benchmark::DoNotOptimize(reference::convergence_study(OperatorModel::backward_shift(), kStudyGrid, kStudySizes));
}

void BM_StudyParallel(benchmark::State& st) {
    for (auto _ : st)
        benchmark::DoNotOptimize(convergence_study(OperatorModel::backward_shift(), kStudyGrid, kStudySizes));
}

}  // namespace

BENCHMARK(BM_FieldSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FieldParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StudySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StudyParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
