#include <benchmark/benchmark.h>

#include "rdi/binning.hpp"
#include "rdi/channels.hpp"
#include "rdi/rd_solvers.hpp"

using namespace rdi;

namespace {

JointPMF erased_source() {
    JointPMF x = JointPMF::marginal_source("X", Alphabet(2), {0.5, 0.5});
    return make_erasure_source(x, 0.8, "Y");
}

void BM_ConditionalEntropy(benchmark::State& state) {
    JointPMF j = erased_source();
    for (auto _ : state) benchmark::DoNotOptimize(entropy(j, {"X"}, {"Y"}));
}
BENCHMARK(BM_ConditionalEntropy);

void BM_BlahutArimoto(benchmark::State& state) {
    JointPMF j = erased_source();
    const DistortionSpec hamming = DistortionSpec::hamming(2);
    RDSolverConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(rd_si_enc(j, "X", {"Y"}, hamming, 0.2, cfg));
}
BENCHMARK(BM_BlahutArimoto);

void BM_WynerZiv(benchmark::State& state) {
    JointPMF j = erased_source();
    const DistortionSpec hamming = DistortionSpec::hamming(2);
    RDSolverConfig cfg;
    cfg.restarts = 4;
    for (auto _ : state)
        benchmark::DoNotOptimize(rd_wyner_ziv(j, "X", {"Y"}, hamming, 0.2, cfg).rate_bits);
}
BENCHMARK(BM_WynerZiv);

void BM_ExactBinningEntropy(benchmark::State& state) {
    JointPMF x = JointPMF::marginal_source("Y", Alphabet(2), {0.5, 0.5});
    JointPMF j = extend(x, make_bsc(0.1, "Y", "W"));
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            exact_binning_entropy(BinningExperiment{n, 0.2, 1, j}).entropy_bits);
}
BENCHMARK(BM_ExactBinningEntropy)->Arg(6)->Arg(8)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
