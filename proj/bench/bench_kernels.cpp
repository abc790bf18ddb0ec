// Serial reference vs OpenMP kernels. Run with MACGRAD_THREADS to pin the
// thread count of the parallel variants.

#include <benchmark/benchmark.h>

#include <vector>

#include "macgrad/kernels.hpp"
#include "macgrad/rng.hpp"

using namespace macgrad;

namespace {

std::vector<double> filled(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

template <auto Kernel>
void bm_gemm(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto a = filled(n * n, 1), b = filled(n * n, 2);
    std::vector<double> c(n * n);
    for (auto _ : st) {
        Kernel(a.data(), b.data(), c.data(), {n, n, n});
        benchmark::DoNotOptimize(c.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(2 * n * n * n));
}

// batch x 16 channels x 28 x 28, 3x3 patches, stride 1, pad 1
template <auto Kernel>
void bm_im2col(benchmark::State& st) {
    const auto batch = static_cast<std::size_t>(st.range(0));
    const std::size_t c = 16, h = 28, w = 28, k = 3;
    const auto x = filled(batch * c * h * w, 3);
    std::vector<double> cols(batch * h * w * c * k * k);
    for (auto _ : st) {
        Kernel(x.data(), cols.data(), batch, c, h, w, k, k, 1, 1);
        benchmark::DoNotOptimize(cols.data());
    }
    st.SetBytesProcessed(st.iterations() * static_cast<long>(cols.size() * sizeof(double)));
}

}  // namespace

BENCHMARK(bm_gemm<kernels::serial::gemm_nn>)->Name("gemm_nn/serial")->RangeMultiplier(2)->Range(64, 512)->UseRealTime();
BENCHMARK(bm_gemm<kernels::parallel::gemm_nn>)->Name("gemm_nn/parallel")->RangeMultiplier(2)->Range(64, 512)->UseRealTime();
BENCHMARK(bm_gemm<kernels::serial::gemm_tn>)->Name("gemm_tn/serial")->Arg(256)->UseRealTime();
BENCHMARK(bm_gemm<kernels::parallel::gemm_tn>)->Name("gemm_tn/parallel")->Arg(256)->UseRealTime();
BENCHMARK(bm_im2col<kernels::serial::im2col>)->Name("im2col/serial")->Arg(8)->Arg(64)->UseRealTime();
BENCHMARK(bm_im2col<kernels::parallel::im2col>)->Name("im2col/parallel")->Arg(8)->Arg(64)->UseRealTime();

int main(int argc, char** argv) {
    kernels::configure_threads();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
