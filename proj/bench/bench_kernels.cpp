// Serial reference vs OpenMP kernels at the full-scale enhancement shape.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "scs/kernels.hpp"
#include "scs/transform.hpp"

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

// rows x 65536 streamed Rademacher matrix; Arg(0) selects the row count.
template <auto Kernel>
void BM_streamed(benchmark::State& state) {
  const scs::StreamedSigns s{42, static_cast<std::size_t>(state.range(0)), 65536};
  const auto x = noise(s.cols, 1);
  std::vector<double> y(s.rows);
  for (auto _ : state) {
    Kernel(s, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.rows * s.cols));
}

template <auto Kernel>
void BM_streamed_transposed(benchmark::State& state) {
  const scs::StreamedSigns s{42, static_cast<std::size_t>(state.range(0)), 65536};
  const auto y = noise(s.rows, 2);
  std::vector<double> x(s.cols);
  for (auto _ : state) {
    Kernel(s, y, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.rows * s.cols));
}

// 4096 x 16384 packed matrix, the shape of the base-layer F term.
scs::PackedSigns packed() {
  scs::PackedSigns p(4096, 16384);
  std::mt19937_64 rng(3);
  for (auto& w : p.bits) w = rng();
  return p;
}

template <auto Kernel>
void BM_packed(benchmark::State& state) {
  static const scs::PackedSigns p = packed();
  const auto x = noise(p.cols, 4);
  std::vector<double> y(p.rows);
  for (auto _ : state) {
    Kernel(p, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.rows * p.cols));
}

template <auto Grad, auto Adj>
void BM_gradient(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto img = noise(static_cast<std::size_t>(side) * side, 5);
  std::vector<double> gx(img.size()), gy(img.size()), out(img.size());
  for (auto _ : state) {
    Grad(img, side, side, gx, gy);
    Adj(gx, gy, side, side, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}

void BM_fwht(benchmark::State& state) {
  auto v = noise(static_cast<std::size_t>(state.range(0)), 6);
  for (auto _ : state) {
    scs::fwht_inplace(v);
    benchmark::DoNotOptimize(v.data());
  }
}

namespace sk = scs::kernels;
using StreamedFn = void (*)(const scs::StreamedSigns&, std::span<const double>, std::span<double>);
using PackedFn = void (*)(const scs::PackedSigns&, std::span<const double>, std::span<double>);

constexpr StreamedFn serial_stream = sk::serial::sign_matvec;
constexpr StreamedFn omp_stream = sk::omp::sign_matvec;
constexpr StreamedFn serial_stream_t = sk::serial::sign_matvec_transposed;
constexpr StreamedFn omp_stream_t = sk::omp::sign_matvec_transposed;
constexpr PackedFn serial_packed = sk::serial::sign_matvec;
constexpr PackedFn omp_packed = sk::omp::sign_matvec;

}  // namespace

BENCHMARK(BM_streamed<serial_stream>)->Name("streamed_matvec/serial")->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_streamed<omp_stream>)->Name("streamed_matvec/omp")->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_streamed_transposed<serial_stream_t>)
    ->Name("streamed_matvec_t/serial")->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_streamed_transposed<omp_stream_t>)
    ->Name("streamed_matvec_t/omp")->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_packed<serial_packed>)->Name("packed_matvec/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_packed<omp_packed>)->Name("packed_matvec/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gradient<sk::serial::gradient, sk::serial::gradient_adjoint>)
    ->Name("tv_gradient/serial")->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_gradient<sk::omp::gradient, sk::omp::gradient_adjoint>)
    ->Name("tv_gradient/omp")->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_fwht)->Name("fwht")->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
