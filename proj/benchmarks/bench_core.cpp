#include <benchmark/benchmark.h>

#include <random>

#include "eqchern/quadrature.hpp"

using namespace eqchern;

namespace {

const Grading pm{Parity::even, Parity::even, Parity::odd, Parity::odd};

NumericSuperMatrix random_matrix(const AlgebraPtr& alg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  NumericSuperMatrix m(alg, pm);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      NumericForm f(alg);
      for (Mask mask = 1; mask < 16; ++mask) f += NumericForm::monomial(alg, mask, Complex{u(rng), u(rng)});
      if (i == j) f += NumericForm::scalar(alg, Complex{u(rng), u(rng)});
      m(i, j) = f;
    }
  return m;
}

}  // namespace

static void BM_SuperExp(benchmark::State& state) {
  const auto alg = c_plane_uv_model().algebra;
  const auto a = random_matrix(alg, 1);
  for (auto _ : state) benchmark::DoNotOptimize(super_exp(a, 1e-15));
}
BENCHMARK(BM_SuperExp);

static void BM_SuperExpDuhamel(benchmark::State& state) {
  const auto alg = c_plane_uv_model().algebra;
  const auto a = random_matrix(alg, 1);
  const auto body = a.degree_zero_part();
  for (auto _ : state) benchmark::DoNotOptimize(super_exp_duhamel(a, body, 1e-15));
}
BENCHMARK(BM_SuperExpDuhamel);

static void BM_ChernForm(benchmark::State& state) {
  const auto model = c_plane_uv_model();
  const auto curvature = equivariant_curvature(Superconnection::from_model(model), model, 1.3);
  const std::vector<Complex> pt{{0.4, -0.2}, {0.4, 0.2}, {-0.3, 0.6}, {-0.3, -0.6}};
  for (auto _ : state) benchmark::DoNotOptimize(chern_form(curvature, pt));
}
BENCHMARK(BM_ChernForm);

static void BM_ChernFormSymbolic(benchmark::State& state) {
  const auto model = c_plane_uv_model();
  for (auto _ : state) benchmark::DoNotOptimize(chern_form_symbolic(model, 1.3));
}
BENCHMARK(BM_ChernFormSymbolic);

static void BM_IntegrateTopForm(benchmark::State& state) {
  const auto model = c_plane_uv_model();
  QuadratureSpec spec;
  spec.gh_order = static_cast<int>(state.range(0));
  spec.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_top_form(model, Complex{2.0, 0.25}, spec));
}
BENCHMARK(BM_IntegrateTopForm)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_IndexCharacter(benchmark::State& state) {
  const auto model = c_plane_uv_model();
  for (auto _ : state) benchmark::DoNotOptimize(index_character(model, 128, QuadratureSpec{}));
}
BENCHMARK(BM_IndexCharacter)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
