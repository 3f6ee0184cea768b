#include <benchmark/benchmark.h>

#include "dpass/jet.hpp"
#include "dpass/parse.hpp"
#include "dpass/passivity.hpp"
#include "dpass/series.hpp"

using namespace dpass;

namespace {

DiffSystem system_of(std::vector<std::pair<std::string, const char*>> eqs) {
  std::vector<std::pair<std::string, Expr>> exprs;
  for (const auto& [name, text] : eqs) exprs.emplace_back(name, parse(text));
  return DiffSystem::from_expressions(exprs, Ranking::default_for(2), 1);
}

const char* const kF = "u[1,1] - sinh(u)";
const char* const kH1 = "u[0,3] - 1/2*u[0,1]^3";
const char* const kH2 = "u[0,5] - 5/2*u[0,1]^2*u[0,3] - 5/2*u[0,1]*u[0,2]^2 + 3/8*u[0,1]^5";
const char* const kF1 = "u[0,2] - 1/2*u[0,1]^2*tanh(u)";
const char* const kF2 = "u[1,0] - 2*cosh(u)/u[0,1]";

}  // namespace

static void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse(kH2));
}
BENCHMARK(BM_Parse);

static void BM_ApplyPower(benchmark::State& state) {
  Expr f = parse(kF2);
  MultiIndex delta{static_cast<unsigned>(state.range(0)), static_cast<unsigned>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(apply_power(f, delta));
}
BENCHMARK(BM_ApplyPower)->DenseRange(1, 3);

static void BM_NormalForm(benchmark::State& state) {
  DiffSystem s = system_of({{"f1", kF1}, {"f2", kF2}});
  Expr f = apply_power(parse(kF), MultiIndex{static_cast<unsigned>(state.range(0)), 1});
  for (auto _ : state) benchmark::DoNotOptimize(normal_form(f, s));
}
BENCHMARK(BM_NormalForm)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

static void BM_CompleteS1(benchmark::State& state) {
  DiffSystem s = system_of({{"f", kF}, {"h1", kH1}});
  for (auto _ : state) benchmark::DoNotOptimize(complete(s));
}
BENCHMARK(BM_CompleteS1)->Unit(benchmark::kMillisecond);

static void BM_CompleteS2(benchmark::State& state) {
  DiffSystem s = system_of({{"f", kF}, {"h2", kH2}});
  for (auto _ : state) benchmark::DoNotOptimize(complete(s));
}
BENCHMARK(BM_CompleteS2)->Unit(benchmark::kMillisecond);

static void BM_SeriesOrder(benchmark::State& state) {
  DiffSystem s = system_of({{"f1", kF1}, {"f2", kF2}});
  std::map<JetVar, double> parametric = {{JetVar{0, MultiIndex{0, 0}}, 1.0}, {JetVar{0, MultiIndex{0, 1}}, 1.0}};
  auto order = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_point(s, {0, 0}, parametric, order));
}
BENCHMARK(BM_SeriesOrder)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
