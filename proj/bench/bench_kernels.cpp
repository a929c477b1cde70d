#include <benchmark/benchmark.h>

#include "wpgibbs/gibbs_oracle.hpp"
#include "wpgibbs/solvers.hpp"

using namespace wpgibbs;

namespace {

// range(0) = worker count; 0 selects the serial reference implementation.

void bm_solve_full_system(benchmark::State& state) {
  const auto p = model_params::from_alpha(4, 1, 0.1);
  solve_options opts;
  opts.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = opts.jobs == 0 ? reference::solve_full_system(p, opts) : solve_full_system(p, opts);
    benchmark::DoNotOptimize(r.records.data());
  }
}

void bm_scan_alpha(benchmark::State& state) {
  scan_options opts;
  opts.restrict_to = invariant_set::i3;
  opts.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = opts.jobs == 0 ? reference::scan_alpha(4, 1, 0.05, 0.3, 24, opts)
                            : scan_alpha(4, 1, 0.05, 0.3, 24, opts);
    benchmark::DoNotOptimize(r.points.data());
  }
}

void bm_mu_n_table(benchmark::State& state) {
  const auto p = model_params::from_alpha(3, 2, 0.3);
  const auto spec = subgroup_spec::first_generators(3, 2);
  const field_quad q{0.4, -0.2, 1.1, -0.7};
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto t = jobs == 0 ? reference::mu_n_table(p, q, spec, 2) : mu_n_table(p, q, spec, 2, default_enumeration_cap, jobs);
    benchmark::DoNotOptimize(t.prob.data());
  }
}

}  // namespace

BENCHMARK(bm_solve_full_system)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_scan_alpha)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_mu_n_table)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
