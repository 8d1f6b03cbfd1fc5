// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

// Likelihood weighting per corpus model and CPS mode, plus the compile stage.
// Run with --benchmark_filter=coin to narrow the set.

#include <benchmark/benchmark.h>

#include "pplc/inference.hpp"
#include "pplc/parser.hpp"

namespace {

using namespace pplc;

const char* const kModels[] = {"coin", "geometric", "ssm", "crbd"};
const CpsMode kModes[] = {CpsMode::None, CpsMode::Selective, CpsMode::Full};

AnfPtr load(const std::string& name) {
  return anf_of_source(parse_file(std::string(PPLC_MODELS_DIR) + "/" + name + ".ppl"));
}

void lw(benchmark::State& state, std::string model, CpsMode mode) {
  auto compiled = prepare(load(model), Algorithm::Lw, mode);
  InferenceOptions o;
  o.n = static_cast<std::size_t>(state.range(0));
  o.mode = mode;
  std::uint64_t allocs = 0;
  for (auto _ : state) {
    auto r = run_lw(compiled, o);
    allocs = r.counters.continuation_allocs;
    benchmark::DoNotOptimize(r.log_norm_const);
    ++o.seed;
  }
  state.counters["cont_allocs"] = static_cast<double>(allocs);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bpf(benchmark::State& state, std::string model, CpsMode mode) {
  auto compiled = prepare(load(model), Algorithm::Bpf, mode);
  InferenceOptions o;
  o.n = static_cast<std::size_t>(state.range(0));
  o.mode = mode;
  for (auto _ : state) {
    auto r = run_bpf(compiled, o);
    benchmark::DoNotOptimize(r.log_norm_const);
    ++o.seed;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void compile_stage(benchmark::State& state, std::string model, CpsMode mode) {
  auto t = load(model);
  for (auto _ : state) {
    auto c = prepare(t, Algorithm::Lw, mode);
    benchmark::DoNotOptimize(c);
  }
}

int register_all() {
  for (const char* m : kModels) {
    for (CpsMode mode : kModes) {
      std::string tag = std::string(m) + "/" + std::string(to_string(mode));
      benchmark::RegisterBenchmark(("lw/" + tag).c_str(), lw, m, mode)->Arg(1000)->Unit(benchmark::kMillisecond);
      if (mode != CpsMode::None) {
        benchmark::RegisterBenchmark(("bpf/" + tag).c_str(), bpf, m, mode)->Arg(1000)->Unit(benchmark::kMillisecond);
        benchmark::RegisterBenchmark(("compile/" + tag).c_str(), compile_stage, m, mode)->Unit(benchmark::kMicrosecond);
      }
    }
  }
  return 0;
}

const int kRegistered = register_all();

}  // namespace

BENCHMARK_MAIN();
