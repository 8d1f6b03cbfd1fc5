// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pplc/anf.hpp"
#include "pplc/cps.hpp"
#include "pplc/inference.hpp"

namespace pplc {

struct BenchRecord {
  std::string model;
  std::string algorithm;
  std::string cps_mode;
  std::size_t n = 0;
  double wall_time_s = 0.0;
  std::uint64_t continuation_allocs = 0;
  std::uint64_t suspensions = 0;
  /// NaN when the algorithm has none or the cell failed.
  double log_norm_const = 0.0;
  std::uint64_t seed = 0;
  /// "ok", or "error: <message>".
  std::string status = "ok";
};

struct CorpusModel {
  std::string name;
  AnfPtr anf;
};

/// Every `*.ppl` file under `dir`, sorted by name.
std::vector<CorpusModel> load_corpus(const std::filesystem::path& dir);

struct BenchOptions {
  std::size_t n = 1000;
  std::size_t reps = 5;
  std::uint64_t seed = 0;
  std::vector<Algorithm> algorithms{Algorithm::Lw, Algorithm::Bpf, Algorithm::Mcmc};
  std::vector<CpsMode> modes{CpsMode::None, CpsMode::Selective, CpsMode::Full};
};

/// One timed run of a cell. Compilation happens before the clock starts.
BenchRecord bench_once(const CorpusModel& m, Algorithm algo, CpsMode mode, std::size_t n, std::uint64_t seed);

/// model × algorithm × mode, each with one untimed warmup and `reps`
/// recorded repetitions. A failing cell yields records with an error status.
std::vector<BenchRecord> run_bench(const std::vector<CorpusModel>& corpus, const BenchOptions& opts);

std::string bench_csv_header();
std::string bench_csv_row(const BenchRecord& r);
std::string bench_csv(const std::vector<BenchRecord>& rs);

}  // namespace pplc
