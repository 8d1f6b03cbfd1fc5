// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pplc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pplc/error.hpp"
#include "pplc/parser.hpp"

namespace pplc {

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

}  // namespace

std::vector<CorpusModel> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".ppl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<CorpusModel> out;
  for (const auto& f : files) out.push_back({f.stem().string(), anf_of_source(parse_file(f.string()))});
  return out;
}

BenchRecord bench_once(const CorpusModel& m, Algorithm algo, CpsMode mode, std::size_t n, std::uint64_t seed) {
  BenchRecord r;
  r.model = m.name;
  r.algorithm = std::string(to_string(algo));
  r.cps_mode = std::string(to_string(mode));
  r.n = n;
  r.seed = seed;
  r.log_norm_const = std::numeric_limits<double>::quiet_NaN();
  try {
    Compiled p = prepare(m.anf, algo, mode);
    InferenceOptions o;
    o.n = n;
    o.seed = seed;
    o.mode = mode;
    o.burn_in = n / 10;
    auto t0 = std::chrono::steady_clock::now();
    InferenceResult res = algo == Algorithm::Lw    ? run_lw(p, o)
                          : algo == Algorithm::Bpf ? run_bpf(p, o)
                                                   : run_mcmc(p, o);
    auto t1 = std::chrono::steady_clock::now();
    r.wall_time_s = std::max(std::chrono::duration<double>(t1 - t0).count(), 1e-9);
    r.continuation_allocs = res.counters.continuation_allocs;
    r.suspensions = res.counters.suspensions;
    if (res.log_norm_const) r.log_norm_const = *res.log_norm_const;
  } catch (const Error& e) {
    r.status = std::string("error: ") + e.what();
  }
  return r;
}

std::vector<BenchRecord> run_bench(const std::vector<CorpusModel>& corpus, const BenchOptions& opts) {
  std::vector<BenchRecord> out;
  for (const auto& m : corpus) {
    for (Algorithm a : opts.algorithms) {
      for (CpsMode mode : opts.modes) {
        BenchRecord warm = bench_once(m, a, mode, opts.n, opts.seed);
        if (warm.status != "ok") {
          out.push_back(warm);
          continue;
        }
        for (std::size_t rep = 0; rep < opts.reps; ++rep) out.push_back(bench_once(m, a, mode, opts.n, opts.seed + rep));
      }
    }
  }
  return out;
}

std::string bench_csv_header() {
  return "model,algorithm,cps_mode,n,wall_time_s,continuation_allocs,suspensions,log_norm_const,seed,status";
}

std::string bench_csv_row(const BenchRecord& r) {
  return csv_field(r.model) + "," + r.algorithm + "," + r.cps_mode + "," + std::to_string(r.n) + "," +
         fmt(r.wall_time_s) + "," + std::to_string(r.continuation_allocs) + "," + std::to_string(r.suspensions) +
         "," + fmt(r.log_norm_const) + "," + std::to_string(r.seed) + "," + csv_field(r.status);
}

std::string bench_csv(const std::vector<BenchRecord>& rs) {
  std::string s = bench_csv_header() + "\n";
  for (const auto& r : rs) s += bench_csv_row(r) + "\n";
  return s;
}

}  // namespace pplc
