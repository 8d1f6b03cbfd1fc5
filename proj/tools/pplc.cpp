// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

// pplc command-line driver: analyze, transform, run, bench.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pplc/analysis.hpp"
#include "pplc/anf.hpp"
#include "pplc/bench.hpp"
#include "pplc/cps.hpp"
#include "pplc/error.hpp"
#include "pplc/inference.hpp"
#include "pplc/parser.hpp"
#include "pplc/pretty.hpp"

namespace {

using namespace pplc;

AnalysisConfig parse_suspend(const std::string& s) {
  AnalysisConfig cfg{false, false};
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part == "assume") {
      cfg.suspend_assume = true;
    } else if (part == "weight") {
      cfg.suspend_weight = true;
    } else if (part != "none" && !part.empty()) {
      throw Error("unknown suspension source '" + part + "' (expected assume, weight or none)");
    }
  }
  return cfg;
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("PPLC_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && end != s) return v;
    std::cerr << "warning: ignoring non-numeric PPLC_SEED\n";
  }
  return 0;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pplc: suspension analysis and selective CPS for a small PPL"};
  app.require_subcommand(1);

  std::string file;
  std::string suspend = "weight";
  std::string cps = "selective";
  std::string worklist = "lifo";

  auto* analyze = app.add_subcommand("analyze", "print the suspension analysis as JSON");
  analyze->add_option("file", file, "model source")->required();
  analyze->add_option("--suspend", suspend, "suspension sources: weight, assume, assume,weight or none");
  analyze->add_option("--worklist", worklist, "solver order: lifo or fifo");

  auto* transform = app.add_subcommand("transform", "print the CPS-transformed program");
  transform->add_option("file", file, "model source")->required();
  transform->add_option("--suspend", suspend, "suspension sources");
  transform->add_option("--cps", cps, "none, selective or full");

  std::string inference = "lw";
  std::size_t n = 1000;
  std::uint64_t seed = default_seed();
  std::string out;
  std::size_t burn_in = 1000;
  auto* run = app.add_subcommand("run", "run inference and write samples as CSV");
  run->add_option("file", file, "model source")->required();
  run->add_option("--inference", inference, "lw, bpf or mcmc");
  run->add_option("--n", n, "samples, particles or iterations");
  run->add_option("--seed", seed, "random seed (default: $PPLC_SEED or 0)");
  run->add_option("--cps", cps, "none, selective or full");
  run->add_option("--burn-in", burn_in, "MCMC burn-in iterations");
  run->add_option("--out", out, "CSV path; diagnostics go to <out>.json");

  std::string corpus;
  std::size_t reps = 5;
  auto* bench = app.add_subcommand("bench", "benchmark every corpus model");
  bench->add_option("corpus", corpus, "directory of .ppl models")->required();
  bench->add_option("--reps", reps, "timed repetitions per cell");
  bench->add_option("--n", n, "samples per run");
  bench->add_option("--seed", seed, "base seed");
  bench->add_option("--out", out, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      AnalysisConfig cfg = parse_suspend(suspend);
      SolverOptions so;
      if (worklist == "fifo") {
        so.order = Worklist::Fifo;
      } else if (worklist != "lifo") {
        throw Error("unknown worklist order '" + worklist + "'");
      }
      AnfPtr anf = anf_of_source(parse_file(file));
      AnalysisResult r = analyze_suspend(anf, cfg, so);
      std::cout << analysis_json(r, cfg) << "\n";
    } else if (*transform) {
      AnfPtr anf = anf_of_source(parse_file(file));
      CpsMode mode = cps_mode_from_string(cps);
      if (mode == CpsMode::None) {
        std::cout << pretty(anf) << "\n";
      } else {
        std::cout << pretty(compile(anf, mode, parse_suspend(suspend)).target) << "\n";
      }
    } else if (*run) {
      Algorithm algo = algorithm_from_string(inference);
      InferenceOptions opts;
      opts.n = n;
      opts.seed = seed;
      opts.mode = cps_mode_from_string(cps);
      opts.burn_in = burn_in;
      AnfPtr anf = anf_of_source(parse_file(file));
      Compiled p = prepare(anf, algo, opts.mode);
      auto t0 = std::chrono::steady_clock::now();
      InferenceResult res = algo == Algorithm::Lw    ? run_lw(p, opts)
                            : algo == Algorithm::Bpf ? run_bpf(p, opts)
                                                     : run_mcmc(p, opts);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      std::ostream& summary = out.empty() ? std::cerr : std::cout;
      if (out.empty()) {
        std::cout << samples_csv(res);
      } else {
        write_file(out, samples_csv(res));
        write_file(out + ".json", diagnostics_json(res, algo, opts) + "\n");
      }
      summary << "samples: " << res.samples.size() << "\n";
      summary << "log_norm_const: " << (res.log_norm_const ? fmt(*res.log_norm_const) : "n/a") << "\n";
      try {
        summary << "mean: " << fmt(posterior_mean(res)) << "\n";
      } catch (const Error&) {
      }
      summary << "wall_time_s: " << fmt(secs) << "\n";
      summary << "continuation_allocs: " << res.counters.continuation_allocs << "\n";
      summary << "closure_allocs: " << res.counters.closure_allocs << "\n";
      summary << "suspensions: " << res.counters.suspensions << "\n";
      for (const auto& [k, v] : res.diagnostics.scalars) summary << k << ": " << fmt(v) << "\n";
    } else if (*bench) {
      BenchOptions bo;
      bo.n = n;
      bo.reps = reps;
      bo.seed = seed;
      auto records = run_bench(load_corpus(corpus), bo);
      if (out.empty()) {
        std::cout << bench_csv(records);
      } else {
        write_file(out, bench_csv(records));
      }
    }
  } catch (const InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
