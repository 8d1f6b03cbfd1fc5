// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pplc/anf.hpp"
#include "pplc/cps.hpp"
#include "pplc/interp.hpp"
#include "pplc/random.hpp"

namespace pplc {

enum class Algorithm { Lw, Bpf, Mcmc };

std::string_view to_string(Algorithm a);
/// Throws Error on an unknown name.
Algorithm algorithm_from_string(std::string_view s);

/// Suspension sources each algorithm needs: weight for LW and BPF, assume
/// for MCMC.
AnalysisConfig config_for(Algorithm a);

struct WeightedSample {
  MValue value;
  double log_weight = 0.0;
};

struct Diagnostics {
  std::map<std::string, double> scalars;
  /// BPF: effective sample size before each resampling step.
  std::vector<double> ess;
  /// BPF: weight firings along each final particle's history.
  std::vector<std::uint64_t> particle_weights;
  std::vector<std::string> warnings;
};

struct InferenceResult {
  std::vector<WeightedSample> samples;
  /// log Ẑ; absent for MCMC.
  std::optional<double> log_norm_const;
  Diagnostics diagnostics;
  /// Summed over every execution in the run.
  Counters counters;
};

struct InferenceOptions {
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  CpsMode mode = CpsMode::Selective;
  /// MCMC: iterations discarded before the n recorded ones.
  std::size_t burn_in = 1000;
  /// MCMC: attempts at a positive-probability initial trace.
  std::size_t init_retries = 1000;
};

/// A program prepared for one algorithm: ANF, analysis config and the
/// transformed term for the chosen CPS mode.
Compiled prepare(const AnfPtr& anf, Algorithm algo, CpsMode mode);

InferenceResult run_lw(const Compiled& p, const InferenceOptions& opts);
InferenceResult run_bpf(const Compiled& p, const InferenceOptions& opts);
InferenceResult run_mcmc(const Compiled& p, const InferenceOptions& opts);
InferenceResult run(Algorithm algo, const AnfPtr& anf, const InferenceOptions& opts);

/// log Σ exp(xs[i]), shifted by the maximum. All -inf gives -inf.
double log_sum_exp(const std::vector<double>& xs);

/// Systematic resampling: n ancestor indices, index i appearing about
/// n * w_i times for normalized weights w. Throws InferenceError if every
/// weight is -inf.
std::vector<std::size_t> resample_systematic(const std::vector<double>& log_weights, Rng& rng);

/// Σ w_i / Σ w_i^2 for normalized weights, from log weights.
double effective_sample_size(const std::vector<double>& log_weights);

/// Weighted mean of numeric sample values (bools count as 0/1).
double posterior_mean(const InferenceResult& r);

/// `sample,log_weight` CSV, one row per sample, reals in %.17g.
std::string samples_csv(const InferenceResult& r);
std::string diagnostics_json(const InferenceResult& r, Algorithm algo, const InferenceOptions& opts);

}  // namespace pplc
