// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pplc/analysis.hpp"
#include "pplc/cps.hpp"
#include "pplc/error.hpp"
#include "pplc/inference.hpp"
#include "pplc/interp.hpp"
#include "pplc/parser.hpp"
#include "support.hpp"

using namespace pplc;

namespace {

using Clock = std::chrono::steady_clock;

// Tolerances and sizes.
constexpr double kGoldenMaxSeconds = 1e-3;
constexpr int kRandomPrograms = 500;
constexpr int kTracesPerProgram = 20;
constexpr double kSoundnessMaxSeconds = 60.0;
constexpr int kSharedTraces = 100;
constexpr double kRelTol = 1e-12;
constexpr std::size_t kPosteriorN = 100000;
constexpr double kLwMeanTol = 0.01;
constexpr double kMcmcMeanTol = 0.02;
constexpr double kPosteriorMaxSeconds = 30.0;
constexpr std::size_t kBpfParticles = 10000;
constexpr double kLogZTol = 0.05;
constexpr int kTimingReps = 30;
constexpr double kTimingQuorum = 0.95;
constexpr int kTimingChunks = 30;
constexpr double kOverheadMaxSeconds = 300.0;
constexpr double kCompileMaxSeconds = 0.05;

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <class F>
double median_seconds(int reps, F&& f) {
  std::vector<double> ts;
  for (int i = 0; i < reps; ++i) {
    auto t0 = Clock::now();
    f();
    ts.push_back(seconds_since(t0));
  }
  std::sort(ts.begin(), ts.end());
  return ts[ts.size() / 2];
}

std::string fmt(const char* f, double x) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Verdict golden_analysis() {
  auto t = anf_of_source(parse_file((test::data_dir() / "coin_anf.ppl").string()));
  AnalysisResult r;
  double secs = median_seconds(21, [&] { r = analyze_suspend(t, AnalysisConfig{false, true}); });
  std::set<std::string> names;
  for (const auto& x : r.suspend) names.insert(x.name);
  Ident iter, obs, t8;
  for (const auto& b : binders(t)) {
    if (b.name == "iter") iter = b;
    if (b.name == "obs") obs = b;
    if (b.name == "t8") t8 = b;
  }
  bool set_ok = names == std::set<std::string>{"obs", "w1", "t8", "t17", "t23"};
  bool data_ok = r.at(iter) == std::set<AbstractValue>{AbstractValue::lam(obs, t8)};
  std::string got;
  for (const auto& n : names) got += (got.empty() ? "" : ",") + n;
  return {set_ok && data_ok && secs < kGoldenMaxSeconds,
          "suspend={" + got + "} data(iter)" + (data_ok ? "={lam obs. t8}" : " differs") + fmt(" %.3g ms", secs * 1e3)};
}

Verdict constraints_satisfied() {
  std::size_t total = 0, bad = 0;
  for (const auto& [name, t] : test::corpus()) {
    for (auto cfg : {AnalysisConfig{false, true}, AnalysisConfig{true, false}}) {
      auto cs = generate_constraints(t, cfg);
      auto r = solve(cs);
      total += cs.size();
      bad += violations(r, cs).size();
    }
  }
  return {bad == 0, std::to_string(total - bad) + "/" + std::to_string(total) + " constraints satisfied"};
}

Verdict soundness_property() {
  auto t0 = Clock::now();
  test::ProgramGen gen(20260101);
  std::size_t runs = 0, errors = 0, escapes = 0;
  for (int i = 0; i < kRandomPrograms; ++i) {
    auto t = anf_of_source(parse(gen.program()));
    for (auto cfg : {AnalysisConfig{false, true}, AnalysisConfig{true, false}}) {
      auto r = analyze_suspend(t, cfg);
      for (int s = 0; s < kTracesPerProgram; ++s) {
        ++runs;
        try {
          auto o = eval_sampling(nullptr, t, static_cast<std::uint64_t>(s), cfg);
          for (const auto& x : o.suspension_log) escapes += !r.suspends(x);
        } catch (const DynamicError&) {
          ++errors;
        }
      }
    }
  }
  double secs = seconds_since(t0);
  return {escapes == 0 && errors * 10 < runs && secs < kSoundnessMaxSeconds,
          std::to_string(escapes) + " escaping labels over " + std::to_string(runs - errors) + " runs" +
              fmt(", %.2f s", secs)};
}

Verdict cps_oracle() {
  std::size_t checked = 0, mismatches = 0;
  for (const auto& [name, t] : test::corpus()) {
    auto c = compile(t, CpsMode::Selective, AnalysisConfig{false, true});
    for (int s = 0; s < kSharedTraces; ++s) {
      auto ref = eval_sampling(nullptr, t, static_cast<std::uint64_t>(s), AnalysisConfig{});
      auto out = eval_target(c.target, ref.trace);
      ++checked;
      if (!test::same_value(ref.value, out.value) || !test::same_log(ref.log_weight, out.log_weight, kRelTol)) {
        ++mismatches;
      }
    }
  }
  return {mismatches == 0, std::to_string(checked - mismatches) + "/" + std::to_string(checked) + " traces agree"};
}

Verdict suspension_sequences() {
  auto t = test::load_model("coin");
  auto sel = compile(t, CpsMode::Selective, AnalysisConfig{false, true});
  auto full = compile(t, CpsMode::Full, AnalysisConfig{false, true});
  auto weights = [](const TargetOutcome& o) {
    std::vector<double> w;
    for (const auto& e : o.events) {
      if (e.kind == SusKind::Weight) w.push_back(e.arg.to_double());
    }
    return w;
  };
  int same = 0, n = 100;
  for (int i = 0; i < n; ++i) {
    Rng a = Rng::stream(7, i), b = Rng::stream(7, i);
    Sampler sa(a), sb(b);
    auto wa = weights(drive(sel.target, sa));
    auto wb = weights(drive(full.target, sb));
    bool eq = wa.size() == 4 && wa.size() == wb.size() &&
              std::equal(wa.begin(), wa.end(), wb.begin(), [](double x, double y) {
                return std::memcmp(&x, &y, sizeof x) == 0;
              });
    same += eq;
  }
  return {same == n, std::to_string(same) + "/" + std::to_string(n) + " streams with identical SusWeight sequences"};
}

Verdict posterior() {
  double z = test::simpson([](double x) { return 6 * x * (1 - x) * x * x * x * (1 - x); }, 0, 1);
  double oracle = test::simpson([](double x) { return x * 6 * x * (1 - x) * x * x * x * (1 - x); }, 0, 1) / z;
  auto t = test::load_model("coin");
  InferenceOptions o;
  o.n = kPosteriorN;
  o.seed = 2026;
  auto t0 = Clock::now();
  double lw = posterior_mean(run(Algorithm::Lw, t, o));
  double lw_s = seconds_since(t0);
  t0 = Clock::now();
  double mc = posterior_mean(run(Algorithm::Mcmc, t, o));
  double mc_s = seconds_since(t0);
  bool ok = std::abs(oracle - 0.625) < 1e-9 && std::abs(lw - 0.625) < kLwMeanTol &&
            std::abs(mc - 0.625) < kMcmcMeanTol && lw_s < kPosteriorMaxSeconds && mc_s < kPosteriorMaxSeconds;
  return {ok, fmt("quadrature %.6f", oracle) + fmt(", LW %.4f", lw) + fmt(" (%.2f s)", lw_s) + fmt(", MCMC %.4f", mc) +
                  fmt(" (%.2f s)", mc_s)};
}

Verdict evidence() {
  double oracle = std::log(test::simpson([](double x) { return 6 * x * (1 - x) * x * x * x * (1 - x); }, 0, 1));
  auto t = test::load_model("coin");
  InferenceOptions o;
  o.n = kPosteriorN;
  o.seed = 77;
  double lw = *run(Algorithm::Lw, t, o).log_norm_const;
  o.n = kBpfParticles;
  double bpf = *run(Algorithm::Bpf, t, o).log_norm_const;
  bool ok = std::abs(oracle - test::log_2_over_35()) < 1e-9 && std::abs(lw - oracle) < kLogZTol &&
            std::abs(bpf - oracle) < kLogZTol;
  return {ok, fmt("quadrature %.5f", oracle) + fmt(", LW %.5f", lw) + fmt(", BPF %.5f", bpf)};
}

Verdict overhead() {
  auto t0 = Clock::now();
  const std::map<std::string, std::size_t> sizes{{"coin", 6000}, {"geometric", 6000}, {"ssm", 1200}, {"crbd", 900}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, t] : test::corpus()) {
    std::size_t n = sizes.at(name);
    InferenceOptions o;
    o.n = n;
    std::map<CpsMode, Compiled> ps;
    std::map<CpsMode, std::uint64_t> allocs;
    for (auto m : {CpsMode::None, CpsMode::Selective, CpsMode::Full}) {
      ps[m] = prepare(t, Algorithm::Lw, m);
      o.mode = m;
      allocs[m] = run_lw(ps[m], o).counters.continuation_allocs;
    }
    bool order = allocs[CpsMode::None] == 0 && allocs[CpsMode::None] < allocs[CpsMode::Selective] &&
                 allocs[CpsMode::Selective] < allocs[CpsMode::Full];
    // A repetition times n samples per mode as kTimingChunks alternating
    // slices, so drift in host speed hits both modes alike.
    int wins = 0;
    o.n = n / kTimingChunks;
    for (int rep = 0; rep < kTimingReps; ++rep) {
      double sel = 0.0, full = 0.0;
      for (int c = 0; c < kTimingChunks; ++c) {
        o.seed = static_cast<std::uint64_t>(rep * kTimingChunks + c);
        auto timed = [&](CpsMode m) {
          o.mode = m;
          auto s = Clock::now();
          run_lw(ps[m], o);
          return seconds_since(s);
        };
        if ((rep + c) % 2) {
          sel += timed(CpsMode::Selective);
          full += timed(CpsMode::Full);
        } else {
          full += timed(CpsMode::Full);
          sel += timed(CpsMode::Selective);
        }
      }
      wins += sel <= full;
    }
    bool timing = wins >= static_cast<int>(std::ceil(kTimingQuorum * kTimingReps));
    ok = ok && order && timing;
    detail += (detail.empty() ? "" : "; ") + name + " allocs " + std::to_string(allocs[CpsMode::None]) + "<" +
              std::to_string(allocs[CpsMode::Selective]) + "<" + std::to_string(allocs[CpsMode::Full]) + " time " +
              std::to_string(wins) + "/" + std::to_string(kTimingReps);
  }
  double secs = seconds_since(t0);
  return {ok && secs < kOverheadMaxSeconds, detail + fmt("; %.1f s", secs)};
}

Verdict identity() {
  int same = 0, n = 0;
  for (const auto& [name, t] : test::corpus()) {
    ++n;
    same += structurally_equal(selective_cps({}, t), test::anf_as_target(t));
  }
  return {same == n, std::to_string(same) + "/" + std::to_string(n) + " corpus programs unchanged"};
}

Verdict compile_time() {
  double worst = 0.0;
  std::string worst_name;
  for (const auto& name : test::corpus_names()) {
    auto src = parse_file((test::models_dir() / (name + ".ppl")).string());
    double s = median_seconds(11, [&] {
      auto t = anf_of_source(src);
      compile(t, CpsMode::Selective, AnalysisConfig{true, true});
    });
    if (s > worst) {
      worst = s;
      worst_name = name;
    }
  }
  return {worst < kCompileMaxSeconds, "slowest " + worst_name + fmt(" %.3f ms", worst * 1e3)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"golden analysis result", golden_analysis},
      {"constraint validator", constraints_satisfied},
      {"suspension property suite", soundness_property},
      {"CPS oracle equivalence", cps_oracle},
      {"suspension-sequence equality", suspension_sequences},
      {"posterior correctness", posterior},
      {"normalizing constant", evidence},
      {"overhead ordering", overhead},
      {"empty selection identity", identity},
      {"compile-stage runtime", compile_time},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, criteria[i].first.c_str(), v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
