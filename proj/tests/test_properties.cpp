// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "pplc/analysis.hpp"
#include "pplc/cps.hpp"
#include "pplc/error.hpp"
#include "pplc/interp.hpp"
#include "pplc/parser.hpp"
#include "support.hpp"

using namespace pplc;

namespace {

const AnalysisConfig kConfigs[] = {{false, true}, {true, false}, {true, true}};

std::vector<AnfPtr> random_programs(std::uint64_t seed, int count) {
  test::ProgramGen gen(seed);
  std::vector<AnfPtr> out;
  for (int i = 0; i < count; ++i) out.push_back(anf_of_source(parse(gen.program())));
  return out;
}

}  // namespace

TEST_CASE("every let with a suspending derivation is in the suspend set") {
  int runs = 0, checked = 0;
  for (const auto& t : random_programs(101, 500)) {
    for (const auto& cfg : kConfigs) {
      auto r = analyze_suspend(t, cfg);
      for (std::uint64_t s = 0; s < 20; ++s) {
        ++runs;
        EvalOutcome o;
        try {
          o = eval_sampling(nullptr, t, s, cfg);
        } catch (const DynamicError&) {
          continue;
        }
        ++checked;
        for (const auto& x : o.suspension_log) {
          if (!r.suspends(x)) FAIL("label " << x.str() << " suspended at runtime but not in the analysis");
        }
        if (o.suspended) CHECK((cfg.suspend_assume || cfg.suspend_weight));
      }
    }
  }
  CHECK(checked > runs * 9 / 10);
}

TEST_CASE("solutions satisfy every generated constraint") {
  for (const auto& t : random_programs(202, 300)) {
    for (const auto& cfg : kConfigs) {
      auto cs = generate_constraints(t, cfg);
      auto r = solve(cs);
      REQUIRE(violations(r, cs).empty());
    }
  }
}

TEST_CASE("worklist order does not change the result") {
  for (const auto& t : random_programs(303, 200)) {
    auto cs = generate_constraints(t, AnalysisConfig{true, true});
    auto a = solve(cs, SolverOptions{Worklist::Lifo, 0});
    auto b = solve(cs, SolverOptions{Worklist::Fifo, 0});
    REQUIRE(a.suspend == b.suspend);
    REQUIRE(a.data == b.data);
  }
}

TEST_CASE("more suspension sources never shrink the suspend set") {
  for (const auto& t : random_programs(404, 200)) {
    auto both = analyze_suspend(t, AnalysisConfig{true, true});
    for (const auto& cfg : {AnalysisConfig{false, true}, AnalysisConfig{true, false}, AnalysisConfig{false, false}}) {
      for (const auto& x : analyze_suspend(t, cfg).suspend) REQUIRE(both.suspends(x));
    }
  }
}

TEST_CASE("solutions are locally minimal") {
  for (const auto& t : random_programs(505, 60)) {
    auto cs = generate_constraints(t, AnalysisConfig{true, true});
    auto r = solve(cs);
    REQUIRE(test::droppable_fact(r, cs) == "");
  }
}

TEST_CASE("the analysis selection is uniform across callees") {
  for (const auto& t : random_programs(606, 300)) {
    for (const auto& cfg : kConfigs) {
      auto r = analyze_suspend(t, cfg);
      REQUIRE_NOTHROW(check_vars(t, r.suspend, r));
    }
  }
}

TEST_CASE("selective and full CPS preserve value and weight") {
  int checked = 0;
  for (const auto& t : random_programs(707, 300)) {
    for (const auto& cfg : kConfigs) {
      auto sel = compile(t, CpsMode::Selective, cfg);
      auto full = compile(t, CpsMode::Full, cfg);
      REQUIRE(structurally_equal(selective_cps({}, t), test::anf_as_target(t)));
      for (std::uint64_t s = 0; s < 5; ++s) {
        EvalOutcome ref;
        try {
          ref = eval_sampling(nullptr, t, s, AnalysisConfig{});
        } catch (const DynamicError&) {
          continue;
        }
        for (const auto* c : {&sel, &full}) {
          auto out = eval_target(c->target, ref.trace);
          REQUIRE(test::same_value(ref.value, out.value));
          REQUIRE(test::same_log(ref.log_weight, out.log_weight));
          REQUIRE(out.weight_log == ref.weight_log);
        }
        ++checked;
      }
    }
  }
  CHECK(checked > 4000);
}
