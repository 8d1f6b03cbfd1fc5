// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "pplc/analysis.hpp"
#include "pplc/cps.hpp"
#include "pplc/error.hpp"
#include "pplc/interp.hpp"
#include "pplc/parser.hpp"
#include "pplc/pretty.hpp"
#include "support.hpp"

using namespace pplc;

namespace {

int occurrences(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("empty selection leaves the program untouched") {
  for (const auto& [name, t] : test::corpus()) {
    CAPTURE(name);
    CHECK(structurally_equal(selective_cps({}, t), test::anf_as_target(t)));
  }
}

TEST_CASE("coin: selective output has one weight suspension, full has both kinds") {
  auto t = test::load_model("coin");
  std::string sel = pretty(compile(t, CpsMode::Selective, AnalysisConfig{}).target);
  std::string full = pretty(compile(t, CpsMode::Full, AnalysisConfig{}).target);
  std::string none = pretty(compile(t, CpsMode::None, AnalysisConfig{}).target);
  CHECK(occurrences(sel, "Sus_weight") == 1);
  CHECK(occurrences(sel, "Sus_assume") == 0);
  CHECK(occurrences(full, "Sus_weight") == 1);
  CHECK(occurrences(full, "Sus_assume") == 1);
  CHECK(occurrences(none, "Sus_") == 0);

  auto cs = count_suspensions(compile(t, CpsMode::Selective, AnalysisConfig{}).target);
  CHECK(cs.weight == 1);
  CHECK(cs.assume == 0);
}

TEST_CASE("coin: the recursive tail call passes its continuation through") {
  auto t = test::load_model("coin");
  auto c = compile(t, CpsMode::Selective, AnalysisConfig{});
  std::string s = pretty(c.target);
  // `iter k (tail obs)` in tail position reuses the incoming continuation,
  // so the only continuation closures built per run are the one given to
  // the outer call and one per weight.
  auto o = eval_target(c.target, std::uint64_t{5});
  CHECK(o.counters.continuation_allocs == 5);
  CHECK(o.events.size() == 4);
  auto f = eval_target(compile(t, CpsMode::Full, AnalysisConfig{}).target, std::uint64_t{5});
  CHECK(f.counters.continuation_allocs > o.counters.continuation_allocs);
}

TEST_CASE("selection must be uniform across callees") {
  auto t = test::load_model("coin");
  auto r = analyze_suspend(t, AnalysisConfig{});
  CHECK_NOTHROW(check_vars(t, r.suspend, r));
  VarsSet bad = r.suspend;
  for (const auto& b : binders(t)) {
    if (b.name == "obs") bad.erase(b);
  }
  CHECK_THROWS_AS(check_vars(t, bad, r), MalformedVars);
  CHECK_NOTHROW(check_vars(t, all_labels(t), r));
}

TEST_CASE("full CPS selects every binder") {
  auto t = test::load_model("geometric");
  auto c = compile(t, CpsMode::Full, AnalysisConfig{});
  CHECK(c.vars == all_labels(t));
  CHECK(compile(t, CpsMode::None, AnalysisConfig{}).vars.empty());
}

TEST_CASE("intrinsics in selected positions become c_cps") {
  auto t = anf_of_source(parse("let f = lam g. g 1 in f (lam x. weight 0.5; x) + f ((+) 2)"));
  auto c = compile(t, CpsMode::Selective, AnalysisConfig{});
  std::string s = pretty(c.target);
  CAPTURE(s);
  CHECK(s.find("_cps") != std::string::npos);
  auto o = eval_target(c.target, std::uint64_t{1});
  CHECK(o.value.intrinsic() == Intrinsic::integer(4));
  CHECK(test::same_log(o.log_likelihood, std::log(0.5)));
}

TEST_CASE("mode names") {
  CHECK(cps_mode_from_string("selective") == CpsMode::Selective);
  CHECK(to_string(CpsMode::Full) == "full");
  CHECK_THROWS_AS(cps_mode_from_string("partial"), Error);
}
