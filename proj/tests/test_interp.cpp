// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "pplc/cps.hpp"
#include "pplc/error.hpp"
#include "pplc/interp.hpp"
#include "pplc/parser.hpp"
#include "support.hpp"

using namespace pplc;

namespace {

EvalOutcome run_src(const std::string& src, const Trace& trace, AnalysisConfig cfg = {}) {
  return eval(nullptr, anf_of_source(parse(src)), trace, cfg);
}

}  // namespace

TEST_CASE("reference: weight and assume rules") {
  auto o = run_src("weight 0.5; ()", {});
  CHECK(o.value.intrinsic() == Intrinsic::unit());
  CHECK(o.log_weight == doctest::Approx(std::log(0.5)).epsilon(1e-15));
  CHECK(o.suspended);

  auto p = run_src("assume (Beta 2. 2.)", {Intrinsic::real(0.3)});
  CHECK(p.value.intrinsic() == Intrinsic::real(0.3));
  CHECK(p.log_prior == doctest::Approx(std::log(6 * 0.3 * 0.7)));
  CHECK(p.log_likelihood == 0.0);
  CHECK(p.trace_consumed == 1);
  CHECK_FALSE(p.suspended);
  CHECK(run_src("assume (Beta 2. 2.)", {Intrinsic::real(0.3)}, AnalysisConfig{true, false}).suspended);
}

TEST_CASE("reference: suspension log records let labels") {
  auto t = anf_of_source(parse("let f = lam x. weight x; x in let y = f 0.5 in let z = 1 in y"));
  auto o = eval(nullptr, t, {}, AnalysisConfig{});
  std::set<std::string> labels;
  for (const auto& x : o.suspension_log) labels.insert(x.name);
  CHECK(labels.count("y") == 1);
  CHECK(labels.count("z") == 0);
  CHECK(labels.count("f") == 0);
  auto q = eval(nullptr, t, {}, AnalysisConfig{false, false});
  CHECK(q.suspension_log.empty());
  CHECK_FALSE(q.suspended);
}

TEST_CASE("reference: trace replay errors") {
  CHECK_THROWS_AS(run_src("assume (Normal 0. 1.)", {}), DynamicError);
  CHECK_THROWS_AS(run_src("assume (Bernoulli 0.5)", {Intrinsic::real(0.5)}), DynamicError);
  auto o = run_src("assume (Normal 0. 1.)", {Intrinsic::real(0.0), Intrinsic::real(1.0)});
  CHECK(o.trace_consumed == 1);
}

TEST_CASE("reference: dynamic errors name the binding") {
  try {
    run_src("let z = head nil in z", {});
    FAIL("expected an error");
  } catch (const DynamicError& e) {
    CHECK(e.label().rfind("z#", 0) == 0);
  }
  CHECK_THROWS_AS(run_src("if 1 then 2 else 3", {}), DynamicError);
  CHECK_THROWS_AS(run_src("1 2", {}), DynamicError);
  CHECK_THROWS_AS(run_src("weight (Normal 0. 1.)", {}), DynamicError);
}

TEST_CASE("zero and negative weights") {
  auto o = run_src("weight 0.; 1", {});
  CHECK(o.log_weight == -INFINITY);
  CHECK(o.warnings.empty());
  auto n = run_src("weight (0. - 2.); 1", {});
  CHECK(n.log_weight == -INFINITY);
  CHECK(n.warnings.size() == 1);
}

TEST_CASE("reference: recursion and closures") {
  auto o = run_src("let rec fact = lam n. if n < 1 then 1 else n * fact (n - 1) in fact 10", {});
  CHECK(o.value.intrinsic() == Intrinsic::integer(3628800));
  auto c = run_src("let add = lam a. lam b. a + b in let inc = add 1 in inc 41", {});
  CHECK(c.value.intrinsic() == Intrinsic::integer(42));
  CHECK_THROWS_AS(run_src("let rec f = lam n. f n in f 1", {}), DynamicError);
}

TEST_CASE("machine agrees with the reference on the corpus") {
  for (const auto& [name, t] : test::corpus()) {
    CAPTURE(name);
    for (auto mode : {CpsMode::None, CpsMode::Selective, CpsMode::Full}) {
      auto c = compile(t, mode, AnalysisConfig{true, true});
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto ref = eval_sampling(nullptr, t, seed, AnalysisConfig{});
        auto out = eval_target(c.target, ref.trace);
        CHECK(test::same_value(ref.value, out.value));
        CHECK(test::same_log(ref.log_weight, out.log_weight));
        CHECK(out.trace == ref.trace);
        CHECK(out.weight_log == ref.weight_log);
      }
    }
  }
}

TEST_CASE("machine: counters") {
  auto t = test::load_model("coin");
  auto none = eval_target(compile(t, CpsMode::None, AnalysisConfig{}).target, std::uint64_t{3});
  CHECK(none.counters.continuation_allocs == 0);
  CHECK(none.counters.suspensions == 0);
  CHECK(none.events.empty());
  auto full = eval_target(compile(t, CpsMode::Full, AnalysisConfig{true, true}).target, std::uint64_t{3});
  CHECK(full.events.size() == 5);
  CHECK(full.events.front().kind == SusKind::Assume);
}

TEST_CASE("machine: suspension at a non-tail binding is an invariant violation") {
  Ident x("x", 1), y("y", 2);
  auto bad = tlet(x, tsus_weight(tconst(Intrinsic::real(1.0)), tlam(y, tvar(y), true)), tvar(x));
  CHECK_THROWS_AS(eval_target(bad, Trace{}), InvariantViolation);
}

TEST_CASE("machine: CPS tail calls run in constant stack") {
  auto t = anf_of_source(parse("let rec f = lam n. if n < 1 then 0 else (weight 1.; f (n - 1)) in f 200000"));
  auto o = eval_target(compile(t, CpsMode::Selective, AnalysisConfig{}).target, Trace{});
  CHECK(o.value.intrinsic() == Intrinsic::integer(0));
  CHECK(o.events.size() == 200000);
}
