// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pplc/analysis.hpp"
#include "pplc/anf.hpp"
#include "pplc/random.hpp"
#include "pplc/target.hpp"
#include "pplc/term.hpp"

namespace pplc {

using Trace = std::vector<Intrinsic>;

/// Where `assume` gets its values: a fixed trace, a random generator, or
/// an inference-specific policy.
class AssumeSource {
 public:
  virtual ~AssumeSource() = default;
  virtual Intrinsic draw(const Distribution& d) = 0;
};

/// Replays a given trace left to right; running past its end is an error.
class TraceReplay : public AssumeSource {
 public:
  explicit TraceReplay(const Trace& trace) : trace_(trace) {}
  Intrinsic draw(const Distribution& d) override;
  std::size_t consumed() const { return next_; }

 private:
  const Trace& trace_;
  std::size_t next_ = 0;
};

/// Draws from the distribution itself.
class Sampler : public AssumeSource {
 public:
  explicit Sampler(Rng& rng) : rng_(rng) {}
  Intrinsic draw(const Distribution& d) override { return sample(d, rng_); }

 private:
  Rng& rng_;
};

// ---------------------------------------------------------------------------
// Reference interpreter values

struct EnvNode;
/// Persistent environment: extension shares the tail, never mutates it.
using Env = std::shared_ptr<const EnvNode>;

struct Closure {
  Ident param;
  TermPtr body;
  Env env;
  /// For `let rec` closures, the name the closure is bound to inside its
  /// own body (id 0 / empty name otherwise).
  Ident self;
};

struct RuntimeValue {
  std::variant<Intrinsic, Closure> v;

  bool is_intrinsic() const { return v.index() == 0; }
  const Intrinsic& intrinsic() const { return std::get<Intrinsic>(v); }
};

struct EnvNode {
  Ident key;
  RuntimeValue value;
  Env next;
};

Env extend(const Env& env, Ident x, RuntimeValue v);
/// nullptr if unbound.
const RuntimeValue* lookup(const Env& env, const Ident& x);

std::string to_string(const RuntimeValue& v);

struct EvalOutcome {
  RuntimeValue value;
  /// log w: prior densities of the assumed values plus log weights.
  double log_weight = 0.0;
  double log_prior = 0.0;
  double log_likelihood = 0.0;
  /// The suspension flag u of the whole derivation.
  bool suspended = false;
  /// Labels x of `let x = t1 in t2` subderivations whose t1 had u1 = true.
  std::set<Ident> suspension_log;
  std::size_t trace_consumed = 0;
  /// Arguments of every (Weight) firing, in order.
  std::vector<double> weight_log;
  /// Values drawn by (Assume), in order.
  Trace trace;
  std::vector<std::string> warnings;
};

/// Limits the nesting of evaluation so runaway recursion becomes a
/// DynamicError instead of a stack overflow.
inline constexpr int kMaxEvalDepth = 20000;

/// Big-step evaluation of a source term with `assume` values from `source`.
EvalOutcome evaluate(const Env& env, const TermPtr& t, AssumeSource& source, const AnalysisConfig& cfg);

/// Evaluation against a fixed trace.
EvalOutcome eval(const Env& env, const TermPtr& t, const Trace& trace, const AnalysisConfig& cfg);
EvalOutcome eval(const Env& env, const AnfPtr& t, const Trace& trace, const AnalysisConfig& cfg);

/// Forward sampling; the returned trace replays to the same outcome.
EvalOutcome eval_sampling(const Env& env, const TermPtr& t, std::uint64_t seed, const AnalysisConfig& cfg);
EvalOutcome eval_sampling(const Env& env, const AnfPtr& t, std::uint64_t seed, const AnalysisConfig& cfg);

// ---------------------------------------------------------------------------
// Target machine

struct MValue;
using MValuePtr = std::shared_ptr<const MValue>;
struct MEnvNode;
using MEnv = std::shared_ptr<const MEnvNode>;

// Identifiers held by closures and environments point into the target
// program, which must outlive evaluation.
struct MClosure {
  const TargetTerm* lam;  // a tgt::Lam node
  MEnv env;
  const Ident* self = nullptr;

  const tgt::Lam& node() const { return std::get<tgt::Lam>(lam->node); }
};
using ClosurePtr = std::shared_ptr<const MClosure>;

/// c_cps: applied to a continuation and then an argument, it applies the
/// intrinsic and passes the result to the continuation.
struct CpsPrimitive {
  Intrinsic op;
  MValuePtr k;  // set once the continuation has been supplied
};

enum class SusKind : std::uint8_t { Assume, Weight };

struct Suspension {
  SusKind kind;
  Intrinsic arg;  // distribution or weight
  MValuePtr k;
};

struct MValue {
  std::variant<Intrinsic, ClosurePtr, CpsPrimitive, Suspension> v;

  bool is_intrinsic() const { return v.index() == 0; }
  bool is_suspension() const { return v.index() == 3; }
  const Intrinsic& intrinsic() const { return std::get<Intrinsic>(v); }
  const Suspension& suspension() const { return std::get<Suspension>(v); }
  const MClosure* closure() const {
    const auto* c = std::get_if<ClosurePtr>(&v);
    return c ? c->get() : nullptr;
  }
};

struct MEnvNode {
  const Ident* key;
  MValue value;
  MEnv next;
};

std::string to_string(const MValue& v);

/// The runtime value of c_cps for an intrinsic of positive arity.
MValue cps_intrinsic(const Intrinsic& c);

struct Counters {
  std::uint64_t continuation_allocs = 0;
  std::uint64_t closure_allocs = 0;
  std::uint64_t suspensions = 0;
};

/// Per-execution state shared by the machine and its driver.
struct ExecutionContext {
  AssumeSource* source = nullptr;
  double log_prior = 0.0;
  double log_likelihood = 0.0;
  Counters counters;
  Trace trace;
  std::vector<double> weight_log;
  std::vector<std::string> warnings;

  /// The (Assume) rule: draw from `source`, score under the prior, record.
  Intrinsic assume(const Intrinsic& dist);
  /// The (Weight) rule: accumulate log w and record w.
  void weight(const Intrinsic& w);
};

/// Evaluates target terms. Evaluation stops when the result is a value;
/// that value may be a Suspension, which the driver resumes with `apply`.
class Machine {
 public:
  explicit Machine(ExecutionContext& ctx) : ctx_(ctx) {}

  MValue run(const TargetPtr& t, const MEnv& env = nullptr);
  /// Applies `f` to `arg` in tail position (used to resume continuations).
  MValue apply(const MValue& f, const MValue& arg);

 private:
  MValue eval(const TargetTerm* t, MEnv env);

  ExecutionContext& ctx_;
  int depth_ = 0;
};

/// A suspension observed by the trivial driver.
struct SuspensionEvent {
  SusKind kind;
  Intrinsic arg;
};

struct TargetOutcome {
  MValue value;
  double log_weight = 0.0;
  double log_prior = 0.0;
  double log_likelihood = 0.0;
  std::vector<SuspensionEvent> events;
  /// Every (Weight) argument, whether suspended or evaluated in direct style.
  std::vector<double> weight_log;
  Trace trace;
  Counters counters;
  std::vector<std::string> warnings;
};

/// Runs a target term to completion, resuming every suspension at once:
/// SusWeight continues with (), SusAssume with a value from `source`.
TargetOutcome drive(const TargetPtr& t, AssumeSource& source);
TargetOutcome eval_target(const TargetPtr& t, const Trace& trace);
TargetOutcome eval_target(const TargetPtr& t, std::uint64_t seed);

/// log of a weight argument: -inf for w <= 0. Appends a warning for w < 0.
double log_weight_of(double w, std::vector<std::string>& warnings);

}  // namespace pplc
