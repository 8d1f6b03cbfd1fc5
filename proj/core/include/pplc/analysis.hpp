// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pplc/anf.hpp"

namespace pplc {

/// `lam x. y` (a closure of the lambda binding x whose body returns y) or
/// `const_x n` (an intrinsic of remaining arity n originating at x).
struct AbstractValue {
  enum class Kind : std::uint8_t { Lam, Const };
  Kind kind = Kind::Lam;
  Ident x;
  Ident y;    // Lam only
  int n = 0;  // Const only, always >= 1

  static AbstractValue lam(Ident x, Ident y) { return {Kind::Lam, std::move(x), std::move(y), 0}; }
  static AbstractValue constant(Ident x, int n) { return {Kind::Const, std::move(x), Ident(), n}; }

  bool is_lam() const { return kind == Kind::Lam; }
  std::string str() const;

  friend bool operator==(const AbstractValue&, const AbstractValue&) = default;
  friend std::strong_ordering operator<=>(const AbstractValue&, const AbstractValue&) = default;
};

/// One constraint of the suspension analysis. Field use by kind:
///
///   Member            a1 ∈ S_x
///   Subset            S_x ⊆ S_y
///   CondMember        a1 ∈ S_x ⇒ a2 ∈ S_y
///   Suspend           suspend_x
///   SuspendImplies    suspend_x ⇒ suspend_y
///   AppFlow           ∀z∀w λz.w ∈ S_x ⇒ S_y ⊆ S_z ∧ S_w ⊆ S_z'   (x=lhs, y=rhs, z=app)
///   ConstArity        ∀w∀n const_w n ∈ S_x ∧ n > 1 ⇒ const_w (n-1) ∈ S_z   (x=lhs, z=app)
///   LamSuspendToRes   ∀w λw._ ∈ S_x ⇒ (suspend_w ⇒ suspend_z)        (x=lhs, z=res)
///   LamSuspendAll     ∀w λw._ ∈ S_x ⇒ suspend_w
///   ConstSuspendToRes ∀w const_w _ ∈ S_x ⇒ (suspend_w ⇒ suspend_z)
///   ConstSuspendAll   ∀w const_w _ ∈ S_x ⇒ suspend_w
///   ResForcesCallees  suspend_z ⇒ (LamSuspendAll(x) ∧ ConstSuspendAll(x))  (x=lhs, z=res)
struct Constraint {
  enum class Kind : std::uint8_t {
    Member,
    Subset,
    CondMember,
    Suspend,
    SuspendImplies,
    AppFlow,
    ConstArity,
    LamSuspendToRes,
    LamSuspendAll,
    ConstSuspendToRes,
    ConstSuspendAll,
    ResForcesCallees,
  };
  Kind kind;
  Ident x;
  Ident y;
  Ident z;
  AbstractValue a1;
  AbstractValue a2;

  static Constraint member(AbstractValue a, Ident x) { return {Kind::Member, std::move(x), {}, {}, std::move(a), {}}; }
  static Constraint subset(Ident x, Ident y) { return {Kind::Subset, std::move(x), std::move(y), {}, {}, {}}; }
  static Constraint cond_member(AbstractValue a1, Ident x, AbstractValue a2, Ident y) {
    return {Kind::CondMember, std::move(x), std::move(y), {}, std::move(a1), std::move(a2)};
  }
  static Constraint suspend(Ident x) { return {Kind::Suspend, std::move(x), {}, {}, {}, {}}; }
  static Constraint implies(Ident x, Ident y) { return {Kind::SuspendImplies, std::move(x), std::move(y), {}, {}, {}}; }
  static Constraint app_flow(Ident lhs, Ident rhs, Ident app) {
    return {Kind::AppFlow, std::move(lhs), std::move(rhs), std::move(app), {}, {}};
  }
  static Constraint on_lhs(Kind k, Ident lhs, Ident res = {}) { return {k, std::move(lhs), {}, std::move(res), {}, {}}; }

  std::string str() const;

  friend bool operator==(const Constraint&, const Constraint&) = default;
  friend std::strong_ordering operator<=>(const Constraint&, const Constraint&) = default;
};

struct AnalysisConfig {
  bool suspend_assume = false;
  bool suspend_weight = true;
};

struct AnalysisResult {
  std::map<Ident, std::set<AbstractValue>> data;
  std::set<Ident> suspend;
  std::size_t iterations = 0;

  /// data(x), or the empty set.
  const std::set<AbstractValue>& at(const Ident& x) const;
  bool suspends(const Ident& x) const { return suspend.count(x) != 0; }
};

enum class Worklist { Lifo, Fifo };

struct SolverOptions {
  Worklist order = Worklist::Lifo;
  /// Worklist pops allowed before the solver gives up with an
  /// InvariantViolation; 0 picks a bound from the constraint count.
  std::size_t max_iterations = 0;
};

/// Labels of top-level bindings of `t` that may suspend: applications,
/// ifs, and assume/weight when enabled in `cfg`.
std::set<Ident> suspend_names(const AnfPtr& t, const AnalysisConfig& cfg);

/// Constraints for `t`, deduplicated, in generation order.
std::vector<Constraint> generate_constraints(const AnfPtr& t, const AnalysisConfig& cfg);

/// Worklist fixpoint of `cs`.
AnalysisResult solve(const std::vector<Constraint>& cs, const SolverOptions& opts = {});

AnalysisResult analyze_suspend(const AnfPtr& t, const AnalysisConfig& cfg, const SolverOptions& opts = {});

/// True if (data, suspend) satisfies `c`.
bool satisfies(const AnalysisResult& r, const Constraint& c);

/// Constraints of `cs` that `r` violates (empty when `r` is a solution).
std::vector<Constraint> violations(const AnalysisResult& r, const std::vector<Constraint>& cs);

/// JSON report: {"suspend": [...], "data": {...}, "config": {...}}.
std::string analysis_json(const AnalysisResult& r, const AnalysisConfig& cfg);

}  // namespace pplc
