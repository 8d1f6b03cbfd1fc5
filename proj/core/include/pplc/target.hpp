// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <variant>

#include "pplc/ident.hpp"
#include "pplc/intrinsic.hpp"

namespace pplc {

struct TargetTerm;
using TargetPtr = std::shared_ptr<const TargetTerm>;

namespace tgt {
struct Var { Ident name; };
/// An intrinsic; `cps` marks the continuation-taking wrapper c_cps.
struct Const { Intrinsic value; bool cps = false; };
/// `continuation` marks closures built by the CPS transform to carry the
/// rest of a computation. They are what the allocation counter counts.
struct Lam { Ident param; TargetPtr body; bool continuation = false; };
struct App { TargetPtr fn; TargetPtr arg; };
struct Let { Ident name; TargetPtr bound; TargetPtr body; bool recursive = false; };
struct If { TargetPtr cond; TargetPtr then_branch; TargetPtr else_branch; };
struct Assume { TargetPtr dist; };
struct Weight { TargetPtr weight; };
struct SusAssume { TargetPtr dist; TargetPtr cont; };
struct SusWeight { TargetPtr weight; TargetPtr cont; };
}  // namespace tgt

/// Output language of the CPS transform: source terms plus suspensions.
struct TargetTerm {
  using Node = std::variant<tgt::Var, tgt::Const, tgt::Lam, tgt::App, tgt::Let, tgt::If, tgt::Assume,
                            tgt::Weight, tgt::SusAssume, tgt::SusWeight>;
  Node node;
};

TargetPtr tvar(Ident x);
TargetPtr tconst(Intrinsic c, bool cps = false);
TargetPtr tlam(Ident param, TargetPtr body, bool continuation = false);
TargetPtr tapp(TargetPtr fn, TargetPtr arg);
TargetPtr tlet(Ident x, TargetPtr bound, TargetPtr body, bool recursive = false);
TargetPtr tif(TargetPtr c, TargetPtr t, TargetPtr e);
TargetPtr tassume(TargetPtr d);
TargetPtr tweight(TargetPtr w);
TargetPtr tsus_assume(TargetPtr d, TargetPtr k);
TargetPtr tsus_weight(TargetPtr w, TargetPtr k);

/// Exact structural equality, identifiers compared by id (names for free
/// variables) and the continuation/cps markers included.
bool structurally_equal(const TargetPtr& a, const TargetPtr& b);

struct SusCounts {
  int assume = 0;
  int weight = 0;
};
SusCounts count_suspensions(const TargetPtr& t);

}  // namespace pplc
