// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <set>
#include <variant>
#include <vector>

#include "pplc/ident.hpp"
#include "pplc/intrinsic.hpp"
#include "pplc/term.hpp"

namespace pplc {

struct AnfTerm;
using AnfPtr = std::shared_ptr<const AnfTerm>;

namespace anf {
struct Var { Ident name; };
struct Const { Intrinsic value; };
struct Lam { Ident param; AnfPtr body; };
struct App { Ident fn; Ident arg; };
struct If { Ident cond; AnfPtr then_branch; AnfPtr else_branch; };
struct Assume { Ident dist; };
struct Weight { Ident weight; };

/// Tail of a let-chain: a bare variable.
struct Ret { Ident name; };
}  // namespace anf

using AnfBinding =
    std::variant<anf::Var, anf::Const, anf::Lam, anf::App, anf::If, anf::Assume, anf::Weight>;

namespace anf {
/// let label = binding in body. `recursive` marks `let rec`, whose binding
/// is always a Lam and whose label is in scope inside that Lam.
struct Let {
  Ident label;
  AnfBinding binding;
  AnfPtr body;
  bool recursive = false;
};
}  // namespace anf

/// A-normal form term: a chain of uniquely labelled let-bindings ending in
/// a variable.
struct AnfTerm {
  std::variant<anf::Ret, anf::Let> node;

  bool is_ret() const { return std::holds_alternative<anf::Ret>(node); }
  const anf::Let& let() const { return std::get<anf::Let>(node); }
};

AnfPtr make_ret(Ident x);
AnfPtr make_anf_let(Ident label, AnfBinding binding, AnfPtr body, bool recursive = false);

/// Converts a desugared, uniquified term to ANF. Evaluation order is left to
/// right: function before argument, condition before branches. Every
/// non-variable subterm gets a fresh `%tN` label; `let x = t` keeps the
/// label `x` for the binding of `t`, and `(lam x. b) a` is bound as
/// `let x = a in b`.
AnfPtr to_anf(const TermPtr& desugared);

/// parse -> desugar -> to_anf convenience.
AnfPtr anf_of_source(const TermPtr& parsed);

/// The variable a let-chain returns.
const Ident& name(const AnfTerm& t);
inline const Ident& name(const AnfPtr& t) { return name(*t); }

/// True iff `t` satisfies the ANF grammar: every binding's sub-terms are
/// themselves ANF and `let rec` binds only lambdas.
bool is_well_formed_anf(const AnfPtr& t);

/// Every let-label and lambda parameter, in program order.
std::vector<Ident> binders(const AnfPtr& t);

/// Let-labels only, in program order (duplicates preserved).
std::vector<Ident> let_labels(const AnfPtr& t);

std::uint32_t max_ident_id(const AnfPtr& t);

/// Embeds an ANF term back into the source language (ANF is a subset).
TermPtr to_source(const AnfPtr& t);

/// Counts of bindings by kind, used to compare shapes of programs.
struct BindingCounts {
  int vars = 0, consts = 0, lams = 0, apps = 0, ifs = 0, assumes = 0, weights = 0, recs = 0;
};
BindingCounts count_bindings(const AnfPtr& t);

}  // namespace pplc
