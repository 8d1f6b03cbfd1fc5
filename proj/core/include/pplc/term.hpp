// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <variant>

#include "pplc/ident.hpp"
#include "pplc/intrinsic.hpp"

namespace pplc {

struct SourcePos {
  int line = 0;
  int column = 0;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

namespace src {
struct Var { Ident name; };
struct Const { Intrinsic value; };
struct Lam { Ident param; TermPtr body; };
struct App { TermPtr fn; TermPtr arg; };
struct Let { Ident name; TermPtr bound; TermPtr body; };
/// let rec name = lam param. fn_body in body
struct LetRec { Ident name; Ident param; TermPtr fn_body; TermPtr body; };
struct If { TermPtr cond; TermPtr then_branch; TermPtr else_branch; };
struct Assume { TermPtr dist; };
struct Weight { TermPtr weight; };
/// first; second
struct Seq { TermPtr first; TermPtr second; };
}  // namespace src

/// Source-language term. Nodes are immutable and shared.
struct Term {
  using Node = std::variant<src::Var, src::Const, src::Lam, src::App, src::Let, src::LetRec,
                            src::If, src::Assume, src::Weight, src::Seq>;
  Node node;
  SourcePos pos;
};

TermPtr make_var(Ident x, SourcePos pos = {});
TermPtr make_const(Intrinsic c, SourcePos pos = {});
TermPtr make_lam(Ident param, TermPtr body, SourcePos pos = {});
TermPtr make_app(TermPtr fn, TermPtr arg, SourcePos pos = {});
TermPtr make_let(Ident name, TermPtr bound, TermPtr body, SourcePos pos = {});
TermPtr make_letrec(Ident name, Ident param, TermPtr fn_body, TermPtr body, SourcePos pos = {});
TermPtr make_if(TermPtr c, TermPtr t, TermPtr e, SourcePos pos = {});
TermPtr make_assume(TermPtr d, SourcePos pos = {});
TermPtr make_weight(TermPtr w, SourcePos pos = {});
TermPtr make_seq(TermPtr first, TermPtr second, SourcePos pos = {});

/// Removes `t1; t2` (becoming `(lam _. t2) t1`) and gives every binding site
/// a fresh unique id, numbered from 1 in binding order. Free variables keep
/// id 0. `let rec` is kept as a native recursive binding.
TermPtr desugar(const TermPtr& t);

/// Structural equality modulo consistent renaming of bound identifiers.
bool alpha_equivalent(const TermPtr& a, const TermPtr& b);

/// Free variables, by name (ids ignored).
std::set<std::string> free_variables(const TermPtr& t);

/// Largest unique id occurring in `t` (0 if none).
std::uint32_t max_ident_id(const TermPtr& t);

bool contains_seq(const TermPtr& t);

}  // namespace pplc
