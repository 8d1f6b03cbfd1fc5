// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pplc/pretty.hpp"

#include <string>

#include "overloaded.hpp"

namespace pplc {

namespace {

using detail::overloaded;

std::string pad(int n) { return std::string(static_cast<std::size_t>(n), ' '); }

std::string constant(const Intrinsic& c) {
  std::string s = to_string(c);
  if (!s.empty() && s[0] == '-') return "(" + s + ")";
  return s;
}

class SourcePrinter {
 public:
  std::string expr(const TermPtr& t, int ind) {
    return std::visit(
        overloaded{
            [&](const src::Lam& l) { return "lam " + l.param.str() + ". " + expr(l.body, ind + 2); },
            [&](const src::Let& l) {
              return "let " + l.name.str() + " = " + expr(l.bound, ind + 2) + " in\n" + pad(ind) +
                     expr(l.body, ind);
            },
            [&](const src::LetRec& l) {
              return "let rec " + l.name.str() + " = lam " + l.param.str() + ".\n" + pad(ind + 2) +
                     expr(l.fn_body, ind + 2) + "\n" + pad(ind) + "in\n" + pad(ind) + expr(l.body, ind);
            },
            [&](const src::If& i) {
              return "if " + expr(i.cond, ind + 2) + " then\n" + pad(ind + 2) + expr(i.then_branch, ind + 2) +
                     "\n" + pad(ind) + "else\n" + pad(ind + 2) + expr(i.else_branch, ind + 2);
            },
            [&](const src::Seq& s) { return atom(s.first, ind) + ";\n" + pad(ind) + expr(s.second, ind); },
            [&](const auto&) { return app(t, ind); },
        },
        t->node);
  }

 private:
  std::string app(const TermPtr& t, int ind) {
    return std::visit(overloaded{
                          [&](const src::App& a) { return app(a.fn, ind) + " " + atom(a.arg, ind); },
                          [&](const src::Assume& a) { return "assume " + atom(a.dist, ind); },
                          [&](const src::Weight& w) { return "weight " + atom(w.weight, ind); },
                          [&](const auto&) { return atom(t, ind); },
                      },
                      t->node);
  }

  std::string atom(const TermPtr& t, int ind) {
    if (const auto* v = std::get_if<src::Var>(&t->node)) return v->name.str();
    if (const auto* c = std::get_if<src::Const>(&t->node)) return constant(c->value);
    return "(" + expr(t, ind + 1) + ")";
  }
};

class TargetPrinter {
 public:
  std::string expr(const TargetPtr& t, int ind) {
    return std::visit(
        overloaded{
            [&](const tgt::Lam& l) {
              if (std::holds_alternative<tgt::Lam>(l.body->node)) {
                return "lam " + l.param.str() + ". " + expr(l.body, ind);
              }
              return "lam " + l.param.str() + ".\n" + pad(ind + 2) + expr(l.body, ind + 2);
            },
            [&](const tgt::Let& l) {
              return std::string(l.recursive ? "let rec " : "let ") + l.name.str() + " = " +
                     expr(l.bound, ind + 2) + "\n" + pad(ind) + "in\n" + pad(ind) + expr(l.body, ind);
            },
            [&](const tgt::If& i) {
              return "if " + expr(i.cond, ind + 2) + " then\n" + pad(ind + 2) + expr(i.then_branch, ind + 2) +
                     "\n" + pad(ind) + "else\n" + pad(ind + 2) + expr(i.else_branch, ind + 2);
            },
            [&](const tgt::SusAssume& s) {
              return "Sus_assume(" + expr(s.dist, ind + 2) + ",\n" + pad(ind + 2) + expr(s.cont, ind + 2) + ")";
            },
            [&](const tgt::SusWeight& s) {
              return "Sus_weight(" + expr(s.weight, ind + 2) + ",\n" + pad(ind + 2) + expr(s.cont, ind + 2) + ")";
            },
            [&](const auto&) { return app(t, ind); },
        },
        t->node);
  }

 private:
  std::string app(const TargetPtr& t, int ind) {
    return std::visit(overloaded{
                          [&](const tgt::App& a) { return app(a.fn, ind) + " " + atom(a.arg, ind); },
                          [&](const tgt::Assume& a) { return "assume " + atom(a.dist, ind); },
                          [&](const tgt::Weight& w) { return "weight " + atom(w.weight, ind); },
                          [&](const auto&) { return atom(t, ind); },
                      },
                      t->node);
  }

  std::string atom(const TargetPtr& t, int ind) {
    if (const auto* v = std::get_if<tgt::Var>(&t->node)) return v->name.str();
    if (const auto* c = std::get_if<tgt::Const>(&t->node)) {
      return c->cps ? to_string(c->value) + "_cps" : constant(c->value);
    }
    return "(" + expr(t, ind + 1) + ")";
  }
};

}  // namespace

std::string pretty(const TermPtr& t) { return SourcePrinter().expr(t, 0); }

std::string pretty(const AnfPtr& t) { return pretty(to_source(t)); }

std::string pretty(const TargetPtr& t) { return TargetPrinter().expr(t, 0); }

}  // namespace pplc
