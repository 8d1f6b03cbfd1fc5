// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pplc/target.hpp"

#include "overloaded.hpp"

namespace pplc {

namespace {

using detail::overloaded;

TargetPtr mk(TargetTerm::Node n) { return std::make_shared<const TargetTerm>(TargetTerm{std::move(n)}); }

template <class F>
void for_each_child(const TargetPtr& t, F&& f) {
  std::visit(overloaded{
                 [&](const tgt::Var&) {},
                 [&](const tgt::Const&) {},
                 [&](const tgt::Lam& l) { f(l.body); },
                 [&](const tgt::App& a) { f(a.fn); f(a.arg); },
                 [&](const tgt::Let& l) { f(l.bound); f(l.body); },
                 [&](const tgt::If& i) { f(i.cond); f(i.then_branch); f(i.else_branch); },
                 [&](const tgt::Assume& a) { f(a.dist); },
                 [&](const tgt::Weight& w) { f(w.weight); },
                 [&](const tgt::SusAssume& s) { f(s.dist); f(s.cont); },
                 [&](const tgt::SusWeight& s) { f(s.weight); f(s.cont); },
             },
             t->node);
}

}  // namespace

TargetPtr tvar(Ident x) { return mk(tgt::Var{std::move(x)}); }
TargetPtr tconst(Intrinsic c, bool cps) { return mk(tgt::Const{std::move(c), cps}); }
TargetPtr tlam(Ident p, TargetPtr body, bool continuation) {
  return mk(tgt::Lam{std::move(p), std::move(body), continuation});
}
TargetPtr tapp(TargetPtr f, TargetPtr a) { return mk(tgt::App{std::move(f), std::move(a)}); }
TargetPtr tlet(Ident x, TargetPtr b, TargetPtr body, bool recursive) {
  return mk(tgt::Let{std::move(x), std::move(b), std::move(body), recursive});
}
TargetPtr tif(TargetPtr c, TargetPtr t, TargetPtr e) { return mk(tgt::If{std::move(c), std::move(t), std::move(e)}); }
TargetPtr tassume(TargetPtr d) { return mk(tgt::Assume{std::move(d)}); }
TargetPtr tweight(TargetPtr w) { return mk(tgt::Weight{std::move(w)}); }
TargetPtr tsus_assume(TargetPtr d, TargetPtr k) { return mk(tgt::SusAssume{std::move(d), std::move(k)}); }
TargetPtr tsus_weight(TargetPtr w, TargetPtr k) { return mk(tgt::SusWeight{std::move(w), std::move(k)}); }

bool structurally_equal(const TargetPtr& a, const TargetPtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  bool same = std::visit(
      overloaded{
          [&](const tgt::Var& x) { return x.name == std::get<tgt::Var>(b->node).name; },
          [&](const tgt::Const& x) {
            const auto& y = std::get<tgt::Const>(b->node);
            return x.cps == y.cps && x.value.tag() == y.value.tag() && x.value == y.value;
          },
          [&](const tgt::Lam& x) {
            const auto& y = std::get<tgt::Lam>(b->node);
            return x.param == y.param && x.continuation == y.continuation;
          },
          [&](const tgt::Let& x) {
            const auto& y = std::get<tgt::Let>(b->node);
            return x.name == y.name && x.recursive == y.recursive;
          },
          [](const auto&) { return true; },
      },
      a->node);
  if (!same) return false;
  std::vector<TargetPtr> ca, cb;
  for_each_child(a, [&](const TargetPtr& c) { ca.push_back(c); });
  for_each_child(b, [&](const TargetPtr& c) { cb.push_back(c); });
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!structurally_equal(ca[i], cb[i])) return false;
  }
  return true;
}

SusCounts count_suspensions(const TargetPtr& t) {
  SusCounts c;
  if (std::holds_alternative<tgt::SusAssume>(t->node)) ++c.assume;
  if (std::holds_alternative<tgt::SusWeight>(t->node)) ++c.weight;
  for_each_child(t, [&](const TargetPtr& ch) {
    auto s = count_suspensions(ch);
    c.assume += s.assume;
    c.weight += s.weight;
  });
  return c;
}

}  // namespace pplc
