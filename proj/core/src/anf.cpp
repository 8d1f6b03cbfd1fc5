// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pplc/anf.hpp"

#include <functional>
#include <optional>

#include "overloaded.hpp"

namespace pplc {

namespace {

using detail::overloaded;
using Cont = std::function<AnfPtr(const Ident&)>;

class Normalizer {
 public:
  explicit Normalizer(std::uint32_t next) : next_(next) {}

  AnfPtr tail(const TermPtr& t) {
    return bind(t, std::nullopt, [](const Ident& x) { return make_ret(x); });
  }

  // Evaluates `t`, names its value (with `label` if given) and hands the
  // name to `k`.
  AnfPtr bind(const TermPtr& t, std::optional<Ident> label, const Cont& k) {
    auto named = [&](AnfBinding b) {
      Ident x = label ? *label : fresh();
      return make_anf_let(x, std::move(b), k(x));
    };
    return std::visit(
        overloaded{
            [&](const src::Var& v) -> AnfPtr {
              if (!label) return k(v.name);
              return named(anf::Var{v.name});
            },
            [&](const src::Const& c) -> AnfPtr { return named(anf::Const{c.value}); },
            [&](const src::Lam& l) -> AnfPtr { return named(anf::Lam{l.param, tail(l.body)}); },
            [&](const src::App& a) -> AnfPtr {
              if (const auto* lam = std::get_if<src::Lam>(&a.fn->node)) {
                return bind_let(lam->param, a.arg, lam->body, label, k);
              }
              return bind(a.fn, std::nullopt, [&](const Ident& f) {
                return bind(a.arg, std::nullopt, [&](const Ident& x) { return named(anf::App{f, x}); });
              });
            },
            [&](const src::Let& l) -> AnfPtr { return bind_let(l.name, l.bound, l.body, label, k); },
            [&](const src::LetRec& l) -> AnfPtr {
              auto fn = tail(l.fn_body);
              auto rest = bind(l.body, label, k);
              return make_anf_let(l.name, anf::Lam{l.param, fn}, rest, true);
            },
            [&](const src::If& i) -> AnfPtr {
              return bind(i.cond, std::nullopt, [&](const Ident& c) {
                return named(anf::If{c, tail(i.then_branch), tail(i.else_branch)});
              });
            },
            [&](const src::Assume& a) -> AnfPtr {
              return bind(a.dist, std::nullopt, [&](const Ident& d) { return named(anf::Assume{d}); });
            },
            [&](const src::Weight& w) -> AnfPtr {
              return bind(w.weight, std::nullopt, [&](const Ident& x) { return named(anf::Weight{x}); });
            },
            [&](const src::Seq& s) -> AnfPtr { return bind_let(fresh_wild(), s.first, s.second, label, k); },
        },
        t->node);
  }

 private:
  AnfPtr bind_let(const Ident& x, const TermPtr& bound, const TermPtr& body, std::optional<Ident> label,
                  const Cont& k) {
    return bind(bound, x, [&](const Ident&) { return bind(body, label, k); });
  }

  Ident fresh() { return Ident("%t", next_++); }
  Ident fresh_wild() { return Ident("_", next_++); }

  std::uint32_t next_;
};

void collect(const AnfPtr& t, bool with_params, std::vector<Ident>& out) {
  const AnfTerm* cur = t.get();
  while (!cur->is_ret()) {
    const auto& l = cur->let();
    out.push_back(l.label);
    std::visit(overloaded{
                   [&](const anf::Lam& lam) {
                     if (with_params) out.push_back(lam.param);
                     collect(lam.body, with_params, out);
                   },
                   [&](const anf::If& i) {
                     collect(i.then_branch, with_params, out);
                     collect(i.else_branch, with_params, out);
                   },
                   [](const auto&) {},
               },
               l.binding);
    cur = l.body.get();
  }
}

}  // namespace

AnfPtr make_ret(Ident x) { return std::make_shared<const AnfTerm>(AnfTerm{anf::Ret{std::move(x)}}); }

AnfPtr make_anf_let(Ident label, AnfBinding binding, AnfPtr body, bool recursive) {
  return std::make_shared<const AnfTerm>(
      AnfTerm{anf::Let{std::move(label), std::move(binding), std::move(body), recursive}});
}

AnfPtr to_anf(const TermPtr& desugared) {
  return Normalizer(max_ident_id(desugared) + 1).tail(desugared);
}

AnfPtr anf_of_source(const TermPtr& parsed) { return to_anf(desugar(parsed)); }

const Ident& name(const AnfTerm& t) {
  const AnfTerm* cur = &t;
  while (!cur->is_ret()) cur = cur->let().body.get();
  return std::get<anf::Ret>(cur->node).name;
}

bool is_well_formed_anf(const AnfPtr& t) {
  if (!t) return false;
  const AnfTerm* cur = t.get();
  while (!cur->is_ret()) {
    const auto& l = cur->let();
    if (!l.body) return false;
    bool ok = std::visit(overloaded{
                             [&](const anf::Lam& lam) { return is_well_formed_anf(lam.body); },
                             [&](const anf::If& i) {
                               return !l.recursive && is_well_formed_anf(i.then_branch) &&
                                      is_well_formed_anf(i.else_branch);
                             },
                             [&](const auto&) { return !l.recursive; },
                         },
                         l.binding);
    if (!ok) return false;
    cur = l.body.get();
  }
  return true;
}

std::vector<Ident> binders(const AnfPtr& t) {
  std::vector<Ident> out;
  collect(t, true, out);
  return out;
}

std::vector<Ident> let_labels(const AnfPtr& t) {
  std::vector<Ident> out;
  collect(t, false, out);
  return out;
}

std::uint32_t max_ident_id(const AnfPtr& t) {
  std::uint32_t m = name(t).id;
  for (const auto& x : binders(t)) m = std::max(m, x.id);
  return m;
}

TermPtr to_source(const AnfPtr& t) {
  if (t->is_ret()) return make_var(std::get<anf::Ret>(t->node).name);
  const auto& l = t->let();
  auto body = to_source(l.body);
  if (l.recursive) {
    const auto& lam = std::get<anf::Lam>(l.binding);
    return make_letrec(l.label, lam.param, to_source(lam.body), body);
  }
  TermPtr bound = std::visit(
      overloaded{
          [](const anf::Var& v) { return make_var(v.name); },
          [](const anf::Const& c) { return make_const(c.value); },
          [](const anf::Lam& lam) { return make_lam(lam.param, to_source(lam.body)); },
          [](const anf::App& a) { return make_app(make_var(a.fn), make_var(a.arg)); },
          [](const anf::If& i) {
            return make_if(make_var(i.cond), to_source(i.then_branch), to_source(i.else_branch));
          },
          [](const anf::Assume& a) { return make_assume(make_var(a.dist)); },
          [](const anf::Weight& w) { return make_weight(make_var(w.weight)); },
      },
      l.binding);
  return make_let(l.label, bound, body);
}

BindingCounts count_bindings(const AnfPtr& t) {
  BindingCounts c;
  std::function<void(const AnfPtr&)> walk = [&](const AnfPtr& u) {
    for (const AnfTerm* cur = u.get(); !cur->is_ret(); cur = cur->let().body.get()) {
      const auto& l = cur->let();
      if (l.recursive) ++c.recs;
      std::visit(overloaded{
                     [&](const anf::Var&) { ++c.vars; },
                     [&](const anf::Const&) { ++c.consts; },
                     [&](const anf::Lam& lam) {
                       ++c.lams;
                       walk(lam.body);
                     },
                     [&](const anf::App&) { ++c.apps; },
                     [&](const anf::If& i) {
                       ++c.ifs;
                       walk(i.then_branch);
                       walk(i.else_branch);
                     },
                     [&](const anf::Assume&) { ++c.assumes; },
                     [&](const anf::Weight&) { ++c.weights; },
                 },
                 l.binding);
    }
  };
  walk(t);
  return c;
}

}  // namespace pplc
