// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pplc/term.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "overloaded.hpp"

namespace pplc {

namespace {

using detail::overloaded;

TermPtr mk(Term::Node n, SourcePos pos) {
  return std::make_shared<const Term>(Term{std::move(n), pos});
}

// Lexically scoped renaming to fresh ids.
class Uniquifier {
 public:
  TermPtr run(const TermPtr& t) {
    return std::visit(
        overloaded{
            [&](const src::Var& v) { return make_var(lookup(v.name), t->pos); },
            [&](const src::Const&) { return t; },
            [&](const src::Lam& l) {
              Ident p = fresh(l.param);
              push(l.param.name, p);
              auto body = run(l.body);
              pop(l.param.name);
              return make_lam(p, body, t->pos);
            },
            [&](const src::App& a) {
              auto f = run(a.fn);
              return make_app(f, run(a.arg), t->pos);
            },
            [&](const src::Let& l) {
              auto bound = run(l.bound);
              Ident x = fresh(l.name);
              push(l.name.name, x);
              auto body = run(l.body);
              pop(l.name.name);
              return make_let(x, bound, body, t->pos);
            },
            [&](const src::LetRec& l) {
              Ident f = fresh(l.name);
              push(l.name.name, f);
              Ident p = fresh(l.param);
              push(l.param.name, p);
              auto fn_body = run(l.fn_body);
              pop(l.param.name);
              auto body = run(l.body);
              pop(l.name.name);
              return make_letrec(f, p, fn_body, body, t->pos);
            },
            [&](const src::If& i) {
              auto c = run(i.cond);
              auto th = run(i.then_branch);
              return make_if(c, th, run(i.else_branch), t->pos);
            },
            [&](const src::Assume& a) { return make_assume(run(a.dist), t->pos); },
            [&](const src::Weight& w) { return make_weight(run(w.weight), t->pos); },
            [&](const src::Seq& s) {
              auto first = run(s.first);
              Ident wild = fresh(Ident("_"));
              return make_app(make_lam(wild, run(s.second), t->pos), first, t->pos);
            },
        },
        t->node);
  }

 private:
  Ident fresh(const Ident& x) { return Ident(x.name, next_++); }
  void push(const std::string& n, const Ident& x) { scope_[n].push_back(x); }
  void pop(const std::string& n) { scope_[n].pop_back(); }
  Ident lookup(const Ident& x) const {
    auto it = scope_.find(x.name);
    if (it == scope_.end() || it->second.empty()) return Ident(x.name);
    return it->second.back();
  }

  std::uint32_t next_ = 1;
  std::unordered_map<std::string, std::vector<Ident>> scope_;
};

class AlphaEq {
 public:
  bool eq(const TermPtr& a, const TermPtr& b) {
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        overloaded{
            [&](const src::Var& x) {
              const auto& y = std::get<src::Var>(b->node);
              return same_var(x.name, y.name);
            },
            [&](const src::Const& x) {
              const auto& y = std::get<src::Const>(b->node);
              return x.value.tag() == y.value.tag() && x.value == y.value;
            },
            [&](const src::Lam& x) {
              const auto& y = std::get<src::Lam>(b->node);
              bind(x.param, y.param);
              return eq(x.body, y.body);
            },
            [&](const src::App& x) {
              const auto& y = std::get<src::App>(b->node);
              return eq(x.fn, y.fn) && eq(x.arg, y.arg);
            },
            [&](const src::Let& x) {
              const auto& y = std::get<src::Let>(b->node);
              if (!eq(x.bound, y.bound)) return false;
              bind(x.name, y.name);
              return eq(x.body, y.body);
            },
            [&](const src::LetRec& x) {
              const auto& y = std::get<src::LetRec>(b->node);
              bind(x.name, y.name);
              bind(x.param, y.param);
              return eq(x.fn_body, y.fn_body) && eq(x.body, y.body);
            },
            [&](const src::If& x) {
              const auto& y = std::get<src::If>(b->node);
              return eq(x.cond, y.cond) && eq(x.then_branch, y.then_branch) &&
                     eq(x.else_branch, y.else_branch);
            },
            [&](const src::Assume& x) { return eq(x.dist, std::get<src::Assume>(b->node).dist); },
            [&](const src::Weight& x) { return eq(x.weight, std::get<src::Weight>(b->node).weight); },
            [&](const src::Seq& x) {
              const auto& y = std::get<src::Seq>(b->node);
              return eq(x.first, y.first) && eq(x.second, y.second);
            },
        },
        a->node);
  }

 private:
  // Binders are unique after desugaring, but shadowing in raw parses is
  // handled by keeping the most recent pairing per identifier.
  void bind(const Ident& x, const Ident& y) {
    left_[key(x)] = key(y);
    right_[key(y)] = key(x);
  }
  static std::string key(const Ident& x) { return x.str(); }
  bool same_var(const Ident& x, const Ident& y) const {
    auto l = left_.find(key(x));
    auto r = right_.find(key(y));
    if (l == left_.end() && r == right_.end()) return x.name == y.name;
    return l != left_.end() && r != right_.end() && l->second == key(y) && r->second == key(x);
  }

  std::map<std::string, std::string> left_, right_;
};

void collect_free(const TermPtr& t, std::multiset<std::string>& bound, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const src::Var& v) {
                   if (!bound.count(v.name.name)) out.insert(v.name.name);
                 },
                 [&](const src::Const&) {},
                 [&](const src::Lam& l) {
                   auto it = bound.insert(l.param.name);
                   collect_free(l.body, bound, out);
                   bound.erase(it);
                 },
                 [&](const src::App& a) {
                   collect_free(a.fn, bound, out);
                   collect_free(a.arg, bound, out);
                 },
                 [&](const src::Let& l) {
                   collect_free(l.bound, bound, out);
                   auto it = bound.insert(l.name.name);
                   collect_free(l.body, bound, out);
                   bound.erase(it);
                 },
                 [&](const src::LetRec& l) {
                   auto f = bound.insert(l.name.name);
                   auto p = bound.insert(l.param.name);
                   collect_free(l.fn_body, bound, out);
                   bound.erase(p);
                   collect_free(l.body, bound, out);
                   bound.erase(f);
                 },
                 [&](const src::If& i) {
                   collect_free(i.cond, bound, out);
                   collect_free(i.then_branch, bound, out);
                   collect_free(i.else_branch, bound, out);
                 },
                 [&](const src::Assume& a) { collect_free(a.dist, bound, out); },
                 [&](const src::Weight& w) { collect_free(w.weight, bound, out); },
                 [&](const src::Seq& s) {
                   collect_free(s.first, bound, out);
                   collect_free(s.second, bound, out);
                 },
             },
             t->node);
}

template <class F>
void for_each_child(const TermPtr& t, F&& f) {
  std::visit(overloaded{
                 [&](const src::Var&) {},
                 [&](const src::Const&) {},
                 [&](const src::Lam& l) { f(l.body); },
                 [&](const src::App& a) { f(a.fn); f(a.arg); },
                 [&](const src::Let& l) { f(l.bound); f(l.body); },
                 [&](const src::LetRec& l) { f(l.fn_body); f(l.body); },
                 [&](const src::If& i) { f(i.cond); f(i.then_branch); f(i.else_branch); },
                 [&](const src::Assume& a) { f(a.dist); },
                 [&](const src::Weight& w) { f(w.weight); },
                 [&](const src::Seq& s) { f(s.first); f(s.second); },
             },
             t->node);
}

}  // namespace

TermPtr make_var(Ident x, SourcePos pos) { return mk(src::Var{std::move(x)}, pos); }
TermPtr make_const(Intrinsic c, SourcePos pos) { return mk(src::Const{std::move(c)}, pos); }
TermPtr make_lam(Ident p, TermPtr body, SourcePos pos) { return mk(src::Lam{std::move(p), std::move(body)}, pos); }
TermPtr make_app(TermPtr f, TermPtr a, SourcePos pos) { return mk(src::App{std::move(f), std::move(a)}, pos); }
TermPtr make_let(Ident x, TermPtr b, TermPtr body, SourcePos pos) {
  return mk(src::Let{std::move(x), std::move(b), std::move(body)}, pos);
}
TermPtr make_letrec(Ident f, Ident p, TermPtr fb, TermPtr body, SourcePos pos) {
  return mk(src::LetRec{std::move(f), std::move(p), std::move(fb), std::move(body)}, pos);
}
TermPtr make_if(TermPtr c, TermPtr t, TermPtr e, SourcePos pos) {
  return mk(src::If{std::move(c), std::move(t), std::move(e)}, pos);
}
TermPtr make_assume(TermPtr d, SourcePos pos) { return mk(src::Assume{std::move(d)}, pos); }
TermPtr make_weight(TermPtr w, SourcePos pos) { return mk(src::Weight{std::move(w)}, pos); }
TermPtr make_seq(TermPtr a, TermPtr b, SourcePos pos) { return mk(src::Seq{std::move(a), std::move(b)}, pos); }

TermPtr desugar(const TermPtr& t) { return Uniquifier().run(t); }

bool alpha_equivalent(const TermPtr& a, const TermPtr& b) { return AlphaEq().eq(a, b); }

std::set<std::string> free_variables(const TermPtr& t) {
  std::multiset<std::string> bound;
  std::set<std::string> out;
  collect_free(t, bound, out);
  return out;
}

std::uint32_t max_ident_id(const TermPtr& t) {
  std::uint32_t m = 0;
  auto see = [&](const Ident& x) { m = std::max(m, x.id); };
  std::visit(overloaded{
                 [&](const src::Var& v) { see(v.name); },
                 [&](const src::Lam& l) { see(l.param); },
                 [&](const src::Let& l) { see(l.name); },
                 [&](const src::LetRec& l) { see(l.name); see(l.param); },
                 [](const auto&) {},
             },
             t->node);
  for_each_child(t, [&](const TermPtr& c) { m = std::max(m, max_ident_id(c)); });
  return m;
}

bool contains_seq(const TermPtr& t) {
  if (std::holds_alternative<src::Seq>(t->node)) return true;
  bool found = false;
  for_each_child(t, [&](const TermPtr& c) { found = found || contains_seq(c); });
  return found;
}

}  // namespace pplc
