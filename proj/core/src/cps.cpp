// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pplc/cps.hpp"

#include <optional>

#include "overloaded.hpp"
#include "pplc/error.hpp"

namespace pplc {

namespace {

using detail::overloaded;

class Transformer {
 public:
  Transformer(const VarsSet& vars, std::uint32_t next) : vars_(vars), next_(next) {}

  // cont is absent or a variable naming the continuation.
  TargetPtr run(const std::optional<Ident>& cont, const AnfPtr& t) {
    if (t->is_ret()) {
      const Ident& x = std::get<anf::Ret>(t->node).name;
      return cont ? tapp(tvar(*cont), tvar(x)) : tvar(x);
    }
    const auto& l = t->let();
    const Ident& x = l.label;
    bool sel = vars_.count(x) != 0;
    auto rest = [&] { return run(cont, l.body); };
    auto plain = [&](TargetPtr bound) { return tlet(x, std::move(bound), rest(), l.recursive); };
    auto kont = [&] { return tlam(x, rest(), true); };
    bool tail = tail_call(*t);

    return std::visit(
        overloaded{
            [&](const anf::Var& v) { return plain(tvar(v.name)); },
            [&](const anf::Const& c) { return plain(tconst(c.value, sel && c.value.arity() > 0)); },
            [&](const anf::Lam& lam) {
              if (vars_.count(lam.param)) {
                Ident k = fresh();
                return plain(tlam(k, tlam(lam.param, run(k, lam.body))));
              }
              return plain(tlam(lam.param, run(std::nullopt, lam.body)));
            },
            [&](const anf::App& a) {
              if (!sel) return plain(tapp(tvar(a.fn), tvar(a.arg)));
              TargetPtr k = tail && cont ? tvar(*cont) : kont();
              return tapp(tapp(tvar(a.fn), k), tvar(a.arg));
            },
            [&](const anf::If& i) {
              if (!sel) {
                return plain(tif(tvar(i.cond), run(std::nullopt, i.then_branch), run(std::nullopt, i.else_branch)));
              }
              if (tail && cont) return tif(tvar(i.cond), run(cont, i.then_branch), run(cont, i.else_branch));
              Ident k = fresh();
              return tlet(k, kont(), tif(tvar(i.cond), run(k, i.then_branch), run(k, i.else_branch)));
            },
            [&](const anf::Assume& a) {
              if (!sel) return plain(tassume(tvar(a.dist)));
              return tsus_assume(tvar(a.dist), tail && cont ? tvar(*cont) : kont());
            },
            [&](const anf::Weight& w) {
              if (!sel) return plain(tweight(tvar(w.weight)));
              return tsus_weight(tvar(w.weight), tail && cont ? tvar(*cont) : kont());
            },
        },
        l.binding);
  }

 private:
  Ident fresh() { return Ident("%k", next_++); }

  const VarsSet& vars_;
  std::uint32_t next_;
};

void check_apps(const AnfPtr& t, const VarsSet& vars, const AnalysisResult& r) {
  for (const AnfTerm* cur = t.get(); !cur->is_ret(); cur = cur->let().body.get()) {
    const auto& l = cur->let();
    std::visit(overloaded{
                   [&](const anf::App& a) {
                     bool sel = vars.count(l.label) != 0;
                     for (const auto& av : r.at(a.fn)) {
                       if ((vars.count(av.x) != 0) != sel) {
                         throw MalformedVars("application " + l.label.str() + (sel ? " is" : " is not") +
                                             " selected but its callee " + av.str() + (sel ? " is not" : " is"));
                       }
                     }
                   },
                   [&](const anf::Lam& lam) { check_apps(lam.body, vars, r); },
                   [&](const anf::If& i) {
                     check_apps(i.then_branch, vars, r);
                     check_apps(i.else_branch, vars, r);
                   },
                   [](const auto&) {},
               },
               l.binding);
  }
}

}  // namespace

std::string_view to_string(CpsMode m) {
  switch (m) {
    case CpsMode::None: return "none";
    case CpsMode::Selective: return "selective";
    case CpsMode::Full: return "full";
  }
  return "?";
}

CpsMode cps_mode_from_string(std::string_view s) {
  if (s == "none") return CpsMode::None;
  if (s == "selective") return CpsMode::Selective;
  if (s == "full") return CpsMode::Full;
  throw Error("unknown CPS mode '" + std::string(s) + "' (expected none, selective or full)");
}

bool tail_call(const AnfTerm& t) {
  if (t.is_ret()) return false;
  const auto& l = t.let();
  return l.body->is_ret() && std::get<anf::Ret>(l.body->node).name == l.label;
}

TargetPtr selective_cps(const VarsSet& vars, const AnfPtr& t) {
  return Transformer(vars, max_ident_id(t) + 1).run(std::nullopt, t);
}

VarsSet all_labels(const AnfPtr& t) {
  auto bs = binders(t);
  return VarsSet(bs.begin(), bs.end());
}

void check_vars(const AnfPtr& t, const VarsSet& vars, const AnalysisResult& analysis) {
  check_apps(t, vars, analysis);
}

VarsSet select_vars(CpsMode mode, const AnfPtr& t, const AnalysisConfig& cfg) {
  switch (mode) {
    case CpsMode::None: return {};
    case CpsMode::Selective: return analyze_suspend(t, cfg).suspend;
    case CpsMode::Full: return all_labels(t);
  }
  return {};
}

Compiled compile(const AnfPtr& anf, CpsMode mode, const AnalysisConfig& cfg) {
  Compiled c;
  c.anf = anf;
  c.config = cfg;
  c.mode = mode;
  c.vars = select_vars(mode, anf, cfg);
  c.target = selective_cps(c.vars, anf);
  return c;
}

}  // namespace pplc
