// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pplc/analysis.hpp"

#include <deque>
#include <json.hpp>
#include <unordered_map>

#include "overloaded.hpp"
#include "pplc/error.hpp"

namespace pplc {

namespace {

using detail::overloaded;
using K = Constraint::Kind;

class Generator {
 public:
  explicit Generator(const AnalysisConfig& cfg) : cfg_(cfg) {}

  void gen(const AnfPtr& t) {
    for (const AnfTerm* cur = t.get(); !cur->is_ret(); cur = cur->let().body.get()) {
      const auto& l = cur->let();
      const Ident& x = l.label;
      std::visit(overloaded{
                     [&](const anf::Var& v) { add(Constraint::subset(v.name, x)); },
                     [&](const anf::Const& c) {
                       if (c.value.arity() > 0) add(Constraint::member(AbstractValue::constant(x, c.value.arity()), x));
                     },
                     [&](const anf::Lam& lam) {
                       gen(lam.body);
                       add(Constraint::member(AbstractValue::lam(lam.param, name(lam.body)), x));
                       for (const auto& n : suspend_names(lam.body, cfg_)) add(Constraint::implies(n, lam.param));
                     },
                     [&](const anf::App& a) {
                       add(Constraint::app_flow(a.fn, a.arg, x));
                       add(Constraint::on_lhs(K::ConstArity, a.fn, x));
                       add(Constraint::on_lhs(K::LamSuspendToRes, a.fn, x));
                       add(Constraint::on_lhs(K::ConstSuspendToRes, a.fn, x));
                       add(Constraint::on_lhs(K::ResForcesCallees, a.fn, x));
                     },
                     [&](const anf::Assume&) {
                       if (cfg_.suspend_assume) add(Constraint::suspend(x));
                     },
                     [&](const anf::Weight&) {
                       if (cfg_.suspend_weight) add(Constraint::suspend(x));
                     },
                     [&](const anf::If& i) {
                       gen(i.then_branch);
                       gen(i.else_branch);
                       add(Constraint::subset(name(i.then_branch), x));
                       add(Constraint::subset(name(i.else_branch), x));
                       for (const auto& n : suspend_names(i.then_branch, cfg_)) add(Constraint::implies(n, x));
                       for (const auto& n : suspend_names(i.else_branch, cfg_)) add(Constraint::implies(n, x));
                     },
                 },
                 l.binding);
    }
  }

  std::vector<Constraint> take() { return std::move(out_); }

 private:
  void add(Constraint c) {
    if (seen_.insert(c).second) out_.push_back(std::move(c));
  }

  AnalysisConfig cfg_;
  std::set<Constraint> seen_;
  std::vector<Constraint> out_;
};

// The worklist algorithm. Constraints hang off the variable whose change
// can make them fire; a variable is pushed whenever its data grows or it
// becomes suspended.
class Solver {
 public:
  explicit Solver(const SolverOptions& opts) : opts_(opts) {}

  AnalysisResult run(const std::vector<Constraint>& cs) {
    std::size_t bound = opts_.max_iterations ? opts_.max_iterations : 1000 + 100 * cs.size() * (cs.size() + 1);
    for (const auto& c : cs) init(c);
    while (!work_.empty()) {
      Ident x;
      if (opts_.order == Worklist::Lifo) {
        x = work_.back();
        work_.pop_back();
      } else {
        x = work_.front();
        work_.pop_front();
      }
      if (++result_.iterations > bound) throw InvariantViolation("suspension analysis did not reach a fixpoint");
      // propagation may register new edges on x, so iterate over a snapshot
      std::vector<Constraint> es = edges_[x].list;
      for (const auto& c : es) prop(c);
    }
    return std::move(result_);
  }

 private:
  struct Edges {
    std::set<Constraint> seen;
    std::vector<Constraint> list;
  };

  std::set<AbstractValue>& data(const Ident& x) { return result_.data[x]; }

  void init(const Constraint& c) {
    switch (c.kind) {
      case K::Member:
        add_data(c.x, {c.a1});
        break;
      case K::Suspend:
        add_suspend(c.x);
        break;
      case K::ResForcesCallees:
        init_edge(c.z, c);
        break;
      default:
        init_edge(c.x, c);
        break;
    }
  }

  void init_edge(const Ident& x, const Constraint& c) {
    auto& e = edges_[x];
    if (e.seen.insert(c).second) e.list.push_back(c);
    prop(c);
  }

  void add_data(const Ident& x, const std::set<AbstractValue>& as) {
    auto& d = data(x);
    bool grew = false;
    for (const auto& a : as) grew = d.insert(a).second || grew;
    if (grew) work_.push_back(x);
  }

  void add_suspend(const Ident& x) {
    if (result_.suspend.insert(x).second) work_.push_back(x);
  }

  bool suspended(const Ident& x) const { return result_.suspend.count(x) != 0; }

  template <class F>
  void for_each(const Ident& lhs, bool lams, F&& f) {
    // copy: f may insert into data(lhs)
    std::set<AbstractValue> d = data(lhs);
    for (const auto& a : d) {
      if (a.is_lam() == lams) f(a);
    }
  }

  void prop(const Constraint& c) {
    switch (c.kind) {
      case K::Member:
      case K::Suspend:
        break;
      case K::Subset:
        if (c.x != c.y) add_data(c.y, std::set<AbstractValue>(data(c.x)));
        break;
      case K::CondMember:
        if (data(c.x).count(c.a1)) add_data(c.y, {c.a2});
        break;
      case K::SuspendImplies:
        if (suspended(c.x)) add_suspend(c.y);
        break;
      case K::AppFlow:
        for_each(c.x, true, [&](const AbstractValue& a) {
          init(Constraint::subset(c.y, a.x));
          init(Constraint::subset(a.y, c.z));
        });
        break;
      case K::ConstArity:
        for_each(c.x, false, [&](const AbstractValue& a) {
          if (a.n > 1) add_data(c.z, {AbstractValue::constant(a.x, a.n - 1)});
        });
        break;
      case K::LamSuspendToRes:
        for_each(c.x, true, [&](const AbstractValue& a) { init(Constraint::implies(a.x, c.z)); });
        break;
      case K::ConstSuspendToRes:
        for_each(c.x, false, [&](const AbstractValue& a) { init(Constraint::implies(a.x, c.z)); });
        break;
      case K::LamSuspendAll:
        for_each(c.x, true, [&](const AbstractValue& a) { add_suspend(a.x); });
        break;
      case K::ConstSuspendAll:
        for_each(c.x, false, [&](const AbstractValue& a) { add_suspend(a.x); });
        break;
      case K::ResForcesCallees:
        if (suspended(c.z)) {
          init(Constraint::on_lhs(K::LamSuspendAll, c.x));
          init(Constraint::on_lhs(K::ConstSuspendAll, c.x));
        }
        break;
    }
  }

  SolverOptions opts_;
  AnalysisResult result_;
  std::unordered_map<Ident, Edges, IdentHash> edges_;
  std::deque<Ident> work_;
};

bool subset_of(const std::set<AbstractValue>& a, const std::set<AbstractValue>& b) {
  for (const auto& v : a) {
    if (!b.count(v)) return false;
  }
  return true;
}

}  // namespace

std::string AbstractValue::str() const {
  if (is_lam()) return "lam " + x.str() + ". " + y.str();
  return "const_" + x.str() + " " + std::to_string(n);
}

std::string Constraint::str() const {
  switch (kind) {
    case K::Member: return a1.str() + " in S_" + x.str();
    case K::Subset: return "S_" + x.str() + " <= S_" + y.str();
    case K::CondMember: return a1.str() + " in S_" + x.str() + " => " + a2.str() + " in S_" + y.str();
    case K::Suspend: return "suspend_" + x.str();
    case K::SuspendImplies: return "suspend_" + x.str() + " => suspend_" + y.str();
    case K::AppFlow:
      return "forall z y. lam z. y in S_" + x.str() + " => S_" + y.str() + " <= S_z /\\ S_y <= S_" + z.str();
    case K::ConstArity:
      return "forall y n. const_y n in S_" + x.str() + " /\\ n > 1 => const_y (n-1) in S_" + z.str();
    case K::LamSuspendToRes: return "forall y. lam y. _ in S_" + x.str() + " => (suspend_y => suspend_" + z.str() + ")";
    case K::LamSuspendAll: return "forall y. lam y. _ in S_" + x.str() + " => suspend_y";
    case K::ConstSuspendToRes:
      return "forall y. const_y _ in S_" + x.str() + " => (suspend_y => suspend_" + z.str() + ")";
    case K::ConstSuspendAll: return "forall y. const_y _ in S_" + x.str() + " => suspend_y";
    case K::ResForcesCallees:
      return "suspend_" + z.str() + " => (forall y. lam y. _ in S_" + x.str() + " => suspend_y) /\\ (forall y. const_y _ in S_" +
             x.str() + " => suspend_y)";
  }
  return "?";
}

const std::set<AbstractValue>& AnalysisResult::at(const Ident& x) const {
  static const std::set<AbstractValue> empty;
  auto it = data.find(x);
  return it == data.end() ? empty : it->second;
}

std::set<Ident> suspend_names(const AnfPtr& t, const AnalysisConfig& cfg) {
  std::set<Ident> out;
  for (const AnfTerm* cur = t.get(); !cur->is_ret(); cur = cur->let().body.get()) {
    const auto& l = cur->let();
    bool may = std::visit(overloaded{
                              [](const anf::App&) { return true; },
                              [](const anf::If&) { return true; },
                              [&](const anf::Assume&) { return cfg.suspend_assume; },
                              [&](const anf::Weight&) { return cfg.suspend_weight; },
                              [](const auto&) { return false; },
                          },
                          l.binding);
    if (may) out.insert(l.label);
  }
  return out;
}

std::vector<Constraint> generate_constraints(const AnfPtr& t, const AnalysisConfig& cfg) {
  Generator g(cfg);
  g.gen(t);
  return g.take();
}

AnalysisResult solve(const std::vector<Constraint>& cs, const SolverOptions& opts) { return Solver(opts).run(cs); }

AnalysisResult analyze_suspend(const AnfPtr& t, const AnalysisConfig& cfg, const SolverOptions& opts) {
  return solve(generate_constraints(t, cfg), opts);
}

bool satisfies(const AnalysisResult& r, const Constraint& c) {
  auto lams = [&](const Ident& x, bool want_lam) {
    std::vector<AbstractValue> out;
    for (const auto& a : r.at(x)) {
      if (a.is_lam() == want_lam) out.push_back(a);
    }
    return out;
  };
  switch (c.kind) {
    case K::Member: return r.at(c.x).count(c.a1) != 0;
    case K::Subset: return subset_of(r.at(c.x), r.at(c.y));
    case K::CondMember: return !r.at(c.x).count(c.a1) || r.at(c.y).count(c.a2);
    case K::Suspend: return r.suspends(c.x);
    case K::SuspendImplies: return !r.suspends(c.x) || r.suspends(c.y);
    case K::AppFlow:
      for (const auto& a : lams(c.x, true)) {
        if (!subset_of(r.at(c.y), r.at(a.x)) || !subset_of(r.at(a.y), r.at(c.z))) return false;
      }
      return true;
    case K::ConstArity:
      for (const auto& a : lams(c.x, false)) {
        if (a.n > 1 && !r.at(c.z).count(AbstractValue::constant(a.x, a.n - 1))) return false;
      }
      return true;
    case K::LamSuspendToRes:
    case K::ConstSuspendToRes:
      for (const auto& a : lams(c.x, c.kind == K::LamSuspendToRes)) {
        if (r.suspends(a.x) && !r.suspends(c.z)) return false;
      }
      return true;
    case K::LamSuspendAll:
    case K::ConstSuspendAll:
      for (const auto& a : lams(c.x, c.kind == K::LamSuspendAll)) {
        if (!r.suspends(a.x)) return false;
      }
      return true;
    case K::ResForcesCallees:
      if (!r.suspends(c.z)) return true;
      for (const auto& a : r.at(c.x)) {
        if (!r.suspends(a.x)) return false;
      }
      return true;
  }
  return false;
}

std::vector<Constraint> violations(const AnalysisResult& r, const std::vector<Constraint>& cs) {
  std::vector<Constraint> out;
  for (const auto& c : cs) {
    if (!satisfies(r, c)) out.push_back(c);
  }
  return out;
}

std::string analysis_json(const AnalysisResult& r, const AnalysisConfig& cfg) {
  nlohmann::ordered_json j;
  j["suspend"] = nlohmann::json::array();
  for (const auto& x : r.suspend) j["suspend"].push_back(x.str());
  j["data"] = nlohmann::ordered_json::object();
  for (const auto& [x, as] : r.data) {
    if (as.empty()) continue;
    auto& arr = j["data"][x.str()] = nlohmann::json::array();
    for (const auto& a : as) arr.push_back(a.str());
  }
  j["config"] = {{"suspend_assume", cfg.suspend_assume}, {"suspend_weight", cfg.suspend_weight}};
  return j.dump(2);
}

}  // namespace pplc
