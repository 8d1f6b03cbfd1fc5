// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

// Shared helpers for the test executables: corpus access, a typed random
// program generator and a few independent oracles.

#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pplc/analysis.hpp"
#include "pplc/anf.hpp"
#include "pplc/interp.hpp"
#include "pplc/parser.hpp"
#include "pplc/target.hpp"

#ifndef PPLC_MODELS_DIR
#error "PPLC_MODELS_DIR must point at the model corpus"
#endif
#ifndef PPLC_TEST_DATA_DIR
#error "PPLC_TEST_DATA_DIR must point at tests/data"
#endif

namespace pplc::test {

inline std::filesystem::path models_dir() { return PPLC_MODELS_DIR; }
inline std::filesystem::path data_dir() { return PPLC_TEST_DATA_DIR; }

inline AnfPtr load_model(const std::string& name) {
  return anf_of_source(parse_file((models_dir() / (name + ".ppl")).string()));
}

inline std::vector<std::string> corpus_names() { return {"coin", "crbd", "geometric", "ssm"}; }

inline std::vector<std::pair<std::string, AnfPtr>> corpus() {
  std::vector<std::pair<std::string, AnfPtr>> out;
  for (const auto& n : corpus_names()) out.emplace_back(n, load_model(n));
  return out;
}

inline double log_2_over_35() { return std::log(2.0 / 35.0); }

// Equal as doubles, treating two -inf as equal.
inline bool same_log(double a, double b, double rel = 1e-12) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool same_value(const RuntimeValue& r, const MValue& m) {
  if (r.is_intrinsic() != m.is_intrinsic()) return false;
  if (!r.is_intrinsic()) return m.closure() != nullptr;
  return r.intrinsic() == m.intrinsic();
}

// Composite Simpson's rule on [a, b] with `n` (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Removing any single fact from a least solution must break some
// constraint. Returns the first fact that can be dropped, or "".
inline std::string droppable_fact(const AnalysisResult& r, const std::vector<Constraint>& cs) {
  for (const auto& x : r.suspend) {
    AnalysisResult s = r;
    s.suspend.erase(x);
    if (violations(s, cs).empty()) return "suspend " + x.str();
  }
  for (const auto& [x, as] : r.data) {
    for (const auto& a : as) {
      AnalysisResult s = r;
      s.data[x].erase(a);
      if (violations(s, cs).empty()) return a.str() + " in data " + x.str();
    }
  }
  return "";
}

// ANF embedded into the target language by a direct structural walk, used
// to check that the transform with an empty selection is the identity.
inline TargetPtr anf_as_target(const AnfPtr& t) {
  if (t->is_ret()) return tvar(std::get<anf::Ret>(t->node).name);
  const auto& l = t->let();
  TargetPtr bound;
  if (const auto* v = std::get_if<anf::Var>(&l.binding)) bound = tvar(v->name);
  if (const auto* c = std::get_if<anf::Const>(&l.binding)) bound = tconst(c->value);
  if (const auto* f = std::get_if<anf::Lam>(&l.binding)) bound = tlam(f->param, anf_as_target(f->body));
  if (const auto* a = std::get_if<anf::App>(&l.binding)) bound = tapp(tvar(a->fn), tvar(a->arg));
  if (const auto* i = std::get_if<anf::If>(&l.binding)) {
    bound = tif(tvar(i->cond), anf_as_target(i->then_branch), anf_as_target(i->else_branch));
  }
  if (const auto* a = std::get_if<anf::Assume>(&l.binding)) bound = tassume(tvar(a->dist));
  if (const auto* w = std::get_if<anf::Weight>(&l.binding)) bound = tweight(tvar(w->weight));
  return tlet(l.label, bound, anf_as_target(l.body), l.recursive);
}

// Random well-typed programs over reals, booleans, real functions and
// functionals on real functions. Every construct the analysis cares about
// shows up: higher-order flow, branches choosing between closures,
// immediately applied lambdas, bounded recursion, assume and weight.
class ProgramGen {
 public:
  explicit ProgramGen(std::uint64_t seed) : rng_(seed) {}

  std::string program(int depth = 5) {
    scope_.assign(4, {});
    next_ = 0;
    return pick(4) == 0 ? gen(B, depth) : gen(R, depth);
  }

 private:
  enum Ty { R = 0, B = 1, F = 2, H = 3 };

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::string fresh() { return "v" + std::to_string(next_++); }
  std::string real_lit() {
    static const char* lits[] = {"0.5", "1.", "2.", "0.25", "3."};
    return lits[pick(5)];
  }

  template <class F>
  std::string with(Ty ty, const std::string& x, F&& f) {
    scope_[ty].push_back(x);
    std::string s = f();
    scope_[ty].pop_back();
    return s;
  }

  std::string var_or(Ty ty, const std::function<std::string()>& fallback) {
    if (!scope_[ty].empty() && pick(2) == 0) return scope_[ty][pick(static_cast<int>(scope_[ty].size()))];
    return fallback();
  }

  std::string leaf(Ty ty) {
    switch (ty) {
      case R: return var_or(R, [&] { return real_lit(); });
      case B: return var_or(B, [&] { return pick(2) ? std::string("true") : std::string("false"); });
      case F: return var_or(F, [&] {
          std::string x = fresh();
          return "(lam " + x + ". " + with(R, x, [&] { return "(" + x + " + " + real_lit() + ")"; }) + ")";
        });
      case H: return var_or(H, [&] {
          std::string f = fresh();
          return "(lam " + f + ". " + with(F, f, [&] { return "(" + f + " " + real_lit() + ")"; }) + ")";
        });
    }
    return "()";
  }

  std::string let(Ty ty, int d) {
    Ty bt = static_cast<Ty>(pick(4));
    std::string x = fresh();
    std::string bound = gen(bt, d - 1);
    return "(let " + x + " = " + bound + " in " + with(bt, x, [&] { return gen(ty, d - 1); }) + ")";
  }

  std::string gen(Ty ty, int d) {
    if (d <= 0) return leaf(ty);
    if (pick(5) == 0) return let(ty, d);
    if (pick(6) == 0) return "(if " + gen(B, d - 1) + " then " + gen(ty, d - 1) + " else " + gen(ty, d - 1) + ")";
    switch (ty) {
      case R:
        switch (pick(8)) {
          case 0: return leaf(R);
          case 1: return "(" + gen(R, d - 1) + " + " + gen(R, d - 1) + ")";
          case 2: return "(assume (Normal " + gen(R, d - 1) + " 1.))";
          case 3: return "(" + gen(F, d - 1) + " " + gen(R, d - 1) + ")";
          case 4: return "(" + gen(H, d - 1) + " " + gen(F, d - 1) + ")";
          case 5: return "(weight " + real_lit() + "; " + gen(R, d - 1) + ")";
          case 6: return "(observe (Normal " + gen(R, d - 1) + " 1.) 0.5; " + gen(R, d - 1) + ")";
          default: {
            std::string g = fresh(), n = fresh();
            std::string base = with(R, n, [&] { return gen(R, d - 2); });
            std::string body = "(if " + n + " < 1. then " + base + " else (weight 0.9; " + g + " (" + n + " - 1.)))";
            return "(let rec " + g + " = lam " + n + ". " + body + " in " + g + " " + std::to_string(pick(4)) + ".)";
          }
        }
      case B:
        switch (pick(3)) {
          case 0: return leaf(B);
          case 1: return "(assume (Bernoulli 0.5))";
          default: return "(" + gen(R, d - 1) + " < " + gen(R, d - 1) + ")";
        }
      case F:
        if (pick(2) == 0) return leaf(F);
        {
          std::string x = fresh();
          return "(lam " + x + ". " + with(R, x, [&] { return gen(R, d - 1); }) + ")";
        }
      case H:
        if (pick(2) == 0) return leaf(H);
        {
          std::string f = fresh();
          return "(lam " + f + ". " + with(F, f, [&] { return "(" + f + " " + gen(R, d - 1) + ")"; }) + ")";
        }
    }
    return leaf(ty);
  }

  std::mt19937_64 rng_;
  std::vector<std::vector<std::string>> scope_;
  int next_ = 0;
};

}  // namespace pplc::test
