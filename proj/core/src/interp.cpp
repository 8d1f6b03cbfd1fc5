// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pplc/interp.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "overloaded.hpp"
#include "pplc/error.hpp"

namespace pplc {

namespace {

using detail::overloaded;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Bytes of C stack evaluation may use below its outermost frame: three
// quarters of the soft limit, capped so unlimited stacks still stop.
std::uintptr_t stack_budget() {
  static const std::uintptr_t budget = [] {
    constexpr std::uintptr_t kCap = std::uintptr_t{64} << 20;
    rlimit rl{};
    if (getrlimit(RLIMIT_STACK, &rl) != 0 || rl.rlim_cur == RLIM_INFINITY) return std::uintptr_t{6} << 20;
    return std::min<std::uintptr_t>(rl.rlim_cur / 4 * 3, kCap);
  }();
  return budget;
}

class DepthGuard {
 public:
  explicit DepthGuard(int& d) : d_(d) {
    char here;
    auto addr = reinterpret_cast<std::uintptr_t>(&here);
    if (d_ == 0) base_ = addr;
    if (++d_ > kMaxEvalDepth || (base_ > addr && base_ - addr > stack_budget())) {
      --d_;
      throw DynamicError("evaluation nested too deeply");
    }
  }
  ~DepthGuard() { --d_; }
  DepthGuard(const DepthGuard&) = delete;
  DepthGuard& operator=(const DepthGuard&) = delete;

 private:
  int& d_;
  static thread_local std::uintptr_t base_;
};

thread_local std::uintptr_t DepthGuard::base_ = 0;

template <class F>
auto labelled(const Ident& x, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DynamicError& e) {
    if (e.label().empty()) throw e.with_label(x.str());
    throw;
  }
}

// Big-step semantics over source terms. Each call returns the value and the
// suspension flag of its derivation; weights accumulate in the context.
class Reference {
 public:
  Reference(ExecutionContext& ctx, const AnalysisConfig& cfg, std::set<Ident>& log)
      : ctx_(ctx), cfg_(cfg), log_(log) {}

  struct Result {
    RuntimeValue v;
    bool u;
  };

  Result eval(const Env& env, const TermPtr& t) {
    DepthGuard guard(depth_);
    return std::visit(
        overloaded{
            [&](const src::Var& x) -> Result {
              const RuntimeValue* v = lookup(env, x.name);
              if (!v) throw DynamicError("unbound variable " + x.name.str());
              return {*v, false};
            },
            [&](const src::Const& c) -> Result { return {RuntimeValue{c.value}, false}; },
            [&](const src::Lam& l) -> Result { return {RuntimeValue{Closure{l.param, l.body, env, Ident()}}, false}; },
            [&](const src::App& a) -> Result {
              auto f = eval(env, a.fn);
              auto x = eval(env, a.arg);
              auto r = apply(f.v, x.v);
              return {std::move(r.v), f.u || x.u || r.u};
            },
            [&](const src::Let& l) -> Result {
              auto b = labelled(l.name, [&] { return eval(env, l.bound); });
              if (b.u) log_.insert(l.name);
              auto r = eval(extend(env, l.name, b.v), l.body);
              return {std::move(r.v), b.u || r.u};
            },
            [&](const src::LetRec& l) -> Result {
              RuntimeValue fn{Closure{l.param, l.fn_body, env, l.name}};
              return eval(extend(env, l.name, fn), l.body);
            },
            [&](const src::If& i) -> Result {
              auto c = eval(env, i.cond);
              if (!c.v.is_intrinsic() || c.v.intrinsic().tag() != Op::Bool) {
                throw DynamicError("if condition is not a boolean: " + to_string(c.v));
              }
              auto r = eval(env, c.v.intrinsic().as_bool() ? i.then_branch : i.else_branch);
              return {std::move(r.v), c.u || r.u};
            },
            [&](const src::Assume& a) -> Result {
              auto d = eval(env, a.dist);
              if (!d.v.is_intrinsic()) throw DynamicError("assume of a closure");
              return {RuntimeValue{ctx_.assume(d.v.intrinsic())}, cfg_.suspend_assume || d.u};
            },
            [&](const src::Weight& w) -> Result {
              auto x = eval(env, w.weight);
              if (!x.v.is_intrinsic()) throw DynamicError("weight of a closure");
              ctx_.weight(x.v.intrinsic());
              return {RuntimeValue{Intrinsic::unit()}, cfg_.suspend_weight || x.u};
            },
            [&](const src::Seq& s) -> Result {
              auto a = eval(env, s.first);
              auto b = eval(env, s.second);
              return {std::move(b.v), a.u || b.u};
            },
        },
        t->node);
  }

 private:
  Result apply(const RuntimeValue& f, const RuntimeValue& x) {
    if (const auto* c = std::get_if<Closure>(&f.v)) {
      Env e = c->env;
      if (c->self.is_unique() || !c->self.name.empty()) e = extend(e, c->self, f);
      return eval(extend(e, c->param, x), c->body);
    }
    if (!x.is_intrinsic()) {
      throw DynamicError(std::string(op_name(f.intrinsic().tag())) + ": closures cannot be passed to intrinsics");
    }
    return {RuntimeValue{delta_apply(f.intrinsic(), x.intrinsic())}, false};
  }

  ExecutionContext& ctx_;
  AnalysisConfig cfg_;
  std::set<Ident>& log_;
  int depth_ = 0;
};

EvalOutcome finish(ExecutionContext& ctx, Reference::Result r, std::set<Ident> log) {
  EvalOutcome out;
  out.value = std::move(r.v);
  out.suspended = r.u;
  out.suspension_log = std::move(log);
  out.log_prior = ctx.log_prior;
  out.log_likelihood = ctx.log_likelihood;
  out.log_weight = ctx.log_prior + ctx.log_likelihood;
  out.trace_consumed = ctx.trace.size();
  out.trace = std::move(ctx.trace);
  out.weight_log = std::move(ctx.weight_log);
  out.warnings = std::move(ctx.warnings);
  return out;
}

MEnv mextend(const MEnv& env, const Ident& x, MValue v) {
  return std::make_shared<const MEnvNode>(MEnvNode{&x, std::move(v), env});
}

const MValue* mlookup(const MEnv& env, const Ident& x) {
  for (const MEnvNode* n = env.get(); n; n = n->next.get()) {
    if (*n->key == x) return &n->value;
  }
  return nullptr;
}

MValue wrap_cps(Intrinsic r) {
  if (r.arity() > 0) return MValue{CpsPrimitive{std::move(r), nullptr}};
  return MValue{std::move(r)};
}

const Intrinsic& intrinsic_arg(const MValue& v, const char* what) {
  if (!v.is_intrinsic()) throw DynamicError(std::string(what) + " expects an intrinsic value, got " + to_string(v));
  return v.intrinsic();
}

MEnv enter_closure(const MClosure& c, const MValue& self, MValue arg) {
  MEnv e = c.env;
  if (c.self) e = mextend(e, *c.self, self);
  return mextend(e, c.node().param, std::move(arg));
}

}  // namespace

// ---------------------------------------------------------------------------

Intrinsic TraceReplay::draw(const Distribution&) {
  if (next_ >= trace_.size()) throw DynamicError("trace exhausted after " + std::to_string(next_) + " values");
  return trace_[next_++];
}

Env extend(const Env& env, Ident x, RuntimeValue v) {
  return std::make_shared<const EnvNode>(EnvNode{std::move(x), std::move(v), env});
}

const RuntimeValue* lookup(const Env& env, const Ident& x) {
  for (const EnvNode* n = env.get(); n; n = n->next.get()) {
    if (n->key == x) return &n->value;
  }
  return nullptr;
}

std::string to_string(const RuntimeValue& v) {
  if (v.is_intrinsic()) return to_string(v.intrinsic());
  return "<closure " + std::get<Closure>(v.v).param.str() + ">";
}

double log_weight_of(double w, std::vector<std::string>& warnings) {
  if (w < 0.0) warnings.push_back("negative weight " + std::to_string(w) + " treated as zero");
  if (!(w > 0.0)) return kNegInf;
  return std::log(w);
}

Intrinsic ExecutionContext::assume(const Intrinsic& dist) {
  if (dist.tag() != Op::Dist) throw DynamicError("assume expects a distribution, got " + to_string(dist));
  const Distribution& d = dist.as_dist();
  Intrinsic c = source->draw(d);
  log_prior += log_density(d, c);
  trace.push_back(c);
  return c;
}

void ExecutionContext::weight(const Intrinsic& w) {
  if (!w.is_number()) throw DynamicError("weight expects a number, got " + to_string(w));
  double x = w.to_double();
  weight_log.push_back(x);
  log_likelihood += log_weight_of(x, warnings);
}

EvalOutcome evaluate(const Env& env, const TermPtr& t, AssumeSource& source, const AnalysisConfig& cfg) {
  ExecutionContext ctx;
  ctx.source = &source;
  std::set<Ident> log;
  auto r = Reference(ctx, cfg, log).eval(env, t);
  return finish(ctx, std::move(r), std::move(log));
}

EvalOutcome eval(const Env& env, const TermPtr& t, const Trace& trace, const AnalysisConfig& cfg) {
  TraceReplay replay(trace);
  return evaluate(env, t, replay, cfg);
}

EvalOutcome eval(const Env& env, const AnfPtr& t, const Trace& trace, const AnalysisConfig& cfg) {
  return eval(env, to_source(t), trace, cfg);
}

EvalOutcome eval_sampling(const Env& env, const TermPtr& t, std::uint64_t seed, const AnalysisConfig& cfg) {
  Rng rng(seed);
  Sampler s(rng);
  return evaluate(env, t, s, cfg);
}

EvalOutcome eval_sampling(const Env& env, const AnfPtr& t, std::uint64_t seed, const AnalysisConfig& cfg) {
  return eval_sampling(env, to_source(t), seed, cfg);
}

// ---------------------------------------------------------------------------

std::string to_string(const MValue& v) {
  return std::visit(overloaded{
                        [](const Intrinsic& c) { return to_string(c); },
                        [](const ClosurePtr& c) { return "<closure " + c->node().param.str() + ">"; },
                        [](const CpsPrimitive& p) { return to_string(p.op) + "_cps"; },
                        [](const Suspension& s) {
                          return std::string(s.kind == SusKind::Assume ? "Sus_assume(" : "Sus_weight(") +
                                 to_string(s.arg) + ", <k>)";
                        },
                    },
                    v.v);
}

MValue cps_intrinsic(const Intrinsic& c) { return wrap_cps(c); }

MValue Machine::run(const TargetPtr& t, const MEnv& env) { return eval(t.get(), env); }

MValue Machine::apply(const MValue& f, const MValue& arg) {
  MValue fn = f;
  MValue x = arg;
  for (;;) {
    if (const auto* c = fn.closure()) return eval(c->node().body.get(), enter_closure(*c, fn, std::move(x)));
    if (fn.is_intrinsic()) return MValue{delta_apply(fn.intrinsic(), intrinsic_arg(x, "intrinsic"))};
    if (const auto* p = std::get_if<CpsPrimitive>(&fn.v)) {
      if (!p->k) return MValue{CpsPrimitive{p->op, std::make_shared<const MValue>(std::move(x))}};
      MValue r = wrap_cps(delta_apply(p->op, intrinsic_arg(x, "intrinsic")));
      MValue k = *p->k;
      fn = std::move(k);
      x = std::move(r);
      continue;
    }
    throw DynamicError("cannot apply " + to_string(fn));
  }
}

MValue Machine::eval(const TargetTerm* t, MEnv env) {
  DepthGuard guard(depth_);
  for (;;) {
    const auto& node = t->node;
    if (const auto* v = std::get_if<tgt::Var>(&node)) {
      const MValue* x = mlookup(env, v->name);
      if (!x) throw DynamicError("unbound variable " + v->name.str());
      return *x;
    }
    if (const auto* c = std::get_if<tgt::Const>(&node)) {
      return c->cps ? wrap_cps(c->value) : MValue{c->value};
    }
    if (const auto* l = std::get_if<tgt::Lam>(&node)) {
      ++(l->continuation ? ctx_.counters.continuation_allocs : ctx_.counters.closure_allocs);
      return MValue{std::make_shared<const MClosure>(MClosure{t, env, nullptr})};
    }
    if (const auto* l = std::get_if<tgt::Let>(&node)) {
      MValue v;
      if (l->recursive) {
        const auto* lam = std::get_if<tgt::Lam>(&l->bound->node);
        if (!lam) throw InvariantViolation("recursive binding " + l->name.str() + " is not a lambda");
        ++(lam->continuation ? ctx_.counters.continuation_allocs : ctx_.counters.closure_allocs);
        v = MValue{std::make_shared<const MClosure>(MClosure{l->bound.get(), env, &l->name})};
      } else {
        v = labelled(l->name, [&] { return eval(l->bound.get(), env); });
      }
      if (v.is_suspension()) {
        throw InvariantViolation("suspension reached the non-tail binding " + l->name.str());
      }
      env = mextend(env, l->name, std::move(v));
      t = l->body.get();
      continue;
    }
    if (const auto* i = std::get_if<tgt::If>(&node)) {
      MValue c = eval(i->cond.get(), env);
      if (!c.is_intrinsic() || c.intrinsic().tag() != Op::Bool) {
        throw DynamicError("if condition is not a boolean: " + to_string(c));
      }
      t = (c.intrinsic().as_bool() ? i->then_branch : i->else_branch).get();
      continue;
    }
    if (const auto* a = std::get_if<tgt::Assume>(&node)) {
      return MValue{ctx_.assume(intrinsic_arg(eval(a->dist.get(), env), "assume"))};
    }
    if (const auto* w = std::get_if<tgt::Weight>(&node)) {
      ctx_.weight(intrinsic_arg(eval(w->weight.get(), env), "weight"));
      return MValue{Intrinsic::unit()};
    }
    if (const auto* s = std::get_if<tgt::SusAssume>(&node)) {
      Intrinsic d = intrinsic_arg(eval(s->dist.get(), env), "assume");
      if (d.tag() != Op::Dist) throw DynamicError("assume expects a distribution, got " + to_string(d));
      return MValue{Suspension{SusKind::Assume, std::move(d), std::make_shared<const MValue>(eval(s->cont.get(), env))}};
    }
    if (const auto* s = std::get_if<tgt::SusWeight>(&node)) {
      Intrinsic w = intrinsic_arg(eval(s->weight.get(), env), "weight");
      if (!w.is_number()) throw DynamicError("weight expects a number, got " + to_string(w));
      return MValue{Suspension{SusKind::Weight, std::move(w), std::make_shared<const MValue>(eval(s->cont.get(), env))}};
    }

    const auto& app = std::get<tgt::App>(node);
    MValue fn, x;
    if (const auto* inner = std::get_if<tgt::App>(&app.fn->node)) {
      // `f k a`: enter a CPS lambda or intrinsic without building the
      // intermediate closure for `f k`.
      MValue f = eval(inner->fn.get(), env);
      MValue k = eval(inner->arg.get(), env);
      MValue a = eval(app.arg.get(), env);
      if (const auto* c = f.closure()) {
        if (const auto* lam = std::get_if<tgt::Lam>(&c->node().body->node)) {
          env = mextend(enter_closure(*c, f, std::move(k)), lam->param, std::move(a));
          t = lam->body.get();
          continue;
        }
      }
      if (const auto* p = std::get_if<CpsPrimitive>(&f.v); p && !p->k) {
        x = wrap_cps(delta_apply(p->op, intrinsic_arg(a, "intrinsic")));
        fn = std::move(k);
      } else {
        fn = apply(f, k);
        x = std::move(a);
      }
    } else {
      fn = eval(app.fn.get(), env);
      x = eval(app.arg.get(), env);
    }
    // tail application
    for (;;) {
      if (const auto* c = fn.closure()) {
        env = enter_closure(*c, fn, std::move(x));
        t = c->node().body.get();
        break;
      }
      if (fn.is_intrinsic()) return MValue{delta_apply(fn.intrinsic(), intrinsic_arg(x, "intrinsic"))};
      if (const auto* p = std::get_if<CpsPrimitive>(&fn.v)) {
        if (!p->k) return MValue{CpsPrimitive{p->op, std::make_shared<const MValue>(std::move(x))}};
        MValue r = wrap_cps(delta_apply(p->op, intrinsic_arg(x, "intrinsic")));
        MValue k = *p->k;
        fn = std::move(k);
        x = std::move(r);
        continue;
      }
      throw DynamicError("cannot apply " + to_string(fn));
    }
  }
}

TargetOutcome drive(const TargetPtr& t, AssumeSource& source) {
  ExecutionContext ctx;
  ctx.source = &source;
  Machine m(ctx);
  TargetOutcome out;
  MValue v = m.run(t);
  while (v.is_suspension()) {
    Suspension s = v.suspension();
    ++ctx.counters.suspensions;
    out.events.push_back({s.kind, s.arg});
    if (s.kind == SusKind::Weight) {
      ctx.weight(s.arg);
      v = m.apply(*s.k, MValue{Intrinsic::unit()});
    } else {
      Intrinsic c = ctx.assume(s.arg);
      v = m.apply(*s.k, MValue{std::move(c)});
    }
  }
  out.value = std::move(v);
  out.log_prior = ctx.log_prior;
  out.log_likelihood = ctx.log_likelihood;
  out.log_weight = ctx.log_prior + ctx.log_likelihood;
  out.weight_log = std::move(ctx.weight_log);
  out.trace = std::move(ctx.trace);
  out.counters = ctx.counters;
  out.warnings = std::move(ctx.warnings);
  return out;
}

TargetOutcome eval_target(const TargetPtr& t, const Trace& trace) {
  TraceReplay replay(trace);
  return drive(t, replay);
}

TargetOutcome eval_target(const TargetPtr& t, std::uint64_t seed) {
  Rng rng(seed);
  Sampler s(rng);
  return drive(t, s);
}

}  // namespace pplc
