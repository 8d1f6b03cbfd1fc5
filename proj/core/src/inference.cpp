// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pplc/inference.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "pplc/error.hpp"

namespace pplc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Resampling in the particle filter draws from its own stream, past the
// per-particle ones.
constexpr std::uint64_t kResampleStream = ~std::uint64_t{0};

void add(Counters& into, const Counters& c) {
  into.continuation_allocs += c.continuation_allocs;
  into.closure_allocs += c.closure_allocs;
  into.suspensions += c.suspensions;
}

void keep_warnings(Diagnostics& d, std::vector<std::string>& ws) {
  constexpr std::size_t kMax = 20;
  for (auto& w : ws) {
    if (d.warnings.size() < kMax) d.warnings.push_back(std::move(w));
  }
  d.scalars["warning_count"] += static_cast<double>(ws.size());
  ws.clear();
}

[[noreturn]] void rethrow_at(const DynamicError& e, const std::string& where) {
  throw DynamicError(where + ": " + e.message(), e.label());
}

std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double numeric(const MValue& v) {
  if (!v.is_intrinsic()) throw Error("sample value " + to_string(v) + " is not a number");
  const Intrinsic& c = v.intrinsic();
  if (c.is_number()) return c.to_double();
  if (c.tag() == Op::Bool) return c.as_bool() ? 1.0 : 0.0;
  throw Error("sample value " + to_string(c) + " is not a number");
}

// ---------------------------------------------------------------------------
// Particle filter

struct Particle {
  MValue v;
  MValuePtr pending;  // continuation of the SusWeight the particle stopped at
  bool done = false;
  ExecutionContext ctx;
};

// Runs until the next weight suspension (already scored) or the end.
void advance(Particle& p) {
  Machine m(p.ctx);
  while (p.v.is_suspension()) {
    Suspension s = p.v.suspension();
    ++p.ctx.counters.suspensions;
    if (s.kind == SusKind::Weight) {
      p.ctx.weight(s.arg);
      p.pending = s.k;
      return;
    }
    Intrinsic c = p.ctx.assume(s.arg);
    p.v = m.apply(*s.k, MValue{std::move(c)});
  }
  p.pending.reset();
  p.done = true;
}

void resume(Particle& p) {
  Machine m(p.ctx);
  MValuePtr k = std::move(p.pending);
  p.pending.reset();
  p.v = m.apply(*k, MValue{Intrinsic::unit()});
  advance(p);
}

// ---------------------------------------------------------------------------
// Lightweight MCMC

struct Snapshot {
  MValuePtr k;
  double log_prior = 0.0;
  double log_likelihood = 0.0;
};

struct Site {
  Distribution dist;
  Intrinsic value;
  double lp = 0.0;
  bool fresh = true;
  std::optional<Snapshot> snap;
};

struct McmcState {
  std::vector<Site> sites;
  double log_prior = 0.0;
  double log_likelihood = 0.0;
  MValue value;

  double joint() const { return log_prior + log_likelihood; }
};

// Positional reuse: below `from` the old trace is replayed, at `from` the
// proposal is used, above it old values of the right kind are kept and
// anything else is drawn fresh.
class ReuseSource : public AssumeSource {
 public:
  ReuseSource(Rng& rng, std::vector<Site>& out, const std::vector<Site>* old, std::size_t from,
              std::optional<Intrinsic> proposal)
      : rng_(rng), out_(out), old_(old), from_(from), proposal_(std::move(proposal)) {}

  Intrinsic draw(const Distribution& d) override {
    std::size_t i = out_.size();
    Site s{d, Intrinsic{}, 0.0, true, std::nullopt};
    if (old_ && i < from_) {
      s.value = (*old_)[i].value;
      s.fresh = false;
    } else if (i == from_ && proposal_) {
      s.value = *proposal_;
    } else if (old_ && i < old_->size() && kind_matches(d, (*old_)[i].value)) {
      s.value = (*old_)[i].value;
      s.fresh = false;
    } else {
      s.value = sample(d, rng_);
    }
    s.lp = log_density(d, s.value);
    out_.push_back(s);
    return s.value;
  }

 private:
  Rng& rng_;
  std::vector<Site>& out_;
  const std::vector<Site>* old_;
  std::size_t from_;
  std::optional<Intrinsic> proposal_;
};

// Drives `v` to a value, snapshotting every assume suspension.
MValue drive_recording(Machine& m, ExecutionContext& ctx, std::vector<Site>& sites, MValue v) {
  while (v.is_suspension()) {
    Suspension s = v.suspension();
    ++ctx.counters.suspensions;
    if (s.kind == SusKind::Weight) {
      ctx.weight(s.arg);
      v = m.apply(*s.k, MValue{Intrinsic::unit()});
      continue;
    }
    Snapshot snap{s.k, ctx.log_prior, ctx.log_likelihood};
    Intrinsic c = ctx.assume(s.arg);
    sites.back().snap = std::move(snap);
    v = m.apply(*s.k, MValue{std::move(c)});
  }
  return v;
}

class Chain {
 public:
  Chain(const Compiled& p, Rng& rng, InferenceResult& res) : p_(p), rng_(rng), res_(res) {}

  // A fresh run, or one replaying `old` up to `from` with `proposal` there.
  McmcState run_from_start(const std::vector<Site>* old, std::size_t from, std::optional<Intrinsic> proposal) {
    McmcState st;
    ReuseSource src(rng_, st.sites, old, from, std::move(proposal));
    ExecutionContext ctx;
    ctx.source = &src;
    Machine m(ctx);
    st.value = drive_recording(m, ctx, st.sites, m.run(p_.target));
    return finish(std::move(st), ctx);
  }

  // Re-enters the program at site `j` of `old` through its stored continuation.
  McmcState run_from_site(const McmcState& old, std::size_t j, const Intrinsic& proposal) {
    const Site& site = old.sites[j];
    McmcState st;
    st.sites.assign(old.sites.begin(), old.sites.begin() + static_cast<std::ptrdiff_t>(j));
    for (auto& s : st.sites) s.fresh = false;
    ReuseSource src(rng_, st.sites, &old.sites, j, proposal);
    ExecutionContext ctx;
    ctx.source = &src;
    ctx.log_prior = site.snap->log_prior;
    ctx.log_likelihood = site.snap->log_likelihood;
    ++ctx.counters.suspensions;
    Intrinsic c = ctx.assume(Intrinsic::dist(site.dist));
    st.sites.back().snap = site.snap;
    Machine m(ctx);
    st.value = drive_recording(m, ctx, st.sites, m.apply(*site.snap->k, MValue{std::move(c)}));
    return finish(std::move(st), ctx);
  }

  // One single-site Metropolis-Hastings step. Returns true on acceptance.
  bool step(McmcState& cur) {
    if (cur.sites.empty()) return false;
    std::size_t j = rng_.below(cur.sites.size());
    const Site& site = cur.sites[j];
    Intrinsic v = sample(site.dist, rng_);
    McmcState next = site.snap ? run_from_site(cur, j, v) : run_from_start(&cur.sites, j, v);

    double fwd = next.sites[j].lp;
    for (std::size_t i = j + 1; i < next.sites.size(); ++i) {
      if (next.sites[i].fresh) fwd += next.sites[i].lp;
    }
    double rev = site.lp;
    for (std::size_t i = j + 1; i < cur.sites.size(); ++i) {
      bool reused = i < next.sites.size() && !next.sites[i].fresh;
      if (!reused) rev += cur.sites[i].lp;
    }
    double log_alpha = next.joint() - cur.joint() + std::log(static_cast<double>(cur.sites.size())) -
                       std::log(static_cast<double>(next.sites.size())) + rev - fwd;
    if (std::isnan(log_alpha) || next.joint() == kNegInf) return false;
    if (log_alpha >= 0.0 || std::log(rng_.uniform()) < log_alpha) {
      cur = std::move(next);
      return true;
    }
    return false;
  }

 private:
  McmcState finish(McmcState st, ExecutionContext& ctx) {
    st.log_prior = ctx.log_prior;
    st.log_likelihood = ctx.log_likelihood;
    add(res_.counters, ctx.counters);
    keep_warnings(res_.diagnostics, ctx.warnings);
    return st;
  }

  const Compiled& p_;
  Rng& rng_;
  InferenceResult& res_;
};

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Lw: return "lw";
    case Algorithm::Bpf: return "bpf";
    case Algorithm::Mcmc: return "mcmc";
  }
  return "?";
}

Algorithm algorithm_from_string(std::string_view s) {
  if (s == "lw") return Algorithm::Lw;
  if (s == "bpf") return Algorithm::Bpf;
  if (s == "mcmc") return Algorithm::Mcmc;
  throw Error("unknown inference algorithm '" + std::string(s) + "' (expected lw, bpf or mcmc)");
}

AnalysisConfig config_for(Algorithm a) {
  if (a == Algorithm::Mcmc) return AnalysisConfig{true, false};
  return AnalysisConfig{false, true};
}

Compiled prepare(const AnfPtr& anf, Algorithm algo, CpsMode mode) {
  return compile(anf, mode, config_for(algo));
}

double log_sum_exp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  if (m == std::numeric_limits<double>::infinity()) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

std::vector<std::size_t> resample_systematic(const std::vector<double>& log_weights, Rng& rng) {
  std::size_t n = log_weights.size();
  double lse = log_sum_exp(log_weights);
  if (n == 0 || lse == kNegInf) throw InferenceError("every particle has zero weight");
  std::vector<std::size_t> out;
  out.reserve(n);
  double step = 1.0 / static_cast<double>(n);
  double u = rng.uniform() * step;
  double cum = 0.0;
  std::size_t i = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double target = u + static_cast<double>(k) * step;
    while (i + 1 < n && cum + std::exp(log_weights[i] - lse) <= target) {
      cum += std::exp(log_weights[i] - lse);
      ++i;
    }
    out.push_back(i);
  }
  return out;
}

double effective_sample_size(const std::vector<double>& log_weights) {
  double lse = log_sum_exp(log_weights);
  if (lse == kNegInf) return 0.0;
  double sq = 0.0;
  for (double lw : log_weights) {
    double w = std::exp(lw - lse);
    sq += w * w;
  }
  return 1.0 / sq;
}

InferenceResult run_lw(const Compiled& p, const InferenceOptions& opts) {
  InferenceResult res;
  res.samples.reserve(opts.n);
  std::vector<double> lws;
  lws.reserve(opts.n);
  for (std::size_t i = 0; i < opts.n; ++i) {
    Rng rng = Rng::stream(opts.seed, i);
    Sampler src(rng);
    TargetOutcome o;
    try {
      o = drive(p.target, src);
    } catch (const DynamicError& e) {
      rethrow_at(e, "sample " + std::to_string(i));
    }
    add(res.counters, o.counters);
    keep_warnings(res.diagnostics, o.warnings);
    lws.push_back(o.log_likelihood);
    res.samples.push_back({std::move(o.value), o.log_likelihood});
  }
  if (opts.n > 0) res.log_norm_const = log_sum_exp(lws) - std::log(static_cast<double>(opts.n));
  res.diagnostics.scalars["ess"] = effective_sample_size(lws);
  return res;
}

InferenceResult run_bpf(const Compiled& p, const InferenceOptions& opts) {
  if (p.mode == CpsMode::None) throw InferenceError("the particle filter needs a CPS-transformed program");
  std::size_t n = opts.n;
  if (n < 2) throw InferenceError("the particle filter needs at least two particles");
  InferenceResult res;

  std::vector<Rng> rngs;
  std::vector<Sampler> samplers;
  rngs.reserve(n);
  samplers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rngs.push_back(Rng::stream(opts.seed, i));
    samplers.emplace_back(rngs.back());
  }
  Rng resampler = Rng::stream(opts.seed, kResampleStream);

  std::vector<Particle> ps(n);
  std::vector<double> base(n, 0.0);
  auto guarded = [&](std::size_t i, auto&& f) {
    try {
      f();
    } catch (const DynamicError& e) {
      rethrow_at(e, "particle " + std::to_string(i));
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    ps[i].ctx.source = &samplers[i];
    guarded(i, [&] {
      Machine m(ps[i].ctx);
      ps[i].v = m.run(p.target);
      advance(ps[i]);
    });
  }

  double log_z = 0.0;
  double log_n = std::log(static_cast<double>(n));
  std::size_t steps = 0;
  std::vector<double> inc(n);
  for (;;) {
    bool all_done = true;
    for (std::size_t i = 0; i < n; ++i) {
      inc[i] = ps[i].ctx.log_likelihood - base[i];
      all_done = all_done && ps[i].done;
    }
    double lse = log_sum_exp(inc);
    if (lse == kNegInf) throw InferenceError("every particle has zero weight at step " + std::to_string(steps));
    log_z += lse - log_n;
    if (all_done) break;

    res.diagnostics.ess.push_back(effective_sample_size(inc));
    auto anc = resample_systematic(inc, resampler);
    std::vector<Particle> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = ps[anc[i]];
      next[i].ctx.source = &samplers[i];
    }
    ps = std::move(next);
    ++steps;
    for (std::size_t i = 0; i < n; ++i) {
      base[i] = ps[i].ctx.log_likelihood;
      if (!ps[i].done) guarded(i, [&] { resume(ps[i]); });
    }
  }

  res.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    add(res.counters, ps[i].ctx.counters);
    keep_warnings(res.diagnostics, ps[i].ctx.warnings);
    res.diagnostics.particle_weights.push_back(ps[i].ctx.weight_log.size());
    res.samples.push_back({ps[i].v, inc[i]});
  }
  res.log_norm_const = log_z;
  res.diagnostics.scalars["resampling_steps"] = static_cast<double>(steps);
  return res;
}

InferenceResult run_mcmc(const Compiled& p, const InferenceOptions& opts) {
  InferenceResult res;
  Rng rng = Rng::stream(opts.seed, 0);
  Chain chain(p, rng, res);

  McmcState cur;
  bool found = false;
  for (std::size_t a = 0; a < std::max<std::size_t>(opts.init_retries, 1) && !found; ++a) {
    try {
      cur = chain.run_from_start(nullptr, 0, std::nullopt);
    } catch (const DynamicError& e) {
      rethrow_at(e, "initial trace");
    }
    found = cur.joint() > kNegInf;
  }
  if (!found) throw InferenceError("no initial trace with positive probability");

  std::size_t accepted = 0;
  std::size_t total = opts.burn_in + opts.n;
  res.samples.reserve(opts.n);
  for (std::size_t it = 0; it < total; ++it) {
    try {
      if (chain.step(cur)) ++accepted;
    } catch (const DynamicError& e) {
      rethrow_at(e, "iteration " + std::to_string(it));
    }
    if (it >= opts.burn_in) res.samples.push_back({cur.value, 0.0});
  }
  res.diagnostics.scalars["acceptance_rate"] =
      total ? static_cast<double>(accepted) / static_cast<double>(total) : 0.0;
  res.diagnostics.scalars["burn_in"] = static_cast<double>(opts.burn_in);
  return res;
}

InferenceResult run(Algorithm algo, const AnfPtr& anf, const InferenceOptions& opts) {
  Compiled p = prepare(anf, algo, opts.mode);
  switch (algo) {
    case Algorithm::Lw: return run_lw(p, opts);
    case Algorithm::Bpf: return run_bpf(p, opts);
    case Algorithm::Mcmc: return run_mcmc(p, opts);
  }
  throw Error("unknown algorithm");
}

double posterior_mean(const InferenceResult& r) {
  std::vector<double> lws;
  for (const auto& s : r.samples) lws.push_back(s.log_weight);
  double lse = log_sum_exp(lws);
  if (lse == kNegInf) throw InferenceError("every sample has zero weight");
  double m = 0.0;
  for (const auto& s : r.samples) {
    double w = std::exp(s.log_weight - lse);
    if (w > 0.0) m += w * numeric(s.value);
  }
  return m;
}

std::string samples_csv(const InferenceResult& r) {
  std::string out = "sample,log_weight\n";
  for (const auto& s : r.samples) {
    std::string v;
    if (s.value.is_intrinsic() && s.value.intrinsic().is_number()) {
      v = fmt_real(s.value.intrinsic().to_double());
    } else {
      v = to_string(s.value);
      if (v.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        v = q + "\"";
      }
    }
    out += v + "," + fmt_real(s.log_weight) + "\n";
  }
  return out;
}

std::string diagnostics_json(const InferenceResult& r, Algorithm algo, const InferenceOptions& opts) {
  using json = nlohmann::ordered_json;
  auto real = [](double x) -> json {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  };
  json j;
  j["algorithm"] = std::string(to_string(algo));
  j["cps_mode"] = std::string(to_string(opts.mode));
  j["n"] = opts.n;
  j["seed"] = opts.seed;
  j["log_norm_const"] = r.log_norm_const ? real(*r.log_norm_const) : json(nullptr);
  j["counters"] = {{"continuation_allocs", r.counters.continuation_allocs},
                   {"closure_allocs", r.counters.closure_allocs},
                   {"suspensions", r.counters.suspensions}};
  json sc = json::object();
  for (const auto& [k, v] : r.diagnostics.scalars) sc[k] = real(v);
  j["diagnostics"] = sc;
  if (!r.diagnostics.ess.empty()) {
    json e = json::array();
    for (double x : r.diagnostics.ess) e.push_back(real(x));
    j["ess"] = e;
  }
  if (!r.diagnostics.particle_weights.empty()) j["particle_weights"] = r.diagnostics.particle_weights;
  j["warnings"] = r.diagnostics.warnings;
  return j.dump(2);
}

}  // namespace pplc
