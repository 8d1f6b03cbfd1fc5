// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pplc/random.hpp"

#include <cmath>
#include <limits>

#include "pplc/error.hpp"

namespace pplc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_beta_fn(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double gamma_draw(double shape, Rng& rng) {
  return std::gamma_distribution<double>(shape, 1.0)(rng.engine());
}

}  // namespace

void validate(const Distribution& d) {
  auto bad = [](const char* what) { throw DynamicError(what); };
  switch (d.kind) {
    case DistKind::Beta:
      if (!(d.a > 0.0) || !(d.b > 0.0)) bad("Beta parameters must be positive");
      break;
    case DistKind::Bernoulli:
      if (!(d.a >= 0.0 && d.a <= 1.0)) bad("Bernoulli probability must lie in [0, 1]");
      break;
    case DistKind::Normal:
      if (!(d.b > 0.0) || !std::isfinite(d.a)) bad("Normal requires finite mean and positive stddev");
      break;
    case DistKind::Uniform:
      if (!(d.a < d.b)) bad("Uniform requires lo < hi");
      break;
    case DistKind::Exponential:
      if (!(d.a > 0.0)) bad("Exponential rate must be positive");
      break;
  }
}

bool kind_matches(const Distribution& d, const Intrinsic& x) {
  if (d.kind == DistKind::Bernoulli) return x.tag() == Op::Bool;
  return x.is_number();
}

Intrinsic sample(const Distribution& d, Rng& rng) {
  switch (d.kind) {
    case DistKind::Beta: {
      double x = gamma_draw(d.a, rng);
      double y = gamma_draw(d.b, rng);
      return Intrinsic::real(x / (x + y));
    }
    case DistKind::Bernoulli:
      return Intrinsic::boolean(rng.uniform() < d.a);
    case DistKind::Normal:
      return Intrinsic::real(std::normal_distribution<double>(d.a, d.b)(rng.engine()));
    case DistKind::Uniform:
      return Intrinsic::real(d.a + (d.b - d.a) * rng.uniform());
    case DistKind::Exponential:
      return Intrinsic::real(std::exponential_distribution<double>(d.a)(rng.engine()));
  }
  return Intrinsic::unit();
}

double log_density(const Distribution& d, const Intrinsic& x) {
  if (!kind_matches(d, x)) throw DynamicError("value " + to_string(x) + " is not in the domain of the distribution");
  if (d.kind == DistKind::Bernoulli) {
    double p = x.as_bool() ? d.a : 1.0 - d.a;
    return p > 0.0 ? std::log(p) : kNegInf;
  }
  double v = x.to_double();
  switch (d.kind) {
    case DistKind::Beta:
      if (v < 0.0 || v > 1.0) return kNegInf;
      return (d.a - 1.0) * std::log(v) + (d.b - 1.0) * std::log1p(-v) - log_beta_fn(d.a, d.b);
    case DistKind::Normal: {
      double z = (v - d.a) / d.b;
      return -0.5 * z * z - std::log(d.b) - 0.5 * std::log(2.0 * M_PI);
    }
    case DistKind::Uniform:
      if (v < d.a || v > d.b) return kNegInf;
      return -std::log(d.b - d.a);
    case DistKind::Exponential:
      if (v < 0.0) return kNegInf;
      return std::log(d.a) - d.a * v;
    case DistKind::Bernoulli:
      break;
  }
  return kNegInf;
}

double mean(const Distribution& d) {
  switch (d.kind) {
    case DistKind::Beta: return d.a / (d.a + d.b);
    case DistKind::Bernoulli: return d.a;
    case DistKind::Normal: return d.a;
    case DistKind::Uniform: return 0.5 * (d.a + d.b);
    case DistKind::Exponential: return 1.0 / d.a;
  }
  return 0.0;
}

}  // namespace pplc
