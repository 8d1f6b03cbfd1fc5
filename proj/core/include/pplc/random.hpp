// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "pplc/intrinsic.hpp"

namespace pplc {

/// Seedable, splittable random source. The engine is mt19937_64; streams
/// are derived from (seed, index) through splitmix64 so every particle or
/// sample index gets an independent, reproducible generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(mix(seed)) {}

  /// Stream `index` of the generator family rooted at `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix(seed) ^ mix(index + 0x632be59bd9b4e019ULL));
  }

  /// Uniform in [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

/// Draw one value from `d` (Bool for Bernoulli, Real otherwise).
Intrinsic sample(const Distribution& d, Rng& rng);

/// Natural log of the density (or mass) of `x` under `d`; -inf outside the
/// support. Throws DynamicError if `x` has the wrong kind for `d`.
double log_density(const Distribution& d, const Intrinsic& x);

/// True if `x` has the value kind `d` produces (bool vs number).
bool kind_matches(const Distribution& d, const Intrinsic& x);

/// Throws DynamicError if the parameters are invalid for the kind.
void validate(const Distribution& d);

double mean(const Distribution& d);

}  // namespace pplc
