// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace pplc {

/// A variable name. `id` is zero until uniquification assigns each binding
/// site a distinct positive number; from then on identity is the id alone.
struct Ident {
  std::string name;
  std::uint32_t id = 0;

  Ident() = default;
  explicit Ident(std::string n, std::uint32_t i = 0)
      : name(std::move(n)), id(i) {}

  bool is_unique() const { return id != 0; }

  /// `name#id`, or the bare name for an unresolved identifier.
  std::string str() const {
    return id == 0 ? name : name + "#" + std::to_string(id);
  }

  friend bool operator==(const Ident& a, const Ident& b) {
    return a.id == b.id && (a.id != 0 || a.name == b.name);
  }
  friend std::strong_ordering operator<=>(const Ident& a, const Ident& b) {
    if (auto c = a.id <=> b.id; c != 0) return c;
    if (a.id != 0) return std::strong_ordering::equal;
    return a.name.compare(b.name) <=> 0;
  }
};

struct IdentHash {
  std::size_t operator()(const Ident& x) const noexcept {
    return x.id != 0 ? std::hash<std::uint32_t>{}(x.id)
                     : std::hash<std::string>{}(x.name);
  }
};

}  // namespace pplc
