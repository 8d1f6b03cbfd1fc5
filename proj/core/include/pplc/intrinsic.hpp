// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pplc {

/// Tags for the fixed intrinsic set. The first group are data values
/// (arity 0); the rest are operators with a positive declared arity.
enum class Op : std::uint8_t {
  Unit,
  Bool,
  Int,
  Real,
  List,
  Dist,
  // arithmetic and comparison
  Add,
  Sub,
  Mul,
  Div,
  Eq,
  Lt,
  // lists
  Cons,
  Head,
  Tail,
  Null,
  // distribution constructors
  Beta,
  Bernoulli,
  Normal,
  Uniform,
  Exponential,
  // density / mass functions
  Pdf,
  PdfBeta,
  PdfBernoulli,
  PdfNormal,
  PdfUniform,
  PdfExponential,
};

enum class DistKind : std::uint8_t { Beta, Bernoulli, Normal, Uniform, Exponential };

/// A fully applied distribution. Parameter meaning depends on the kind:
/// Beta(a, b), Bernoulli(p), Normal(mean, stddev), Uniform(lo, hi),
/// Exponential(rate).
struct Distribution {
  DistKind kind = DistKind::Bernoulli;
  double a = 0.0;
  double b = 0.0;

  friend bool operator==(const Distribution&, const Distribution&) = default;
};

struct ListCell;
using ListPtr = std::shared_ptr<const ListCell>;

/// An element of the intrinsic set C: a data value or a (possibly partially
/// applied) operator. Immutable; copies share structure.
class Intrinsic {
 public:
  Intrinsic() : op_(Op::Unit) {}

  static Intrinsic unit() { return Intrinsic(); }
  static Intrinsic boolean(bool b) { return Intrinsic(Op::Bool, b); }
  static Intrinsic integer(std::int64_t i) { return Intrinsic(Op::Int, i); }
  static Intrinsic real(double r) { return Intrinsic(Op::Real, r); }
  static Intrinsic list(ListPtr cells) { return Intrinsic(Op::List, std::move(cells)); }
  static Intrinsic nil() { return list(nullptr); }
  static Intrinsic dist(Distribution d) { return Intrinsic(Op::Dist, d); }
  static Intrinsic list_of(const std::vector<Intrinsic>& elems);
  /// An unapplied operator. `op` must not be a data tag.
  static Intrinsic op(Op op);

  Op tag() const { return op_; }
  /// Remaining argument count; 0 for data values and saturated results.
  int arity() const;
  std::size_t pending_count() const { return pending_ ? pending_->size() : 0; }
  const std::vector<Intrinsic>& pending() const;

  bool is_number() const { return op_ == Op::Int || op_ == Op::Real; }
  bool as_bool() const { return std::get<bool>(data_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  double as_real() const { return std::get<double>(data_); }
  /// Int or Real as a double.
  double to_double() const;
  const ListPtr& as_list() const { return std::get<ListPtr>(data_); }
  const Distribution& as_dist() const { return std::get<Distribution>(data_); }

  /// Structural equality (used by `=` and by tests); reals compare by value.
  friend bool operator==(const Intrinsic& a, const Intrinsic& b);

 private:
  using Data = std::variant<std::monostate, bool, std::int64_t, double, ListPtr, Distribution>;

  Intrinsic(Op op, Data data) : op_(op), data_(std::move(data)) {}

  friend Intrinsic delta_apply(const Intrinsic& fn, const Intrinsic& arg);

  Op op_;
  Data data_;
  std::shared_ptr<const std::vector<Intrinsic>> pending_;
};

struct ListCell {
  Intrinsic head;
  ListPtr tail;
};

/// Declared arity of an operator tag (0 for data tags).
int declared_arity(Op op);

/// Surface-syntax keyword for an operator tag (`Beta`, `head`, `(+)`, ...).
std::string_view op_name(Op op);
/// Inverse of op_name for keyword operators; nullopt if `word` is not one.
std::optional<Op> op_from_name(std::string_view word);

/// |c|: remaining arity.
inline int arity(const Intrinsic& c) { return c.arity(); }

/// The delta function: apply `fn` (arity > 0) to the value `arg` (arity 0).
/// Saturated applications are evaluated. Throws DynamicError on nullary
/// `fn`, non-value `arg`, or type-incompatible arguments.
Intrinsic delta_apply(const Intrinsic& fn, const Intrinsic& arg);

/// Printable form, e.g. `2.`, `[true, false]`, `(Beta 2.)`.
std::string to_string(const Intrinsic& c);

}  // namespace pplc
