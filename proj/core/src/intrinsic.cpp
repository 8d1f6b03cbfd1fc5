// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pplc/intrinsic.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include "pplc/error.hpp"
#include "pplc/random.hpp"

namespace pplc {

namespace {

struct OpInfo {
  Op op;
  int arity;
  std::string_view name;
};

constexpr std::array<OpInfo, 27> kOps{{
    {Op::Unit, 0, "()"},
    {Op::Bool, 0, "bool"},
    {Op::Int, 0, "int"},
    {Op::Real, 0, "real"},
    {Op::List, 0, "list"},
    {Op::Dist, 0, "dist"},
    {Op::Add, 2, "(+)"},
    {Op::Sub, 2, "(-)"},
    {Op::Mul, 2, "(*)"},
    {Op::Div, 2, "(/)"},
    {Op::Eq, 2, "(=)"},
    {Op::Lt, 2, "(<)"},
    {Op::Cons, 2, "cons"},
    {Op::Head, 1, "head"},
    {Op::Tail, 1, "tail"},
    {Op::Null, 1, "null"},
    {Op::Beta, 2, "Beta"},
    {Op::Bernoulli, 1, "Bernoulli"},
    {Op::Normal, 2, "Normal"},
    {Op::Uniform, 2, "Uniform"},
    {Op::Exponential, 1, "Exponential"},
    {Op::Pdf, 2, "pdf"},
    {Op::PdfBeta, 3, "pdfBeta"},
    {Op::PdfBernoulli, 2, "pdfBernoulli"},
    {Op::PdfNormal, 3, "pdfNormal"},
    {Op::PdfUniform, 3, "pdfUniform"},
    {Op::PdfExponential, 2, "pdfExponential"},
}};

const OpInfo& info(Op op) { return kOps[static_cast<std::size_t>(op)]; }

bool is_data(Op op) { return info(op).arity == 0; }

[[noreturn]] void type_error(Op op, const std::string& what) {
  throw DynamicError(std::string(op_name(op)) + ": " + what);
}

double number(Op op, const Intrinsic& x) {
  if (!x.is_number()) type_error(op, "expected a number, got " + to_string(x));
  return x.to_double();
}

const ListPtr& cells(Op op, const Intrinsic& x) {
  if (x.tag() != Op::List) type_error(op, "expected a list, got " + to_string(x));
  return x.as_list();
}

Intrinsic arith(Op op, const Intrinsic& x, const Intrinsic& y) {
  if (op != Op::Div && x.tag() == Op::Int && y.tag() == Op::Int) {
    std::int64_t a = x.as_int(), b = y.as_int();
    switch (op) {
      case Op::Add: return Intrinsic::integer(a + b);
      case Op::Sub: return Intrinsic::integer(a - b);
      default: return Intrinsic::integer(a * b);
    }
  }
  double a = number(op, x), b = number(op, y);
  switch (op) {
    case Op::Add: return Intrinsic::real(a + b);
    case Op::Sub: return Intrinsic::real(a - b);
    case Op::Mul: return Intrinsic::real(a * b);
    default: return Intrinsic::real(a / b);
  }
}

Intrinsic make_dist(Op op, DistKind kind, double a, double b = 0.0) {
  Distribution d{kind, a, b};
  try {
    validate(d);
  } catch (const DynamicError& e) {
    type_error(op, e.message());
  }
  return Intrinsic::dist(d);
}

Intrinsic density(Op op, const Distribution& d, const Intrinsic& x) {
  if (!kind_matches(d, x)) type_error(op, "value " + to_string(x) + " outside the distribution's domain");
  return Intrinsic::real(std::exp(log_density(d, x)));
}

Intrinsic saturate(Op op, const std::vector<Intrinsic>& args) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      return arith(op, args[0], args[1]);
    case Op::Eq:
      if (args[0].tag() == Op::Dist || args[1].tag() == Op::Dist) type_error(op, "distributions are not comparable");
      return Intrinsic::boolean(args[0] == args[1]);
    case Op::Lt:
      return Intrinsic::boolean(number(op, args[0]) < number(op, args[1]));
    case Op::Cons:
      return Intrinsic::list(std::make_shared<const ListCell>(ListCell{args[0], cells(op, args[1])}));
    case Op::Head: {
      const auto& l = cells(op, args[0]);
      if (!l) type_error(op, "empty list");
      return l->head;
    }
    case Op::Tail: {
      const auto& l = cells(op, args[0]);
      if (!l) type_error(op, "empty list");
      return Intrinsic::list(l->tail);
    }
    case Op::Null:
      return Intrinsic::boolean(cells(op, args[0]) == nullptr);
    case Op::Beta:
      return make_dist(op, DistKind::Beta, number(op, args[0]), number(op, args[1]));
    case Op::Bernoulli:
      return make_dist(op, DistKind::Bernoulli, number(op, args[0]));
    case Op::Normal:
      return make_dist(op, DistKind::Normal, number(op, args[0]), number(op, args[1]));
    case Op::Uniform:
      return make_dist(op, DistKind::Uniform, number(op, args[0]), number(op, args[1]));
    case Op::Exponential:
      return make_dist(op, DistKind::Exponential, number(op, args[0]));
    case Op::Pdf:
      if (args[0].tag() != Op::Dist) type_error(op, "expected a distribution, got " + to_string(args[0]));
      return density(op, args[0].as_dist(), args[1]);
    case Op::PdfBeta:
      return density(op, make_dist(op, DistKind::Beta, number(op, args[0]), number(op, args[1])).as_dist(), args[2]);
    case Op::PdfBernoulli:
      return density(op, make_dist(op, DistKind::Bernoulli, number(op, args[0])).as_dist(), args[1]);
    case Op::PdfNormal:
      return density(op, make_dist(op, DistKind::Normal, number(op, args[0]), number(op, args[1])).as_dist(), args[2]);
    case Op::PdfUniform:
      return density(op, make_dist(op, DistKind::Uniform, number(op, args[0]), number(op, args[1])).as_dist(), args[2]);
    case Op::PdfExponential:
      return density(op, make_dist(op, DistKind::Exponential, number(op, args[0])).as_dist(), args[1]);
    default:
      break;
  }
  type_error(op, "not an operator");
}

std::string real_text(double r) {
  if (std::isnan(r)) return "nan";
  if (std::isinf(r)) return r > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), r);
  std::string s(buf.data(), res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".";
  return s;
}

}  // namespace

Intrinsic Intrinsic::op(Op op) {
  if (is_data(op)) throw DynamicError("not an operator tag: " + std::string(op_name(op)));
  return Intrinsic(op, std::monostate{});
}

Intrinsic Intrinsic::list_of(const std::vector<Intrinsic>& elems) {
  ListPtr l;
  for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
    l = std::make_shared<const ListCell>(ListCell{*it, std::move(l)});
  }
  return list(std::move(l));
}

int Intrinsic::arity() const {
  return info(op_).arity - static_cast<int>(pending_count());
}

const std::vector<Intrinsic>& Intrinsic::pending() const {
  static const std::vector<Intrinsic> empty;
  return pending_ ? *pending_ : empty;
}

double Intrinsic::to_double() const {
  return op_ == Op::Int ? static_cast<double>(as_int()) : as_real();
}

bool operator==(const Intrinsic& a, const Intrinsic& b) {
  if (a.is_number() && b.is_number()) {
    if (a.op_ == Op::Int && b.op_ == Op::Int) return a.as_int() == b.as_int();
    return a.to_double() == b.to_double();
  }
  if (a.op_ != b.op_) return false;
  switch (a.op_) {
    case Op::Unit: return true;
    case Op::Bool: return a.as_bool() == b.as_bool();
    case Op::Dist: return a.as_dist() == b.as_dist();
    case Op::List: {
      const ListCell* x = a.as_list().get();
      const ListCell* y = b.as_list().get();
      while (x && y) {
        if (!(x->head == y->head)) return false;
        x = x->tail.get();
        y = y->tail.get();
      }
      return x == y;
    }
    default:
      return a.pending() == b.pending();
  }
}

int declared_arity(Op op) { return info(op).arity; }

std::string_view op_name(Op op) { return info(op).name; }

std::optional<Op> op_from_name(std::string_view word) {
  for (const auto& i : kOps) {
    if (i.arity > 0 && i.name == word) return i.op;
  }
  return std::nullopt;
}

Intrinsic delta_apply(const Intrinsic& fn, const Intrinsic& arg) {
  if (fn.arity() == 0) throw DynamicError("cannot apply the value " + to_string(fn));
  if (arg.arity() != 0) {
    throw DynamicError(std::string(op_name(fn.tag())) + ": argument " + to_string(arg) + " is not a value");
  }
  auto args = std::make_shared<std::vector<Intrinsic>>();
  args->reserve(fn.pending_count() + 1);
  if (fn.pending_) *args = *fn.pending_;
  args->push_back(arg);
  if (static_cast<int>(args->size()) < declared_arity(fn.op_)) {
    Intrinsic partial(fn.op_, std::monostate{});
    partial.pending_ = std::move(args);
    return partial;
  }
  return saturate(fn.op_, *args);
}

std::string to_string(const Intrinsic& c) {
  switch (c.tag()) {
    case Op::Unit: return "()";
    case Op::Bool: return c.as_bool() ? "true" : "false";
    case Op::Int: return std::to_string(c.as_int());
    case Op::Real: return real_text(c.as_real());
    case Op::List: {
      std::string s = "[";
      for (const ListCell* l = c.as_list().get(); l; l = l->tail.get()) {
        s += to_string(l->head);
        if (l->tail) s += ", ";
      }
      return s + "]";
    }
    case Op::Dist: {
      const auto& d = c.as_dist();
      switch (d.kind) {
        case DistKind::Beta: return "(Beta " + real_text(d.a) + " " + real_text(d.b) + ")";
        case DistKind::Bernoulli: return "(Bernoulli " + real_text(d.a) + ")";
        case DistKind::Normal: return "(Normal " + real_text(d.a) + " " + real_text(d.b) + ")";
        case DistKind::Uniform: return "(Uniform " + real_text(d.a) + " " + real_text(d.b) + ")";
        case DistKind::Exponential: return "(Exponential " + real_text(d.a) + ")";
      }
      return "(dist)";
    }
    default: {
      if (c.pending_count() == 0) return std::string(op_name(c.tag()));
      std::string s = "(" + std::string(op_name(c.tag()));
      for (const auto& p : c.pending()) s += " " + to_string(p);
      return s + ")";
    }
  }
}

}  // namespace pplc
