// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pplc/parser.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pplc/error.hpp"

namespace pplc {

namespace {

enum class Tok {
  Ident,
  Int,
  Real,
  Sym,  // punctuation and infix operators
  Let,
  Rec,
  In,
  Lam,
  If,
  Then,
  Else,
  Assume,
  Weight,
  Observe,
  True,
  False,
  Nil,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '%'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

Tok keyword(const std::string& w) {
  static const std::pair<const char*, Tok> kws[] = {
      {"let", Tok::Let},       {"rec", Tok::Rec},       {"in", Tok::In},         {"lam", Tok::Lam},
      {"fun", Tok::Lam},       {"if", Tok::If},         {"then", Tok::Then},     {"else", Tok::Else},
      {"assume", Tok::Assume}, {"weight", Tok::Weight}, {"observe", Tok::Observe}, {"true", Tok::True},
      {"false", Tok::False},   {"nil", Tok::Nil},
  };
  for (const auto& [k, t] : kws) {
    if (w == k) return t;
  }
  return Tok::Ident;
}

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourcePos pos{line_, col_};
      if (i_ >= s_.size()) {
        out.push_back({Tok::End, "", pos});
        return out;
      }
      char c = s_[i_];
      if (s_.compare(i_, 2, "\xce\xbb") == 0) {  // λ
        advance(2);
        out.push_back({Tok::Lam, "lam", pos});
      } else if (c == '\\') {
        advance(1);
        out.push_back({Tok::Lam, "lam", pos});
      } else if (ident_start(c)) {
        out.push_back(ident(pos));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1])) &&
                  !operand_before(out))) {
        out.push_back(number(pos));
      } else if (std::string("()[],;=<+-*/.").find(c) != std::string::npos) {
        advance(1);
        out.push_back({Tok::Sym, std::string(1, c), pos});
      } else {
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos.line, pos.column);
      }
    }
  }

 private:
  static bool operand_before(const std::vector<Token>& out) {
    if (out.empty()) return false;
    const Token& t = out.back();
    switch (t.kind) {
      case Tok::Ident:
      case Tok::Int:
      case Tok::Real:
      case Tok::True:
      case Tok::False:
      case Tok::Nil:
        return true;
      case Tok::Sym:
        return t.text == ")" || t.text == "]";
      default:
        return false;
    }
  }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < s_.size(); ++k, ++i_) {
      if (s_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(s_[i_]) & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  void skip_space() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        advance(1);
      } else if (s_.compare(i_, 2, "--") == 0) {
        while (i_ < s_.size() && s_[i_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }

  Token ident(SourcePos pos) {
    std::size_t start = i_;
    advance(1);
    while (i_ < s_.size() && ident_char(s_[i_])) advance(1);
    // optional `#id` suffix, as printed for uniquified names
    if (i_ + 1 < s_.size() && s_[i_] == '#' && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
      advance(1);
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) advance(1);
    }
    std::string w(s_.substr(start, i_ - start));
    return {keyword(w), w, pos};
  }

  Token number(SourcePos pos) {
    std::size_t start = i_;
    if (s_[i_] == '-') advance(1);
    auto digits = [&] {
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) advance(1);
    };
    digits();
    bool real = false;
    if (i_ < s_.size() && s_[i_] == '.') {
      real = true;
      advance(1);
      digits();
    }
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      std::size_t save = i_;
      int sl = line_, sc = col_;
      advance(1);
      if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) advance(1);
      if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        real = true;
        digits();
      } else {
        i_ = save;
        line_ = sl;
        col_ = sc;
      }
    }
    return {real ? Tok::Real : Tok::Int, std::string(s_.substr(start, i_ - start)), pos};
  }

  std::string_view s_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

Ident read_ident(const std::string& text) {
  auto hash = text.find('#');
  if (hash == std::string::npos) return Ident(text);
  std::uint32_t id = 0;
  std::from_chars(text.data() + hash + 1, text.data() + text.size(), id);
  return Ident(text.substr(0, hash), id);
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  TermPtr program() {
    auto t = expr();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return t;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  Token next() { return toks_[i_++]; }
  bool at_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool at(Tok k) const { return peek().kind == k; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, peek().pos.line, peek().pos.column);
  }
  void expect_sym(const char* s) {
    if (!at_sym(s)) fail(std::string("expected '") + s + "'");
    ++i_;
  }
  void expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected '") + what + "'");
    ++i_;
  }
  Ident binder() {
    if (!at(Tok::Ident)) fail("expected an identifier");
    const auto& text = peek().text;
    if (op_from_name(text)) fail("'" + text + "' is a reserved intrinsic name");
    return read_ident(next().text);
  }

  TermPtr expr() {
    SourcePos pos = peek().pos;
    switch (peek().kind) {
      case Tok::Let: {
        ++i_;
        if (at(Tok::Rec)) {
          ++i_;
          Ident f = binder();
          expect_sym("=");
          expect(Tok::Lam, "lam");
          Ident p = binder();
          expect_sym(".");
          auto fn_body = expr();
          expect(Tok::In, "in");
          return make_letrec(f, p, fn_body, expr(), pos);
        }
        Ident x = binder();
        expect_sym("=");
        auto bound = expr();
        expect(Tok::In, "in");
        return make_let(x, bound, expr(), pos);
      }
      case Tok::Lam: {
        ++i_;
        Ident p = binder();
        expect_sym(".");
        return make_lam(p, expr(), pos);
      }
      case Tok::If: {
        ++i_;
        auto c = expr();
        expect(Tok::Then, "then");
        auto t = expr();
        expect(Tok::Else, "else");
        return make_if(c, t, expr(), pos);
      }
      default: {
        auto first = infix();
        if (at_sym(";")) {
          ++i_;
          return make_seq(first, expr(), pos);
        }
        return first;
      }
    }
  }

  TermPtr binop(Op op, TermPtr a, TermPtr b, SourcePos pos) {
    return make_app(make_app(make_const(Intrinsic::op(op), pos), std::move(a), pos), std::move(b), pos);
  }

  TermPtr infix() {
    auto lhs = additive();
    SourcePos pos = peek().pos;
    if (at_sym("=")) {
      ++i_;
      return binop(Op::Eq, lhs, additive(), pos);
    }
    if (at_sym("<")) {
      ++i_;
      return binop(Op::Lt, lhs, additive(), pos);
    }
    return lhs;
  }

  TermPtr additive() {
    auto lhs = multiplicative();
    for (;;) {
      SourcePos pos = peek().pos;
      if (at_sym("+")) {
        ++i_;
        lhs = binop(Op::Add, lhs, multiplicative(), pos);
      } else if (at_sym("-")) {
        ++i_;
        lhs = binop(Op::Sub, lhs, multiplicative(), pos);
      } else {
        return lhs;
      }
    }
  }

  TermPtr multiplicative() {
    auto lhs = application();
    for (;;) {
      SourcePos pos = peek().pos;
      if (at_sym("*")) {
        ++i_;
        lhs = binop(Op::Mul, lhs, application(), pos);
      } else if (at_sym("/")) {
        ++i_;
        lhs = binop(Op::Div, lhs, application(), pos);
      } else {
        return lhs;
      }
    }
  }

  bool atom_start() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::Int:
      case Tok::Real:
      case Tok::True:
      case Tok::False:
      case Tok::Nil:
        return true;
      case Tok::Sym:
        return peek().text == "(" || peek().text == "[";
      default:
        return false;
    }
  }

  TermPtr application() {
    SourcePos pos = peek().pos;
    if (at(Tok::Assume)) {
      ++i_;
      return make_assume(application(), pos);
    }
    if (at(Tok::Weight)) {
      ++i_;
      return make_weight(application(), pos);
    }
    if (at(Tok::Observe)) {
      // observe d v  ==  weight (pdf d v)
      ++i_;
      auto d = atom();
      auto v = atom();
      return make_weight(make_app(make_app(make_const(Intrinsic::op(Op::Pdf), pos), d, pos), v, pos), pos);
    }
    if (!atom_start()) fail(peek().kind == Tok::End ? "unexpected end of input" : "unexpected '" + peek().text + "'");
    auto t = atom();
    while (atom_start()) t = make_app(t, atom(), pos);
    return t;
  }

  TermPtr atom() {
    SourcePos pos = peek().pos;
    Token tok = next();
    switch (tok.kind) {
      case Tok::Ident: {
        if (auto op = op_from_name(tok.text)) return make_const(Intrinsic::op(*op), pos);
        return make_var(read_ident(tok.text), pos);
      }
      case Tok::Int: {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
        if (ec != std::errc() || p != tok.text.data() + tok.text.size()) {
          throw SyntaxError("integer literal out of range", pos.line, pos.column);
        }
        return make_const(Intrinsic::integer(v), pos);
      }
      case Tok::Real:
        return make_const(Intrinsic::real(std::stod(tok.text)), pos);
      case Tok::True:
        return make_const(Intrinsic::boolean(true), pos);
      case Tok::False:
        return make_const(Intrinsic::boolean(false), pos);
      case Tok::Nil:
        return make_const(Intrinsic::nil(), pos);
      case Tok::Sym:
        if (tok.text == "(") return parenthesized(pos);
        if (tok.text == "[") return list(pos);
        break;
      default:
        break;
    }
    --i_;
    fail("unexpected '" + tok.text + "'");
  }

  TermPtr parenthesized(SourcePos pos) {
    if (at_sym(")")) {
      ++i_;
      return make_const(Intrinsic::unit(), pos);
    }
    // operator sections: (+) (-) (*) (/) (=) (<)
    if (peek().kind == Tok::Sym && i_ + 1 < toks_.size() && toks_[i_ + 1].kind == Tok::Sym &&
        toks_[i_ + 1].text == ")") {
      static const std::pair<const char*, Op> sections[] = {
          {"+", Op::Add}, {"-", Op::Sub}, {"*", Op::Mul}, {"/", Op::Div}, {"=", Op::Eq}, {"<", Op::Lt},
      };
      for (const auto& [s, op] : sections) {
        if (peek().text == s) {
          i_ += 2;
          return make_const(Intrinsic::op(op), pos);
        }
      }
    }
    auto t = expr();
    expect_sym(")");
    return t;
  }

  // All-constant literals become one list constant; anything else is a
  // chain of `cons` applications ending in nil.
  TermPtr list(SourcePos pos) {
    std::vector<TermPtr> elems;
    if (!at_sym("]")) {
      elems.push_back(expr());
      while (at_sym(",")) {
        ++i_;
        elems.push_back(expr());
      }
    }
    expect_sym("]");
    std::vector<Intrinsic> values;
    for (const auto& e : elems) {
      const auto* c = std::get_if<src::Const>(&e->node);
      if (!c || c->value.arity() != 0) break;
      values.push_back(c->value);
    }
    if (values.size() == elems.size()) return make_const(Intrinsic::list_of(values), pos);
    TermPtr out = make_const(Intrinsic::nil(), pos);
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
      out = make_app(make_app(make_const(Intrinsic::op(Op::Cons), pos), *it, pos), out, pos);
    }
    return out;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

TermPtr parse(std::string_view source) { return Parser(Lexer(source).run()).program(); }

TermPtr parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace pplc
