#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dmbl/error.hpp"
#include "dmbl/formula.hpp"

namespace dmbl {

namespace detail {

enum class Tok { Ident, Not, Imp, Iff, Or, And, LParen, RParen, Bar, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t at = i;
    if (c >= 'a' && c <= 'z') {
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        ++i;
      out.push_back({Tok::Ident, std::string(text.substr(at, i - at)), at});
    } else if (starts("<->")) {
      out.push_back({Tok::Iff, "<->", at});
      i += 3;
    } else if (starts("->")) {
      out.push_back({Tok::Imp, "->", at});
      i += 2;
    } else if (starts("\\/")) {
      out.push_back({Tok::Or, "\\/", at});
      i += 2;
    } else if (starts("/\\")) {
      out.push_back({Tok::And, "/\\", at});
      i += 2;
    } else if (c == '~') {
      out.push_back({Tok::Not, "~", at});
      ++i;
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", at});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", at});
      ++i;
    } else if (c == '|') {
      out.push_back({Tok::Bar, "|", at});
      ++i;
    } else if (c == ',') {
      out.push_back({Tok::Comma, ",", at});
      ++i;
    } else {
      throw ParseError(at, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const AtomContext& ctx) : tokens_(tokenize(text)), ctx_(ctx) {}

  Formula parse_all() {
    Formula f = formula();
    if (peek().kind != Tok::End) unexpected();
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }
  void expect(Tok kind, const char* what) {
    if (!accept(kind)) {
      if (peek().kind == Tok::Bar) unexpected();
      throw ParseError(peek().pos, std::string("expected ") + what);
    }
  }

  [[noreturn]] void unexpected() const {
    const Token& t = peek();
    if (t.kind == Tok::Bar) throw ParseError(t.pos, "conditional requires parentheses");
    if (t.kind == Tok::End) throw ParseError(t.pos, "unexpected end of input");
    throw ParseError(t.pos, "unexpected token '" + t.text + "'");
  }

  Formula formula() { return iff(); }

  Formula iff() {
    Formula f = imp();
    while (accept(Tok::Iff)) f = Formula::iff(f, imp());
    return f;
  }

  Formula imp() {
    Formula f = disj();
    if (accept(Tok::Imp)) return Formula::implies(f, imp());
    return f;
  }

  Formula disj() {
    Formula f = conj();
    while (accept(Tok::Or)) f = Formula::lor(f, conj());
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (accept(Tok::And)) f = Formula::land(f, unary());
    return f;
  }

  Formula unary() {
    if (accept(Tok::Not)) return Formula::neg(unary());
    if (peek().kind == Tok::Ident && peek().text == "box") {
      take();
      return Formula::box(unary());
    }
    if (peek().kind == Tok::Ident && peek().text == "dia") {
      take();
      return Formula::dia(unary());
    }
    return primary();
  }

  Formula primary() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      take();
      if (t.text == "top") return Formula::top();
      if (t.text == "bot") return Formula::bot();
      if (t.text == "indep") {
        expect(Tok::LParen, "'(' after indep");
        Formula psi = formula();
        expect(Tok::Comma, "','");
        Formula phi = formula();
        expect(Tok::RParen, "')'");
        return Formula::indep(psi, phi);
      }
      if (AtomContext::is_reserved(t.text))
        throw ParseError(t.pos, "reserved word '" + t.text + "' used as atom");
      if (!ctx_.contains(t.text)) throw ParseError(t.pos, "unknown atom '" + t.text + "'");
      return Formula::atom(t.text);
    }
    if (accept(Tok::LParen)) {
      Formula inner = formula();
      if (accept(Tok::Bar)) {
        Formula antecedent = formula();
        expect(Tok::RParen, "')' closing the conditional");
        return Formula::cond(inner, antecedent);
      }
      expect(Tok::RParen, "')'");
      return inner;
    }
    unexpected();
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const AtomContext& ctx_;
};

}  // namespace detail

/// Parses the concrete syntax:
///   ~ box dia  (unary)   /\   \/   ->  (right assoc)   <->
///   (psi | phi)  top  bot  indep(psi, phi)
inline Formula parse(std::string_view text, const AtomContext& ctx) {
  return detail::Parser(text, ctx).parse_all();
}

/// Identifiers of a formula text without validating them against a context.
inline std::vector<std::string> scan_identifiers(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& t : detail::tokenize(text)) {
    if (t.kind != detail::Tok::Ident || AtomContext::is_reserved(t.text)) continue;
    if (std::find(out.begin(), out.end(), t.text) == out.end()) out.push_back(t.text);
  }
  return out;
}

}  // namespace dmbl
