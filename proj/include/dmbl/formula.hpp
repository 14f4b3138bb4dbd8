#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dmbl/error.hpp"

namespace dmbl {

/// Ordered, fixed list of atom names. The index of an atom never changes for
/// the lifetime of a model built over the context.
class AtomContext {
 public:
  AtomContext() = default;

  explicit AtomContext(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw Error("atom context must not be empty");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!is_identifier(names_[i])) throw Error("invalid atom name '" + names_[i] + "'");
      if (is_reserved(names_[i])) throw Error("reserved word used as atom: '" + names_[i] + "'");
      for (std::size_t j = 0; j < i; ++j)
        if (names_[i] == names_[j]) throw Error("duplicate atom '" + names_[i] + "'");
    }
  }

  /// p, q, r, s, t, u, v, w, then a8, a9, ...
  static AtomContext standard(std::size_t count) {
    static constexpr std::string_view kNames[] = {"p", "q", "r", "s", "t", "u", "v", "w"};
    std::vector<std::string> names;
    for (std::size_t i = 0; i < count; ++i)
      names.push_back(i < std::size(kNames) ? std::string(kNames[i]) : "a" + std::to_string(i));
    return AtomContext(std::move(names));
  }

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
  }

  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  friend bool operator==(const AtomContext&, const AtomContext&) = default;

  static bool is_reserved(std::string_view word) {
    return word == "box" || word == "dia" || word == "top" || word == "bot" || word == "indep";
  }

  static bool is_identifier(std::string_view word) {
    if (word.empty() || word.front() < 'a' || word.front() > 'z') return false;
    return std::all_of(word.begin(), word.end(), [](char c) {
      return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    });
  }

 private:
  std::vector<std::string> names_;
};

enum class Op {
  Atom,
  Not,
  Implies,
  Box,
  Cond,  // children: consequent, antecedent
  // sugar, removed by desugar()
  Or,
  And,
  Iff,
  Dia,
  Top,
  Bot,
  Indep,  // children: psi, phi  (psi independent of phi)
};

/// Immutable formula tree with value semantics; children are shared.
class Formula {
 public:
  Formula() : Formula(Op::Top, {}, {}) {}

  static Formula atom(std::string name) { return Formula(Op::Atom, std::move(name), {}); }
  static Formula top() { return Formula(Op::Top, {}, {}); }
  static Formula bot() { return Formula(Op::Bot, {}, {}); }
  static Formula neg(Formula f) { return Formula(Op::Not, {}, {std::move(f)}); }
  static Formula box(Formula f) { return Formula(Op::Box, {}, {std::move(f)}); }
  static Formula dia(Formula f) { return Formula(Op::Dia, {}, {std::move(f)}); }
  static Formula implies(Formula a, Formula b) {
    return Formula(Op::Implies, {}, {std::move(a), std::move(b)});
  }
  static Formula lor(Formula a, Formula b) { return Formula(Op::Or, {}, {std::move(a), std::move(b)}); }
  static Formula land(Formula a, Formula b) {
    return Formula(Op::And, {}, {std::move(a), std::move(b)});
  }
  static Formula iff(Formula a, Formula b) { return Formula(Op::Iff, {}, {std::move(a), std::move(b)}); }
  /// (consequent | antecedent)
  static Formula cond(Formula consequent, Formula antecedent) {
    return Formula(Op::Cond, {}, {std::move(consequent), std::move(antecedent)});
  }
  /// psi independent of phi: box((psi|phi) <-> psi)
  static Formula indep(Formula psi, Formula phi) {
    return Formula(Op::Indep, {}, {std::move(psi), std::move(phi)});
  }

  Op op() const noexcept { return node_->op; }
  const std::string& name() const noexcept { return node_->name; }
  std::size_t arity() const noexcept { return node_->children.size(); }
  const Formula& child(std::size_t i) const { return node_->children.at(i); }
  const Formula& left() const { return child(0); }
  const Formula& right() const { return child(1); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.op() != b.op() || a.name() != b.name() || a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (!(a.child(i) == b.child(i))) return false;
    return true;
  }

 private:
  struct Node {
    Op op;
    std::string name;
    std::vector<Formula> children;
  };

  Formula(Op op, std::string name, std::vector<Formula> children)
      : node_(std::make_shared<const Node>(Node{op, std::move(name), std::move(children)})) {}

  std::shared_ptr<const Node> node_;
};

inline bool is_core(Op op) {
  return op == Op::Atom || op == Op::Not || op == Op::Implies || op == Op::Box || op == Op::Cond;
}

/// Rewrites every sugar node into Atom/Not/Implies/Box/Cond. top and bot are
/// expressed over the first atom of the context.
inline Formula desugar(const Formula& f, const AtomContext& ctx) {
  auto d = [&ctx](const Formula& g) { return desugar(g, ctx); };
  switch (f.op()) {
    case Op::Atom:
      return f;
    case Op::Not:
      return Formula::neg(d(f.left()));
    case Op::Box:
      return Formula::box(d(f.left()));
    case Op::Implies:
      return Formula::implies(d(f.left()), d(f.right()));
    case Op::Cond:
      return Formula::cond(d(f.left()), d(f.right()));
    case Op::Or:
      return Formula::implies(Formula::neg(d(f.left())), d(f.right()));
    case Op::And:
      return Formula::neg(
          d(Formula::lor(Formula::neg(f.left()), Formula::neg(f.right()))));
    case Op::Iff:
      return d(Formula::land(Formula::implies(f.left(), f.right()),
                             Formula::implies(f.right(), f.left())));
    case Op::Dia:
      return Formula::neg(Formula::box(Formula::neg(d(f.left()))));
    case Op::Top: {
      if (ctx.empty()) throw Error("top needs a declared atom");
      auto theta = Formula::atom(ctx.name(0));
      return Formula::implies(theta, theta);
    }
    case Op::Bot:
      return Formula::neg(d(Formula::top()));
    case Op::Indep:
      return d(Formula::box(Formula::iff(Formula::cond(f.left(), f.right()), f.left())));
  }
  throw Error("unknown formula node");
}

/// Nesting depth of the conditional operator.
inline std::size_t conditional_depth(const Formula& f) {
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < f.arity(); ++i)
    deepest = std::max(deepest, conditional_depth(f.child(i)));
  // independence hides a conditional
  return deepest + ((f.op() == Op::Cond || f.op() == Op::Indep) ? 1 : 0);
}

/// True when the desugared form contains a box.
inline bool has_modality(const Formula& f) {
  if (f.op() == Op::Box || f.op() == Op::Dia || f.op() == Op::Indep) return true;
  for (std::size_t i = 0; i < f.arity(); ++i)
    if (has_modality(f.child(i))) return true;
  return false;
}

inline bool is_classical(const Formula& f) {
  return !has_modality(f) && conditional_depth(f) == 0;
}

/// Atom names in order of first appearance.
inline std::vector<std::string> atoms_in(const Formula& f) {
  std::vector<std::string> out;
  auto walk = [&out](const auto& self, const Formula& g) -> void {
    if (g.op() == Op::Atom && std::find(out.begin(), out.end(), g.name()) == out.end())
      out.push_back(g.name());
    for (std::size_t i = 0; i < g.arity(); ++i) self(self, g.child(i));
  };
  walk(walk, f);
  return out;
}

namespace detail {

// Binding strength used by render(); larger binds tighter.
inline int precedence(Op op) {
  switch (op) {
    case Op::Iff:
      return 1;
    case Op::Implies:
      return 2;
    case Op::Or:
      return 3;
    case Op::And:
      return 4;
    case Op::Not:
    case Op::Box:
    case Op::Dia:
      return 5;
    default:
      return 6;
  }
}

inline void render_into(std::string& out, const Formula& f, int min_prec) {
  const int prec = precedence(f.op());
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (f.op()) {
    case Op::Atom:
      out += f.name();
      break;
    case Op::Top:
      out += "top";
      break;
    case Op::Bot:
      out += "bot";
      break;
    case Op::Not:
      out += '~';
      render_into(out, f.left(), 5);
      break;
    case Op::Box:
    case Op::Dia:
      out += f.op() == Op::Box ? "box " : "dia ";
      render_into(out, f.left(), 5);
      break;
    case Op::Cond:
      out += '(';
      render_into(out, f.left(), 0);
      out += " | ";
      render_into(out, f.right(), 0);
      out += ')';
      break;
    case Op::Indep:
      out += "indep(";
      render_into(out, f.left(), 0);
      out += ", ";
      render_into(out, f.right(), 0);
      out += ')';
      break;
    case Op::Iff:
      render_into(out, f.left(), 1);
      out += " <-> ";
      render_into(out, f.right(), 2);
      break;
    case Op::Implies:
      render_into(out, f.left(), 3);
      out += " -> ";
      render_into(out, f.right(), 2);
      break;
    case Op::Or:
      render_into(out, f.left(), 3);
      out += " \\/ ";
      render_into(out, f.right(), 4);
      break;
    case Op::And:
      render_into(out, f.left(), 4);
      out += " /\\ ";
      render_into(out, f.right(), 5);
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

/// Concrete syntax with minimal parentheses; conditionals are always written
/// in their bracketed form.
inline std::string render(const Formula& f) {
  std::string out;
  detail::render_into(out, f, 0);
  return out;
}

}  // namespace dmbl
