#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dmbl/formula.hpp"

namespace dmbl {

/// A formula schema over metavariables. When `premise` is set the schema is a
/// rule: whenever the premise instance is valid, the conclusion must be too.
struct Schema {
  using Builder = std::function<Formula(const std::vector<Formula>&)>;
  std::string name;
  std::size_t arity = 1;
  Builder conclusion;
  Builder premise;         // empty for plain theorem schemata
  bool must_hold = true;   // false: outcome is reported, never a failure
};

namespace schema_ops {

inline Formula N(const Formula& a) { return Formula::neg(a); }
inline Formula I(const Formula& a, const Formula& b) { return Formula::implies(a, b); }
inline Formula E(const Formula& a, const Formula& b) { return Formula::iff(a, b); }
inline Formula A(const Formula& a, const Formula& b) { return Formula::land(a, b); }
inline Formula O(const Formula& a, const Formula& b) { return Formula::lor(a, b); }
inline Formula B(const Formula& a) { return Formula::box(a); }
inline Formula D(const Formula& a) { return Formula::dia(a); }
inline Formula C(const Formula& consequent, const Formula& antecedent) { return Formula::cond(consequent, antecedent); }
inline Formula X(const Formula& psi, const Formula& phi) { return Formula::indep(psi, phi); }

}  // namespace schema_ops

/// Axioms c1-c3, m1-m3, b1-b4, b5.weak.A/B and the theorems that follow from
/// them, followed by statements that need the symmetric-independence axiom b5
/// (or are open) and are only reported.
inline std::vector<Schema> standard_schemata() {
  using namespace schema_ops;
  const Formula top = Formula::top();
  const Formula bot = Formula::bot();
  std::vector<Schema> s;
  auto add = [&s](std::string name, std::size_t arity, Schema::Builder c, bool must = true) {
    s.push_back(Schema{std::move(name), arity, std::move(c), {}, must});
  };
  // metavariables: v[0]=psi, v[1]=phi, v[2]=eta
  add("c1", 2, [](const auto& v) { return I(v[1], I(v[0], v[1])); });
  add("c2", 3, [](const auto& v) { return I(I(v[2], I(v[1], v[0])), I(I(v[2], v[1]), I(v[2], v[0]))); });
  add("c3", 2, [](const auto& v) { return I(I(N(v[1]), N(v[0])), I(I(N(v[1]), v[0]), v[1])); });
  add("m1.c1", 2, [](const auto& v) { return B(I(v[1], I(v[0], v[1]))); });
  add("m1.b3", 2, [](const auto& v) { return B(I(C(v[0], v[1]), I(v[1], v[0]))); });
  add("m2", 2, [](const auto& v) { return I(B(I(v[1], v[0])), I(B(v[1]), B(v[0]))); });
  add("m3", 1, [](const auto& v) { return I(B(v[0]), v[0]); });
  add("b1", 2, [](const auto& v) { return I(B(I(v[1], v[0])), O(B(N(v[1])), B(C(v[0], v[1])))); });
  add("b2", 3, [](const auto& v) { return I(C(I(v[0], v[2]), v[1]), I(C(v[0], v[1]), C(v[2], v[1]))); });
  add("b3", 2, [](const auto& v) { return I(C(v[0], v[1]), I(v[1], v[0])); });
  add("b4", 2, [](const auto& v) { return E(N(C(N(v[0]), v[1])), C(v[0], v[1])); });
  add("b5.weak.A", 2, [](const auto& v) { return E(X(v[0], N(v[1])), X(v[0], v[1])); });
  add("b5.weak.B", 3, [](const auto& v) { return I(B(E(v[0], v[2])), B(E(C(v[1], v[0]), C(v[1], v[2])))); });
  add("full-universe", 2, [](const auto& v) { return I(B(v[1]), X(v[0], v[1])); });
  add("full-universe.top", 1, [top](const auto& v) { return E(C(v[0], top), v[0]); });
  add("empty-universe", 2, [](const auto& v) { return I(B(N(v[1])), X(v[0], v[1])); });
  add("empty-universe.bot", 1, [bot](const auto& v) { return E(C(v[0], bot), v[0]); });
  add("left-equivalences", 3, [](const auto& v) {
    return I(B(E(v[0], v[2])), O(B(N(v[1])), B(E(C(v[0], v[1]), C(v[2], v[1])))));
  });
  add("left-equivalences.corollary", 3,
      [](const auto& v) { return I(B(E(v[0], v[2])), B(E(C(v[0], v[1]), C(v[2], v[1])))); });
  s.push_back(Schema{"left-equivalences.rule", 3,
                     [](const auto& v) { return E(C(v[0], v[1]), C(v[2], v[1])); },
                     [](const auto& v) { return E(v[0], v[2]); }, true});
  add("sub-universe.not", 2, [](const auto& v) { return E(C(N(v[0]), v[1]), N(C(v[0], v[1]))); });
  add("sub-universe.and", 3, [](const auto& v) { return E(C(A(v[0], v[2]), v[1]), A(C(v[0], v[1]), C(v[2], v[1]))); });
  add("sub-universe.or", 3, [](const auto& v) { return E(C(O(v[0], v[2]), v[1]), O(C(v[0], v[1]), C(v[2], v[1]))); });
  add("sub-universe.implies", 3,
      [](const auto& v) { return E(C(I(v[0], v[2]), v[1]), I(C(v[0], v[1]), C(v[2], v[1]))); });
  add("box-conditional", 2, [](const auto& v) { return I(B(v[0]), B(C(v[0], v[1]))); });
  add("top-conditional", 1, [top](const auto& v) { return E(C(top, v[0]), top); });
  add("bot-conditional", 1, [bot](const auto& v) { return E(C(bot, v[0]), bot); });
  add("inference", 2, [](const auto& v) { return E(A(C(v[0], v[1]), v[1]), A(v[1], v[0])); });
  add("introspection", 1, [](const auto& v) { return O(B(N(v[0])), B(C(v[0], v[0]))); });
  add("inter-independence", 2, [](const auto& v) { return X(C(v[0], v[1]), v[1]); });
  add("independence-invariance.not", 2, [](const auto& v) { return I(X(v[0], v[1]), X(N(v[0]), v[1])); });
  add("independence-invariance.and", 3,
      [](const auto& v) { return I(A(X(v[0], v[1]), X(v[2], v[1])), X(A(v[0], v[2]), v[1])); });
  add("independence-invariance.equiv", 3,
      [](const auto& v) { return I(B(E(v[0], v[2])), E(X(v[0], v[1]), X(v[2], v[1]))); });
  add("narcissistic", 1, [](const auto& v) { return I(X(v[0], v[0]), O(B(N(v[0])), B(v[0]))); });
  add("independence-and-proof", 2,
      [](const auto& v) { return I(X(v[0], v[1]), I(B(O(v[1], v[0])), O(B(v[1]), B(v[0])))); });
  // v[0]=phi, v[1]=psi, v[2]=eta here
  add("independence-and-regularity", 3, [](const auto& v) {
    return I(A(X(v[0], v[2]), X(v[1], v[2])),
             I(B(I(A(v[0], v[2]), A(v[1], v[2]))), O(B(N(v[2])), B(I(v[0], v[1])))));
  });

  add("b5", 2, [](const auto& v) { return E(X(v[0], v[1]), X(v[1], v[0])); }, false);
  add("right-equivalences", 3, [](const auto& v) { return I(B(E(v[0], v[2])), B(E(C(v[1], v[0]), C(v[1], v[2])))); },
      false);
  add("reduction", 2, [](const auto& v) { return E(C(v[1], C(v[0], v[1])), v[1]); }, false);
  // t = 3 with phi_1, phi_2, phi_3 = v[0], v[1], v[2]
  add("markov", 3, [](const auto& v) {
    return I(A(X(C(v[2], v[1]), v[0]), D(A(v[0], v[1]))), B(E(C(v[2], v[1]), C(v[2], A(v[0], v[1])))));
  }, false);
  add("nested-link", 3, [](const auto& v) {
    return E(A(A(C(C(v[2], v[0]), v[1]), v[1]), v[0]), A(A(C(v[2], v[0]), v[1]), v[0]));
  }, false);
  add("nested-collapse", 3, [](const auto& v) { return E(C(C(v[2], v[0]), v[1]), C(v[2], A(v[1], v[0]))); }, false);
  add("double-proposition.indep", 3, [](const auto& v) { return X(C(v[2], A(v[1], v[0])), C(v[0], v[1])); }, false);
  add("double-proposition.equiv", 3, [](const auto& v) {
    return E(A(C(v[2], A(v[1], v[0])), C(v[0], v[1])), C(A(v[0], v[2]), v[1]));
  }, false);
  return s;
}

/// Metavariable instances over the first `atoms` of p, q: classical
/// formulas first, then single conditionals.
inline std::vector<Formula> formula_pool(std::size_t atoms) {
  const Formula p = Formula::atom("p");
  std::vector<Formula> pool;
  if (atoms <= 1) {
    pool = {p, Formula::neg(p), Formula::top(), Formula::bot(),
            Formula::cond(p, p), Formula::cond(Formula::neg(p), p), Formula::cond(p, Formula::top()),
            Formula::cond(p, Formula::neg(p))};
    return pool;
  }
  const Formula q = Formula::atom("q");
  pool = {p,
          q,
          Formula::neg(p),
          Formula::land(p, q),
          Formula::lor(p, Formula::neg(q)),
          Formula::implies(p, q),
          Formula::iff(p, q),
          Formula::top(),
          Formula::bot(),
          Formula::cond(q, p),
          Formula::cond(p, q),
          Formula::cond(Formula::neg(q), p),
          Formula::cond(q, Formula::lor(p, q)),
          Formula::cond(p, Formula::iff(p, q)),
          Formula::cond(Formula::land(p, q), Formula::top()),
          Formula::cond(q, Formula::bot()),
          Formula::cond(p, p)};
  return pool;
}

}  // namespace dmbl
