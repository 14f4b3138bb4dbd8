#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dmbl/error.hpp"
#include "dmbl/evaluator.hpp"
#include "dmbl/formula.hpp"
#include "dmbl/model.hpp"
#include "dmbl/rational.hpp"
#include "dmbl/rational_fn.hpp"

namespace dmbl {

/// Weights over stage 0 worlds, indexed like the stage 0 table.
struct Distribution {
  bool generalized = false;
  std::vector<std::string> names;  // atoms, or world labels in generalized mode
  std::vector<Rational> weights;

  bool strictly_positive() const {
    for (const auto& w : weights)
      if (w <= 0) return false;
    return true;
  }

  AtomContext context() const { return AtomContext(names); }
};

/// Text format:
///   atoms: p q        (or  worlds: a b c)
///   11 1/6            (bitstring in atom order, or a world label)
/// Blank lines and '#' comments are ignored; unlisted worlds weigh 0.
inline Distribution load_distribution(std::istream& in) {
  Distribution d;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::vector<bool> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (!have_header) {
      if (head != "atoms:" && head != "worlds:") throw FormatError(lineno, "expected 'atoms:' or 'worlds:' header");
      d.generalized = head == "worlds:";
      std::string name;
      while (ls >> name) {
        if (!AtomContext::is_identifier(name) || AtomContext::is_reserved(name))
          throw FormatError(lineno, "invalid name '" + name + "'");
        for (const auto& prev : d.names)
          if (prev == name) throw FormatError(lineno, "duplicate name '" + name + "'");
        d.names.push_back(name);
      }
      if (d.names.empty()) throw FormatError(lineno, "header lists no names");
      if (!d.generalized && d.names.size() > 20) throw FormatError(lineno, "too many atoms");
      if (d.generalized && d.names.size() < 2) throw FormatError(lineno, "generalized mode needs two worlds");
      const std::size_t n = d.generalized ? d.names.size() : (std::size_t{1} << d.names.size());
      d.weights.assign(n, Rational(0));
      seen.assign(n, false);
      have_header = true;
      continue;
    }
    std::string weight_text;
    std::string extra;
    if (!(ls >> weight_text) || (ls >> extra)) throw FormatError(lineno, "expected '<world> <weight>'");
    std::size_t world = 0;
    if (d.generalized) {
      std::size_t i = 0;
      while (i < d.names.size() && d.names[i] != head) ++i;
      if (i == d.names.size()) throw FormatError(lineno, "unknown world '" + head + "'");
      world = i;
    } else {
      if (head.size() != d.names.size() || head.find_first_not_of("01") != std::string::npos)
        throw FormatError(lineno, "unknown minterm '" + head + "'");
      std::vector<bool> valuation;
      for (char c : head) valuation.push_back(c == '1');
      world = minterm_index(valuation);
    }
    if (seen[world]) throw FormatError(lineno, "duplicate entry for '" + head + "'");
    seen[world] = true;
    Rational w;
    try {
      w = parse_rational(weight_text);
    } catch (const Error& e) {
      throw FormatError(lineno, e.what());
    }
    if (w < 0) throw FormatError(lineno, "negative weight for '" + head + "'");
    d.weights[world] = w;
  }
  if (!have_header) throw FormatError(lineno, "missing header");
  Rational total = 0;
  for (const auto& w : d.weights) total += w;
  if (total != 1) throw FormatError(lineno, "weights sum to " + to_string(total) + ", not 1");
  return d;
}

inline Distribution parse_distribution(const std::string& text) {
  std::istringstream in(text);
  return load_distribution(in);
}

inline std::string format_distribution(const Distribution& d) {
  std::string out = d.generalized ? "worlds:" : "atoms:";
  for (const auto& n : d.names) out += " " + n;
  out += "\n";
  for (std::size_t w = 0; w < d.weights.size(); ++w) {
    const std::string key = d.generalized ? d.names[w] : minterm_label(d.names.size(), static_cast<WorldIndex>(w));
    out += key + " " + to_string(d.weights[w]) + "\n";
  }
  return out;
}

/// A fresh model over the distribution's stage 0 with its masses attached.
inline ModelState model_for(const Distribution& d, ModelOptions opt = {}) {
  ModelState m = d.generalized ? ModelState::generalized(d.names, std::nullopt, opt)
                               : ModelState::standard(d.context(), opt);
  m.attach_masses(d.weights);
  return m;
}

/// pi_e(w) = e/N + (1 - e) pi(w), as polynomials in e.
inline std::vector<RationalFn> epsilon_masses(const Distribution& d) {
  const Rational uniform(1, static_cast<unsigned long>(d.weights.size()));
  std::vector<RationalFn> out;
  for (const auto& w : d.weights)
    out.emplace_back(Polynomial(std::vector<Rational>{w, uniform - w}), Polynomial(Rational(1)));
  return out;
}

inline ModelState epsilon_model_for(const Distribution& d, ModelOptions opt = {}) {
  ModelState m = d.generalized ? ModelState::generalized(d.names, std::nullopt, opt)
                               : ModelState::standard(d.context(), opt);
  m.attach_masses(epsilon_masses(d));
  return m;
}

/// P(H(f)) in a model carrying a strictly positive rational measure.
inline Rational prob(ModelState& model, const Formula& f) {
  if (!model.has_rational_measure()) throw Error("prob: no rational measure attached");
  for (const auto& w : model.masses(0))
    if (w <= 0)
      throw DegenerateDistribution("distribution is not strictly positive; use the epsilon extension");
  return model.measure(evaluate(model, f));
}

/// R_f(e) in a model carrying epsilon-smoothed masses.
inline RationalFn prob_fn(ModelState& model, const Formula& f) {
  if (!model.has_function_measure()) throw Error("prob_fn: no rational-function measure attached");
  return model.measure_fn(evaluate(model, f));
}

inline Rational epsilon_value(ModelState& model, const Formula& f) { return limit_at_zero(prob_fn(model, f)); }

/// lim_{e->0+} of the smoothed probability of f, in a fresh model.
inline Rational epsilon_prob(const Distribution& d, const Formula& f, ModelOptions opt = {}) {
  ModelState m = epsilon_model_for(d, opt);
  return epsilon_value(m, f);
}

struct BayesReport {
  Rational conditional;  // P((psi|phi))
  Rational antecedent;   // P(phi)
  Rational product;      // P((psi|phi)) P(phi)
  Rational joint;        // P(phi /\ psi)
  bool equal = false;
};

/// P((psi|phi)) P(phi) against P(phi /\ psi), all in the same model.
inline BayesReport bayes_check(ModelState& model, const Formula& psi, const Formula& phi) {
  BayesReport r;
  r.conditional = prob(model, Formula::cond(psi, phi));
  r.antecedent = prob(model, phi);
  r.joint = prob(model, Formula::land(phi, psi));
  r.product = r.conditional * r.antecedent;
  r.equal = r.product == r.joint;
  return r;
}

}  // namespace dmbl
