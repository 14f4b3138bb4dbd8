#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>
#include <unordered_map>

#include "dmbl/error.hpp"
#include "dmbl/formula.hpp"
#include "dmbl/model.hpp"
#include "dmbl/stage_set.hpp"

namespace dmbl {

enum class VerdictKind { Proved, Refuted, ValidInModel, Inconclusive };

inline const char* to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::Proved: return "Proved";
    case VerdictKind::Refuted: return "Refuted";
    case VerdictKind::ValidInModel: return "ValidInModel";
    case VerdictKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

/// Lazy evaluates conditionals as they are met. Levelled first evaluates every
/// conditional of the formula shallowest level first, so consequents exist
/// before the bases of their level are processed; this can need fewer steps
/// when many conditionals share an antecedent.
enum class EvalOrder { Lazy, Levelled };

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::string witness;  // nested label of a world outside H, for Refuted
  std::string detail;   // guard message, for Inconclusive
  std::size_t stage = 0;
  std::size_t world_count = 0;
};

namespace detail {

class Evaluation {
 public:
  explicit Evaluation(ModelState& model) : m_(model) {}

  void prime(const Formula& f) {
    std::map<std::size_t, std::vector<Formula>> levels;
    std::set<std::string> seen;
    collect(f, levels, seen);
    for (const auto& [depth, conds] : levels)
      for (const auto& c : conds) run(c);
  }

  StageSet run(const Formula& f) {
    const std::string key = render(f);
    if (auto it = memo_.find(key); it != memo_.end()) return m_.forward_to_current(it->second);
    StageSet out = compute(f);
    memo_.insert_or_assign(key, out);
    return m_.forward_to_current(out);
  }

 private:
  StageSet compute(const Formula& f) {
    switch (f.op()) {
      case Op::Atom: return m_.atom_set(f.name());
      case Op::Not: return ~run(f.child(0));
      case Op::Implies: {
        const StageSet a = run(f.left());
        if (a.empty()) return m_.full();  // the consequent cannot matter
        const StageSet b = run(f.right());
        return ~m_.forward_to_current(a) | b;
      }
      case Op::Box: return run(f.child(0)).is_full() ? m_.full() : m_.empty();
      case Op::Cond: return conditional(f);
      default: throw Error("evaluate: formula is not desugared");
    }
  }

  // Antecedent first, so its base is settled before the consequent is built.
  StageSet conditional(const Formula& f) {
    const StageSet a0 = run(f.right());
    const StageSet b0 = run(f.left());
    for (;;) {
      const StageSet a = m_.forward_to_current(a0);
      const StageSet b = m_.forward_to_current(b0);
      if (auto r = m_.try_lookup_f(b, a)) return *r;
      if (m_.schedule() == Schedule::Faithful) {
        m_.faithful_step();
        continue;
      }
      m_.process_base(a);
      if (auto r = m_.try_lookup_f(m_.forward_to_current(b0), m_.forward_to_current(a0))) return *r;
      throw Error("internal: conditional still undefined after processing its antecedent");
    }
  }

  static void collect(const Formula& f, std::map<std::size_t, std::vector<Formula>>& levels,
                      std::set<std::string>& seen) {
    for (std::size_t i = 0; i < f.arity(); ++i) collect(f.child(i), levels, seen);
    if (f.op() == Op::Cond && seen.insert(render(f)).second) levels[conditional_depth(f)].push_back(f);
  }

  ModelState& m_;
  std::unordered_map<std::string, StageSet> memo_;
};

}  // namespace detail

/// H(f) at the stage reached after evaluation. May run construction steps;
/// throws WorldLimitExceeded if a needed step is too large.
inline StageSet evaluate(ModelState& model, const Formula& f, EvalOrder order = EvalOrder::Lazy) {
  const Formula core = desugar(f, model.atoms());
  detail::Evaluation ev(model);
  if (order == EvalOrder::Levelled) ev.prime(core);
  return model.forward_to_current(ev.run(core));
}

inline Verdict verdict(ModelState& model, const Formula& f, EvalOrder order = EvalOrder::Lazy) {
  Verdict v;
  try {
    const StageSet h = evaluate(model, f, order);
    v.stage = model.stage();
    v.world_count = model.world_count();
    if (h.is_full()) {
      v.kind = has_modality(f) ? VerdictKind::ValidInModel : VerdictKind::Proved;
    } else {
      v.kind = VerdictKind::Refuted;
      v.witness = model.tables().label(model.stage(), (~h).first());
    }
  } catch (const WorldLimitExceeded& e) {
    v.kind = VerdictKind::Inconclusive;
    v.detail = e.what();
    v.stage = model.stage();
    v.world_count = model.world_count();
  }
  return v;
}

/// f(H(psi), H(phi)) == H(psi) at the evaluation stage.
inline bool check_independence(ModelState& model, const Formula& psi, const Formula& phi) {
  return evaluate(model, Formula::iff(Formula::cond(psi, phi), psi)).is_full();
}

}  // namespace dmbl
