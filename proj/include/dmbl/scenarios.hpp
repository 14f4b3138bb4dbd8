#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dmbl/error.hpp"
#include "dmbl/evaluator.hpp"
#include "dmbl/formula.hpp"
#include "dmbl/model.hpp"
#include "dmbl/probability.hpp"
#include "dmbl/rational.hpp"
#include "dmbl/schemata.hpp"

namespace dmbl {

using Rng = std::mt19937_64;

enum class CheckStatus { Pass, Fail, Reported, Inconclusive };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Reported: return "reported";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct CheckRecord {
  CheckRecord() = default;
  explicit CheckRecord(std::string n, CheckStatus s = CheckStatus::Pass, std::size_t inst = 0, std::size_t fail = 0,
                       std::size_t inconc = 0, std::string d = {})
      : name(std::move(n)), status(s), instances(inst), failures(fail), inconclusive(inconc), detail(std::move(d)) {}

  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::size_t instances = 0;
  std::size_t failures = 0;  // for reported checks: instances where the statement did not hold
  std::size_t inconclusive = 0;
  std::string detail;        // first failing instance
};

struct ScenarioReport {
  std::string id;
  std::vector<CheckRecord> checks;
  std::size_t world_high_water = 0;
  double seconds = 0;

  bool passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::Fail; });
  }
  void append(const std::vector<CheckRecord>& more) { checks.insert(checks.end(), more.begin(), more.end()); }
  void append(const CheckRecord& more) { checks.push_back(more); }
};

/// Tallies named must-hold properties in first-seen order.
class PropertyLog {
 public:
  template <class Detail>
  bool check(const std::string& name, bool ok, Detail&& detail) {
    CheckRecord& r = slot(name);
    ++r.instances;
    if (!ok) {
      ++r.failures;
      r.status = CheckStatus::Fail;
      if (r.detail.empty()) r.detail = detail();
    }
    return ok;
  }
  bool check(const std::string& name, bool ok) {
    return check(name, ok, [] { return std::string{}; });
  }
  void inconclusive(const std::string& name, const std::string& why) {
    CheckRecord& r = slot(name);
    ++r.inconclusive;
    if (r.status == CheckStatus::Pass) r.status = CheckStatus::Inconclusive;
    if (r.detail.empty()) r.detail = why;
  }
  void touch(const std::string& name) { slot(name); }
  const std::vector<CheckRecord>& records() const noexcept { return records_; }
  bool ok() const {
    return std::none_of(records_.begin(), records_.end(), [](const auto& c) { return c.status == CheckStatus::Fail; });
  }

 private:
  CheckRecord& slot(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) {
      it = index_.emplace(name, records_.size()).first;
      records_.push_back(CheckRecord{name});
    }
    return records_[it->second];
  }

  std::vector<CheckRecord> records_;
  std::map<std::string, std::size_t> index_;
};

namespace detail {

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline StageSet random_subset(Rng& rng, std::size_t stage, std::size_t universe) {
  StageSet s(stage, universe);
  for (WorldIndex w = 0; w < universe; ++w)
    if ((rng() & 1U) != 0) s.insert(w);
  return s;
}

inline StageSet random_nontrivial(Rng& rng, std::size_t stage, std::size_t universe) {
  for (;;) {
    StageSet s = random_subset(rng, stage, universe);
    if (!s.is_trivial()) return s;
  }
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Classical helpers

/// Truth value of a classical formula at a standard stage 0 world.
inline bool truth_value(const Formula& f, const AtomContext& ctx, WorldIndex world) {
  switch (f.op()) {
    case Op::Atom: return minterm_value(ctx.size(), world, *ctx.index_of(f.name()));
    case Op::Top: return true;
    case Op::Bot: return false;
    case Op::Not: return !truth_value(f.child(0), ctx, world);
    case Op::Implies: return !truth_value(f.left(), ctx, world) || truth_value(f.right(), ctx, world);
    case Op::Or: return truth_value(f.left(), ctx, world) || truth_value(f.right(), ctx, world);
    case Op::And: return truth_value(f.left(), ctx, world) && truth_value(f.right(), ctx, world);
    case Op::Iff: return truth_value(f.left(), ctx, world) == truth_value(f.right(), ctx, world);
    default: throw Error("truth_value: formula is not classical");
  }
}

inline Rational classical_probability(const Distribution& d, const Formula& f) {
  const AtomContext ctx = d.context();
  Rational total = 0;
  for (WorldIndex w = 0; w < d.weights.size(); ++w)
    if (truth_value(f, ctx, w)) total += d.weights[w];
  return total;
}

/// Random classical formula with connective nesting at most `depth`.
inline Formula random_classical_formula(Rng& rng, const AtomContext& ctx, std::size_t depth) {
  const std::size_t pick = detail::uniform_index(rng, depth == 0 ? 3 : 9);
  if (depth == 0 || pick < 2) {
    if (detail::uniform_index(rng, 12) == 0) return detail::uniform_index(rng, 2) ? Formula::top() : Formula::bot();
    return Formula::atom(ctx.name(detail::uniform_index(rng, ctx.size())));
  }
  auto sub = [&] { return random_classical_formula(rng, ctx, depth - 1); };
  switch (pick) {
    case 2:
    case 3: return Formula::neg(sub());
    case 4: return Formula::implies(sub(), sub());
    case 5: return Formula::land(sub(), sub());
    case 6: return Formula::lor(sub(), sub());
    case 7: return Formula::iff(sub(), sub());
    default: return Formula::implies(sub(), sub());
  }
}

/// Random distribution over `atoms` atoms with small integer weights. With
/// `zeros` > 0, that many minterms get weight 0.
inline Distribution random_distribution(Rng& rng, std::size_t atoms, std::size_t zeros = 0) {
  Distribution d;
  d.names = AtomContext::standard(atoms).names();
  const std::size_t n = std::size_t{1} << atoms;
  if (zeros >= n) throw Error("random_distribution: every weight would be zero");
  std::vector<long> raw(n);
  for (auto& r : raw) r = 1 + static_cast<long>(detail::uniform_index(rng, 12));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < zeros; ++i) raw[order[i]] = 0;
  long total = 0;
  for (auto r : raw) total += r;
  for (auto r : raw) {
    Rational w(r, total);
    w.canonicalize();
    d.weights.push_back(w);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Construction invariants

/// Checks every construction invariant on the model as it stands: the
/// partition lemma, size law, swap and forward-morphism laws and reprocessing
/// consistency for each step; the conditioning laws for every active base;
/// and the measure identities when a rational measure is attached.
inline void check_model_properties(const ModelState& m, Rng& rng, PropertyLog& log, std::size_t samples = 6) {
  const WorldTables& T = m.tables();
  const std::size_t n = m.stage();
  auto rand_at = [&](std::size_t k) { return detail::random_subset(rng, k, T.size(k)); };
  const bool measured = m.has_rational_measure();

  for (std::size_t k = 0; measured && k <= n; ++k) {
    Rational total = 0;
    bool positive = true;
    for (const auto& w : m.masses(k)) {
      total += w;
      positive = positive && w > 0;
    }
    log.check("measure-total", total == 1, [&] { return "stage " + std::to_string(k) + " total " + to_string(total); });
    log.check("measure-positive", positive, [&] { return "stage " + std::to_string(k); });
  }

  for (const auto& rec : m.history()) {
    const std::size_t k = rec.step;
    const std::size_t Nk = T.size(k);
    const std::string where = "step " + std::to_string(k);

    std::size_t expected = 0;
    for (const auto& e : rec.entries) expected += 2 * e.pi.size() * e.gamma.size();
    log.check("size-law", expected == T.size(k + 1), [&] { return where; });

    StageSet all_pi(k, Nk);
    StageSet all_gamma(k, Nk);
    bool disjoint = true;
    for (std::size_t i = 0; i < rec.entries.size(); ++i) {
      const StageSet P = rec.pi(i, Nk);
      const StageSet G = rec.gamma(i, Nk);
      disjoint = disjoint && !P.intersects(all_pi) && !G.intersects(all_gamma);
      all_pi |= P;
      all_gamma |= G;
    }
    disjoint = disjoint && !all_pi.intersects(all_gamma);
    log.check("partition-lemma", disjoint && all_pi == rec.base && all_gamma == ~rec.base, [&] { return where; });
    log.check("swap-bijection", T.swap(rec.pi_block) == rec.gamma_block, [&] { return where; });

    const ForwardRecord fr = T.forward_record(k);
    log.check("forward-base", forward(fr, rec.base) == rec.pi_block, [&] { return where; });
    log.check("forward-top", forward(fr, T.full_set(k)).is_full(), [&] { return where; });
    for (std::size_t s = 0; s < samples; ++s) {
      const StageSet A = rand_at(k);
      const StageSet B = rand_at(k);
      const StageSet fA = forward(fr, A);
      const StageSet fB = forward(fr, B);
      log.check("forward-morphism", forward(fr, A & B) == (fA & fB) && forward(fr, ~A) == ~fA,
                [&] { return where + " A=" + A.to_string() + " B=" + B.to_string(); });
      log.check("forward-injective", (A == B) == (fA == fB), [&] { return where; });
    }

    // Earlier steps on the same pair must agree with this one once forwarded.
    for (std::size_t j = 0; j < k; ++j) {
      const StageSet fj = T.forward_to(m.history()[j].pi_block, k);
      if (fj != rec.base && fj != ~rec.base) continue;
      const bool same = fj == rec.base;
      for (std::size_t s = 0; s < samples; ++s) {
        const StageSet Bj = rand_at(j + 1);
        for (bool pos : {true, false}) {
          const StageSet lhs = T.forward_to(m.conditional_at_step(j, Bj, pos), k + 1);
          const StageSet rhs = m.conditional_at_step(k, T.forward_to(Bj, k + 1), same ? pos : !pos);
          log.check("reprocessing-consistency", lhs == rhs,
                    [&] { return "steps " + std::to_string(j) + "/" + std::to_string(k) + " B=" + Bj.to_string(); });
        }
      }
    }

    if (measured) {
      const Rational pb = m.measure(rec.base);
      const Rational pnb = m.measure(~rec.base);
      for (std::size_t i = 0; i < rec.entries.size(); ++i) {
        const Rational lhs = m.measure(rec.pi(i, Nk)) * pnb;
        const Rational rhs = m.measure(rec.gamma(i, Nk)) * pb;
        log.check("block-ratio", lhs == rhs, [&] { return where + " entry " + std::to_string(i); });
      }
      for (std::size_t s = 0; s < samples; ++s) {
        const StageSet S = rand_at(k);
        log.check("measure-conservation", m.measure(forward(fr, S)) == m.measure(S),
                  [&] { return where + " S=" + S.to_string(); });
      }
    }
  }

  const StageSet full = m.full();
  for (std::size_t s = 0; s < samples; ++s) {
    const StageSet B = rand_at(n);
    log.check("f-trivial", m.lookup_f(B, full) == B && m.lookup_f(B, m.empty()) == B);
  }

  for (const auto& rec : m.history()) {
    const StageSet mu = m.forward_to_current(rec.pi_block);
    const auto hit = m.conditioning_step(mu);
    if (!hit || hit->first != rec.step) continue;
    const std::size_t k = rec.step;
    const std::string where = "base of step " + std::to_string(k);
    auto rand_defined = [&] { return T.forward_to(rand_at(k + 1), n); };
    for (const StageSet& A : {mu, ~mu}) {
      const StageSet nA = ~A;
      for (std::size_t s = 0; s < samples; ++s) {
        const StageSet B = rand_defined();
        const StageSet C = rand_defined();
        const StageSet fB = m.lookup_f(B, A);
        const StageSet fC = m.lookup_f(C, A);
        auto info = [&] { return where + " A=" + A.to_string() + " B=" + B.to_string() + " C=" + C.to_string(); };
        log.check("beta1", m.lookup_f(A | B, A).is_full(), info);
        log.check("beta2", m.lookup_f(B | C, A) == (fB | fC), info);
        log.check("beta3", (A & fB) == (A & B), info);
        log.check("beta4", m.lookup_f(~B, A) == ~fB, info);
        if (fB == B) log.check("beta5w", m.lookup_f(B, nA) == B, info);
        log.check("beta5w", m.lookup_f(fB, nA) == fB, info);
        log.check("beta6", m.lookup_f(B & C, A) == (fB & fC), info);
        log.check("idempotence", m.lookup_f(fB, A) == fB && m.lookup_f(fB, nA) == fB, info);
        if (measured)
          log.check("fundamental-identity", m.measure(A & B) == m.measure(A) * m.measure(fB), info);
      }
      // Brute force: f(B,A) is the only X agreeing with B on A and fixed by f(.,A).
      if (k + 1 == n && T.size(n) <= 16 && !A.empty()) {
        for (std::size_t s = 0; s < 2; ++s) {
          const StageSet B = rand_at(n);
          const StageSet target = m.lookup_f(B, A);
          std::size_t solutions = 0;
          bool matches = true;
          const std::size_t N = T.size(n);
          for (std::uint32_t bits = 0; bits < (1U << N); ++bits) {
            StageSet X(n, N);
            for (WorldIndex w = 0; w < N; ++w)
              if (((bits >> w) & 1U) != 0) X.insert(w);
            if ((X & A) != (B & A) || m.lookup_f(X, A) != X) continue;
            ++solutions;
            matches = matches && X == target;
          }
          log.check("uniqueness", solutions == 1 && matches,
                    [&] { return where + " B=" + B.to_string() + " solutions=" + std::to_string(solutions); });
        }
      }
    }
  }
}

struct ConstructionSuiteOptions {
  std::size_t runs = 100;
  std::uint64_t seed = 1;
  std::size_t max_steps = 5;
  std::size_t max_worlds = 4096;
  std::size_t samples = 6;
  std::size_t max_atoms = 2;
};

/// Randomized construction runs over 1..max_atoms atoms, alternating
/// schedules, checking every invariant after every step.
inline ScenarioReport run_construction_suite(const ConstructionSuiteOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioReport report;
  report.id = "construction";
  PropertyLog log;
  std::size_t guard_stops = 0;
  std::size_t steps_taken = 0;
  std::size_t reprocess_steps = 0;
  for (std::size_t r = 0; r < opt.runs; ++r) {
    Rng rng(opt.seed * 1000003ULL + r);
    const std::size_t atoms = 1 + r % opt.max_atoms;
    const Schedule schedule = (r / opt.max_atoms) % 2 == 0 ? Schedule::Query : Schedule::Faithful;
    ModelState m = ModelState::standard(AtomContext::standard(atoms), {schedule, opt.max_worlds});
    m.attach_masses(random_distribution(rng, atoms).weights);
    check_model_properties(m, rng, log, opt.samples);
    for (std::size_t step = 0; step < opt.max_steps; ++step) {
      try {
        if (schedule == Schedule::Faithful) {
          m.faithful_step();
        } else if (!m.history().empty() && detail::uniform_index(rng, 5) < 2) {
          const auto& old = m.history()[detail::uniform_index(rng, m.history().size())];
          StageSet base = m.forward_to_current(old.pi_block);
          if ((rng() & 1U) != 0) base = ~base;
          m.process_base(base);
        } else {
          m.process_base(detail::random_nontrivial(rng, m.stage(), m.world_count()));
        }
      } catch (const WorldLimitExceeded&) {
        ++guard_stops;
        break;
      }
      ++steps_taken;
      if (m.history().back().tag.reprocess) ++reprocess_steps;
      report.world_high_water = std::max(report.world_high_water, m.world_count());
      check_model_properties(m, rng, log, opt.samples);
    }
  }
  report.checks = log.records();
  report.append(CheckRecord{"runs", CheckStatus::Pass, opt.runs, 0, 0,
                            std::to_string(steps_taken) + " steps, " + std::to_string(reprocess_steps) +
                                " reprocessing steps, " + std::to_string(guard_stops) + " runs stopped by the guard"});
  report.seconds = detail::seconds_since(t0);
  return report;
}

// ---------------------------------------------------------------------------
// Axiom and theorem schemata

struct SchemaSuiteOptions {
  std::size_t atoms = 2;
  Schedule schedule = Schedule::Query;
  std::size_t max_worlds = kDefaultMaxWorlds;
  std::uint64_t seed = 1;
  std::size_t cap = 300;  // instances per schema when the full product is larger
};

inline std::vector<std::vector<Formula>> schema_instances(const Schema& schema, const std::vector<Formula>& pool,
                                                          Rng& rng, std::size_t cap) {
  std::vector<std::vector<Formula>> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < schema.arity; ++i) total *= pool.size();
  if (total <= cap) {
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<Formula> v;
      std::size_t c = code;
      for (std::size_t i = 0; i < schema.arity; ++i) {
        v.push_back(pool[c % pool.size()]);
        c /= pool.size();
      }
      out.push_back(std::move(v));
    }
    return out;
  }
  for (std::size_t k = 0; k < cap; ++k) {
    std::vector<Formula> v;
    for (std::size_t i = 0; i < schema.arity; ++i) v.push_back(pool[detail::uniform_index(rng, pool.size())]);
    out.push_back(std::move(v));
  }
  return out;
}

/// Each instance is checked in a fresh model.
inline std::vector<CheckRecord> run_schema_suite(const SchemaSuiteOptions& opt, std::size_t* high_water = nullptr) {
  const AtomContext ctx = AtomContext::standard(opt.atoms);
  const auto pool = formula_pool(opt.atoms);
  std::vector<CheckRecord> out;
  for (const auto& schema : standard_schemata()) {
    Rng rng(opt.seed ^ std::hash<std::string>{}(schema.name));
    CheckRecord rec{schema.name, schema.must_hold ? CheckStatus::Pass : CheckStatus::Reported};
    for (const auto& v : schema_instances(schema, pool, rng, opt.cap)) {
      ModelState m = ModelState::standard(ctx, {opt.schedule, opt.max_worlds});
      if (schema.premise) {
        const Verdict pv = verdict(m, schema.premise(v));
        if (pv.kind == VerdictKind::Inconclusive) {
          ++rec.inconclusive;
          continue;
        }
        if (pv.kind == VerdictKind::Refuted) continue;  // rule does not apply
      }
      const Formula instance = schema.conclusion(v);
      Verdict cv = verdict(m, instance);
      if (cv.kind == VerdictKind::Inconclusive) {
        ModelState fresh = ModelState::standard(ctx, {opt.schedule, opt.max_worlds});
        cv = verdict(fresh, instance, EvalOrder::Levelled);
      }
      if (high_water) *high_water = std::max(*high_water, m.world_count());
      ++rec.instances;
      if (cv.kind == VerdictKind::Inconclusive) {
        ++rec.inconclusive;
        if (rec.detail.empty()) rec.detail = "guard: " + render(instance);
        continue;
      }
      if (cv.kind == VerdictKind::Refuted) {
        ++rec.failures;
        if (rec.failures == 1) rec.detail = render(instance) + " fails at " + cv.witness;
      }
    }
    if (schema.must_hold) {
      if (rec.failures > 0)
        rec.status = CheckStatus::Fail;
      else if (rec.inconclusive > 0)
        rec.status = CheckStatus::Inconclusive;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Probability

/// Proved <=> truth-table valid, for random classical formulas.
inline CheckRecord check_classical_completeness(std::size_t atoms, std::size_t samples, std::size_t depth,
                                                std::uint64_t seed) {
  Rng rng(seed);
  const AtomContext ctx = AtomContext::standard(atoms);
  ModelState m = ModelState::standard(ctx);
  CheckRecord rec{"classical-completeness"};
  std::size_t valid = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Formula f = random_classical_formula(rng, ctx, depth);
    bool tautology = true;
    for (WorldIndex w = 0; w < m.tables().size(0) && tautology; ++w) tautology = truth_value(f, ctx, w);
    const Verdict v = verdict(m, f);
    ++rec.instances;
    valid += tautology ? 1 : 0;
    if ((v.kind == VerdictKind::Proved) != tautology || v.kind == VerdictKind::ValidInModel) {
      ++rec.failures;
      if (rec.detail.empty()) rec.detail = render(f) + " verdict " + to_string(v.kind);
    }
  }
  if (rec.failures > 0) rec.status = CheckStatus::Fail;
  if (rec.detail.empty()) rec.detail = std::to_string(valid) + " tautologies";
  return rec;
}

/// The extension agrees with the input distribution on classical formulas.
inline CheckRecord check_nondistortion(std::size_t atoms, std::size_t distributions, std::size_t formulas,
                                       std::uint64_t seed) {
  Rng rng(seed);
  const AtomContext ctx = AtomContext::standard(atoms);
  CheckRecord rec{"classical-nondistortion"};
  for (std::size_t d = 0; d < distributions; ++d) {
    const Distribution dist = random_distribution(rng, atoms);
    ModelState m = model_for(dist);
    // Condition on something first so the check runs past stage 0.
    evaluate(m, Formula::cond(Formula::atom(ctx.name(0)), Formula::atom(ctx.name(ctx.size() - 1))));
    for (std::size_t i = 0; i < formulas; ++i) {
      const Formula f = random_classical_formula(rng, ctx, 4);
      ++rec.instances;
      if (prob(m, f) != classical_probability(dist, f)) {
        ++rec.failures;
        if (rec.detail.empty()) rec.detail = render(f);
      }
    }
  }
  if (rec.failures > 0) rec.status = CheckStatus::Fail;
  return rec;
}

/// Model structure for a set of formulas: evaluated once, then measured under
/// any number of distributions.
struct EvaluatedFormulas {
  ModelState model;
  std::vector<StageSet> sets;

  EvaluatedFormulas(ModelState m, const std::vector<Formula>& fs) : model(std::move(m)) {
    for (const auto& f : fs) sets.push_back(evaluate(model, f));
    for (auto& s : sets) s = model.forward_to_current(s);
  }

  std::vector<Rational> measure(const Distribution& d) {
    model.attach_masses(d.weights);
    std::vector<Rational> out;
    for (const auto& s : sets) out.push_back(model.measure(s));
    return out;
  }
};

/// Bayes identity P((psi|phi)) P(phi) = P(phi /\ psi) for every ordered pair
/// of pool formulas, plus nested instances whose antecedent is a conditional.
inline std::vector<CheckRecord> check_bayes_suite(std::size_t distributions, std::uint64_t seed,
                                                  std::size_t max_worlds = kDefaultMaxWorlds) {
  Rng rng(seed);
  const AtomContext ctx = AtomContext::standard(2);
  std::vector<Distribution> dists;
  for (std::size_t i = 0; i < distributions; ++i) dists.push_back(random_distribution(rng, 2));
  CheckRecord flat{"bayes-identity"};
  CheckRecord nested{"bayes-identity-nested"};
  auto run = [&](CheckRecord& rec, const Formula& psi, const Formula& phi) {
    try {
      EvaluatedFormulas ev(ModelState::standard(ctx, {Schedule::Query, max_worlds}),
                           {Formula::cond(psi, phi), phi, Formula::land(phi, psi)});
      for (const auto& d : dists) {
        const auto v = ev.measure(d);
        ++rec.instances;
        if (v[0] * v[1] != v[2]) {
          ++rec.failures;
          if (rec.detail.empty()) rec.detail = "psi=" + render(psi) + " phi=" + render(phi);
        }
      }
    } catch (const WorldLimitExceeded&) {
      ++rec.inconclusive;
    }
  };
  const auto pool = formula_pool(2);
  for (const auto& psi : pool)
    for (const auto& phi : pool) run(flat, psi, phi);
  const Formula p = Formula::atom("p");
  const Formula q = Formula::atom("q");
  const std::vector<std::pair<Formula, Formula>> nested_cases = {
      {Formula::cond(q, p), Formula::cond(p, q)},
      {Formula::cond(q, p), Formula::cond(q, Formula::lor(p, q))},
      {Formula::cond(p, q), Formula::cond(Formula::neg(q), p)},
      {Formula::cond(q, p), Formula::cond(q, p)},
      {Formula::cond(Formula::land(p, q), Formula::top()), Formula::cond(p, Formula::iff(p, q))},
      {Formula::cond(q, Formula::neg(p)), Formula::cond(p, q)},
      {q, Formula::cond(q, p)},
      {Formula::cond(p, p), Formula::cond(q, p)},
  };
  for (const auto& [psi, phi] : nested_cases) run(nested, psi, phi);
  for (auto* rec : {&flat, &nested}) {
    if (rec->failures > 0)
      rec->status = CheckStatus::Fail;
    else if (rec->inconclusive > 0)
      rec->status = CheckStatus::Inconclusive;
  }
  nested.detail += (nested.detail.empty() ? "" : "; ") + std::to_string(nested_cases.size() - nested.inconclusive) +
                   " nested pairs evaluated within the guard";
  return {flat, nested};
}

/// P(phi /\ psi) = P(phi) P(psi) whenever psi is independent of phi.
inline CheckRecord check_multiplicativity(std::size_t distributions, std::uint64_t seed) {
  Rng rng(seed);
  const AtomContext ctx = AtomContext::standard(2);
  std::vector<Distribution> dists;
  for (std::size_t i = 0; i < distributions; ++i) dists.push_back(random_distribution(rng, 2));
  CheckRecord rec{"multiplicativity"};
  std::size_t independent_pairs = 0;
  std::size_t pairs = 0;
  const auto pool = formula_pool(2);
  for (const auto& psi : pool)
    for (const auto& phi : pool) {
      ModelState m = ModelState::standard(ctx);
      ++pairs;
      if (!check_independence(m, psi, phi)) continue;
      ++independent_pairs;
      EvaluatedFormulas ev(std::move(m), {Formula::land(phi, psi), phi, psi});
      for (const auto& d : dists) {
        const auto v = ev.measure(d);
        ++rec.instances;
        if (v[0] != v[1] * v[2]) {
          ++rec.failures;
          if (rec.detail.empty()) rec.detail = "psi=" + render(psi) + " phi=" + render(phi);
        }
      }
    }
  if (rec.failures > 0) rec.status = CheckStatus::Fail;
  if (rec.detail.empty())
    rec.detail = std::to_string(independent_pairs) + " of " + std::to_string(pairs) + " pairs independent";
  return rec;
}

/// Formulas used by the epsilon checks: classical, conditional and nested.
inline std::vector<Formula> epsilon_probe_formulas() {
  const Formula p = Formula::atom("p");
  const Formula q = Formula::atom("q");
  return {Formula::cond(q, p),
          Formula::cond(p, q),
          Formula::cond(Formula::neg(q), Formula::lor(p, q)),
          Formula::land(Formula::cond(q, p), q),
          Formula::cond(Formula::cond(q, p), Formula::cond(p, q)),
          Formula::implies(p, q),
          Formula::cond(q, Formula::land(p, q))};
}

/// epsilon_prob equals prob on strictly positive inputs; on degenerate ones
/// the limits are probabilities obeying additivity, coherence and finiteness.
inline std::vector<CheckRecord> check_epsilon_suite(std::size_t positive, std::size_t degenerate, std::uint64_t seed) {
  Rng rng(seed);
  CheckRecord agree{"epsilon-agrees-with-prob"};
  CheckRecord axioms{"epsilon-degenerate-axioms"};
  const auto probes = epsilon_probe_formulas();
  for (std::size_t i = 0; i < positive; ++i) {
    const Distribution d = random_distribution(rng, 2);
    const Formula f = probes[i % probes.size()];
    ModelState m = model_for(d);
    const Rational exact = prob(m, f);
    const Rational limit = epsilon_prob(d, f);
    ++agree.instances;
    if (exact != limit) {
      ++agree.failures;
      if (agree.detail.empty()) agree.detail = render(f) + ": " + to_string(exact) + " vs " + to_string(limit);
    }
  }
  for (std::size_t i = 0; i < degenerate; ++i) {
    const Distribution d = random_distribution(rng, 2, 1 + i % 3);
    const Formula phi = probes[i % probes.size()];
    const Formula psi = probes[(i + 3) % probes.size()];
    ModelState m = epsilon_model_for(d);
    const Rational a = epsilon_value(m, phi);
    const Rational b = epsilon_value(m, psi);
    const Rational both = epsilon_value(m, Formula::land(phi, psi));
    const Rational either = epsilon_value(m, Formula::lor(phi, psi));
    const Rational t = epsilon_value(m, Formula::top());
    const Rational z = epsilon_value(m, Formula::bot());
    ++axioms.instances;
    const bool ok = a >= 0 && a <= 1 && b >= 0 && b <= 1 && both + either == a + b && t == 1 && z == 0;
    if (!ok) {
      ++axioms.failures;
      if (axioms.detail.empty()) axioms.detail = "phi=" + render(phi) + " psi=" + render(psi);
    }
  }
  if (agree.failures > 0) agree.status = CheckStatus::Fail;
  if (axioms.failures > 0) axioms.status = CheckStatus::Fail;
  return {agree, axioms};
}

/// Additivity, coherence and finiteness on random strictly positive inputs.
inline CheckRecord check_probability_axioms(std::size_t distributions, std::uint64_t seed) {
  Rng rng(seed);
  CheckRecord rec{"probability-axioms"};
  const auto probes = epsilon_probe_formulas();
  for (std::size_t i = 0; i < distributions; ++i) {
    const Distribution d = random_distribution(rng, 2);
    ModelState m = model_for(d);
    const Formula phi = probes[i % probes.size()];
    const Formula psi = probes[(i + 2) % probes.size()];
    const Rational a = prob(m, phi);
    const Rational b = prob(m, psi);
    const bool ok = prob(m, Formula::land(phi, psi)) + prob(m, Formula::lor(phi, psi)) == a + b &&
                    prob(m, Formula::top()) == 1 && prob(m, Formula::bot()) == 0;
    ++rec.instances;
    if (!ok) {
      ++rec.failures;
      if (rec.detail.empty()) rec.detail = "phi=" + render(phi) + " psi=" + render(psi);
    }
  }
  if (rec.failures > 0) rec.status = CheckStatus::Fail;
  return rec;
}

// ---------------------------------------------------------------------------
// Worked three-world example

inline const std::vector<std::string>& abc_labels() {
  static const std::vector<std::string> labels{"a", "b", "c"};
  return labels;
}

/// Stage 0 {a,b,c}, the task list {a,b},c,{b,c},a,{c,a},b and masses
/// 1/5, 3/10, 1/2, after one faithful step.
inline ModelState abc_example_model() {
  auto S = [](std::initializer_list<WorldIndex> m) { return StageSet::of(0, 3, m); };
  std::vector<StageSet> lambda0{S({0, 1}), S({2}), S({1, 2}), S({0}), S({0, 2}), S({1})};
  ModelState m = ModelState::generalized(abc_labels(), lambda0, {Schedule::Faithful, kDefaultMaxWorlds});
  m.attach_masses(std::vector<Rational>{Rational(1, 5), Rational(3, 10), Rational(1, 2)});
  m.faithful_step();
  return m;
}

/// Stage n set from nested world labels; throws on unknown labels.
inline StageSet set_by_labels(const ModelState& m, std::size_t n, const std::vector<std::string>& labels) {
  StageSet s(n, m.tables().size(n));
  for (const auto& l : labels) {
    bool found = false;
    for (WorldIndex w = 0; w < m.tables().size(n) && !found; ++w)
      if (m.tables().label(n, w) == l) {
        s.insert(w);
        found = true;
      }
    if (!found) throw Error("no world labelled " + l + " at stage " + std::to_string(n));
  }
  return s;
}

/// Compares every value of the worked example exactly.
inline ScenarioReport check_abc_example(const ModelState& m) {
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioReport report;
  report.id = "appendix-f";
  auto add = [&report](std::string name, bool ok, std::string detail = {}) {
    report.checks.push_back(CheckRecord{std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, 1, ok ? 0U : 1U, 0,
                                        std::move(detail)});
  };
  auto L = [&m](std::size_t n, std::vector<std::string> labels) { return set_by_labels(m, n, labels); };
  try {
    add("stage-1-reached", m.stage() == 1);
    const auto& rec = m.history().at(0);
    add("case-1", !rec.tag.reprocess && rec.entries.size() == 1);
    add("pi0", rec.pi(0, 3) == L(0, {"a", "b"}));
    add("gamma0", rec.gamma(0, 3) == L(0, {"c"}));
    std::vector<std::string> omega1;
    for (WorldIndex w = 0; w < m.world_count(); ++w) omega1.push_back(m.tables().label(1, w));
    add("omega1", omega1 == std::vector<std::string>{"(a,c)", "(b,c)", "(c,a)", "(c,b)"});
    const ForwardRecord fr = m.tables().forward_record(0);
    add("mu0(a)", forward(fr, L(0, {"a"})) == L(1, {"(a,c)"}));
    add("mu0(b)", forward(fr, L(0, {"b"})) == L(1, {"(b,c)"}));
    add("mu0(c)", forward(fr, L(0, {"c"})) == L(1, {"(c,a)", "(c,b)"}));
    const std::vector<std::pair<std::string, Rational>> p0{{"a", Rational(1, 5)}, {"b", Rational(3, 10)}, {"c", Rational(1, 2)}};
    for (const auto& [label, value] : p0) add("P0(" + label + ")", m.measure(L(0, {label})) == value);
    const std::vector<std::pair<std::string, Rational>> p1{{"(a,c)", Rational(1, 5)},
                                                           {"(b,c)", Rational(3, 10)},
                                                           {"(c,a)", Rational(1, 5)},
                                                           {"(c,b)", Rational(3, 10)}};
    for (const auto& [label, value] : p1) {
      const Rational got = m.measure(L(1, {label}));
      add("P1(" + label + ")", got == value, to_string(got));
    }
    const StageSet ab = m.forward_to_current(L(0, {"a", "b"}));
    const StageSet c = m.forward_to_current(L(0, {"c"}));
    auto f_entry = [&](std::string name, const StageSet& B, const StageSet& A, const StageSet& expected) {
      const StageSet got = m.lookup_f(B, A);
      add(std::move(name), got == expected, got.to_string());
    };
    f_entry("f1(a,{a,b})", m.forward_to_current(L(0, {"a"})), ab, L(1, {"(a,c)", "(c,a)"}));
    f_entry("f1(b,{a,b})", m.forward_to_current(L(0, {"b"})), ab, L(1, {"(b,c)", "(c,b)"}));
    f_entry("f1((c,a),c)", L(1, {"(c,a)"}), c, L(1, {"(a,c)", "(c,a)"}));
    f_entry("f1((c,b),c)", L(1, {"(c,b)"}), c, L(1, {"(b,c)", "(c,b)"}));
    f_entry("f1(c,c)", c, c, m.full());
    const auto head = m.task_list()->head(4, m.tables());
    add("lambda1-head", head.size() == 4 && head[0] == m.forward_to_current(L(0, {"b", "c"})) &&
                            head[1] == m.forward_to_current(L(0, {"a"})) &&
                            head[2] == m.forward_to_current(L(0, {"c", "a"})) &&
                            head[3] == m.forward_to_current(L(0, {"b"})));
    const auto all = m.task_list()->head(64, m.tables());
    add("lambda1-tail", all.size() == 14 && all[12] == ab && all[13] == c);
    add("lambda1-end", m.task_list()->start() == 2 && m.task_list()->end() == 16);
    bool identity = true;
    std::size_t checked = 0;
    for (const StageSet& A : {ab, c})
      for (std::uint32_t bits = 0; bits < 16; ++bits) {
        StageSet B(1, 4);
        for (WorldIndex w = 0; w < 4; ++w)
          if (((bits >> w) & 1U) != 0) B.insert(w);
        identity = identity && m.measure(m.lookup_f(B, A)) * m.measure(A) == m.measure(A & B);
        ++checked;
      }
    add("P1(f1(B,A))P1(A)=P1(A&B)", identity, std::to_string(checked) + " pairs");
  } catch (const Error& e) {
    add("exception", false, e.what());
  }
  report.world_high_water = m.world_count();
  report.seconds = detail::seconds_since(t0);
  return report;
}

// ---------------------------------------------------------------------------
// Conditional probability of a conditional

struct LewisInstance {
  Formula a;
  Formula b;
  Formula c;
  Rational nested;       // P(((b|a)|c))
  Rational ratio;        // P((b|a) /\ c) / P(c)
  Rational flattened;    // P((b|c /\ a)), the value the classical derivation predicts
  bool bayes = false;    // nested * P(c) == P((b|a) /\ c)
};

struct LewisReport {
  Distribution distribution;
  std::size_t tested = 0;
  std::size_t bayes_failures = 0;
  std::vector<LewisInstance> witnesses;
  bool passed() const { return !witnesses.empty() && bayes_failures == 0; }
};

/// Searches classical A, B, C over two atoms for a case where the probability
/// of (B|A) given C differs from P(B | C /\ A), checking the Bayes identity on
/// every triple examined.
inline LewisReport lewis_demo(std::optional<Distribution> given, std::size_t max_witnesses = 3) {
  Distribution d;
  if (given) {
    d = *given;
  } else {
    d.names = {"p", "q"};
    d.weights = {Rational(1, 10), Rational(1, 5), Rational(3, 10), Rational(2, 5)};
  }
  if (d.generalized) throw Error("lewis-demo needs an atoms: distribution");
  if (!d.strictly_positive()) throw DegenerateDistribution("lewis-demo needs a strictly positive distribution");
  const AtomContext ctx = d.context();
  std::vector<Formula> candidates;
  for (const auto& name : ctx.names()) {
    candidates.push_back(Formula::atom(name));
    candidates.push_back(Formula::neg(Formula::atom(name)));
  }
  if (ctx.size() >= 2) {
    const Formula x = Formula::atom(ctx.name(0));
    const Formula y = Formula::atom(ctx.name(1));
    candidates.push_back(Formula::land(x, y));
    candidates.push_back(Formula::lor(x, y));
    candidates.push_back(Formula::implies(x, y));
    candidates.push_back(Formula::iff(x, y));
  }
  LewisReport report;
  report.distribution = d;
  for (const auto& c : candidates)
    for (const auto& a : candidates)
      for (const auto& b : candidates) {
        if (report.witnesses.size() >= max_witnesses) return report;
        if (classical_probability(d, Formula::land(c, a)) == 0) continue;
        ModelState m = model_for(d);
        LewisInstance inst{a, b, c, 0, 0, 0};
        const Formula ba = Formula::cond(b, a);
        try {
          inst.nested = prob(m, Formula::cond(ba, c));
          const Rational pc = prob(m, c);
          const Rational joint = prob(m, Formula::land(ba, c));
          inst.ratio = joint / pc;
          inst.flattened = prob(m, Formula::cond(b, Formula::land(c, a)));
          inst.bayes = inst.nested * pc == joint;
        } catch (const WorldLimitExceeded&) {
          continue;
        }
        ++report.tested;
        if (!inst.bayes) ++report.bayes_failures;
        if (inst.nested != inst.flattened) report.witnesses.push_back(inst);
      }
  return report;
}

}  // namespace dmbl
