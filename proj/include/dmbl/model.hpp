#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "dmbl/error.hpp"
#include "dmbl/formula.hpp"
#include "dmbl/rational.hpp"
#include "dmbl/rational_fn.hpp"
#include "dmbl/stage_set.hpp"
#include "dmbl/task_list.hpp"
#include "dmbl/world_table.hpp"

namespace dmbl {

/// faithful: process the cyclic task list in order.
/// query: process exactly the bases a query needs.
enum class Schedule { Query, Faithful };

inline const char* to_string(Schedule s) { return s == Schedule::Query ? "query" : "faithful"; }

inline Schedule parse_schedule(std::string_view text) {
  if (text == "query") return Schedule::Query;
  if (text == "faithful") return Schedule::Faithful;
  throw Error("unknown schedule '" + std::string(text) + "'");
}

inline constexpr std::size_t kDefaultMaxWorlds = 100000;

struct CaseTag {
  bool reprocess = false;  // Case 0
  std::size_t nu = 0;      // prior step whose pair is re-encountered
  friend bool operator==(const CaseTag&, const CaseTag&) = default;
};

/// One element i of the index set. For a first processing there is a single
/// entry with no pairing worlds; for a reprocessing, (omega, omega_prime) is
/// the pair of stage nu+1 worlds it stands for.
struct IndexEntry {
  WorldIndex omega = 0;
  WorldIndex omega_prime = 0;
  std::vector<WorldIndex> pi;     // stage n, sorted
  std::vector<WorldIndex> gamma;  // stage n, sorted
};

struct ProcessingRecord {
  std::size_t step = 0;  // n; the new stage is n+1
  StageSet base;         // b_n at stage n
  CaseTag tag;
  std::size_t index_set_size = 0;  // |I_n| including pairs with empty blocks
  std::vector<IndexEntry> entries;  // only entries with a nonempty block
  StageSet pi_block;     // union of Pi x Gamma at stage n+1, equal to mu_n(b_n)
  StageSet gamma_block;  // union of Gamma x Pi at stage n+1

  std::size_t stage() const { return step; }
  StageSet pi(std::size_t i, std::size_t universe) const {
    return StageSet::from_range(step, universe, entries.at(i).pi);
  }
  StageSet gamma(std::size_t i, std::size_t universe) const {
    return StageSet::from_range(step, universe, entries.at(i).gamma);
  }
};

/// Per-stage world masses. M is Rational or RationalFn.
template <class M>
struct MassTable {
  std::vector<std::vector<M>> stages;
};

using Measure = std::variant<std::monostate, MassTable<Rational>, MassTable<RationalFn>>;

struct ModelOptions {
  Schedule schedule = Schedule::Query;
  std::size_t max_worlds = kDefaultMaxWorlds;
};

/// A finite prefix of the free conditional model.
class ModelState {
 public:
  using Options = ModelOptions;

  /// Stage 0 is {0,1}^atoms in truth-table order.
  static ModelState standard(const AtomContext& ctx, Options opt = {}) {
    if (ctx.empty()) throw Error("atom context is empty");
    if (ctx.size() > 20) throw Error("too many atoms");
    const std::size_t n = std::size_t{1} << ctx.size();
    if (n > opt.max_worlds) throw WorldLimitExceeded(n, opt.max_worlds);
    std::vector<std::string> labels;
    for (WorldIndex w = 0; w < n; ++w) labels.push_back(minterm_label(ctx.size(), w));
    ModelState m(ctx, std::move(labels), false, opt);
    for (const auto& name : ctx.names()) m.h0_.push_back(minterm_set(ctx, name));
    if (opt.schedule == Schedule::Faithful) m.tasks_ = TaskList::canonical(n);
    m.refresh_lookup();
    return m;
  }

  /// Arbitrary labelled stage 0. Every label doubles as an atom true at that
  /// world only. lambda0, if given, is the explicit initial task list.
  static ModelState generalized(const std::vector<std::string>& labels,
                                std::optional<std::vector<StageSet>> lambda0 = std::nullopt,
                                Options opt = {}) {
    if (labels.size() < 2) throw Error("generalized mode needs at least two worlds");
    if (labels.size() > 24) throw Error("too many stage 0 worlds");
    if (labels.size() > opt.max_worlds) throw WorldLimitExceeded(labels.size(), opt.max_worlds);
    AtomContext ctx(labels);
    ModelState m(ctx, labels, true, opt);
    for (WorldIndex w = 0; w < labels.size(); ++w) m.h0_.push_back(StageSet::of(0, labels.size(), {w}));
    if (opt.schedule == Schedule::Faithful)
      m.tasks_ = lambda0 ? TaskList::explicit_list(labels.size(), *lambda0) : TaskList::canonical(labels.size());
    m.lambda0_ = std::move(lambda0);
    m.refresh_lookup();
    return m;
  }

  const AtomContext& atoms() const noexcept { return ctx_; }
  bool is_generalized() const noexcept { return generalized_; }
  Schedule schedule() const noexcept { return opt_.schedule; }
  std::size_t max_worlds() const noexcept { return opt_.max_worlds; }
  void set_max_worlds(std::size_t k) { opt_.max_worlds = k; }
  const std::optional<std::vector<StageSet>>& explicit_lambda0() const noexcept { return lambda0_; }

  const WorldTables& tables() const noexcept { return tables_; }
  std::size_t stage() const noexcept { return tables_.current_stage(); }
  std::size_t world_count() const { return tables_.size(stage()); }
  StageSet full() const { return tables_.full_set(stage()); }
  StageSet empty() const { return tables_.empty_set(stage()); }
  StageSet forward_to_current(const StageSet& s) const { return tables_.forward_to(s, stage()); }

  /// h(atom) at the current stage.
  StageSet atom_set(std::string_view name) const {
    const auto idx = ctx_.index_of(name);
    if (!idx) throw Error("unknown atom '" + std::string(name) + "'");
    return forward_to_current(h0_[*idx]);
  }

  const std::vector<ProcessingRecord>& history() const noexcept { return history_; }
  const std::optional<TaskList>& task_list() const noexcept { return tasks_; }

  /// Forwarded image of step k's base at stage k+1.
  const StageSet& processed_base_image(std::size_t k) const { return history_.at(k).pi_block; }

  /// The step whose conditioning currently answers f(., a), with whether a
  /// is that step's forwarded base (true) or its complement (false).
  std::optional<std::pair<std::size_t, bool>> conditioning_step(const StageSet& a) const {
    const auto it = lookup_.find(forward_to_current(a));
    if (it == lookup_.end()) return std::nullopt;
    return std::make_pair(it->second.step, it->second.positive);
  }

  CaseTag classify_case(const StageSet& base) const {
    check_current(base, "classify_case");
    if (base.is_trivial()) throw Error("classify_case: base is trivial");
    const auto it = lookup_.find(base);
    if (it == lookup_.end()) return {};
    return {true, it->second.step};
  }

  /// Runs one construction step on a nontrivial current-stage set. Throws
  /// WorldLimitExceeded, leaving the model untouched, if the step is too big.
  const ProcessingRecord& process_base(const StageSet& requested) {
    check_current(requested, "process_base");
    if (requested.is_trivial()) throw Error("process_base: base is trivial");
    const std::size_t n = stage();
    const std::size_t size_n = world_count();
    ProcessingRecord rec;
    rec.step = n;
    rec.tag = classify_case(requested);
    rec.base = requested;
    if (rec.tag.reprocess) {
      // keep the orientation of the earlier step
      const auto& hit = lookup_.at(requested);
      if (!hit.positive) rec.base = ~requested;
      build_reprocess_entries(rec);
    } else {
      rec.index_set_size = 1;
      rec.entries.push_back({0, 0, rec.base.members(), (~rec.base).members()});
    }

    std::size_t total = 0;
    for (const auto& e : rec.entries) total += 2 * e.pi.size() * e.gamma.size();
    if (total > opt_.max_worlds) throw WorldLimitExceeded(total, opt_.max_worlds);

    // Pi x Gamma blocks first, then Gamma x Pi blocks; left factor outer.
    std::vector<WorldPair> pairs;
    pairs.reserve(total);
    std::vector<WorldIndex> swap(total, kNoPartner);
    const std::size_t half = total / 2;
    std::size_t offset = 0;
    for (const auto& e : rec.entries)
      for (auto x : e.pi)
        for (auto y : e.gamma) pairs.push_back({x, y});
    for (const auto& e : rec.entries) {
      const std::size_t P = e.pi.size();
      const std::size_t G = e.gamma.size();
      for (std::size_t l = 0; l < G; ++l)
        for (std::size_t j = 0; j < P; ++j) {
          const std::size_t direct = offset + j * G + l;
          const std::size_t swapped = half + offset + l * P + j;
          pairs.push_back({e.gamma[l], e.pi[j]});
          swap[direct] = static_cast<WorldIndex>(swapped);
          swap[swapped] = static_cast<WorldIndex>(direct);
        }
      offset += P * G;
    }

    // Compute the new masses before mutating anything.
    Measure next_measure = measure_;
    std::visit([&](auto& table) { extend_masses(table, rec, pairs, size_n); }, next_measure);

    auto next = std::make_shared<const StageTable>(n + 1, std::move(pairs), std::move(swap));
    tables_.push(next);
    measure_ = std::move(next_measure);
    rec.pi_block = StageSet(n + 1, total);
    for (std::size_t w = 0; w < half; ++w) rec.pi_block.insert(static_cast<WorldIndex>(w));
    rec.gamma_block = ~rec.pi_block;
    history_.push_back(std::move(rec));
    refresh_lookup();
    if (tasks_) tasks_->append_step(tables_, history_.back().pi_block);
    return history_.back();
  }

  /// Processes the pair at the head of the task list.
  const ProcessingRecord& faithful_step() {
    if (!tasks_) throw Error("faithful_step: this model keeps no task list");
    if (tasks_->empty()) throw Error("faithful_step: task list is empty");
    TaskList saved = *tasks_;
    auto [lead, partner] = tasks_->pop_pair(tables_);
    try {
      return process_base(lead);
    } catch (...) {
      tasks_ = std::move(saved);
      throw;
    }
  }

  /// Makes sure f(., base) is defined for every current-stage set. Returns
  /// whether a step was run.
  bool ensure_conditioned(const StageSet& base) {
    check_current(base, "ensure_conditioned");
    if (base.is_trivial()) return false;
    const auto it = lookup_.find(base);
    if (it != lookup_.end() && !stale_since(it->second.step)) return false;
    if (opt_.schedule == Schedule::Faithful) {
      while (true) {
        const auto hit = lookup_.find(base);
        if (hit != lookup_.end() && !stale_since(hit->second.step)) return true;
        faithful_step();
      }
    }
    process_base(base);
    return true;
  }

  /// f(B, A) at the current stage, or nullopt if undefined. Sets from earlier
  /// stages are forwarded first.
  std::optional<StageSet> try_lookup_f(const StageSet& b, const StageSet& a) const {
    const StageSet B = forward_to_current(b);
    const StageSet A = forward_to_current(a);
    if (A.is_trivial()) return B;
    const auto it = lookup_.find(A);
    if (it == lookup_.end()) return std::nullopt;
    const std::size_t k = it->second.step;
    auto pulled = tables_.pullback(B, k + 1);
    if (!pulled) return std::nullopt;
    return forward_to_current(conditional_at_step(k, *pulled, it->second.positive));
  }

  StageSet lookup_f(const StageSet& b, const StageSet& a) const {
    auto r = try_lookup_f(b, a);
    if (!r)
      throw UndefinedConditional("f(" + b.to_string() + ", " + a.to_string() + ") is not defined at stage " +
                                 std::to_string(stage()));
    return *r;
  }

  /// f_{k+1}(C, mu_k(b_k)) when positive, else f_{k+1}(C, ~mu_k(b_k)), for C
  /// at stage k+1: (id u T)(C n block).
  StageSet conditional_at_step(std::size_t k, const StageSet& c, bool positive) const {
    const auto& rec = history_.at(k);
    const StageSet& block = positive ? rec.pi_block : rec.gamma_block;
    const StageSet inside = c & block;
    return inside | tables_.swap(inside);
  }

  // ---- measures ----

  bool has_measure() const noexcept { return !std::holds_alternative<std::monostate>(measure_); }
  bool has_rational_measure() const noexcept { return std::holds_alternative<MassTable<Rational>>(measure_); }
  bool has_function_measure() const noexcept { return std::holds_alternative<MassTable<RationalFn>>(measure_); }
  void detach_measure() { measure_ = std::monostate{}; }

  /// Attaches stage 0 masses and replays every step already taken.
  template <class M>
  void attach_masses(std::vector<M> stage0) {
    if (stage0.size() != tables_.size(0)) throw Error("mass vector does not match stage 0");
    MassTable<M> table;
    table.stages.push_back(std::move(stage0));
    for (const auto& rec : history_) extend_masses(table, rec, tables_.stage(rec.step + 1).pairs(), tables_.size(rec.step));
    measure_ = std::move(table);
  }

  const std::vector<Rational>& masses(std::size_t n) const {
    return std::get<MassTable<Rational>>(measure_).stages.at(n);
  }
  const std::vector<RationalFn>& function_masses(std::size_t n) const {
    return std::get<MassTable<RationalFn>>(measure_).stages.at(n);
  }

  Rational measure(const StageSet& s) const {
    if (!has_rational_measure()) throw Error("no rational measure attached");
    tables_.check(s);
    const auto& m = masses(s.stage());
    Rational total = 0;
    s.for_each([&](WorldIndex w) { total += m[w]; });
    return total;
  }

  RationalFn measure_fn(const StageSet& s) const {
    if (!has_function_measure()) throw Error("no rational-function measure attached");
    tables_.check(s);
    const auto& m = function_masses(s.stage());
    RationalFn total;
    s.for_each([&](WorldIndex w) { total += m[w]; });
    return total;
  }

 private:
  struct LookupHit {
    std::size_t step;
    bool positive;  // matched mu(b_k) rather than its complement
  };

  ModelState(AtomContext ctx, std::vector<std::string> labels, bool generalized, Options opt)
      : ctx_(std::move(ctx)), generalized_(generalized), opt_(opt), tables_(std::move(labels)) {}

  void check_current(const StageSet& s, const char* what) const {
    if (s.stage() != stage() || s.universe() != world_count())
      throw Error(std::string(what) + ": set is not at the current stage");
  }

  // A step's coverage goes stale once a later stage adds sets that are not
  // images of the stage it produced.
  bool stale_since(std::size_t k) const {
    for (std::size_t m = k + 2; m <= stage(); ++m)
      if (tables_.size(m) != tables_.size(m - 1)) return true;
    return false;
  }

  void refresh_lookup() {
    lookup_.clear();
    for (const auto& rec : history_) {
      StageSet mu = forward_to_current(rec.pi_block);
      StageSet co = ~mu;
      lookup_.insert_or_assign(std::move(mu), LookupHit{rec.step, true});
      lookup_.insert_or_assign(std::move(co), LookupHit{rec.step, false});
    }
  }

  // Reprocessing of a base whose pair was handled at step nu: the index set
  // is mu_nu(b_nu) x ~mu_nu(b_nu) at stage nu+1, with
  //   Pi(w, w')    = f(w'[n], ~b) n w[n]
  //   Gamma(w, w') = f(w[n], b) n w'[n].
  // Both conditionals are evaluated at stage nu+1 on singletons and forwarded,
  // so only pairs meeting a nonempty block are visited.
  void build_reprocess_entries(ProcessingRecord& rec) const {
    const std::size_t nu = rec.tag.nu;
    const std::size_t s = nu + 1;
    const std::size_t n = rec.step;
    const StageSet& mu_b = history_.at(nu).pi_block;
    const StageSet mu_co = ~mu_b;
    rec.index_set_size = mu_b.count() * mu_co.count();

    std::vector<std::vector<WorldIndex>> fiber(tables_.size(s));
    for (WorldIndex w = 0; w < world_count(); ++w) fiber[tables_.ancestor(n, w, s)].push_back(w);

    // (omega, omega') -> (pi nonempty, gamma nonempty)
    std::map<std::pair<WorldIndex, WorldIndex>, std::pair<bool, bool>> hits;
    mu_co.for_each([&](WorldIndex wp) {
      const StageSet f = conditional_at_step(nu, StageSet::of(s, tables_.size(s), {wp}), false);
      (f & mu_b).for_each([&](WorldIndex w) { hits[{w, wp}].first = true; });
    });
    mu_b.for_each([&](WorldIndex w) {
      const StageSet f = conditional_at_step(nu, StageSet::of(s, tables_.size(s), {w}), true);
      (f & mu_co).for_each([&](WorldIndex wp) { hits[{w, wp}].second = true; });
    });
    for (const auto& [key, flags] : hits) {
      IndexEntry e;
      e.omega = key.first;
      e.omega_prime = key.second;
      if (flags.first) e.pi = fiber[key.first];
      if (flags.second) e.gamma = fiber[key.second];
      rec.entries.push_back(std::move(e));
    }
  }

  static void extend_masses(std::monostate&, const ProcessingRecord&, const std::vector<WorldPair>&, std::size_t) {}

  // (x,y) in Pi x Gamma gets m(x)m(y)/m(Gamma); (y,x) gets m(x)m(y)/m(Pi).
  template <class M>
  static void extend_masses(MassTable<M>& table, const ProcessingRecord& rec, const std::vector<WorldPair>& pairs,
                            std::size_t size_n) {
    const auto& prev = table.stages.at(rec.step);
    if (prev.size() != size_n) throw Error("mass table out of step with the model");
    std::vector<M> pi_mass(size_n);
    std::vector<M> gamma_mass(size_n);
    for (const auto& e : rec.entries) {
      if (e.pi.empty() || e.gamma.empty()) continue;
      M p = prev[e.pi.front()];
      for (std::size_t j = 1; j < e.pi.size(); ++j) p = p + prev[e.pi[j]];
      M g = prev[e.gamma.front()];
      for (std::size_t j = 1; j < e.gamma.size(); ++j) g = g + prev[e.gamma[j]];
      if (is_zero(p) || is_zero(g))
        throw DegenerateDistribution("a construction step divides by a zero mass; use the epsilon extension");
      for (auto x : e.pi) pi_mass[x] = p;
      for (auto y : e.gamma) gamma_mass[y] = g;
    }
    const std::size_t half = pairs.size() / 2;
    std::vector<M> next(pairs.size());
    for (std::size_t w = 0; w < pairs.size(); ++w) {
      const auto& pr = pairs[w];
      const M& divisor = w < half ? gamma_mass[pr.right] : pi_mass[pr.right];
      next[w] = prev[pr.left] * prev[pr.right] / divisor;
    }
    table.stages.push_back(std::move(next));
  }

  static bool is_zero(const Rational& r) { return r == 0; }
  static bool is_zero(const RationalFn& r) { return r.is_zero(); }

  AtomContext ctx_;
  bool generalized_ = false;
  Options opt_;
  WorldTables tables_;
  std::vector<StageSet> h0_;
  std::optional<std::vector<StageSet>> lambda0_;
  std::vector<ProcessingRecord> history_;
  std::unordered_map<StageSet, LookupHit, StageSetHash> lookup_;
  std::optional<TaskList> tasks_;
  Measure measure_;
};

}  // namespace dmbl
