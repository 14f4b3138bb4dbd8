#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "dmbl/error.hpp"
#include "dmbl/stage_set.hpp"
#include "dmbl/world_table.hpp"

namespace dmbl {

/// Enumerates the complement pairs {S, ~S} of one stage in canonical order:
/// by the cardinality of the smaller member, then lexicographically on its
/// sorted indices. When both members have the same size the one holding
/// world 0 leads. Optionally skips sets that are forward images of the
/// previous stage.
class CanonicalPairs {
 public:
  CanonicalPairs() = default;

  /// parents: stage k-1 parent of every stage k world, or empty to list
  /// every nontrivial set.
  CanonicalPairs(std::size_t stage, std::size_t universe, std::vector<WorldIndex> parents = {})
      : stage_(stage), universe_(universe), parents_(std::move(parents)) {
    if (!parents_.empty()) {
      WorldIndex top = 0;
      for (auto p : parents_) top = std::max(top, p);
      children_.resize(static_cast<std::size_t>(top) + 1);
      for (WorldIndex w = 0; w < parents_.size(); ++w) children_[parents_[w]].push_back(w);
    }
  }

  std::size_t stage() const noexcept { return stage_; }

  /// Leading member of the next pair, or nullopt when exhausted.
  std::optional<StageSet> next() {
    while (advance()) {
      StageSet s = StageSet::from_range(stage_, universe_, comb_);
      if (parents_.empty() || !is_image(s)) return s;
    }
    return std::nullopt;
  }

  /// Number of pairs this enumerator yields in total.
  mpz_class total_pairs() const {
    mpz_class all;
    mpz_ui_pow_ui(all.get_mpz_t(), 2, universe_);
    mpz_class images;
    if (parents_.empty()) {
      images = 2;
    } else {
      mpz_ui_pow_ui(images.get_mpz_t(), 2, children_.size());
    }
    return (all - images) / 2;
  }

 private:
  bool is_image(const StageSet& s) const {
    for (WorldIndex w : comb_)
      for (WorldIndex sibling : children_[parents_[w]])
        if (!s.contains(sibling)) return false;
    return true;
  }

  // Moves comb_ to the next candidate leading set; false when done.
  bool advance() {
    const std::size_t n = universe_;
    if (done_ || n < 2) return false;
    if (comb_.empty()) {
      comb_ = {0};
      return true;
    }
    const std::size_t c = comb_.size();
    // next combination of the same size in lexicographic order
    std::size_t i = c;
    while (i > 0 && comb_[i - 1] == n - c + (i - 1)) --i;
    if (i > 0) {
      ++comb_[i - 1];
      for (std::size_t j = i; j < c; ++j) comb_[j] = comb_[j - 1] + 1;
      if (2 * c == n && comb_[0] != 0) return next_size();
      return true;
    }
    return next_size();
  }

  bool next_size() {
    const std::size_t c = comb_.size() + 1;
    if (2 * c > universe_) {
      done_ = true;
      return false;
    }
    comb_.resize(c);
    for (std::size_t j = 0; j < c; ++j) comb_[j] = static_cast<WorldIndex>(j);
    return true;
  }

  std::size_t stage_ = 0;
  std::size_t universe_ = 0;
  std::vector<WorldIndex> parents_;
  std::vector<std::vector<WorldIndex>> children_;
  std::vector<WorldIndex> comb_;
  bool done_ = false;
};

/// The cyclic list of sets awaiting processing. Slots are stored at the
/// stage where they first appeared and forwarded when read.
class TaskList {
 public:
  TaskList() = default;

  /// Every nontrivial stage 0 set in canonical pair order.
  static TaskList canonical(std::size_t stage0_size) {
    TaskList t;
    Segment seg;
    seg.generator = CanonicalPairs(0, stage0_size);
    seg.remaining = seg.generator.total_pairs();
    if (seg.remaining > 0) t.segments_.push_back(std::move(seg));
    return t;
  }

  /// An explicit stage 0 list; must enumerate every nontrivial set once,
  /// each followed by its complement.
  static TaskList explicit_list(std::size_t stage0_size, const std::vector<StageSet>& slots) {
    if (slots.size() % 2 != 0) throw Error("task list needs complement pairs");
    mpz_class expected;
    mpz_ui_pow_ui(expected.get_mpz_t(), 2, stage0_size);
    expected -= 2;
    if (expected != slots.size())
      throw Error("task list must list every nontrivial stage 0 set exactly once");
    std::vector<StageSet> seen;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const auto& s = slots[i];
      if (s.stage() != 0 || s.universe() != stage0_size || s.is_trivial())
        throw Error("task list slot " + std::to_string(i) + " is not a nontrivial stage 0 set");
      if (i % 2 == 1 && s != ~slots[i - 1])
        throw Error("task list slot " + std::to_string(i) + " is not the complement of its partner");
      for (const auto& prev : seen)
        if (prev == s) throw Error("task list repeats " + s.to_string());
      seen.push_back(s);
    }
    TaskList t;
    Segment seg;
    seg.fixed.assign(slots.begin(), slots.end());
    seg.remaining = slots.size() / 2;
    t.segments_.push_back(std::move(seg));
    return t;
  }

  const mpz_class& start() const noexcept { return start_; }

  /// One past the last slot index.
  mpz_class end() const {
    mpz_class pairs = 0;
    for (const auto& s : segments_) pairs += s.remaining;
    return start_ + 2 * pairs;
  }

  bool empty() const { return segments_.empty(); }

  /// Removes the pair at the cursor, returned at the current stage.
  std::pair<StageSet, StageSet> pop_pair(const WorldTables& tables) {
    if (segments_.empty()) throw Error("task list is empty");
    Segment& seg = segments_.front();
    StageSet lead;
    StageSet partner;
    if (!seg.fixed.empty()) {
      lead = seg.fixed.front();
      seg.fixed.pop_front();
      partner = seg.fixed.front();
      seg.fixed.pop_front();
    } else {
      auto s = seg.generator.next();
      if (!s) throw Error("task list generator exhausted early");
      lead = *s;
      partner = ~*s;
    }
    seg.remaining -= 1;
    if (seg.remaining == 0) segments_.pop_front();
    start_ += 2;
    return {tables.forward_to(lead, tables.current_stage()), tables.forward_to(partner, tables.current_stage())};
  }

  /// After a step at stage n: append the new non-image sets of stage n+1
  /// followed by the forwarded processed pair.
  void append_step(const WorldTables& tables, const StageSet& mu_base) {
    const std::size_t k = mu_base.stage();
    const auto& table = tables.stage(k);
    std::vector<WorldIndex> parents(table.size());
    for (WorldIndex w = 0; w < table.size(); ++w) parents[w] = table.parent(w);
    Segment fresh;
    fresh.generator = CanonicalPairs(k, table.size(), std::move(parents));
    fresh.remaining = fresh.generator.total_pairs();
    if (fresh.remaining > 0) segments_.push_back(std::move(fresh));
    Segment tail;
    tail.fixed = {mu_base, ~mu_base};
    tail.remaining = 1;
    segments_.push_back(std::move(tail));
  }

  /// The first `count` slots at the current stage, without consuming them.
  std::vector<StageSet> head(std::size_t count, const WorldTables& tables) const {
    std::vector<StageSet> out;
    const std::size_t n = tables.current_stage();
    for (const auto& seg : segments_) {
      if (out.size() >= count) break;
      if (!seg.fixed.empty()) {
        for (const auto& s : seg.fixed) {
          if (out.size() >= count) break;
          out.push_back(tables.forward_to(s, n));
        }
        continue;
      }
      CanonicalPairs gen = seg.generator;
      for (mpz_class i = 0; i < seg.remaining && out.size() < count; ++i) {
        auto s = gen.next();
        if (!s) break;
        out.push_back(tables.forward_to(*s, n));
        if (out.size() < count) out.push_back(tables.forward_to(~*s, n));
      }
    }
    return out;
  }

 private:
  struct Segment {
    std::deque<StageSet> fixed;  // explicit slots; empty means generated
    CanonicalPairs generator;
    mpz_class remaining = 0;     // pairs left in this segment
  };

  mpz_class start_ = 0;
  std::deque<Segment> segments_;
};

}  // namespace dmbl
