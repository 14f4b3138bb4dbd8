#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dmbl/error.hpp"
#include "dmbl/formula.hpp"
#include "dmbl/stage_set.hpp"

namespace dmbl {

/// A stage n+1 world is an ordered pair of stage n worlds.
struct WorldPair {
  WorldIndex left;
  WorldIndex right;
  friend bool operator==(const WorldPair&, const WorldPair&) = default;
};

inline constexpr WorldIndex kNoPartner = static_cast<WorldIndex>(-1);

/// The worlds of a single stage. Immutable once built.
class StageTable {
 public:
  /// Stage 0: one labelled world per entry.
  explicit StageTable(std::vector<std::string> labels)
      : stage_(0), size_(labels.size()), labels_(std::move(labels)), swap_(size_, kNoPartner) {}

  /// Stage n+1: worlds are pairs over stage n, with the index of (y,x) for
  /// every (x,y).
  StageTable(std::size_t stage, std::vector<WorldPair> pairs, std::vector<WorldIndex> swap)
      : stage_(stage), size_(pairs.size()), pairs_(std::move(pairs)), swap_(std::move(swap)) {
    if (stage_ == 0) throw Error("pair worlds cannot form stage 0");
    if (swap_.size() != size_) throw Error("swap table size mismatch");
  }

  std::size_t stage() const noexcept { return stage_; }
  std::size_t size() const noexcept { return size_; }

  const WorldPair& pair(WorldIndex w) const { return pairs_.at(w); }
  const std::vector<WorldPair>& pairs() const noexcept { return pairs_; }

  /// Stage 0 label; empty for later stages.
  const std::string& label(WorldIndex w) const { return labels_.at(w); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  WorldIndex swap_partner(WorldIndex w) const { return swap_.at(w); }

  /// The stage n world a stage n+1 world descends from: its left component.
  WorldIndex parent(WorldIndex w) const { return pairs_.at(w).left; }

 private:
  std::size_t stage_;
  std::size_t size_;
  std::vector<std::string> labels_;
  std::vector<WorldPair> pairs_;
  std::vector<WorldIndex> swap_;
};

/// The morphism from stage n sets to stage n+1 sets. The image of a world x
/// is the set of pairs whose left component is x.
struct ForwardRecord {
  std::size_t source_stage = 0;
  std::size_t source_size = 0;
  std::shared_ptr<const StageTable> target;

  std::vector<WorldIndex> image_of(WorldIndex x) const {
    std::vector<WorldIndex> out;
    for (WorldIndex w = 0; w < target->size(); ++w)
      if (target->parent(w) == x) out.push_back(w);
    return out;
  }
};

inline StageSet complement(const StageSet& s) { return ~s; }

/// T applied to every member.
inline StageSet swap_image(const StageTable& table, const StageSet& s) {
  if (s.stage() != table.stage() || s.universe() != table.size())
    throw Error("swap_image: set does not belong to this stage");
  StageSet out(s.stage(), s.universe());
  s.for_each([&](WorldIndex w) {
    const WorldIndex partner = table.swap_partner(w);
    if (partner == kNoPartner)
      throw Error("swap_image: world " + std::to_string(w) + " has no swap partner");
    out.insert(partner);
  });
  return out;
}

inline StageSet forward(const ForwardRecord& rec, const StageSet& s) {
  if (s.stage() != rec.source_stage || s.universe() != rec.source_size)
    throw Error("forward: set from stage " + std::to_string(s.stage()) + ", record maps stage " +
                std::to_string(rec.source_stage));
  StageSet out(rec.source_stage + 1, rec.target->size());
  for (WorldIndex w = 0; w < rec.target->size(); ++w)
    if (s.contains(rec.target->parent(w))) out.insert(w);
  return out;
}

/// Index of the stage 0 world whose valuation is the given truth assignment.
/// Stage 0 is enumerated in truth-table order: world 0 makes every atom true,
/// the last world makes every atom false.
inline WorldIndex minterm_index(const std::vector<bool>& valuation) {
  const std::size_t k = valuation.size();
  std::size_t code = 0;
  for (std::size_t j = 0; j < k; ++j)
    if (valuation[j]) code |= std::size_t{1} << (k - 1 - j);
  return static_cast<WorldIndex>(((std::size_t{1} << k) - 1) - code);
}

inline bool minterm_value(std::size_t atom_count, WorldIndex world, std::size_t atom) {
  const std::size_t code = ((std::size_t{1} << atom_count) - 1) - world;
  return ((code >> (atom_count - 1 - atom)) & 1U) != 0;
}

/// Bitstring label of a standard stage 0 world; character j is atom j.
inline std::string minterm_label(std::size_t atom_count, WorldIndex world) {
  std::string out;
  for (std::size_t j = 0; j < atom_count; ++j) out += minterm_value(atom_count, world, j) ? '1' : '0';
  return out;
}

/// h_0(atom): the stage 0 worlds where the atom holds.
inline StageSet minterm_set(const AtomContext& ctx, std::string_view atom) {
  const auto idx = ctx.index_of(atom);
  if (!idx) throw Error("unknown atom '" + std::string(atom) + "'");
  if (ctx.size() > 20) throw Error("too many atoms for an explicit stage 0");
  const std::size_t n = std::size_t{1} << ctx.size();
  StageSet out(0, n);
  for (WorldIndex w = 0; w < n; ++w)
    if (minterm_value(ctx.size(), w, *idx)) out.insert(w);
  return out;
}

/// All stages built so far plus ancestor maps between them.
class WorldTables {
 public:
  WorldTables() = default;

  explicit WorldTables(std::vector<std::string> stage0_labels) {
    stages_.push_back(std::make_shared<const StageTable>(std::move(stage0_labels)));
    ancestors_.emplace_back();
  }

  std::size_t stage_count() const noexcept { return stages_.size(); }
  std::size_t current_stage() const noexcept { return stages_.size() - 1; }
  const StageTable& stage(std::size_t n) const { return *stages_.at(n); }
  const StageTable& current() const { return *stages_.back(); }
  std::size_t size(std::size_t n) const { return stages_.at(n)->size(); }

  void push(std::shared_ptr<const StageTable> next) {
    if (next->stage() != stages_.size()) throw Error("stage pushed out of order");
    const std::size_t n = next->stage();
    std::vector<std::vector<WorldIndex>> anc(n);
    anc[n - 1].resize(next->size());
    for (WorldIndex w = 0; w < next->size(); ++w) anc[n - 1][w] = next->parent(w);
    for (std::size_t m = 0; m + 1 < n; ++m) {
      anc[m].resize(next->size());
      const auto& via = ancestors_[n - 1][m];
      for (WorldIndex w = 0; w < next->size(); ++w) anc[m][w] = via[anc[n - 1][w]];
    }
    stages_.push_back(std::move(next));
    ancestors_.push_back(std::move(anc));
  }

  ForwardRecord forward_record(std::size_t n) const {
    if (n + 1 >= stages_.size()) throw Error("no forward record for stage " + std::to_string(n));
    return ForwardRecord{n, stages_[n]->size(), stages_[n + 1]};
  }

  /// The stage m ancestor of world w of stage n (m <= n).
  WorldIndex ancestor(std::size_t n, WorldIndex w, std::size_t m) const {
    if (m == n) return w;
    return ancestors_.at(n).at(m).at(w);
  }

  StageSet empty_set(std::size_t n) const { return StageSet(n, size(n)); }
  StageSet full_set(std::size_t n) const { return StageSet::full(n, size(n)); }

  /// A_[n]: the composed forward morphisms applied to s.
  StageSet forward_to(const StageSet& s, std::size_t n) const {
    check(s);
    if (s.stage() == n) return s;
    if (s.stage() > n) throw Error("cannot forward a set to an earlier stage");
    const auto& anc = ancestors_.at(n).at(s.stage());
    StageSet out(n, size(n));
    for (WorldIndex w = 0; w < anc.size(); ++w)
      if (s.contains(anc[w])) out.insert(w);
    return out;
  }

  /// The stage m set whose forward image is s, if s is such an image.
  std::optional<StageSet> pullback(const StageSet& s, std::size_t m) const {
    check(s);
    if (m == s.stage()) return s;
    if (m > s.stage()) throw Error("pullback target stage is later than the set");
    const auto& anc = ancestors_.at(s.stage()).at(m);
    StageSet in(m, size(m));
    StageSet out_of(m, size(m));
    for (WorldIndex w = 0; w < anc.size(); ++w) {
      if (s.contains(w))
        in.insert(anc[w]);
      else
        out_of.insert(anc[w]);
    }
    if (in.intersects(out_of)) return std::nullopt;
    return in;
  }

  StageSet swap(const StageSet& s) const {
    check(s);
    return swap_image(stage(s.stage()), s);
  }

  /// Nested pair expression over the stage 0 labels, e.g. "((a,c),(c,a))".
  std::string label(std::size_t n, WorldIndex w) const {
    if (n == 0) return stage(0).label(w);
    const auto& p = stage(n).pair(w);
    return "(" + label(n - 1, p.left) + "," + label(n - 1, p.right) + ")";
  }

  void check(const StageSet& s) const {
    if (s.stage() >= stages_.size() || s.universe() != stages_[s.stage()]->size())
      throw Error("set does not belong to stage " + std::to_string(s.stage()));
  }

 private:
  std::vector<std::shared_ptr<const StageTable>> stages_;
  // ancestors_[n][m][w]: stage m ancestor of stage n world w, for m < n
  std::vector<std::vector<std::vector<WorldIndex>>> ancestors_;
};

}  // namespace dmbl
