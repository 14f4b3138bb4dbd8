#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "dmbl/error.hpp"

namespace dmbl {

using WorldIndex = std::uint32_t;

/// A subset of the worlds of one construction stage (an element of M_n).
/// Complement is always taken inside the same stage.
class StageSet {
 public:
  StageSet() = default;

  StageSet(std::size_t stage, std::size_t universe)
      : stage_(stage), universe_(universe), words_((universe + 63) / 64, 0) {}

  static StageSet full(std::size_t stage, std::size_t universe) {
    StageSet s(stage, universe);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.trim();
    return s;
  }

  static StageSet of(std::size_t stage, std::size_t universe, std::initializer_list<WorldIndex> members) {
    StageSet s(stage, universe);
    for (auto w : members) s.insert(w);
    return s;
  }

  template <class Range>
  static StageSet from_range(std::size_t stage, std::size_t universe, const Range& members) {
    StageSet s(stage, universe);
    for (auto w : members) s.insert(static_cast<WorldIndex>(w));
    return s;
  }

  std::size_t stage() const noexcept { return stage_; }
  std::size_t universe() const noexcept { return universe_; }

  bool contains(WorldIndex w) const {
    return w < universe_ && ((words_[w >> 6] >> (w & 63)) & 1U) != 0;
  }

  void insert(WorldIndex w) {
    if (w >= universe_) throw Error("world index out of range for stage set");
    words_[w >> 6] |= std::uint64_t{1} << (w & 63);
  }

  void erase(WorldIndex w) {
    if (w < universe_) words_[w >> 6] &= ~(std::uint64_t{1} << (w & 63));
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool empty() const {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }

  bool is_full() const { return count() == universe_; }
  bool is_trivial() const { return empty() || is_full(); }

  std::vector<WorldIndex> members() const {
    std::vector<WorldIndex> out;
    for_each([&out](WorldIndex w) { out.push_back(w); });
    return out;
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t bits = words_[i];
      while (bits != 0) {
        const int b = std::countr_zero(bits);
        fn(static_cast<WorldIndex>(i * 64 + static_cast<std::size_t>(b)));
        bits &= bits - 1;
      }
    }
  }

  /// Lowest member, or universe() when empty.
  WorldIndex first() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] != 0) return static_cast<WorldIndex>(i * 64 + std::countr_zero(words_[i]));
    return static_cast<WorldIndex>(universe_);
  }

  /// Same-stage complement, written ~A.
  StageSet operator~() const {
    StageSet out = *this;
    for (auto& w : out.words_) w = ~w;
    out.trim();
    return out;
  }

  StageSet& operator&=(const StageSet& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  StageSet& operator|=(const StageSet& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  StageSet& operator-=(const StageSet& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend StageSet operator&(StageSet a, const StageSet& b) { return a &= b; }
  friend StageSet operator|(StageSet a, const StageSet& b) { return a |= b; }
  friend StageSet operator-(StageSet a, const StageSet& b) { return a -= b; }

  bool subset_of(const StageSet& o) const {
    check_compatible(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    return true;
  }

  bool intersects(const StageSet& o) const {
    check_compatible(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & o.words_[i]) != 0) return true;
    return false;
  }

  friend bool operator==(const StageSet& a, const StageSet& b) {
    return a.stage_ == b.stage_ && a.universe_ == b.universe_ && a.words_ == b.words_;
  }

  std::size_t hash() const {
    std::size_t h = std::hash<std::size_t>{}(stage_ * 1000003 + universe_);
    for (auto w : words_) h = h * 0x9e3779b97f4a7c15ULL + std::hash<std::uint64_t>{}(w);
    return h;
  }

  /// "{0,3,5}"
  std::string to_string() const {
    std::string out = "{";
    bool first_item = true;
    for_each([&](WorldIndex w) {
      if (!first_item) out += ',';
      out += std::to_string(w);
      first_item = false;
    });
    return out + "}";
  }

 private:
  void trim() {
    if (universe_ % 64 != 0 && !words_.empty())
      words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
  }

  void check_compatible(const StageSet& o) const {
    if (stage_ != o.stage_ || universe_ != o.universe_)
      throw Error("stage mismatch: sets from stage " + std::to_string(stage_) + " and " +
                  std::to_string(o.stage_));
  }

  std::size_t stage_ = 0;
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct StageSetHash {
  std::size_t operator()(const StageSet& s) const { return s.hash(); }
};

}  // namespace dmbl
