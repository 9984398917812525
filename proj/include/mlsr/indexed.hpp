#pragma once

// Dense, index-based view of a Model used by the evaluators.

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlsr/kripke.hpp"

namespace mlsr {

class WorldSet {
 public:
  static constexpr int kWords = 4;
  static constexpr int kCapacity = kWords * 64;

  void set(int i) { w_[i >> 6] |= bit(i); }
  void reset(int i) { w_[i >> 6] &= ~bit(i); }
  bool test(int i) const { return (w_[i >> 6] & bit(i)) != 0; }

  WorldSet with(int i) const {
    WorldSet r = *this;
    r.set(i);
    return r;
  }
  WorldSet without(int i) const {
    WorldSet r = *this;
    r.reset(i);
    return r;
  }

  int count() const {
    int c = 0;
    for (auto x : w_) c += std::popcount(x);
    return c;
  }
  bool empty() const {
    for (auto x : w_)
      if (x) return false;
    return true;
  }
  // Smallest member >= from, or -1.
  int next(int from) const {
    if (from >= kCapacity) return -1;
    int wi = from >> 6;
    std::uint64_t cur = w_[wi] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (cur) return (wi << 6) + std::countr_zero(cur);
      if (++wi == kWords) return -1;
      cur = w_[wi];
    }
  }
  int first() const { return next(0); }

  template <class F>
  void for_each(F&& f) const {
    for (int i = first(); i >= 0; i = next(i + 1)) f(i);
  }

  WorldSet operator&(const WorldSet& o) const {
    WorldSet r;
    for (int i = 0; i < kWords; ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
  }
  WorldSet operator|(const WorldSet& o) const {
    WorldSet r;
    for (int i = 0; i < kWords; ++i) r.w_[i] = w_[i] | o.w_[i];
    return r;
  }
  bool intersects(const WorldSet& o) const {
    for (int i = 0; i < kWords; ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  bool operator==(const WorldSet& o) const = default;

  std::size_t hash() const {
    std::size_t h = 0x84222325cbf29ce4ULL;
    for (auto x : w_) h = (h ^ x) * 0x100000001b3ULL + (h >> 29);
    return h;
  }
  std::uint64_t word(int i) const { return w_[i]; }

  static WorldSet range(int n) {
    WorldSet r;
    for (int i = 0; i < n; ++i) r.set(i);
    return r;
  }

 private:
  std::array<std::uint64_t, kWords> w_{};
  static std::uint64_t bit(int i) { return std::uint64_t{1} << (i & 63); }
};

struct WorldSetHash {
  std::size_t operator()(const WorldSet& s) const { return s.hash(); }
};

struct IndexedModel {
  std::vector<std::string> names;  // sorted world ids
  std::unordered_map<std::string, int> index;
  std::vector<std::string> labels;
  std::vector<std::vector<WorldSet>> succ;  // [label][world]
  std::map<std::string, WorldSet> props;
  std::map<std::string, int> nominals;  // -1: does not denote
  WorldSet all;

  int size() const { return static_cast<int>(names.size()); }
  int label_index(const std::string& l) const;
  int world(const std::string& id) const;  // throws InputError

  static IndexedModel from(const Model& m);
  Model to_model() const;
};

}  // namespace mlsr
