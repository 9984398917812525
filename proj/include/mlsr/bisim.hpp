#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlsr/formula.hpp"
#include "mlsr/indexed.hpp"
#include "mlsr/kripke.hpp"

namespace mlsr {

struct BisimOptions {
  // Upper bound on the number of worlds of either model.
  unsigned max_worlds = 8;
};

// Greatest fixpoint over tuples (D, s, E, t) with |D| = |E|, s outside D and
// t outside E. Atomic harmony covers proposition letters only.
bool sr_bisimilar(const PointedModel& pm, const PointedModel& pn, const BisimOptions& opts = {});

// A core formula true at pm and false at pn, or nullopt when the two are
// SR-bisimilar. Built from the step that removed each tuple.
std::optional<Formula> distinguishing_formula(const PointedModel& pm, const PointedModel& pn,
                                              const BisimOptions& opts = {});

// Partition refinement over every configuration (model, deleted set, point)
// of a collection of models at once. Two root configurations share a class
// iff the pointed models are SR-bisimilar.
class BisimPartition {
 public:
  explicit BisimPartition(const std::vector<Model>& models, unsigned max_worlds = 6);

  int class_of(std::size_t model, const std::string& point) const;
  int class_of(std::size_t model, int point_index) const;
  std::size_t num_classes() const { return num_classes_; }
  std::size_t rounds() const { return colors_.size(); }

  // Core formula true at the first pointed model and false at the second;
  // requires different classes.
  Formula distinguish(std::size_t ma, int pa, std::size_t mb, int pb);

 private:
  struct Cfg {
    std::uint32_t model;
    std::uint32_t deleted;
    std::uint8_t point;
  };
  std::vector<IndexedModel> models_;
  std::vector<std::size_t> base_;
  std::vector<std::string> labels_;
  std::vector<std::string> props_;
  std::vector<std::vector<int>> colors_;  // per round, per slot; -1 unused slot
  std::size_t num_classes_ = 0;
  std::unordered_map<std::uint64_t, Formula> memo_;

  std::size_t slot(std::size_t model, std::uint32_t deleted, int point) const;
  Formula dist(std::size_t a, std::size_t b);
  const WorldSet& succ(std::size_t model, std::size_t label, int w) const;
};

}  // namespace mlsr
