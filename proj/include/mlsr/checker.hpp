#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlsr/formula.hpp"
#include "mlsr/indexed.hpp"
#include "mlsr/kripke.hpp"

namespace mlsr {

struct CheckOptions {
  // Cache results by (surviving worlds, point, subformula).
  bool memo = false;
  bool trace = false;
};

struct TraceNode {
  std::string formula;
  std::string fingerprint;  // hash of the surviving world set
  std::string point;
  bool value = false;
  std::vector<TraceNode> children;
};

struct CheckResult {
  bool value = false;
  std::optional<TraceNode> trace;
};

std::string trace_to_json(const TraceNode& t, int indent = 2);

// Compiled evaluator for one formula. It can be re-bound to different models
// over the same vocabulary, which the exhaustive sweeps rely on.
class Evaluator {
 public:
  explicit Evaluator(const Formula& f, CheckOptions opts = {});
  Evaluator(const IndexedModel& m, const Formula& f, CheckOptions opts = {});

  void bind(const IndexedModel& m);
  // Truth of the formula at `point` in the submodel given by `alive`.
  bool at(int point, const WorldSet& alive);
  bool at(int point) { return at(point, model_->all); }
  // Truth of an arbitrary subformula index; 0 is the root.
  bool eval(int node, int point, const WorldSet& alive);
  // Worlds of `alive` where the root holds.
  WorldSet extension(const WorldSet& alive);

  std::optional<TraceNode> take_trace();
  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct CNode {
    Op op;
    int a = -1;
    int b = -1;
    int slot = -1;  // label, prop or nominal slot
    std::size_t cost = 1;
    Formula src;
  };
  struct Key {
    int node;
    int point;
    WorldSet alive;
    bool operator==(const Key& o) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return k.alive.hash() ^ (static_cast<std::size_t>(k.node) * 0x9e3779b97f4a7c15ULL) ^
             (static_cast<std::size_t>(k.point) << 20);
    }
  };

  std::vector<CNode> nodes_;
  std::vector<std::string> label_names_, prop_names_, nominal_names_;
  std::vector<const std::vector<WorldSet>*> label_succ_;
  std::vector<WorldSet> prop_sets_;
  std::vector<int> nominal_worlds_;
  const IndexedModel* model_ = nullptr;
  CheckOptions opts_;
  std::unordered_map<Key, bool, KeyHash> memo_;
  std::unordered_map<Key, WorldSet, KeyHash> ext_memo_;
  std::vector<TraceNode*> trace_stack_;
  std::optional<TraceNode> trace_root_;

  int compile(const Formula& f, std::unordered_map<Formula, int, FormulaHash>& seen);
  bool raw(int node, int s, const WorldSet& alive);
  bool some(int node, const WorldSet& cands, const WorldSet& alive);
  bool every(int node, const WorldSet& cands, const WorldSet& alive);
  WorldSet ext(int node, const WorldSet& alive);
  const WorldSet& succ(int slot, int s) const;
};

// Errors: empty model, unknown point.
bool check(const Model& m, const std::string& point, const Formula& f);
CheckResult check_ex(const Model& m, const std::string& point, const Formula& f, const CheckOptions& opts);
bool check(const PointedModel& pm, const Formula& f);

// True iff f holds at every world. Errors on the empty model.
bool valid_on(const Model& m, const Formula& f);

// Bounded search for a pointed model falsifying f. Proposition letters and
// nominals default to those occurring in f; every nominal is tried both as
// non-denoting and at each world. Relations with a single label are
// enumerated up to isomorphism. Absence of a result does not certify validity.
std::optional<PointedModel> find_countermodel(const Formula& f, unsigned max_worlds,
                                              const std::vector<std::string>& labels = {"r"},
                                              std::optional<std::vector<std::string>> props = std::nullopt);

// One representative relation (as an n*n adjacency bit mask, row major) per
// isomorphism class of digraphs with loops on n nodes.
const std::vector<std::uint32_t>& digraph_representatives(unsigned n);

}  // namespace mlsr
