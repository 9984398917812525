#pragma once

#include <string>
#include <vector>

#include "mlsr/fol.hpp"
#include "mlsr/formula.hpp"

namespace mlsr {

// A sign for every declared predicate; bit i of `mask` set means +preds[i].
struct LocalSD {
  std::vector<std::string> preds;
  unsigned mask = 0;
  bool operator==(const LocalSD&) const = default;
};

// "+P1-P2" declares P1, P2 in that order.
LocalSD parse_sd(const std::string& text);
std::string sd_to_string(const LocalSD& sd);
// All 2^k descriptions over `preds`, mask order.
std::vector<LocalSD> all_local(const std::vector<std::string>& preds);

struct CountEntry {
  bool at_least = false;  // AtLeast(m) when set, else Exactly(m)
  unsigned m = 0;
  bool operator==(const CountEntry&) const = default;
};

// One entry per local description, indexed by mask.
struct GlobalSD {
  std::vector<std::string> preds;
  unsigned threshold = 0;
  std::vector<CountEntry> entries;
};

// Every depth-N global description over `preds`.
std::vector<GlobalSD> all_global(const std::vector<std::string>& preds, unsigned threshold);
std::string sd_to_string(const GlobalSD& sd);

Formula sd_formula(const LocalSD& sd);
Fol sd_to_fol(const LocalSD& sd, const std::string& var = kFolFreeVar);

// At least m points satisfy phi: T, E phi, then <-phi> per extra point.
Formula at_least(unsigned m, const Formula& phi);
Formula at_least(unsigned m, const LocalSD& sd);
Formula exactly(unsigned m, const Formula& phi);
Formula global_formula(const GlobalSD& sd);

// True when the entry for `sd` leaves room for the point it describes.
bool consistent(const LocalSD& sd, const GlobalSD& global);
// Entry i gets one more point: Exactly(m) -> Exactly(m+1), AtLeast(N) -> AtLeast(N+1).
GlobalSD increment(const GlobalSD& global, unsigned i);

// SD & <-sd>inner, the counterpart of <-(sd & SD)>inner.
Formula rewrite_pull_out(const LocalSD& sd, const GlobalSD& global, const Formula& inner);
// sd' & SD[i:=i+1], the counterpart of <-sd_i>(sd' & SD).
Formula rewrite_increment(const LocalSD& sd_i, const LocalSD& sd_prime, const GlobalSD& global);

struct SweepLine {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

// Exhaustive comparison over relation-free models with 1..max_worlds worlds
// and 1..max_preds predicates: at_least against cardinality, monotonicity,
// both rewrites on consistent descriptions, and the increment rewrite on
// inconsistent ones (reported, expected to fail somewhere).
std::vector<SweepLine> counting_sweep(unsigned max_worlds = 4, unsigned max_preds = 2);

}  // namespace mlsr
