#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mlsr/error.hpp"

namespace mlsr {

// Core constructors are Prop, Nominal, Top, Neg, Or, Diamond, Announce,
// Remove and Exists. Everything else is sugar kept until expand().
enum class Op : std::uint8_t {
  Prop,
  Nominal,
  Top,
  Bot,
  Neg,
  Or,
  And,
  Implies,
  Iff,
  Diamond,
  Box,
  Announce,  // <!a>b
  AnnBox,    // [!a]b
  Remove,    // <-a>b
  RemBox,    // [-a]b
  Exists,    // E a
  Univ,      // U a
  Diff,      // D a
  At,        // @'n a
};

struct Node;

// Immutable, shared formula tree. A default constructed Formula is null and
// only useful as a placeholder.
class Formula {
 public:
  Formula() = default;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  Op op() const;
  // Proposition or nominal name, relation label for Diamond/Box, nominal for At.
  const std::string& name() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  std::size_t hash() const;
  // Number of nodes in the tree.
  std::size_t size() const;
  // Height of the tree; atoms have depth 0.
  int depth() const;

  bool is_null() const { return !node_; }
  const Node* get() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op;
  std::string name;
  Formula a;
  Formula b;
  std::size_t hash = 0;
  std::size_t size = 1;
  int depth = 0;
};

inline Op Formula::op() const { return node_->op; }
inline const std::string& Formula::name() const { return node_->name; }
inline const Formula& Formula::lhs() const { return node_->a; }
inline const Formula& Formula::rhs() const { return node_->b; }
inline std::size_t Formula::hash() const { return node_->hash; }
inline std::size_t Formula::size() const { return node_->size; }
inline int Formula::depth() const { return node_->depth; }

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

inline const std::string kDefaultLabel = "r";

Formula prop(std::string name);
Formula nominal(std::string name);
Formula top();
Formula bot();
Formula neg(Formula a);
Formula disj(Formula a, Formula b);
Formula conj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula dia(Formula a, std::string label = kDefaultLabel);
Formula box(Formula a, std::string label = kDefaultLabel);
Formula ann(Formula announced, Formula body);
Formula ann_box(Formula announced, Formula body);
Formula rem(Formula removed, Formula body);
Formula rem_box(Formula removed, Formula body);
Formula exists(Formula a);
Formula univ(Formula a);
Formula diff(Formula a);
Formula at(std::string nominal_name, Formula a);

// Right-nested conjunction/disjunction; empty lists give T and F.
Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);

// Rebuilds a node of the same shape as `f` with new children.
Formula with_children(const Formula& f, Formula a, Formula b = {});

bool is_atom(Op op);
bool is_unary(Op op);
bool is_binary(Op op);
bool is_core(const Formula& f);

std::set<std::string> props_of(const Formula& f);
std::set<std::string> nominals_of(const Formula& f);
std::set<std::string> labels_of(const Formula& f);

struct ParseOptions {
  std::set<std::string> labels{kDefaultLabel};
};

Formula parse(std::string_view text, const ParseOptions& opts = {});
std::string print(const Formula& f);

// Removes all sugar. E stays primitive; U a becomes ~E~a and @'n a becomes
// ~E~('n -> a) expanded.
Formula expand(const Formula& f);
// Expansion into the removal-only core: additionally E a becomes a | <-a>T and
// U a becomes a & [-~a]F (both then expanded).
Formula expand_core(const Formula& f);
// The removal-based reading of U, kept as a sugar-level formula.
Formula univ_via_removal(const Formula& a);

// <-T>^k T: at least k points other than the current one.
Formula counting_formula(unsigned k);
// <-T>T & ~<-T><-T>T: the domain has exactly two points.
Formula rho2();

struct RandomFormulaOptions {
  int max_depth = 3;
  std::vector<std::string> props{"p", "q"};
  std::vector<std::string> nominals{};
  std::vector<std::string> labels{kDefaultLabel};
  bool announcements = true;
  bool removals = true;
  bool exists = true;
  bool sugar = false;
};

Formula random_formula(std::mt19937_64& rng, const RandomFormulaOptions& opts);

}  // namespace mlsr
