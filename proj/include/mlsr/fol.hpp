#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "mlsr/formula.hpp"
#include "mlsr/kripke.hpp"

namespace mlsr {

enum class FolOp : std::uint8_t { Pred, Rel, Eq, Neg, Or, And, Exists };

struct FolNode;

// First-order formulas over unary predicates P_<prop> and N_<nominal>,
// binary relations R_<label> and equality. Universal quantification is
// written as ~exists~.
class Fol {
 public:
  Fol() = default;
  explicit Fol(std::shared_ptr<const FolNode> n) : node_(std::move(n)) {}
  FolOp op() const;
  // Predicate or relation symbol (e.g. "P_p", "R_r"); bound variable for Exists.
  const std::string& symbol() const;
  const std::string& x() const;
  const std::string& y() const;
  const Fol& lhs() const;
  const Fol& rhs() const;
  bool is_null() const { return !node_; }
  friend bool operator==(const Fol& a, const Fol& b);

 private:
  std::shared_ptr<const FolNode> node_;
};

struct FolNode {
  FolOp op;
  std::string symbol;
  std::string x, y;
  Fol a, b;
};

inline FolOp Fol::op() const { return node_->op; }
inline const std::string& Fol::symbol() const { return node_->symbol; }
inline const std::string& Fol::x() const { return node_->x; }
inline const std::string& Fol::y() const { return node_->y; }
inline const Fol& Fol::lhs() const { return node_->a; }
inline const Fol& Fol::rhs() const { return node_->b; }

Fol fol_pred(std::string symbol, std::string var);
Fol fol_rel(std::string symbol, std::string from, std::string to);
Fol fol_eq(std::string a, std::string b);
Fol fol_not(Fol a);
Fol fol_or(Fol a, Fol b);
Fol fol_and(Fol a, Fol b);
Fol fol_exists(std::string var, Fol body);
Fol fol_forall(std::string var, Fol body);

std::string prop_symbol(const std::string& p);      // P_p
std::string nominal_symbol(const std::string& n);   // N_n
std::string relation_symbol(const std::string& l);  // R_l

// Standard translation with the free variable "y". Removals record their
// witness in a deleted-variable list; announcements add a guard that is
// conjoined inside every later quantifier.
Fol translate(const Formula& f);
inline const std::string kFolFreeVar = "y";

// Tarskian evaluation over the whole model. Errors on an unbound free variable.
bool fol_eval(const Model& m, const std::map<std::string, std::string>& assignment, const Fol& f);

bool translation_equivalent(const Model& m, const std::string& s, const Formula& f);

std::size_t fol_size(const Fol& f);
std::set<std::string> fol_free_vars(const Fol& f);
// True when no variable is bound by two quantifiers.
bool fol_bound_once(const Fol& f);

// Prefix text: (exists v1 (and (R_r y v1) (P_p v1))), (not ..), (or ..), (= x y).
std::string fol_print(const Fol& f);
Fol fol_parse(std::string_view text);

}  // namespace mlsr
