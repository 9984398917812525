#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlsr/formula.hpp"
#include "mlsr/kripke.hpp"

namespace mlsr {

// Metavariable names used in templates and substitutions: formula
// metavariables phi, psi, alpha, sigma; nominal metavariables n, m, k;
// proposition metavariable p.
struct Schema {
  std::string name;
  Formula tmpl;
  std::vector<std::string> formula_vars;
  std::vector<std::string> nominal_vars;
  std::vector<std::string> prop_vars;
  bool labelled = false;  // box family with a relation label (K_box, U_box)
};

const std::vector<Schema>& schemas();
const Schema& schema(const std::string& name);

using Substitution = std::map<std::string, Formula>;

// Fills the template. For "Taut" the only metavariable is phi and the result
// must be a propositional tautology over its maximal modal subformulas.
Formula instantiate(const Schema& s, const Substitution& subst, const std::string& label = kDefaultLabel);
bool is_tautology(const Formula& f);

// The RE context hole is the proposition letter `_`.
inline const std::string kHole = "_";
Formula hole();
Formula plug(const Formula& context, const Formula& filler);

enum class RuleKind { Hyp, Axiom, MP, RE, Nec, Name, Paste, Mix };

struct Justification {
  RuleKind kind = RuleKind::Hyp;
  std::string name;           // axiom schema
  Substitution subst;         // axiom
  std::vector<int> from;      // 1-based line references
  Formula context;            // RE
  bool reversed = false;      // RE: use the equivalence right-to-left
  std::string family;         // Nec: box, U, ann, rem
  Formula param;              // Nec for ann/rem
  std::string label = kDefaultLabel;  // Nec box and labelled axioms
  std::vector<std::string> nominals;  // Name: {m}; Paste: {n, m}; Mix: {k}
  std::string nabla;          // Paste: dia or E
};

struct ProofLine {
  Formula formula;  // null means "whatever the rule yields"
  Justification by;
};

struct Derivation {
  std::string name;
  std::vector<ProofLine> lines;
};

struct CheckReport {
  bool ok = true;
  int line = 0;          // first bad line, 1-based
  std::string kind;      // reference, shape, freshness, axiom
  std::string message;
  Formula theorem;       // last line when ok
  bool uses_hypotheses = false;
  std::vector<Formula> formulas;  // every line, filled in where omitted
};

CheckReport check_derivation(const Derivation& d);
// Checks several derivations concurrently.
std::vector<CheckReport> check_all(const std::vector<Derivation>& ds);

Derivation derivation_from_json(const std::string& text);
std::string derivation_to_json(const Derivation& d, int indent = 2);
Derivation load_derivation(const std::string& path);

struct SpotcheckResult {
  bool ok = true;
  std::optional<PointedModel> countermodel;
  std::size_t models = 0;
};

// Random models with 1..5 worlds over the letters, nominals and labels of
// `theorem`; every nominal-denotation variant of each model is tried.
SpotcheckResult soundness_spotcheck(const Formula& theorem, unsigned trials, std::uint64_t seed);

// Appends lines and returns 1-based indices. Rule helpers compute the
// conclusion themselves; the lemma helpers expand into several lines.
class ProofBuilder {
 public:
  explicit ProofBuilder(std::string name) { d_.name = std::move(name); }

  int hyp(const Formula& f);
  int axiom(const std::string& name, const Substitution& subst, const std::string& label = kDefaultLabel);
  int taut(const Formula& f);
  int mp(int i, int j);
  int re(int i, const Formula& context, bool reversed = false);
  int nec(int i, const std::string& family, const Formula& param = {}, const std::string& label = kDefaultLabel);
  int name_rule(int i, const std::string& m);
  int paste(int i, const std::string& n, const std::string& m, const std::string& nabla);
  int mix(int i, const std::string& k);

  // From the premise lines, `goal` by one tautology and modus ponens.
  int prop(const std::vector<int>& premises, const Formula& goal);
  // ctx[~~x] <-> ctx[x]
  int double_neg(const Formula& x, const Formula& context);
  // x -> E x
  int to_exists(const Formula& x);
  // 'n -> (E('n & x) <-> x)
  int collapse(const std::string& n, const Formula& x);
  // From a line a -> b: <>a -> <>b for the diamond of `family`
  // (dia, ann, rem, E).
  int dia_mono(int line, const std::string& family, const Formula& param = {},
               const std::string& label = kDefaultLabel);
  // E(a | b) -> E a | E b
  int exists_or(const Formula& a, const Formula& b);
  // Derived rules, expanded in place. Arguments name the pieces of the premise.
  int stripped_mix(int line, const Formula& phi, const std::string& k, const Formula& alpha, const Formula& psi,
                   const Formula& sigma, const std::string& n);
  int basic_mix(int line, const std::string& k, const Formula& alpha, const Formula& psi, const Formula& sigma,
                const std::string& n);
  int basic_paste(int line, const std::string& k, const Formula& phi, const Formula& sigma, const std::string& n);

  const Formula& formula(int i) const { return d_.lines.at(i - 1).formula; }
  int size() const { return static_cast<int>(d_.lines.size()); }
  const Derivation& derivation() const { return d_; }

 private:
  int push(Formula f, Justification j);
  Derivation d_;
};

// Transcribed proofs: observation, stripped_mix, basic_mix, basic_paste,
// announcement_precondition, remove_disjunction, exists_via_removal, removal_gives_exists.
std::vector<Derivation> proof_corpus();
// Corpus entries free of hypotheses.
bool is_theorem_proof(const Derivation& d);

}  // namespace mlsr
