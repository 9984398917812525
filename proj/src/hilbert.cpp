#include "mlsr/hilbert.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "mlsr/checker.hpp"
#include "mlsr/error.hpp"

namespace mlsr {

using nlohmann::json;

namespace {

Schema make(std::string name, const std::string& text, std::vector<std::string> fv, std::vector<std::string> nv = {},
            std::vector<std::string> pv = {}, bool labelled = false) {
  return Schema{std::move(name), parse(text), std::move(fv), std::move(nv), std::move(pv), labelled};
}

std::vector<Schema> build_schemas() {
  return {
      make("Taut", "phi", {"phi"}),
      make("K_box", "[](phi -> psi) -> ([]phi -> []psi)", {"phi", "psi"}, {}, {}, true),
      make("K_U", "U(phi -> psi) -> (U(phi) -> U(psi))", {"phi", "psi"}),
      make("K_ann", "[!alpha](phi -> psi) -> ([!alpha]phi -> [!alpha]psi)", {"alpha", "phi", "psi"}),
      make("K_rem", "[-alpha](phi -> psi) -> ([-alpha]phi -> [-alpha]psi)", {"alpha", "phi", "psi"}),
      make("T_U", "U(phi) -> phi", {"phi"}),
      make("4_U", "U(phi) -> U(U(phi))", {"phi"}),
      make("B_U", "phi -> U(E(phi))", {"phi"}),
      make("U_box", "U(phi) -> []phi", {"phi"}, {}, {}, true),
      make("PAL_atom", "<!phi>p <-> (phi & p)", {"phi"}, {}, {"p"}),
      make("PAL_nom", "<!phi>'n <-> (phi & 'n)", {"phi"}, {"n"}),
      make("PAL_top", "<!phi>T <-> phi", {"phi"}),
      make("PAL_neg", "<!phi>~psi <-> (phi & ~<!phi>psi)", {"phi", "psi"}),
      make("PAL_or", "<!phi>(psi | alpha) <-> (<!phi>psi | <!phi>alpha)", {"phi", "psi", "alpha"}),
      make("PAL_dia", "<!phi><>psi <-> (phi & <><!phi>psi)", {"phi", "psi"}, {}, {}, true),
      make("PAL_ann", "<!phi><!psi>alpha <-> <!(phi & [!phi]psi)>alpha", {"phi", "psi", "alpha"}),
      make("PAL_E", "<!phi>E(psi) <-> (phi & E(<!phi>psi))", {"phi", "psi"}),
      make("Truth", "<!T>phi <-> phi", {"phi"}),
      make("H", "E('n & phi) -> U('n -> phi)", {"phi"}, {"n"}),
      make("Mix", "(E('n & alpha) & <!~'n>phi) -> <-alpha>phi", {"alpha", "phi"}, {"n"}),
  };
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

Formula fill(const Schema& s, const Formula& t, const Substitution& sub, const std::string& label) {
  switch (t.op()) {
    case Op::Prop: {
      if (!contains(s.formula_vars, t.name()) && !contains(s.prop_vars, t.name())) return t;
      auto it = sub.find(t.name());
      if (it == sub.end()) throw InputError(s.name + ": missing metavariable " + t.name());
      if (contains(s.prop_vars, t.name()) && it->second.op() != Op::Prop)
        throw InputError(s.name + ": " + t.name() + " must be a proposition letter");
      return it->second;
    }
    case Op::Nominal: {
      auto it = sub.find(t.name());
      if (it == sub.end()) throw InputError(s.name + ": missing metavariable " + t.name());
      if (it->second.op() != Op::Nominal) throw InputError(s.name + ": " + t.name() + " must be a nominal");
      return it->second;
    }
    case Op::Diamond:
      return dia(fill(s, t.lhs(), sub, label), label);
    case Op::Box:
      return box(fill(s, t.lhs(), sub, label), label);
    default:
      if (is_atom(t.op())) return t;
      return with_children(t, fill(s, t.lhs(), sub, label), t.rhs().is_null() ? Formula() : fill(s, t.rhs(), sub, label));
  }
}

// Maximal non-boolean subformulas of an expanded formula.
void atoms(const Formula& f, std::vector<Formula>& out) {
  switch (f.op()) {
    case Op::Top:
      return;
    case Op::Neg:
      atoms(f.lhs(), out);
      return;
    case Op::Or:
      atoms(f.lhs(), out);
      atoms(f.rhs(), out);
      return;
    default:
      if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
}

bool truth(const Formula& f, const std::vector<Formula>& as, std::uint32_t v) {
  switch (f.op()) {
    case Op::Top:
      return true;
    case Op::Neg:
      return !truth(f.lhs(), as, v);
    case Op::Or:
      return truth(f.lhs(), as, v) || truth(f.rhs(), as, v);
    default:
      return v >> (std::find(as.begin(), as.end(), f) - as.begin()) & 1;
  }
}

bool same(const Formula& a, const Formula& b) { return expand(a) == expand(b); }

// a -> b, also in its unfolded form ~a | b.
std::optional<std::pair<Formula, Formula>> as_implies(const Formula& f) {
  if (f.op() == Op::Implies) return std::pair{f.lhs(), f.rhs()};
  if (f.op() == Op::Or && f.lhs().op() == Op::Neg) return std::pair{f.lhs().lhs(), f.rhs()};
  return std::nullopt;
}

std::optional<std::pair<Formula, Formula>> as_and(const Formula& f) {
  if (f.op() == Op::And) return std::pair{f.lhs(), f.rhs()};
  if (f.op() == Op::Neg && f.lhs().op() == Op::Or && f.lhs().lhs().op() == Op::Neg && f.lhs().rhs().op() == Op::Neg)
    return std::pair{f.lhs().lhs().lhs(), f.lhs().rhs().lhs()};
  return std::nullopt;
}

bool occurs(const std::string& nom, const Formula& f) { return nominals_of(f).count(nom) != 0; }

std::string strip_quote(const std::string& s) { return !s.empty() && s[0] == '\'' ? s.substr(1) : s; }

struct Fail {
  std::string kind, message;
};

Formula box_of(const std::string& family, const Formula& param, const std::string& label, const Formula& f) {
  if (family == "box") return box(f, label);
  if (family == "U") return univ(f);
  if (family == "ann") return ann_box(param, f);
  if (family == "rem") return rem_box(param, f);
  throw Fail{"shape", "unknown box family " + family};
}

Formula dia_of(const std::string& family, const Formula& param, const std::string& label, const Formula& f) {
  if (family == "dia") return dia(f, label);
  if (family == "E") return exists(f);
  if (family == "ann") return ann(param, f);
  if (family == "rem") return rem(param, f);
  throw InputError("unknown diamond family " + family);
}

std::size_t holes(const Formula& f) {
  if (f.op() == Op::Prop) return f.name() == kHole;
  if (is_atom(f.op())) return 0;
  return holes(f.lhs()) + (f.rhs().is_null() ? 0 : holes(f.rhs()));
}

// Conclusion of a line from its justification and earlier formulas.
Formula conclude(const ProofLine& l, const std::vector<Formula>& prev) {
  const auto& j = l.by;
  auto ref = [&](std::size_t idx) -> const Formula& {
    if (idx >= j.from.size()) throw Fail{"reference", "missing line reference"};
    int i = j.from[idx];
    if (i < 1 || i > static_cast<int>(prev.size()))
      throw Fail{"reference", "line reference " + std::to_string(i) + " is not an earlier line"};
    return prev[i - 1];
  };
  auto nom = [&](std::size_t idx) {
    if (idx >= j.nominals.size()) throw Fail{"shape", "missing nominal parameter"};
    return strip_quote(j.nominals[idx]);
  };
  auto fresh = [](const std::string& n, std::initializer_list<Formula> fs) {
    for (const auto& f : fs)
      if (occurs(n, f)) throw Fail{"freshness", "nominal '" + n + " occurs in " + print(f)};
  };
  switch (j.kind) {
    case RuleKind::Hyp:
      if (l.formula.is_null()) throw Fail{"shape", "hypothesis without formula"};
      return l.formula;
    case RuleKind::Axiom: {
      const Schema* s = nullptr;
      for (const auto& x : schemas())
        if (x.name == j.name) s = &x;
      if (!s) throw Fail{"axiom", "unknown schema " + j.name};
      Substitution sub = j.subst;
      if (s->name == "Taut" && !sub.count("phi")) {
        if (l.formula.is_null()) throw Fail{"axiom", "tautology line without formula"};
        sub["phi"] = l.formula;
      }
      try {
        return instantiate(*s, sub, j.label);
      } catch (const InputError& e) {
        throw Fail{"axiom", e.what()};
      }
    }
    case RuleKind::MP: {
      const Formula& a = ref(0);
      const Formula& imp = ref(1);
      auto p = as_implies(imp);
      if (!p) throw Fail{"shape", "second premise is not an implication"};
      if (!same(p->first, a)) throw Fail{"shape", "antecedent does not match the first premise"};
      return p->second;
    }
    case RuleKind::RE: {
      const Formula& e = ref(0);
      if (e.op() != Op::Iff) throw Fail{"shape", "premise is not an equivalence"};
      if (j.context.is_null() || holes(j.context) != 1) throw Fail{"shape", "context needs exactly one hole"};
      Formula a = e.lhs(), b = e.rhs();
      if (j.reversed) std::swap(a, b);
      return iff(plug(j.context, a), plug(j.context, b));
    }
    case RuleKind::Nec:
      if ((j.family == "ann" || j.family == "rem") && j.param.is_null())
        throw Fail{"shape", "necessitation for " + j.family + " needs a parameter"};
      return box_of(j.family, j.param, j.label, ref(0));
    case RuleKind::Name: {
      std::string m = nom(0);
      auto p = as_implies(ref(0));
      if (!p || p->first.op() != Op::Nominal || p->first.name() != m)
        throw Fail{"shape", "premise is not of the form '" + m + " -> phi"};
      fresh(m, {p->second});
      return p->second;
    }
    case RuleKind::Paste: {
      std::string n = nom(0), m = nom(1);
      if (j.nabla != "dia" && j.nabla != "E") throw Fail{"shape", "paste needs nabla dia or E"};
      auto bad = [] { return Fail{"shape", "premise is not (E(n & Vm) & E(m & phi)) -> sigma"}; };
      auto p = as_implies(ref(0));
      if (!p) throw bad();
      auto c = as_and(p->first);
      if (!c || c->first.op() != Op::Exists || c->second.op() != Op::Exists) throw bad();
      auto l1 = as_and(c->first.lhs());
      auto l2 = as_and(c->second.lhs());
      if (!l1 || !l2) throw bad();
      if (l1->first != nominal(n) || l2->first != nominal(m)) throw bad();
      const Formula& step = l1->second;
      bool ok = j.nabla == "E" ? step.op() == Op::Exists : step.op() == Op::Diamond;
      if (!ok || step.lhs() != nominal(m)) throw bad();
      if (n == m) throw Fail{"freshness", "paste needs two distinct nominals"};
      Formula phi = l2->second, sigma = p->second;
      fresh(m, {phi, sigma});
      Formula moved = j.nabla == "E" ? exists(phi) : dia(phi, step.name());
      return implies(exists(conj(nominal(n), moved)), sigma);
    }
    case RuleKind::Mix: {
      std::string k = nom(0);
      auto bad = [] { return Fail{"shape", "premise is not E(n & <!phi>(E(k & alpha) & <!~k>psi)) -> sigma"}; };
      auto p = as_implies(ref(0));
      if (!p || p->first.op() != Op::Exists) throw bad();
      auto c = as_and(p->first.lhs());
      if (!c || c->first.op() != Op::Nominal || c->second.op() != Op::Announce) throw bad();
      Formula n = c->first, phi = c->second.lhs(), sigma = p->second;
      auto inner = as_and(c->second.rhs());
      if (!inner || inner->first.op() != Op::Exists || inner->second.op() != Op::Announce) throw bad();
      auto ka = as_and(inner->first.lhs());
      if (!ka || ka->first != nominal(k)) throw bad();
      if (!same(inner->second.lhs(), neg(nominal(k)))) throw bad();
      Formula alpha = ka->second, psi = inner->second.rhs();
      if (n.name() == k) throw Fail{"freshness", "nominal '" + k + " is the outer nominal"};
      fresh(k, {phi, alpha, psi, sigma});
      return implies(exists(conj(n, ann(phi, rem(alpha, psi)))), sigma);
    }
  }
  throw Fail{"shape", "unknown rule"};
}

}  // namespace

const std::vector<Schema>& schemas() {
  static const std::vector<Schema> all = build_schemas();
  return all;
}

const Schema& schema(const std::string& name) {
  for (const auto& s : schemas())
    if (s.name == name) return s;
  throw InputError("unknown schema " + name);
}

bool is_tautology(const Formula& f) {
  Formula e = expand(f);
  std::vector<Formula> as;
  atoms(e, as);
  if (as.size() > 24) throw InputError("tautology check: too many atoms");
  for (std::uint32_t v = 0; v < (std::uint32_t{1} << as.size()); ++v)
    if (!truth(e, as, v)) return false;
  return true;
}

Formula instantiate(const Schema& s, const Substitution& subst, const std::string& label) {
  for (const auto& [k, v] : subst)
    if (!contains(s.formula_vars, k) && !contains(s.nominal_vars, k) && !contains(s.prop_vars, k))
      throw InputError(s.name + ": unknown metavariable " + k);
  for (const auto& v : s.formula_vars)
    if (!subst.count(v)) throw InputError(s.name + ": missing metavariable " + v);
  if (!s.labelled && label != kDefaultLabel) throw InputError(s.name + " takes no relation label");
  Formula out = fill(s, s.tmpl, subst, label);
  if (s.name == "Taut" && !is_tautology(out)) throw InputError("not a propositional tautology: " + print(out));
  return out;
}

Formula hole() { return prop(kHole); }

Formula plug(const Formula& c, const Formula& x) {
  if (c.op() == Op::Prop && c.name() == kHole) return x;
  if (is_atom(c.op())) return c;
  return with_children(c, plug(c.lhs(), x), c.rhs().is_null() ? Formula() : plug(c.rhs(), x));
}

CheckReport check_derivation(const Derivation& d) {
  CheckReport r;
  if (d.lines.empty()) {
    r.ok = false;
    r.kind = "shape";
    r.message = "empty derivation";
    return r;
  }
  for (std::size_t i = 0; i < d.lines.size(); ++i) {
    const auto& l = d.lines[i];
    try {
      Formula f = conclude(l, r.formulas);
      if (!l.formula.is_null() && !same(l.formula, f))
        throw Fail{"shape", "line does not match the rule's conclusion " + print(f)};
      r.formulas.push_back(l.formula.is_null() ? f : l.formula);
      if (l.by.kind == RuleKind::Hyp) r.uses_hypotheses = true;
    } catch (const Fail& e) {
      r.ok = false;
      r.line = static_cast<int>(i + 1);
      r.kind = e.kind;
      r.message = e.message;
      return r;
    }
  }
  r.theorem = r.formulas.back();
  return r;
}

std::vector<CheckReport> check_all(const std::vector<Derivation>& ds) {
  std::vector<std::future<CheckReport>> fs;
  for (const auto& d : ds) fs.push_back(std::async(std::launch::async, [&d] { return check_derivation(d); }));
  std::vector<CheckReport> out;
  for (auto& f : fs) out.push_back(f.get());
  return out;
}

// ------------------------------------------------------------------ json

namespace {

RuleKind kind_of(const std::string& s) {
  static const std::map<std::string, RuleKind> m{{"hyp", RuleKind::Hyp},   {"axiom", RuleKind::Axiom},
                                                 {"mp", RuleKind::MP},     {"re", RuleKind::RE},
                                                 {"nec", RuleKind::Nec},   {"name", RuleKind::Name},
                                                 {"paste", RuleKind::Paste}, {"mix", RuleKind::Mix}};
  auto it = m.find(s);
  if (it == m.end()) throw InputError("derivation: unknown rule kind " + s);
  return it->second;
}

std::string kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::Hyp: return "hyp";
    case RuleKind::Axiom: return "axiom";
    case RuleKind::MP: return "mp";
    case RuleKind::RE: return "re";
    case RuleKind::Nec: return "nec";
    case RuleKind::Name: return "name";
    case RuleKind::Paste: return "paste";
    case RuleKind::Mix: return "mix";
  }
  return "";
}

ParseOptions labels_for(const json& j) {
  ParseOptions o;
  if (j.contains("labels"))
    for (const auto& l : j.at("labels")) o.labels.insert(l.get<std::string>());
  return o;
}

}  // namespace

Derivation derivation_from_json(const std::string& text) {
  Derivation d;
  try {
    json j = json::parse(text);
    ParseOptions po = labels_for(j);
    d.name = j.value("name", "");
    for (const auto& jl : j.at("lines")) {
      ProofLine l;
      if (jl.contains("formula")) l.formula = parse(jl.at("formula").get<std::string>(), po);
      const json& b = jl.at("by");
      Justification& by = l.by;
      by.kind = kind_of(b.at("kind").get<std::string>());
      by.name = b.value("name", "");
      if (b.contains("subst"))
        for (const auto& [k, v] : b.at("subst").items()) by.subst[k] = parse(v.get<std::string>(), po);
      if (b.contains("from")) {
        if (b.at("from").is_array())
          by.from = b.at("from").get<std::vector<int>>();
        else
          by.from = {b.at("from").get<int>()};
      }
      if (b.contains("context")) by.context = parse(b.at("context").get<std::string>(), po);
      by.reversed = b.value("reversed", false);
      by.family = b.value("family", "");
      if (b.contains("param")) by.param = parse(b.at("param").get<std::string>(), po);
      by.label = b.value("label", kDefaultLabel);
      if (b.contains("nominal")) by.nominals = {b.at("nominal").get<std::string>()};
      if (b.contains("nominals")) by.nominals = b.at("nominals").get<std::vector<std::string>>();
      by.nabla = b.value("nabla", "");
      d.lines.push_back(std::move(l));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("derivation: ") + e.what());
  }
  return d;
}

std::string derivation_to_json(const Derivation& d, int indent) {
  json j;
  if (!d.name.empty()) j["name"] = d.name;
  std::set<std::string> labels;
  j["lines"] = json::array();
  for (const auto& l : d.lines) {
    json jl, b;
    if (!l.formula.is_null()) {
      jl["formula"] = print(l.formula);
      for (const auto& x : labels_of(l.formula)) labels.insert(x);
    }
    const auto& by = l.by;
    b["kind"] = kind_name(by.kind);
    if (!by.name.empty()) b["name"] = by.name;
    if (!by.subst.empty()) {
      b["subst"] = json::object();
      for (const auto& [k, v] : by.subst) b["subst"][k] = print(v);
    }
    if (!by.from.empty()) b["from"] = by.from;
    if (!by.context.is_null()) b["context"] = print(by.context);
    if (by.reversed) b["reversed"] = true;
    if (!by.family.empty()) b["family"] = by.family;
    if (!by.param.is_null()) b["param"] = print(by.param);
    if (by.label != kDefaultLabel) b["label"] = by.label;
    if (by.kind == RuleKind::Name || by.kind == RuleKind::Mix) {
      if (!by.nominals.empty()) b["nominal"] = by.nominals.front();
    } else if (!by.nominals.empty()) {
      b["nominals"] = by.nominals;
    }
    if (!by.nabla.empty()) b["nabla"] = by.nabla;
    jl["by"] = b;
    j["lines"].push_back(jl);
  }
  labels.erase(kDefaultLabel);
  if (!labels.empty()) j["labels"] = labels;
  return j.dump(indent);
}

Derivation load_derivation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return derivation_from_json(ss.str());
}

// ------------------------------------------------------------- spot check

SpotcheckResult soundness_spotcheck(const Formula& theorem, unsigned trials, std::uint64_t seed) {
  SpotcheckResult r;
  auto ps = props_of(theorem);
  std::vector<std::string> props(ps.begin(), ps.end());
  props.erase(std::remove(props.begin(), props.end(), kHole), props.end());
  auto ns = nominals_of(theorem);
  std::vector<std::string> noms(ns.begin(), ns.end());
  auto ls = labels_of(theorem);
  std::vector<std::string> labels(ls.begin(), ls.end());
  if (labels.empty()) labels.push_back(kDefaultLabel);
  std::mt19937_64 rng(seed);
  for (unsigned t = 0; t < trials; ++t) {
    unsigned n = 1 + rng() % 5;
    double density = std::uniform_real_distribution<double>(0.1, 0.7)(rng);
    Model m = generate_random(n, props, density, rng(), labels);
    std::vector<std::string> ws(m.worlds.begin(), m.worlds.end());
    std::uint64_t variants = 1;
    for (std::size_t i = 0; i < noms.size(); ++i) variants *= (n + 1);
    for (std::uint64_t v = 0; v < variants; ++v) {
      std::uint64_t rest = v;
      for (const auto& nm : noms) {
        std::uint64_t c = rest % (n + 1);
        rest /= (n + 1);
        m.set_nominal(nm, c == 0 ? std::nullopt : std::optional<std::string>(ws[c - 1]));
      }
      ++r.models;
      for (const auto& w : ws)
        if (!check(m, w, theorem)) {
          r.ok = false;
          r.countermodel = PointedModel{m, w};
          r.countermodel->model.point = w;
          return r;
        }
    }
  }
  return r;
}

// ---------------------------------------------------------------- builder

int ProofBuilder::push(Formula f, Justification j) {
  ProofLine l{std::move(f), std::move(j)};
  std::vector<Formula> prev;
  for (const auto& x : d_.lines) prev.push_back(x.formula);
  try {
    Formula c = conclude(l, prev);
    if (l.formula.is_null()) l.formula = c;
  } catch (const Fail& e) {
    throw Error("proof builder, line " + std::to_string(d_.lines.size() + 1) + ": " + e.message);
  }
  d_.lines.push_back(std::move(l));
  return size();
}

int ProofBuilder::hyp(const Formula& f) { return push(f, Justification{}); }

int ProofBuilder::axiom(const std::string& name, const Substitution& subst, const std::string& label) {
  Justification j;
  j.kind = RuleKind::Axiom;
  j.name = name;
  j.subst = subst;
  j.label = label;
  return push({}, j);
}

int ProofBuilder::taut(const Formula& f) {
  Justification j;
  j.kind = RuleKind::Axiom;
  j.name = "Taut";
  return push(f, j);
}

int ProofBuilder::mp(int i, int k) {
  Justification j;
  j.kind = RuleKind::MP;
  j.from = {i, k};
  return push({}, j);
}

int ProofBuilder::re(int i, const Formula& context, bool reversed) {
  Justification j;
  j.kind = RuleKind::RE;
  j.from = {i};
  j.context = context;
  j.reversed = reversed;
  return push({}, j);
}

int ProofBuilder::nec(int i, const std::string& family, const Formula& param, const std::string& label) {
  Justification j;
  j.kind = RuleKind::Nec;
  j.from = {i};
  j.family = family;
  j.param = param;
  j.label = label;
  return push({}, j);
}

int ProofBuilder::name_rule(int i, const std::string& m) {
  Justification j;
  j.kind = RuleKind::Name;
  j.from = {i};
  j.nominals = {m};
  return push({}, j);
}

int ProofBuilder::paste(int i, const std::string& n, const std::string& m, const std::string& nabla) {
  Justification j;
  j.kind = RuleKind::Paste;
  j.from = {i};
  j.nominals = {n, m};
  j.nabla = nabla;
  return push({}, j);
}

int ProofBuilder::mix(int i, const std::string& k) {
  Justification j;
  j.kind = RuleKind::Mix;
  j.from = {i};
  j.nominals = {k};
  return push({}, j);
}

int ProofBuilder::prop(const std::vector<int>& premises, const Formula& goal) {
  Formula t = goal;
  for (auto it = premises.rbegin(); it != premises.rend(); ++it) t = implies(formula(*it), t);
  int cur = taut(t);
  for (int p : premises) cur = mp(p, cur);
  return cur;
}

int ProofBuilder::double_neg(const Formula& x, const Formula& context) {
  int t = taut(iff(neg(neg(x)), x));
  return re(t, context);
}

int ProofBuilder::to_exists(const Formula& x) {
  int a = axiom("T_U", {{"phi", neg(x)}});
  int b = double_neg(x, neg(exists(hole())));
  return prop({a, b}, implies(x, exists(x)));
}

int ProofBuilder::collapse(const std::string& n, const Formula& x) {
  Formula nn = nominal(n);
  int a = axiom("H", {{"n", nn}, {"phi", x}});
  int b = axiom("T_U", {{"phi", implies(nn, x)}});
  int c = to_exists(conj(nn, x));
  return prop({a, b, c}, implies(nn, iff(exists(conj(nn, x)), x)));
}

int ProofBuilder::dia_mono(int line, const std::string& family, const Formula& param, const std::string& label) {
  auto ab = as_implies(formula(line));
  if (!ab) throw Error("dia_mono: line is not an implication");
  Formula a = ab->first, b = ab->second;
  int contra = prop({line}, implies(neg(b), neg(a)));
  std::string boxes = family == "dia" ? "box" : family == "E" ? "U" : family;
  int n = nec(contra, boxes, param, label);
  int k;
  if (family == "dia")
    k = axiom("K_box", {{"phi", neg(b)}, {"psi", neg(a)}}, label);
  else if (family == "E")
    k = axiom("K_U", {{"phi", neg(b)}, {"psi", neg(a)}});
  else
    k = axiom(family == "ann" ? "K_ann" : "K_rem", {{"alpha", param}, {"phi", neg(b)}, {"psi", neg(a)}});
  int step = mp(n, k);
  Formula ctx = neg(dia_of(family, param, label, hole()));
  int ra = double_neg(a, ctx);
  int rb = double_neg(b, ctx);
  return prop({step, ra, rb}, implies(dia_of(family, param, label, a), dia_of(family, param, label, b)));
}

int ProofBuilder::exists_or(const Formula& a, const Formula& b) {
  Formula ab = disj(a, b);
  int t = taut(implies(neg(a), implies(neg(b), neg(ab))));
  int u = nec(t, "U");
  int k1 = axiom("K_U", {{"phi", neg(a)}, {"psi", implies(neg(b), neg(ab))}});
  int s1 = mp(u, k1);
  int k2 = axiom("K_U", {{"phi", neg(b)}, {"psi", neg(ab)}});
  Formula ctx = neg(exists(hole()));
  int ra = double_neg(a, ctx), rb = double_neg(b, ctx), rab = double_neg(ab, ctx);
  return prop({s1, k2, ra, rb, rab}, implies(exists(ab), disj(exists(a), exists(b))));
}

int ProofBuilder::stripped_mix(int line, const Formula& phi, const std::string& k, const Formula& alpha,
                               const Formula& psi, const Formula& sigma, const std::string& n) {
  Formula nn = nominal(n), kk = nominal(k);
  Formula z = ann(phi, conj(exists(conj(kk, alpha)), ann(neg(kk), psi)));
  Formula out = ann(phi, rem(alpha, psi));
  int c1 = collapse(n, z);
  int s = prop({line, c1}, implies(exists(conj(nn, z)), implies(nn, sigma)));
  int m = mix(s, k);
  int c2 = collapse(n, out);
  int t = prop({m, c2}, implies(nn, implies(out, sigma)));
  return name_rule(t, n);
}

int ProofBuilder::basic_mix(int line, const std::string& k, const Formula& alpha, const Formula& psi,
                            const Formula& sigma, const std::string& n) {
  Formula kk = nominal(k);
  Formula y = conj(exists(conj(kk, alpha)), ann(neg(kk), psi));
  int t1 = axiom("Truth", {{"phi", y}});
  int p = prop({line, t1}, implies(ann(top(), y), sigma));
  int s = stripped_mix(p, top(), k, alpha, psi, sigma, n);
  int t2 = axiom("Truth", {{"phi", rem(alpha, psi)}});
  return prop({s, t2}, implies(rem(alpha, psi), sigma));
}

int ProofBuilder::basic_paste(int line, const std::string& k, const Formula& phi, const Formula& sigma,
                              const std::string& n) {
  Formula nn = nominal(n), kk = nominal(k);
  int l2 = prop({line}, implies(exists(conj(kk, phi)), implies(nn, sigma)));
  int l3 = prop({l2}, implies(conj(exists(conj(nn, exists(kk))), exists(conj(kk, phi))), implies(nn, sigma)));
  int l4 = paste(l3, n, k, "E");
  int l5 = prop({l4}, implies(conj(nn, exists(conj(nn, exists(phi)))), sigma));
  int c = collapse(n, exists(phi));
  int l6 = prop({l5, c}, implies(conj(nn, exists(phi)), sigma));
  int l7 = prop({l6}, implies(nn, implies(exists(phi), sigma)));
  return name_rule(l7, n);
}

// ----------------------------------------------------------------- corpus

namespace {

Derivation observation() {
  ProofBuilder b("observation");
  Formula n = nominal("n"), k = nominal("k");
  Formula y = conj(exists(conj(k, n)), ann(neg(k), top()));
  Formula a = ann(top(), y);
  int l1 = b.axiom("Truth", {{"phi", y}});
  int l2 = b.axiom("PAL_top", {{"phi", neg(k)}});
  int l3 = b.taut(iff(conj(k, n), conj(n, k)));
  int l4 = b.re(l3, exists(hole()));
  int l5 = b.axiom("H", {{"n", n}, {"phi", k}});
  int l6 = b.axiom("T_U", {{"phi", implies(n, k)}});
  int l7 = b.prop({l1, l2, l4, l5, l6}, neg(conj(n, a)));
  int l8 = b.nec(l7, "U");
  int l9 = b.double_neg(conj(n, a), neg(exists(hole())));
  int l10 = b.prop({l8, l9}, implies(exists(conj(n, a)), bot()));
  int l11 = b.mix(l10, "k");
  Formula r = rem(n, top());
  int l12 = b.axiom("Truth", {{"phi", r}});
  int l13 = b.re(l12, implies(exists(conj(n, hole())), bot()));
  int l14 = b.prop({l11, l13}, implies(exists(conj(n, r)), bot()));
  int l15 = b.to_exists(conj(n, r));
  b.prop({l14, l15}, implies(n, neg(r)));
  return b.derivation();
}

Derivation stripped_mix_rule() {
  ProofBuilder b("stripped_mix");
  Formula k = nominal("k"), phi = prop("p"), alpha = prop("q"), psi = dia(prop("p")), sigma = prop("r");
  int h = b.hyp(implies(ann(phi, conj(exists(conj(k, alpha)), ann(neg(k), psi))), sigma));
  b.stripped_mix(h, phi, "k", alpha, psi, sigma, "n");
  return b.derivation();
}

Derivation basic_mix_rule() {
  ProofBuilder b("basic_mix");
  Formula k = nominal("k"), alpha = prop("q"), psi = dia(prop("p")), sigma = prop("r");
  int h = b.hyp(implies(conj(exists(conj(k, alpha)), ann(neg(k), psi)), sigma));
  b.basic_mix(h, "k", alpha, psi, sigma, "n");
  return b.derivation();
}

Derivation basic_paste_rule() {
  ProofBuilder b("basic_paste");
  Formula k = nominal("k"), phi = dia(prop("p")), sigma = prop("q");
  int h = b.hyp(implies(exists(conj(k, phi)), sigma));
  b.basic_paste(h, "k", phi, sigma, "n");
  return b.derivation();
}

// <!phi>alpha -> phi
Derivation announcement_precondition() {
  ProofBuilder b("announcement_precondition");
  Formula phi = dia(prop("p")), alpha = disj(prop("q"), prop("p"));
  int t = b.taut(implies(alpha, top()));
  int m = b.dia_mono(t, "ann", phi);
  int a = b.axiom("PAL_top", {{"phi", phi}});
  b.prop({m, a}, implies(ann(phi, alpha), phi));
  return b.derivation();
}

// <-(phi1 | phi2)>psi -> <-phi1>psi | <-phi2>psi
Derivation remove_disjunction() {
  ProofBuilder b("remove_disjunction");
  Formula f1 = prop("p"), f2 = prop("q"), psi = dia(prop("p"));
  Formula k = nominal("k"), alpha = disj(f1, f2);
  Formula sigma = disj(rem(f1, psi), rem(f2, psi));
  Formula split = disj(conj(k, f1), conj(k, f2));
  int t = b.taut(implies(conj(k, alpha), split));
  int e1 = b.dia_mono(t, "E");
  int e2 = b.exists_or(conj(k, f1), conj(k, f2));
  int m1 = b.axiom("Mix", {{"n", k}, {"alpha", f1}, {"phi", psi}});
  int m2 = b.axiom("Mix", {{"n", k}, {"alpha", f2}, {"phi", psi}});
  int prem = b.prop({e1, e2, m1, m2}, implies(conj(exists(conj(k, alpha)), ann(neg(k), psi)), sigma));
  b.basic_mix(prem, "k", alpha, psi, sigma, "n");
  return b.derivation();
}

// E alpha -> alpha | <-alpha>T
Derivation exists_via_removal() {
  ProofBuilder b("exists_via_removal");
  Formula alpha = dia(prop("p")), k = nominal("k");
  Formula sigma = disj(alpha, rem(alpha, top()));
  int h = b.axiom("H", {{"n", k}, {"phi", alpha}});
  int t = b.axiom("T_U", {{"phi", implies(k, alpha)}});
  int top_k = b.axiom("PAL_top", {{"phi", neg(k)}});
  int mx = b.axiom("Mix", {{"n", k}, {"alpha", alpha}, {"phi", top()}});
  int prem = b.prop({h, t, top_k, mx}, implies(exists(conj(k, alpha)), sigma));
  b.basic_paste(prem, "k", alpha, sigma, "n");
  return b.derivation();
}

// <-alpha>T -> E alpha
Derivation removal_gives_exists() {
  ProofBuilder b("removal_gives_exists");
  Formula alpha = dia(prop("p")), k = nominal("k");
  int t = b.taut(implies(conj(k, alpha), alpha));
  int e = b.dia_mono(t, "E");
  int prem = b.prop({e}, implies(conj(exists(conj(k, alpha)), ann(neg(k), top())), exists(alpha)));
  b.basic_mix(prem, "k", alpha, top(), exists(alpha), "n");
  return b.derivation();
}

}  // namespace

std::vector<Derivation> proof_corpus() {
  return {observation(), stripped_mix_rule(), basic_mix_rule(), basic_paste_rule(),
          announcement_precondition(),     remove_disjunction(),       exists_via_removal(),   removal_gives_exists()};
}

bool is_theorem_proof(const Derivation& d) {
  return std::none_of(d.lines.begin(), d.lines.end(), [](const ProofLine& l) { return l.by.kind == RuleKind::Hyp; });
}

}  // namespace mlsr
