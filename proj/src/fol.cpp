#include "mlsr/fol.hpp"

#include <cctype>
#include <functional>
#include <unordered_map>
#include <vector>

#include "mlsr/checker.hpp"
#include "mlsr/indexed.hpp"

namespace mlsr {

namespace {

Fol mk(FolOp op, std::string sym, std::string x, std::string y, Fol a = {}, Fol b = {}) {
  auto n = std::make_shared<FolNode>();
  n->op = op;
  n->symbol = std::move(sym);
  n->x = std::move(x);
  n->y = std::move(y);
  n->a = std::move(a);
  n->b = std::move(b);
  return Fol(std::move(n));
}

}  // namespace

bool operator==(const Fol& a, const Fol& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return a.op() == b.op() && a.symbol() == b.symbol() && a.x() == b.x() && a.y() == b.y() &&
         a.lhs() == b.lhs() && a.rhs() == b.rhs();
}

Fol fol_pred(std::string symbol, std::string var) { return mk(FolOp::Pred, std::move(symbol), std::move(var), ""); }
Fol fol_rel(std::string symbol, std::string from, std::string to) {
  return mk(FolOp::Rel, std::move(symbol), std::move(from), std::move(to));
}
Fol fol_eq(std::string a, std::string b) { return mk(FolOp::Eq, "=", std::move(a), std::move(b)); }
Fol fol_not(Fol a) { return mk(FolOp::Neg, "", "", "", std::move(a)); }
Fol fol_or(Fol a, Fol b) { return mk(FolOp::Or, "", "", "", std::move(a), std::move(b)); }
Fol fol_and(Fol a, Fol b) { return mk(FolOp::And, "", "", "", std::move(a), std::move(b)); }
Fol fol_exists(std::string var, Fol body) { return mk(FolOp::Exists, std::move(var), "", "", std::move(body)); }
Fol fol_forall(std::string var, Fol body) { return fol_not(fol_exists(std::move(var), fol_not(std::move(body)))); }

std::string prop_symbol(const std::string& p) { return "P_" + p; }
std::string nominal_symbol(const std::string& n) { return "N_" + n; }
std::string relation_symbol(const std::string& l) { return "R_" + l; }

// ---------------------------------------------------------------- translation

namespace {

Fol and_all(std::vector<Fol> parts) {
  Fol acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = fol_and(parts[i], acc);
  return acc;
}

class Translator {
 public:
  Fol run(const Formula& f) { return tr(expand(f), kFolFreeVar, {}, -1); }

 private:
  // An announced formula together with the context it was announced in.
  struct Guard {
    Formula alpha;
    std::vector<std::string> deleted;
    int parent;
  };
  std::vector<Guard> guards_;
  int counter_ = 0;

  std::string fresh() { return "v" + std::to_string(++counter_); }

  // Conjuncts restricting a freshly bound z to the current submodel.
  void restrict(std::vector<Fol>& parts, const std::string& z, const std::vector<std::string>& deleted, int g) {
    for (const auto& x : deleted) parts.push_back(fol_not(fol_eq(z, x)));
    add_guard(parts, z, g);
  }

  void add_guard(std::vector<Fol>& parts, const std::string& z, int g) {
    if (g < 0) return;
    Guard gd = guards_[g];
    add_guard(parts, z, gd.parent);
    parts.push_back(tr(gd.alpha, z, gd.deleted, gd.parent));
  }

  Fol tr(const Formula& f, const std::string& y, const std::vector<std::string>& deleted, int g) {
    switch (f.op()) {
      case Op::Prop:
        return fol_pred(prop_symbol(f.name()), y);
      case Op::Nominal:
        return fol_pred(nominal_symbol(f.name()), y);
      case Op::Top:
        return fol_eq(y, y);
      case Op::Neg:
        return fol_not(tr(f.lhs(), y, deleted, g));
      case Op::Or:
        return fol_or(tr(f.lhs(), y, deleted, g), tr(f.rhs(), y, deleted, g));
      case Op::Diamond: {
        std::string z = fresh();
        std::vector<Fol> parts{fol_rel(relation_symbol(f.name()), y, z)};
        restrict(parts, z, deleted, g);
        parts.push_back(tr(f.lhs(), z, deleted, g));
        return fol_exists(z, and_all(std::move(parts)));
      }
      case Op::Remove: {
        std::string z = fresh();
        std::vector<Fol> parts{fol_not(fol_eq(z, y))};
        restrict(parts, z, deleted, g);
        parts.push_back(tr(f.lhs(), z, deleted, g));
        std::vector<std::string> more = deleted;
        more.push_back(z);
        parts.push_back(tr(f.rhs(), y, more, g));
        return fol_exists(z, and_all(std::move(parts)));
      }
      case Op::Exists: {
        std::string z = fresh();
        std::vector<Fol> parts;
        restrict(parts, z, deleted, g);
        parts.push_back(tr(f.lhs(), z, deleted, g));
        return fol_exists(z, and_all(std::move(parts)));
      }
      case Op::Announce: {
        Fol pre = tr(f.lhs(), y, deleted, g);
        guards_.push_back({f.lhs(), deleted, g});
        int ng = static_cast<int>(guards_.size()) - 1;
        return fol_and(pre, tr(f.rhs(), y, deleted, ng));
      }
      default:
        throw Error("translate: unexpanded operator");
    }
  }
};

}  // namespace

Fol translate(const Formula& f) { return Translator().run(f); }

// ---------------------------------------------------------------- evaluation

namespace {

class FolEvaluator {
 public:
  FolEvaluator(const Model& m) : im_(IndexedModel::from(m)) {}

  bool run(const std::map<std::string, std::string>& assignment, const Fol& f) {
    env_.clear();
    for (const auto& [v, w] : assignment) env_[v].push_back(im_.world(w));
    return ev(f);
  }

 private:
  IndexedModel im_;
  std::unordered_map<std::string, std::vector<int>> env_;

  int lookup(const std::string& v) {
    auto it = env_.find(v);
    if (it == env_.end() || it->second.empty()) throw InputError("unbound variable '" + v + "'");
    return it->second.back();
  }

  bool ev(const Fol& f) {
    switch (f.op()) {
      case FolOp::Pred: {
        int w = lookup(f.x());
        const std::string& s = f.symbol();
        if (s.rfind("P_", 0) == 0) {
          auto it = im_.props.find(s.substr(2));
          return it != im_.props.end() && it->second.test(w);
        }
        if (s.rfind("N_", 0) == 0) {
          auto it = im_.nominals.find(s.substr(2));
          return it != im_.nominals.end() && it->second == w;
        }
        throw InputError("unknown predicate symbol '" + s + "'");
      }
      case FolOp::Rel: {
        int a = lookup(f.x());
        int b = lookup(f.y());
        const std::string& s = f.symbol();
        if (s.rfind("R_", 0) != 0) throw InputError("unknown relation symbol '" + s + "'");
        int l = im_.label_index(s.substr(2));
        return l >= 0 && im_.succ[l][a].test(b);
      }
      case FolOp::Eq:
        return lookup(f.x()) == lookup(f.y());
      case FolOp::Neg:
        return !ev(f.lhs());
      case FolOp::Or:
        return ev(f.lhs()) || ev(f.rhs());
      case FolOp::And:
        return ev(f.lhs()) && ev(f.rhs());
      case FolOp::Exists: {
        auto& stack = env_[f.symbol()];
        bool found = false;
        for (int w = 0; w < im_.size() && !found; ++w) {
          stack.push_back(w);
          found = ev(f.lhs());
          stack.pop_back();
        }
        return found;
      }
    }
    return false;
  }
};

}  // namespace

bool fol_eval(const Model& m, const std::map<std::string, std::string>& assignment, const Fol& f) {
  if (m.worlds.empty()) throw InputError("cannot evaluate in the empty model");
  return FolEvaluator(m).run(assignment, f);
}

bool translation_equivalent(const Model& m, const std::string& s, const Formula& f) {
  return check(m, s, f) == fol_eval(m, {{kFolFreeVar, s}}, translate(f));
}

std::size_t fol_size(const Fol& f) {
  std::size_t n = 1;
  if (!f.lhs().is_null()) n += fol_size(f.lhs());
  if (!f.rhs().is_null()) n += fol_size(f.rhs());
  return n;
}

namespace {

void free_vars(const Fol& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.op()) {
    case FolOp::Pred:
      if (!bound.count(f.x())) out.insert(f.x());
      return;
    case FolOp::Rel:
    case FolOp::Eq:
      if (!bound.count(f.x())) out.insert(f.x());
      if (!bound.count(f.y())) out.insert(f.y());
      return;
    case FolOp::Exists: {
      bool fresh = bound.insert(f.symbol()).second;
      free_vars(f.lhs(), bound, out);
      if (fresh) bound.erase(f.symbol());
      return;
    }
    default:
      if (!f.lhs().is_null()) free_vars(f.lhs(), bound, out);
      if (!f.rhs().is_null()) free_vars(f.rhs(), bound, out);
  }
}

bool bound_once(const Fol& f, std::set<std::string>& seen) {
  if (f.op() == FolOp::Exists && !seen.insert(f.symbol()).second) return false;
  if (!f.lhs().is_null() && !bound_once(f.lhs(), seen)) return false;
  if (!f.rhs().is_null() && !bound_once(f.rhs(), seen)) return false;
  return true;
}

}  // namespace

std::set<std::string> fol_free_vars(const Fol& f) {
  std::set<std::string> bound, out;
  free_vars(f, bound, out);
  return out;
}

bool fol_bound_once(const Fol& f) {
  std::set<std::string> seen;
  return bound_once(f, seen);
}

// ---------------------------------------------------------------- text form

namespace {

void emit(const Fol& f, std::string& out) {
  switch (f.op()) {
    case FolOp::Pred:
      out += "(" + f.symbol() + " " + f.x() + ")";
      return;
    case FolOp::Rel:
      out += "(" + f.symbol() + " " + f.x() + " " + f.y() + ")";
      return;
    case FolOp::Eq:
      out += "(= " + f.x() + " " + f.y() + ")";
      return;
    case FolOp::Neg:
      out += "(not ";
      emit(f.lhs(), out);
      out += ")";
      return;
    case FolOp::Or:
    case FolOp::And:
      out += f.op() == FolOp::Or ? "(or " : "(and ";
      emit(f.lhs(), out);
      out += " ";
      emit(f.rhs(), out);
      out += ")";
      return;
    case FolOp::Exists:
      out += "(exists " + f.symbol() + " ";
      emit(f.lhs(), out);
      out += ")";
      return;
  }
}

class FolParser {
 public:
  explicit FolParser(std::string_view s) : s_(s) {}

  Fol run() {
    Fol f = expr();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return f;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& m) { throw ParseError("FOL syntax error: " + m, i_); }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  std::string word() {
    skip();
    std::size_t b = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' && s_[i_] != ')')
      ++i_;
    if (b == i_) fail("expected a symbol");
    return std::string(s_.substr(b, i_ - b));
  }
  void expect(char c) {
    skip();
    if (i_ >= s_.size() || s_[i_] != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }

  Fol expr() {
    expect('(');
    std::size_t at = i_;
    std::string head = word();
    Fol r;
    if (head == "not") {
      r = fol_not(expr());
    } else if (head == "and" || head == "or") {
      Fol a = expr();
      Fol b = expr();
      r = head == "and" ? fol_and(a, b) : fol_or(a, b);
    } else if (head == "exists") {
      std::string v = word();
      r = fol_exists(v, expr());
    } else if (head == "=") {
      std::string a = word();
      r = fol_eq(a, word());
    } else if (head.rfind("R_", 0) == 0) {
      std::string a = word();
      r = fol_rel(head, a, word());
    } else if (head.rfind("P_", 0) == 0 || head.rfind("N_", 0) == 0) {
      r = fol_pred(head, word());
    } else {
      throw ParseError("FOL syntax error: unknown head '" + head + "'", at);
    }
    expect(')');
    return r;
  }
};

}  // namespace

std::string fol_print(const Fol& f) {
  std::string out;
  emit(f, out);
  return out;
}

Fol fol_parse(std::string_view text) { return FolParser(text).run(); }

}  // namespace mlsr
