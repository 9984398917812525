#include "mlsr/formula.hpp"

#include <cctype>
#include <functional>

namespace mlsr {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Formula make(Op op, std::string name, Formula a = {}, Formula b = {}) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->name = std::move(name);
  n->a = std::move(a);
  n->b = std::move(b);
  std::size_t h = mix(static_cast<std::size_t>(op) + 1, std::hash<std::string>{}(n->name));
  if (!n->a.is_null()) {
    h = mix(h, n->a.hash());
    n->size += n->a.size();
    n->depth = std::max(n->depth, n->a.depth() + 1);
  }
  if (!n->b.is_null()) {
    h = mix(h, n->b.hash());
    n->size += n->b.size();
    n->depth = std::max(n->depth, n->b.depth() + 1);
  }
  n->hash = h;
  return Formula(std::move(n));
}

}  // namespace

bool operator==(const Formula& x, const Formula& y) {
  const Node* a = x.get();
  const Node* b = y.get();
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->op != b->op || a->size != b->size || a->name != b->name)
    return false;
  return a->a == b->a && a->b == b->b;
}

Formula prop(std::string name) { return make(Op::Prop, std::move(name)); }
Formula nominal(std::string name) { return make(Op::Nominal, std::move(name)); }
Formula top() {
  static const Formula t = make(Op::Top, "");
  return t;
}
Formula bot() {
  static const Formula f = make(Op::Bot, "");
  return f;
}
Formula neg(Formula a) { return make(Op::Neg, "", std::move(a)); }
Formula disj(Formula a, Formula b) { return make(Op::Or, "", std::move(a), std::move(b)); }
Formula conj(Formula a, Formula b) { return make(Op::And, "", std::move(a), std::move(b)); }
Formula implies(Formula a, Formula b) { return make(Op::Implies, "", std::move(a), std::move(b)); }
Formula iff(Formula a, Formula b) { return make(Op::Iff, "", std::move(a), std::move(b)); }
Formula dia(Formula a, std::string label) { return make(Op::Diamond, std::move(label), std::move(a)); }
Formula box(Formula a, std::string label) { return make(Op::Box, std::move(label), std::move(a)); }
Formula ann(Formula x, Formula body) { return make(Op::Announce, "", std::move(x), std::move(body)); }
Formula ann_box(Formula x, Formula body) { return make(Op::AnnBox, "", std::move(x), std::move(body)); }
Formula rem(Formula x, Formula body) { return make(Op::Remove, "", std::move(x), std::move(body)); }
Formula rem_box(Formula x, Formula body) { return make(Op::RemBox, "", std::move(x), std::move(body)); }
Formula exists(Formula a) { return make(Op::Exists, "", std::move(a)); }
Formula univ(Formula a) { return make(Op::Univ, "", std::move(a)); }
Formula diff(Formula a) { return make(Op::Diff, "", std::move(a)); }
Formula at(std::string nom, Formula a) { return make(Op::At, std::move(nom), std::move(a)); }

Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = conj(fs[i], acc);
  return acc;
}

Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bot();
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = disj(fs[i], acc);
  return acc;
}

Formula with_children(const Formula& f, Formula a, Formula b) {
  if (f.lhs() == a && f.rhs() == b) return f;
  return make(f.op(), f.name(), std::move(a), std::move(b));
}

bool is_atom(Op op) { return op == Op::Prop || op == Op::Nominal || op == Op::Top || op == Op::Bot; }

bool is_unary(Op op) {
  switch (op) {
    case Op::Neg:
    case Op::Diamond:
    case Op::Box:
    case Op::Exists:
    case Op::Univ:
    case Op::Diff:
    case Op::At:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) { return !is_atom(op) && !is_unary(op); }

bool is_core(const Formula& f) {
  switch (f.op()) {
    case Op::Prop:
    case Op::Nominal:
    case Op::Top:
      return true;
    case Op::Neg:
    case Op::Diamond:
    case Op::Exists:
      return is_core(f.lhs());
    case Op::Or:
    case Op::Announce:
    case Op::Remove:
      return is_core(f.lhs()) && is_core(f.rhs());
    default:
      return false;
  }
}

namespace {

void collect(const Formula& f, std::set<std::string>& props, std::set<std::string>& noms,
             std::set<std::string>& labels) {
  switch (f.op()) {
    case Op::Prop:
      props.insert(f.name());
      break;
    case Op::Nominal:
      noms.insert(f.name());
      break;
    case Op::At:
      noms.insert(f.name());
      break;
    case Op::Diamond:
    case Op::Box:
      labels.insert(f.name());
      break;
    default:
      break;
  }
  if (!f.lhs().is_null()) collect(f.lhs(), props, noms, labels);
  if (!f.rhs().is_null()) collect(f.rhs(), props, noms, labels);
}

}  // namespace

std::set<std::string> props_of(const Formula& f) {
  std::set<std::string> p, n, l;
  collect(f, p, n, l);
  return p;
}

std::set<std::string> nominals_of(const Formula& f) {
  std::set<std::string> p, n, l;
  collect(f, p, n, l);
  return n;
}

std::set<std::string> labels_of(const Formula& f) {
  std::set<std::string> p, n, l;
  collect(f, p, n, l);
  return l;
}

// ---------------------------------------------------------------- parser

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool reserved(std::string_view w) {
  return w == "T" || w == "F" || w == "E" || w == "U" || w == "D";
}

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& opts) : s_(text), opts_(opts) {}

  Formula run() {
    Formula f = formula();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return f;
  }

 private:
  std::string_view s_;
  const ParseOptions& opts_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, i_); }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool peek(std::string_view tok) {
    skip();
    return s_.substr(i_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    i_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string ident() {
    skip();
    if (i_ >= s_.size() || !ident_start(s_[i_])) fail("expected identifier");
    std::size_t b = i_;
    while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
    return std::string(s_.substr(b, i_ - b));
  }

  Formula formula() { return iff_level(); }

  Formula iff_level() {
    Formula f = imp_level();
    while (accept("<->")) f = iff(f, imp_level());
    return f;
  }

  Formula imp_level() {
    Formula f = or_level();
    while (accept("->")) f = implies(f, or_level());
    return f;
  }

  Formula or_level() {
    Formula f = and_level();
    while (accept("|")) f = disj(f, and_level());
    return f;
  }

  Formula and_level() {
    Formula f = unary();
    while (accept("&")) f = conj(f, unary());
    return f;
  }

  std::string label_until(char close) {
    skip();
    if (i_ < s_.size() && s_[i_] == close) {
      ++i_;
      return kDefaultLabel;
    }
    std::size_t at = i_;
    std::string l = ident();
    if (!opts_.labels.count(l)) throw ParseError("unknown relation label '" + l + "'", at);
    skip();
    if (i_ >= s_.size() || s_[i_] != close) fail(std::string("expected '") + close + "'");
    ++i_;
    return l;
  }

  Formula unary() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    if (accept("~")) return neg(unary());
    if (accept("<!")) {
      Formula a = formula();
      expect(">");
      return ann(a, unary());
    }
    if (accept("[!")) {
      Formula a = formula();
      expect("]");
      return ann_box(a, unary());
    }
    if (accept("<-")) {
      Formula a = formula();
      expect(">");
      return rem(a, unary());
    }
    if (accept("[-")) {
      Formula a = formula();
      expect("]");
      return rem_box(a, unary());
    }
    if (accept("<")) {
      std::string l = label_until('>');
      return dia(unary(), l);
    }
    if (accept("[")) {
      std::string l = label_until(']');
      return box(unary(), l);
    }
    if (accept("@")) {
      expect("'");
      std::string n = ident();
      return at(n, unary());
    }
    return atom();
  }

  Formula atom() {
    skip();
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    if (accept("'")) return nominal(ident());
    if (i_ < s_.size() && ident_start(s_[i_])) {
      std::string w = ident();
      if (w == "T") return top();
      if (w == "F") return bot();
      if (w == "E") return exists(unary());
      if (w == "U") return univ(unary());
      if (w == "D") return diff(unary());
      return prop(w);
    }
    fail("unexpected '" + std::string(1, s_[i_]) + "'");
  }
};

}  // namespace

Formula parse(std::string_view text, const ParseOptions& opts) { return Parser(text, opts).run(); }

// ---------------------------------------------------------------- printer

namespace {

int prec(Op op) {
  switch (op) {
    case Op::Iff:
      return 1;
    case Op::Implies:
      return 2;
    case Op::Or:
      return 3;
    case Op::And:
      return 4;
    default:
      return 5;
  }
}

const char* binop(Op op) {
  switch (op) {
    case Op::Iff:
      return "<->";
    case Op::Implies:
      return "->";
    case Op::Or:
      return "|";
    default:
      return "&";
  }
}

void emit(const Formula& f, std::string& out);

void emit_wrapped(const Formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  emit(f, out);
  if (parens) out += ')';
}

// Prefix operators spelled with a letter need a space before an operand that
// would otherwise glue onto the keyword.
void emit_operand(const Formula& f, std::string& out, bool after_word) {
  std::string sub;
  emit_wrapped(f, prec(f.op()) < 5, sub);
  if (after_word && !sub.empty() && ident_char(sub[0])) out += ' ';
  out += sub;
}

void emit(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::Prop:
      if (reserved(f.name())) throw Error("proposition name '" + f.name() + "' is a reserved word");
      out += f.name();
      return;
    case Op::Nominal:
      out += '\'';
      out += f.name();
      return;
    case Op::Top:
      out += 'T';
      return;
    case Op::Bot:
      out += 'F';
      return;
    case Op::Neg:
      out += '~';
      emit_operand(f.lhs(), out, false);
      return;
    case Op::Or:
    case Op::And:
    case Op::Implies:
    case Op::Iff: {
      int p = prec(f.op());
      emit_wrapped(f.lhs(), prec(f.lhs().op()) < p, out);
      out += binop(f.op());
      emit_wrapped(f.rhs(), prec(f.rhs().op()) <= p, out);
      return;
    }
    case Op::Diamond:
    case Op::Box: {
      bool d = f.op() == Op::Diamond;
      out += d ? '<' : '[';
      if (f.name() != kDefaultLabel) out += f.name();
      out += d ? '>' : ']';
      emit_operand(f.lhs(), out, false);
      return;
    }
    case Op::Announce:
    case Op::AnnBox:
    case Op::Remove:
    case Op::RemBox: {
      bool d = f.op() == Op::Announce || f.op() == Op::Remove;
      bool a = f.op() == Op::Announce || f.op() == Op::AnnBox;
      out += d ? '<' : '[';
      out += a ? '!' : '-';
      emit(f.lhs(), out);
      out += d ? '>' : ']';
      emit_operand(f.rhs(), out, false);
      return;
    }
    case Op::Exists:
    case Op::Univ:
    case Op::Diff:
      out += f.op() == Op::Exists ? 'E' : f.op() == Op::Univ ? 'U' : 'D';
      emit_operand(f.lhs(), out, true);
      return;
    case Op::At:
      out += "@'";
      out += f.name();
      emit_operand(f.lhs(), out, true);
      return;
  }
}

}  // namespace

std::string print(const Formula& f) {
  std::string out;
  emit(f, out);
  return out;
}

// ---------------------------------------------------------------- expansion

namespace {

Formula expand_impl(const Formula& f, bool core) {
  auto rec = [core](const Formula& g) { return expand_impl(g, core); };
  switch (f.op()) {
    case Op::Prop:
    case Op::Nominal:
    case Op::Top:
      return f;
    case Op::Bot:
      return neg(top());
    case Op::Neg:
      return with_children(f, rec(f.lhs()));
    case Op::Or:
      return with_children(f, rec(f.lhs()), rec(f.rhs()));
    case Op::And:
      return neg(disj(neg(rec(f.lhs())), neg(rec(f.rhs()))));
    case Op::Implies:
      return disj(neg(rec(f.lhs())), rec(f.rhs()));
    case Op::Iff: {
      Formula a = rec(f.lhs());
      Formula b = rec(f.rhs());
      // (a->b) & (b->a)
      return neg(disj(neg(disj(neg(a), b)), neg(disj(neg(b), a))));
    }
    case Op::Diamond:
      return with_children(f, rec(f.lhs()));
    case Op::Box:
      return neg(dia(neg(rec(f.lhs())), f.name()));
    case Op::Announce:
    case Op::Remove:
      return with_children(f, rec(f.lhs()), rec(f.rhs()));
    case Op::AnnBox:
      return neg(ann(rec(f.lhs()), neg(rec(f.rhs()))));
    case Op::RemBox:
      return neg(rem(rec(f.lhs()), neg(rec(f.rhs()))));
    case Op::Exists: {
      Formula a = rec(f.lhs());
      if (core) return disj(a, rem(a, top()));
      return exists(a);
    }
    case Op::Univ:
      if (core) return rec(univ_via_removal(f.lhs()));
      return neg(exists(neg(rec(f.lhs()))));
    case Op::Diff:
      return rem(rec(f.lhs()), top());
    case Op::At:
      return rec(univ(implies(nominal(f.name()), f.lhs())));
  }
  return f;
}

}  // namespace

Formula expand(const Formula& f) { return expand_impl(f, false); }
Formula expand_core(const Formula& f) { return expand_impl(f, true); }

Formula univ_via_removal(const Formula& a) { return conj(a, rem_box(neg(a), bot())); }

Formula counting_formula(unsigned k) {
  Formula f = top();
  for (unsigned i = 0; i < k; ++i) f = rem(top(), f);
  return f;
}

Formula rho2() { return conj(counting_formula(1), neg(counting_formula(2))); }

// ---------------------------------------------------------------- random

namespace {

class Generator {
 public:
  Generator(std::mt19937_64& rng, const RandomFormulaOptions& o) : rng_(rng), o_(o) {
    unary_.push_back(Op::Neg);
    unary_.push_back(Op::Diamond);
    if (o.exists) unary_.push_back(Op::Exists);
    binary_.push_back(Op::Or);
    if (o.announcements) binary_.push_back(Op::Announce);
    if (o.removals) binary_.push_back(Op::Remove);
    if (o.sugar) {
      unary_.push_back(Op::Box);
      if (o.exists) unary_.push_back(Op::Univ);
      if (o.removals) unary_.push_back(Op::Diff);
      if (o.exists && !o.nominals.empty()) unary_.push_back(Op::At);
      binary_.push_back(Op::And);
      binary_.push_back(Op::Implies);
      binary_.push_back(Op::Iff);
      if (o.announcements) binary_.push_back(Op::AnnBox);
      if (o.removals) binary_.push_back(Op::RemBox);
    }
  }

  Formula gen(int depth) {
    if (depth <= 0 || pick(4) == 0) return atom();
    if (pick(2) == 0) {
      Op op = unary_[pick(unary_.size())];
      Formula a = gen(depth - 1);
      switch (op) {
        case Op::Neg:
          return neg(a);
        case Op::Diamond:
          return dia(a, o_.labels[pick(o_.labels.size())]);
        case Op::Box:
          return box(a, o_.labels[pick(o_.labels.size())]);
        case Op::Exists:
          return exists(a);
        case Op::Univ:
          return univ(a);
        case Op::Diff:
          return diff(a);
        default:
          return at(o_.nominals[pick(o_.nominals.size())], a);
      }
    }
    Op op = binary_[pick(binary_.size())];
    Formula a = gen(depth - 1);
    Formula b = gen(depth - 1);
    switch (op) {
      case Op::Or:
        return disj(a, b);
      case Op::And:
        return conj(a, b);
      case Op::Implies:
        return implies(a, b);
      case Op::Iff:
        return iff(a, b);
      case Op::Announce:
        return ann(a, b);
      case Op::AnnBox:
        return ann_box(a, b);
      case Op::Remove:
        return rem(a, b);
      default:
        return rem_box(a, b);
    }
  }

 private:
  std::mt19937_64& rng_;
  const RandomFormulaOptions& o_;
  std::vector<Op> unary_;
  std::vector<Op> binary_;

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  Formula atom() {
    std::size_t n = o_.props.size() + o_.nominals.size() + 1 + (o_.sugar ? 1 : 0);
    std::size_t k = pick(n);
    if (k < o_.props.size()) return prop(o_.props[k]);
    k -= o_.props.size();
    if (k < o_.nominals.size()) return nominal(o_.nominals[k]);
    k -= o_.nominals.size();
    return k == 0 ? top() : bot();
  }
};

}  // namespace

Formula random_formula(std::mt19937_64& rng, const RandomFormulaOptions& opts) {
  return Generator(rng, opts).gen(opts.max_depth);
}

}  // namespace mlsr
