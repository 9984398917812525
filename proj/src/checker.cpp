#include "mlsr/checker.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <numeric>

#include "json.hpp"

namespace mlsr {

namespace {

int slot_of(std::vector<std::string>& names, const std::string& n) {
  auto it = std::find(names.begin(), names.end(), n);
  if (it != names.end()) return static_cast<int>(it - names.begin());
  names.push_back(n);
  return static_cast<int>(names.size()) - 1;
}

std::string fingerprint(const WorldSet& s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(s.hash()));
  return buf;
}

const std::vector<WorldSet> kNoSucc;

}  // namespace

Evaluator::Evaluator(const Formula& f, CheckOptions opts) : opts_(opts) {
  std::unordered_map<Formula, int, FormulaHash> seen;
  nodes_.reserve(f.size());
  nodes_.push_back({});  // root placeholder keeps index 0
  int r = compile(f, seen);
  nodes_[0] = nodes_[r];
  // Children of the copy still point to the original slots, which is fine.
}

Evaluator::Evaluator(const IndexedModel& m, const Formula& f, CheckOptions opts) : Evaluator(f, opts) {
  bind(m);
}

int Evaluator::compile(const Formula& f, std::unordered_map<Formula, int, FormulaHash>& seen) {
  if (auto it = seen.find(f); it != seen.end()) return it->second;
  CNode n;
  n.op = f.op();
  n.src = f;
  switch (f.op()) {
    case Op::Prop:
      n.slot = slot_of(prop_names_, f.name());
      break;
    case Op::Nominal:
    case Op::At:
      n.slot = slot_of(nominal_names_, f.name());
      break;
    case Op::Diamond:
    case Op::Box:
      n.slot = slot_of(label_names_, f.name());
      break;
    default:
      break;
  }
  if (!f.lhs().is_null()) n.a = compile(f.lhs(), seen);
  if (!f.rhs().is_null()) n.b = compile(f.rhs(), seen);
  n.cost = f.size();
  nodes_.push_back(n);
  int id = static_cast<int>(nodes_.size()) - 1;
  seen.emplace(f, id);
  return id;
}

void Evaluator::bind(const IndexedModel& m) {
  model_ = &m;
  label_succ_.assign(label_names_.size(), &kNoSucc);
  for (std::size_t i = 0; i < label_names_.size(); ++i) {
    int li = m.label_index(label_names_[i]);
    if (li >= 0) label_succ_[i] = &m.succ[li];
  }
  prop_sets_.assign(prop_names_.size(), WorldSet{});
  for (std::size_t i = 0; i < prop_names_.size(); ++i)
    if (auto it = m.props.find(prop_names_[i]); it != m.props.end()) prop_sets_[i] = it->second;
  nominal_worlds_.assign(nominal_names_.size(), -1);
  for (std::size_t i = 0; i < nominal_names_.size(); ++i)
    if (auto it = m.nominals.find(nominal_names_[i]); it != m.nominals.end()) nominal_worlds_[i] = it->second;
  memo_.clear();
  ext_memo_.clear();
}

const WorldSet& Evaluator::succ(int slot, int s) const {
  static const WorldSet none;
  const auto* v = label_succ_[slot];
  return v->empty() ? none : (*v)[s];
}

bool Evaluator::at(int point, const WorldSet& alive) {
  if (!model_) throw Error("evaluator is not bound to a model");
  if (point < 0 || !alive.test(point)) throw InputError("evaluation point is not in the model");
  return eval(0, point, alive);
}

WorldSet Evaluator::extension(const WorldSet& alive) { return ext(0, alive); }

std::optional<TraceNode> Evaluator::take_trace() {
  auto t = std::move(trace_root_);
  trace_root_.reset();
  return t;
}

bool Evaluator::eval(int node, int s, const WorldSet& alive) {
  const bool use_memo = opts_.memo || opts_.trace;
  Key key{node, s, alive};
  if (use_memo) {
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  if (!opts_.trace) {
    bool v = raw(node, s, alive);
    if (use_memo) memo_.emplace(key, v);
    return v;
  }
  TraceNode tn;
  tn.formula = print(nodes_[node].src);
  tn.fingerprint = fingerprint(alive);
  tn.point = model_->names[s];
  TraceNode* slot;
  if (trace_stack_.empty()) {
    trace_root_ = std::move(tn);
    slot = &*trace_root_;
  } else {
    trace_stack_.back()->children.push_back(std::move(tn));
    slot = &trace_stack_.back()->children.back();
  }
  trace_stack_.push_back(slot);
  bool v = raw(node, s, alive);
  trace_stack_.pop_back();
  // `slot` may have moved if a sibling vector grew; re-fetch through parent.
  TraceNode* self = trace_stack_.empty() ? &*trace_root_ : &trace_stack_.back()->children.back();
  self->value = v;
  memo_.emplace(key, v);
  return v;
}

// Some world of `cands` satisfies node. Disjunctions are split so that cheap
// disjuncts are tried on all candidates first.
bool Evaluator::some(int node, const WorldSet& cands, const WorldSet& alive) {
  if (cands.empty()) return false;
  const CNode& n = nodes_[node];
  if (!opts_.trace) {
    switch (n.op) {
      case Op::Top:
        return true;
      case Op::Bot:
        return false;
      case Op::Prop:
        return cands.intersects(prop_sets_[n.slot]);
      case Op::Nominal: {
        int w = nominal_worlds_[n.slot];
        return w >= 0 && cands.test(w);
      }
      case Op::Or: {
        int x = n.a, y = n.b;
        if (nodes_[y].cost < nodes_[x].cost) std::swap(x, y);
        return some(x, cands, alive) || some(y, cands, alive);
      }
      default:
        break;
    }
  }
  for (int t = cands.first(); t >= 0; t = cands.next(t + 1))
    if (eval(node, t, alive)) return true;
  return false;
}

bool Evaluator::every(int node, const WorldSet& cands, const WorldSet& alive) {
  if (cands.empty()) return true;
  const CNode& n = nodes_[node];
  if (!opts_.trace) {
    switch (n.op) {
      case Op::Top:
        return true;
      case Op::Bot:
        return false;
      case Op::Prop:
        return (cands & prop_sets_[n.slot]) == cands;
      case Op::Neg:
        return !some(n.a, cands, alive);
      case Op::And: {
        int x = n.a, y = n.b;
        if (nodes_[y].cost < nodes_[x].cost) std::swap(x, y);
        return every(x, cands, alive) && every(y, cands, alive);
      }
      default:
        break;
    }
  }
  for (int t = cands.first(); t >= 0; t = cands.next(t + 1))
    if (!eval(node, t, alive)) return false;
  return true;
}

WorldSet Evaluator::ext(int node, const WorldSet& alive) {
  const bool use_memo = opts_.memo || opts_.trace;
  Key key{node, -1, alive};
  if (use_memo) {
    if (auto it = ext_memo_.find(key); it != ext_memo_.end()) return it->second;
  }
  WorldSet out;
  alive.for_each([&](int t) {
    if (eval(node, t, alive)) out.set(t);
  });
  if (use_memo) ext_memo_.emplace(key, out);
  return out;
}

bool Evaluator::raw(int node, int s, const WorldSet& alive) {
  const CNode& n = nodes_[node];
  switch (n.op) {
    case Op::Prop:
      return prop_sets_[n.slot].test(s);
    case Op::Nominal:
      return nominal_worlds_[n.slot] == s;
    case Op::Top:
      return true;
    case Op::Bot:
      return false;
    case Op::Neg:
      return !eval(n.a, s, alive);
    case Op::Or:
      return eval(n.a, s, alive) || eval(n.b, s, alive);
    case Op::And:
      return eval(n.a, s, alive) && eval(n.b, s, alive);
    case Op::Implies:
      return !eval(n.a, s, alive) || eval(n.b, s, alive);
    case Op::Iff:
      return eval(n.a, s, alive) == eval(n.b, s, alive);
    case Op::Diamond:
      return some(n.a, succ(n.slot, s) & alive, alive);
    case Op::Box:
      return every(n.a, succ(n.slot, s) & alive, alive);
    case Op::Announce:
      return eval(n.a, s, alive) && eval(n.b, s, ext(n.a, alive));
    case Op::AnnBox:
      return !eval(n.a, s, alive) || eval(n.b, s, ext(n.a, alive));
    case Op::Remove: {
      WorldSet cands = alive.without(s);
      for (int t = cands.first(); t >= 0; t = cands.next(t + 1))
        if (eval(n.a, t, alive) && eval(n.b, s, alive.without(t))) return true;
      return false;
    }
    case Op::RemBox: {
      WorldSet cands = alive.without(s);
      for (int t = cands.first(); t >= 0; t = cands.next(t + 1))
        if (eval(n.a, t, alive) && !eval(n.b, s, alive.without(t))) return false;
      return true;
    }
    case Op::Exists:
      return some(n.a, alive, alive);
    case Op::Univ:
      return every(n.a, alive, alive);
    case Op::Diff:
      return some(n.a, alive.without(s), alive);
    case Op::At: {
      int w = nominal_worlds_[n.slot];
      if (w < 0 || !alive.test(w)) return true;
      return eval(n.a, w, alive);
    }
  }
  return false;
}

// ---------------------------------------------------------------- API

namespace {

nlohmann::json trace_json(const TraceNode& t) {
  nlohmann::json j;
  j["formula"] = t.formula;
  j["model"] = t.fingerprint;
  j["point"] = t.point;
  j["value"] = t.value;
  j["children"] = nlohmann::json::array();
  for (const auto& c : t.children) j["children"].push_back(trace_json(c));
  return j;
}

}  // namespace

std::string trace_to_json(const TraceNode& t, int indent) { return trace_json(t).dump(indent); }

CheckResult check_ex(const Model& m, const std::string& point, const Formula& f, const CheckOptions& opts) {
  if (m.worlds.empty()) throw InputError("cannot evaluate in the empty model");
  IndexedModel im = IndexedModel::from(m);
  int s = im.world(point);
  Evaluator ev(im, f, opts);
  CheckResult r;
  r.value = ev.at(s);
  if (opts.trace) r.trace = ev.take_trace();
  return r;
}

bool check(const Model& m, const std::string& point, const Formula& f) {
  return check_ex(m, point, f, {}).value;
}

bool check(const PointedModel& pm, const Formula& f) { return check(pm.model, pm.point, f); }

bool valid_on(const Model& m, const Formula& f) {
  if (m.worlds.empty()) throw InputError("validity on the empty model is undefined");
  IndexedModel im = IndexedModel::from(m);
  Evaluator ev(im, f);
  for (int s = 0; s < im.size(); ++s)
    if (!ev.at(s)) return false;
  return true;
}

const std::vector<std::uint32_t>& digraph_representatives(unsigned n) {
  static std::mutex mu;
  static std::vector<std::vector<std::uint32_t>> cache(6);
  if (n == 0 || n > 5) throw InputError("digraph representatives are available for 1..5 nodes");
  std::lock_guard<std::mutex> lock(mu);
  auto& out = cache[n];
  if (!out.empty()) return out;
  if (n == 5) throw InputError("digraph representatives for 5 nodes are not precomputed");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  const std::uint32_t total = 1u << (n * n);
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    bool minimal = true;
    for (const auto& q : perms) {
      std::uint32_t img = 0;
      for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j)
          if (mask >> (i * n + j) & 1) img |= 1u << (q[i] * n + q[j]);
      if (img < mask) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(mask);
  }
  return out;
}

std::optional<PointedModel> find_countermodel(const Formula& f, unsigned max_worlds,
                                              const std::vector<std::string>& labels,
                                              std::optional<std::vector<std::string>> props) {
  if (max_worlds == 0) throw InputError("find_countermodel needs max_worlds >= 1");
  std::vector<std::string> ps;
  if (props) {
    ps = *props;
  } else {
    auto s = props_of(f);
    ps.assign(s.begin(), s.end());
  }
  auto noms_set = nominals_of(f);
  std::vector<std::string> noms(noms_set.begin(), noms_set.end());
  std::vector<std::string> ls = labels;
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());

  Evaluator ev(f);
  for (unsigned n = 1; n <= max_worlds; ++n) {
    const unsigned cells = n * n;
    const unsigned val_bits = n * static_cast<unsigned>(ps.size());
    if (val_bits > 30 || (ls.size() != 1 && cells * ls.size() > 30))
      throw InputError("countermodel search scope too large");
    std::vector<std::uint32_t> rels;
    if (ls.size() == 1 && n <= 4) {
      rels = digraph_representatives(n);
    } else {
      std::uint64_t total = std::uint64_t{1} << (cells * ls.size());
      for (std::uint64_t m = 0; m < total; ++m) rels.push_back(static_cast<std::uint32_t>(m));
    }
    std::uint64_t nom_variants = 1;
    for (std::size_t i = 0; i < noms.size(); ++i) nom_variants *= (n + 1);

    IndexedModel im;
    for (unsigned i = 0; i < n; ++i) {
      im.names.push_back(world_name(i));
      im.index[world_name(i)] = static_cast<int>(i);
    }
    std::sort(im.names.begin(), im.names.end());
    for (int i = 0; i < static_cast<int>(im.names.size()); ++i) im.index[im.names[i]] = i;
    im.all = WorldSet::range(static_cast<int>(n));
    im.labels = ls;
    im.succ.assign(ls.size(), std::vector<WorldSet>(n));

    for (std::uint32_t rel : rels) {
      for (std::size_t l = 0; l < ls.size(); ++l)
        for (unsigned i = 0; i < n; ++i) {
          WorldSet s;
          for (unsigned j = 0; j < n; ++j)
            if (rel >> (l * cells + i * n + j) & 1) s.set(static_cast<int>(j));
          im.succ[l][i] = s;
        }
      for (std::uint64_t val = 0; val < (std::uint64_t{1} << val_bits); ++val) {
        for (std::size_t p = 0; p < ps.size(); ++p) {
          WorldSet s;
          for (unsigned i = 0; i < n; ++i)
            if (val >> (p * n + i) & 1) s.set(static_cast<int>(i));
          im.props[ps[p]] = s;
        }
        for (std::uint64_t nv = 0; nv < nom_variants; ++nv) {
          std::uint64_t rest = nv;
          for (const auto& nm : noms) {
            im.nominals[nm] = static_cast<int>(rest % (n + 1)) - 1;
            rest /= (n + 1);
          }
          ev.bind(im);
          for (unsigned s = 0; s < n; ++s) {
            if (!ev.at(static_cast<int>(s))) {
              PointedModel pm{im.to_model(), im.names[s]};
              pm.model.point = pm.point;
              return pm;
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace mlsr
