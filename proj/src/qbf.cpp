#include "mlsr/qbf.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "mlsr/checker.hpp"
#include "mlsr/error.hpp"
#include "mlsr/indexed.hpp"

namespace mlsr {

using nlohmann::json;

void QbfInstance::validate() const {
  if (prefix.empty()) throw InputError("qbf: empty prefix");
  if (clauses.empty()) throw InputError("qbf: no clauses");
  std::set<int> vars;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i].second < 1) throw InputError("qbf: variable indices start at 1");
    if (!vars.insert(prefix[i].second).second)
      throw InputError("qbf: variable x" + std::to_string(prefix[i].second) + " quantified twice");
    if (i > 0 && prefix[i].first == prefix[i - 1].first) throw InputError("qbf: quantifiers must alternate");
  }
  for (const auto& c : clauses)
    for (const auto& l : c)
      if (!vars.count(l.var)) throw InputError("qbf: literal over unquantified variable x" + std::to_string(l.var));
}

QbfInstance qbf_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("qbf: malformed JSON: ") + e.what());
  }
  QbfInstance q;
  try {
    for (const auto& p : j.at("prefix")) {
      std::string qs = p.at(0).get<std::string>();
      if (qs != "A" && qs != "E") throw InputError("qbf: quantifier must be \"A\" or \"E\"");
      q.prefix.emplace_back(qs == "A" ? Quant::Forall : Quant::Exists, p.at(1).get<int>());
    }
    for (const auto& c : j.at("clauses")) {
      std::vector<Literal> lits;
      for (const auto& l : c) lits.push_back(Literal{l.at(0).get<int>(), l.at(1).get<bool>()});
      q.clauses.push_back(std::move(lits));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("qbf: bad instance: ") + e.what());
  }
  q.validate();
  return q;
}

std::string qbf_to_json(const QbfInstance& q) {
  json j;
  j["prefix"] = json::array();
  for (const auto& [qt, v] : q.prefix) j["prefix"].push_back({qt == Quant::Forall ? "A" : "E", v});
  j["clauses"] = json::array();
  for (const auto& c : q.clauses) {
    json cj = json::array();
    for (const auto& l : c) cj.push_back({l.var, l.positive});
    j["clauses"].push_back(cj);
  }
  return j.dump();
}

QbfInstance load_qbf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return qbf_from_json(ss.str());
}

std::string qbf_to_string(const QbfInstance& q) {
  std::string out;
  for (const auto& [qt, v] : q.prefix) out += (qt == Quant::Forall ? "A" : "E") + std::to_string(v) + " ";
  out += ":";
  for (std::size_t i = 0; i < q.clauses.size(); ++i) {
    out += i ? " & (" : " (";
    for (std::size_t k = 0; k < q.clauses[i].size(); ++k) {
      if (k) out += " | ";
      out += (q.clauses[i][k].positive ? "x" : "~x") + std::to_string(q.clauses[i][k].var);
    }
    out += ")";
  }
  return out;
}

bool brute_eval(const QbfInstance& q) {
  q.validate();
  if (q.num_vars() > 20) throw InputError("qbf: brute force is limited to 20 variables");
  std::map<int, bool> val;
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == q.prefix.size()) {
      for (const auto& c : q.clauses) {
        bool sat = false;
        for (const auto& l : c) sat = sat || val.at(l.var) == l.positive;
        if (!sat) return false;
      }
      return true;
    }
    auto [qt, v] = q.prefix[i];
    bool any = false, all = true;
    for (bool b : {true, false}) {
      val[v] = b;
      bool r = go(i + 1);
      any = any || r;
      all = all && r;
    }
    return qt == Quant::Exists ? any : all;
  };
  return go(0);
}

namespace {

std::string vs(int v) { return std::to_string(v); }
std::string lit_node(int v, bool positive) { return (positive ? "x" : "nx") + vs(v); }
std::string level(int v) { return "p" + vs(v); }

// A literal node with its own goal point plus the goal shared with its parent.
void add_literal(Model& m, const std::string& parent, const std::string& node) {
  std::string shared = "g_" + parent, own = "g_" + node;
  m.add_edge(parent, node).add_edge(parent, shared);
  m.add_edge(node, shared).add_edge(node, own);
  m.set_true("g", shared);
  m.set_true("g", own);
}

}  // namespace

PointedModel build_model(const QbfInstance& q) {
  q.validate();
  Model m;
  m.add_world("s");
  int v1 = q.prefix[0].second;
  std::string bp = "m" + vs(v1) + "p", bn = "m" + vs(v1) + "n";
  m.add_edge("s", bp).add_edge("s", bn);
  m.set_true(level(v1), bp);
  m.set_true(level(v1), bn);
  add_literal(m, bp, lit_node(v1, true));
  add_literal(m, bn, lit_node(v1, false));
  int prev = v1;
  for (std::size_t i = 1; i < q.prefix.size(); ++i) {
    auto [qt, v] = q.prefix[i];
    std::string a = lit_node(prev, true), b = lit_node(prev, false);
    std::string mp = "m" + vs(v) + "p", mn = "m" + vs(v) + "n";
    if (qt == Quant::Exists) {
      for (const auto& from : {a, b}) m.add_edge(from, mp).add_edge(from, mn);
    } else {
      std::string rp = "r" + vs(v) + "p", rn = "r" + vs(v) + "n";
      m.add_edge(a, rp).add_edge(b, rn);
      for (const auto& from : {rp, rn}) m.add_edge(from, mp).add_edge(from, mn);
      m.set_true(level(v), mp);
      m.set_true(level(v), mn);
    }
    add_literal(m, mp, lit_node(v, true));
    add_literal(m, mn, lit_node(v, false));
    prev = v;
  }
  m.add_edge(lit_node(prev, true), "h_p").add_edge(lit_node(prev, false), "h_n");
  for (int i = 1; i <= q.num_clauses(); ++i) {
    std::string c = "c" + vs(i);
    m.add_edge("h_p", c).add_edge("h_n", c);
    m.set_true(c, c);
    // Edges point at the dual of every literal of the clause.
    for (const auto& l : q.clauses[i - 1]) m.add_edge(c, lit_node(l.var, !l.positive));
  }
  m.point = "s";
  return {m, "s"};
}

Formula exactly_one_clause(int k) {
  std::vector<Formula> ds;
  for (int i = 1; i <= k; ++i) {
    std::vector<Formula> cs{prop("c" + vs(i))};
    for (int j = 1; j <= k; ++j)
      if (j != i) cs.push_back(neg(prop("c" + vs(j))));
    ds.push_back(conj_all(cs));
  }
  return disj_all(ds);
}

GameSchedule build_schedule(const QbfInstance& q, GoalRule goal) {
  q.validate();
  GameSchedule s;
  s.goal = goal;
  auto demon = [&](Formula r) { s.rounds.push_back(Round{Round::DemonDelete, std::move(r)}); };
  auto travel = [&] { s.rounds.push_back(Round{Round::TravelerMove, Formula()}); };

  // Initial module: from s onto a branch node, then onto its literal.
  if (q.prefix[0].first == Quant::Forall) demon(prop(level(q.prefix[0].second)));
  travel();
  demon(top());
  travel();
  for (std::size_t i = 1; i < q.prefix.size(); ++i) {
    auto [qt, v] = q.prefix[i];
    demon(top());
    travel();
    if (qt == Quant::Forall) {
      demon(prop(level(v)));
      travel();
    }
    demon(top());
    travel();
  }
  // Onto a hub, leave one clause vertex, then through the clause.
  demon(top());
  travel();
  for (int i = 1; i < q.num_clauses(); ++i) demon(exactly_one_clause(q.num_clauses()));
  travel();
  travel();
  demon(top());
  travel();
  return s;
}

Formula schedule_formula(const GameSchedule& sched) {
  const Formula g = prop("g");
  Formula acc = g;
  for (std::size_t i = sched.rounds.size(); i-- > 0;) {
    const Round& r = sched.rounds[i];
    if (r.kind == Round::DemonDelete) {
      acc = rem_box(r.restriction, acc);
    } else if (sched.goal == GoalRule::Escape && !(acc == g)) {
      acc = dia(disj(g, acc));
    } else {
      acc = dia(acc);
    }
  }
  return acc;
}

Formula build_formula(const QbfInstance& q, GoalRule goal) { return schedule_formula(build_schedule(q, goal)); }

namespace {

struct StateKey {
  WorldSet alive;
  int pos;
  std::size_t round;
  bool operator==(const StateKey&) const = default;
};

struct StateHash {
  std::size_t operator()(const StateKey& k) const {
    return k.alive.hash() ^ (static_cast<std::size_t>(k.pos) * 0x9e3779b97f4a7c15ULL) ^ (k.round << 48);
  }
};

class GameSolver {
 public:
  GameSolver(const PointedModel& pm, const GameSchedule& sched) : sched_(sched) {
    pm.model.validate();
    im_ = IndexedModel::from(pm.model);
    start_ = im_.world(pm.point);
    auto it = im_.props.find("g");
    if (it != im_.props.end()) goal_ = it->second;
    li_ = im_.label_index(kDefaultLabel);
    for (const auto& r : sched.rounds) {
      if (r.kind == Round::DemonDelete) {
        if (r.restriction.is_null()) throw InputError("game: deletion round without restriction");
        evals_.emplace_back(im_, r.restriction);
      } else {
        evals_.emplace_back(im_, top());
      }
    }
  }

  bool wins(const WorldSet& alive, int pos, std::size_t r) {
    if (r == sched_.rounds.size()) return goal_.test(pos);
    StateKey key{alive, pos, r};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool out;
    if (sched_.rounds[r].kind == Round::DemonDelete) {
      out = true;
      for (int w : deletable(alive, pos, r))
        if (!wins(alive.without(w), pos, r + 1)) {
          out = false;
          break;
        }
    } else {
      out = false;
      for (int w : moves(alive, pos))
        if (escapes(w) || wins(alive, w, r + 1)) {
          out = true;
          break;
        }
    }
    memo_.emplace(key, out);
    return out;
  }

  GameResult run() {
    GameResult res;
    WorldSet alive = im_.all;
    int pos = start_;
    res.traveler_wins = wins(alive, pos, 0);
    for (std::size_t r = 0; r < sched_.rounds.size(); ++r) {
      if (sched_.rounds[r].kind == Round::DemonDelete) {
        auto cands = deletable(alive, pos, r);
        if (cands.empty()) break;
        int pick = cands.front();
        for (int w : cands)
          if (!wins(alive.without(w), pos, r + 1)) {
            pick = w;
            break;
          }
        alive.reset(pick);
        res.trace.push_back({r, Round::DemonDelete, im_.names[pick]});
      } else {
        auto ms = moves(alive, pos);
        if (ms.empty()) break;
        int pick = ms.front();
        for (int w : ms)
          if (escapes(w) || wins(alive, w, r + 1)) {
            pick = w;
            break;
          }
        pos = pick;
        res.trace.push_back({r, Round::TravelerMove, im_.names[pick]});
        if (escapes(pick)) break;
      }
    }
    res.positions = memo_.size();
    return res;
  }

 private:
  const GameSchedule& sched_;
  IndexedModel im_;
  int start_ = 0;
  int li_ = -1;
  WorldSet goal_;
  std::vector<Evaluator> evals_;
  std::unordered_map<StateKey, bool, StateHash> memo_;

  bool escapes(int w) const { return sched_.goal == GoalRule::Escape && goal_.test(w); }

  std::vector<int> deletable(const WorldSet& alive, int pos, std::size_t r) {
    std::vector<int> out;
    alive.without(pos).for_each([&](int w) {
      if (evals_[r].at(w, alive)) out.push_back(w);
    });
    return out;
  }

  std::vector<int> moves(const WorldSet& alive, int pos) const {
    std::vector<int> out;
    if (li_ < 0) return out;
    (im_.succ[li_][pos] & alive).for_each([&](int w) { out.push_back(w); });
    return out;
  }
};

}  // namespace

GameResult game_solve_ex(const PointedModel& pm, const GameSchedule& sched) {
  return GameSolver(pm, sched).run();
}

bool game_solve(const PointedModel& pm, const GameSchedule& sched) { return game_solve_ex(pm, sched).traveler_wins; }

std::vector<QbfInstance> qbf_sample() {
  std::vector<QbfInstance> out;
  for (int n = 1; n <= 3; ++n) {
    // Clause pool: each variable absent, positive or negative; not all absent.
    std::vector<std::vector<Literal>> pool;
    int total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (int code = 1; code < total; ++code) {
      std::vector<Literal> c;
      int x = code;
      for (int v = 1; v <= n; ++v, x /= 3)
        if (x % 3) c.push_back(Literal{v, x % 3 == 1});
      pool.push_back(c);
    }
    std::vector<std::vector<int>> lists;
    int p = static_cast<int>(pool.size());
    for (int a = 0; a < p; ++a) lists.push_back({a});
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b) lists.push_back({a, b});
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b)
        for (int c = b + 1; c < p; ++c) lists.push_back({a, b, c});
    // Everything for n <= 2, an even spread of 40 lists for n = 3.
    std::vector<std::vector<int>> chosen;
    if (n <= 2) {
      chosen = lists;
    } else {
      const std::size_t want = 40;
      for (std::size_t i = 0; i < want; ++i) chosen.push_back(lists[i * lists.size() / want]);
    }
    for (Quant first : {Quant::Exists, Quant::Forall}) {
      QbfInstance q;
      Quant cur = first;
      for (int v = 1; v <= n; ++v) {
        q.prefix.emplace_back(cur, v);
        cur = cur == Quant::Exists ? Quant::Forall : Quant::Exists;
      }
      for (const auto& l : chosen) {
        q.clauses.clear();
        for (int i : l) q.clauses.push_back(pool[i]);
        out.push_back(q);
      }
    }
  }
  return out;
}

}  // namespace mlsr
