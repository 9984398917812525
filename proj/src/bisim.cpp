#include "mlsr/bisim.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "mlsr/checker.hpp"
#include "mlsr/error.hpp"

namespace mlsr {

namespace {

// Core-only builders with light simplification.
Formula cneg(const Formula& f) {
  if (f.op() == Op::Neg) return f.lhs();
  return neg(f);
}

Formula cand(const Formula& a, const Formula& b) {
  if (a.op() == Op::Top) return b;
  if (b.op() == Op::Top) return a;
  if (a == b) return a;
  return cneg(disj(cneg(a), cneg(b)));
}

Formula cand_all(std::vector<Formula> fs) {
  std::vector<Formula> uniq;
  for (auto& f : fs)
    if (f.op() != Op::Top && std::find(uniq.begin(), uniq.end(), f) == uniq.end()) uniq.push_back(f);
  if (uniq.empty()) return top();
  Formula r = uniq.back();
  for (std::size_t i = uniq.size() - 1; i-- > 0;) r = cand(uniq[i], r);
  return r;
}

std::vector<std::string> label_union(const Model& a, const Model& b) {
  std::set<std::string> s;
  for (const auto& [l, _] : a.relations) s.insert(l);
  for (const auto& [l, _] : b.relations) s.insert(l);
  if (s.empty()) s.insert("r");
  return {s.begin(), s.end()};
}

std::vector<std::string> prop_union(const Model& a, const Model& b) {
  std::set<std::string> s;
  for (const auto& [p, _] : a.valuation) s.insert(p);
  for (const auto& [p, _] : b.valuation) s.insert(p);
  return {s.begin(), s.end()};
}

// Bitmask view of one model over a shared label/prop vocabulary.
struct Small {
  int n = 0;
  std::vector<std::string> names;
  std::vector<std::vector<std::uint32_t>> succ;  // [label][world]
  std::vector<std::uint64_t> props;               // [world]
};

Small make_small(const Model& m, const std::vector<std::string>& labels,
                 const std::vector<std::string>& props) {
  Small s;
  s.names.assign(m.worlds.begin(), m.worlds.end());
  s.n = static_cast<int>(s.names.size());
  std::map<std::string, int> idx;
  for (int i = 0; i < s.n; ++i) idx[s.names[i]] = i;
  s.succ.assign(labels.size(), std::vector<std::uint32_t>(s.n, 0));
  for (std::size_t l = 0; l < labels.size(); ++l) {
    auto it = m.relations.find(labels[l]);
    if (it == m.relations.end()) continue;
    for (const auto& [a, b] : it->second) s.succ[l][idx.at(a)] |= 1u << idx.at(b);
  }
  s.props.assign(s.n, 0);
  for (std::size_t p = 0; p < props.size(); ++p) {
    auto it = m.valuation.find(props[p]);
    if (it == m.valuation.end()) continue;
    for (const auto& w : it->second) s.props[idx.at(w)] |= std::uint64_t{1} << p;
  }
  return s;
}

template <class F>
void for_bits(std::uint32_t m, F&& f) {
  while (m) {
    int i = std::countr_zero(m);
    m &= m - 1;
    f(i);
  }
}

class TupleSolver {
 public:
  TupleSolver(const PointedModel& pm, const PointedModel& pn, const BisimOptions& opts)
      : labels_(label_union(pm.model, pn.model)), props_(prop_union(pm.model, pn.model)) {
    if (pm.model.worlds.empty() || pn.model.worlds.empty()) throw InputError("bisim: empty model");
    pm.model.validate();
    pn.model.validate();
    if (pm.model.worlds.size() > opts.max_worlds || pn.model.worlds.size() > opts.max_worlds)
      throw InputError("bisim: model exceeds " + std::to_string(opts.max_worlds) + " worlds");
    if (pm.model.worlds.size() > 16 || pn.model.worlds.size() > 16)
      throw InputError("bisim: at most 16 worlds are supported");
    if (props_.size() > 64) throw InputError("bisim: too many propositions");
    if (!pm.model.worlds.count(pm.point) || !pn.model.worlds.count(pn.point))
      throw InputError("bisim: point is not a world of its model");
    m_ = make_small(pm.model, labels_, props_);
    n_ = make_small(pn.model, labels_, props_);
    s0_ = static_cast<int>(std::find(m_.names.begin(), m_.names.end(), pm.point) - m_.names.begin());
    t0_ = static_cast<int>(std::find(n_.names.begin(), n_.names.end(), pn.point) - n_.names.begin());
    levels_ = std::min(m_.n, n_.n);
    index_subsets(m_.n, subm_, idxm_);
    index_subsets(n_.n, subn_, idxn_);
    init();
    solve();
  }

  bool root_alive() const { return stamp(0, 0, s0_, 0, t0_) == 0; }

  Formula root_formula() { return dist(0, 0, s0_, 0, t0_); }

 private:
  enum Kind : std::uint8_t { Atom, Forth, Back, RemA, RemB };
  struct Reason {
    Kind kind;
    std::uint8_t label;
    std::uint8_t witness;
  };

  std::vector<std::string> labels_, props_;
  Small m_, n_;
  int s0_ = 0, t0_ = 0, levels_ = 0;
  std::vector<std::vector<std::uint32_t>> subm_, subn_;  // [level] -> masks
  std::vector<int> idxm_, idxn_;                         // mask -> position in level
  std::vector<std::vector<std::int32_t>> stamps_;        // -1 invalid, 0 alive, >0 removal time
  std::vector<std::vector<Reason>> reasons_;
  std::int32_t clock_ = 0;
  std::map<std::pair<int, std::size_t>, Formula> memo_;

  static void index_subsets(int n, std::vector<std::vector<std::uint32_t>>& by_level, std::vector<int>& idx) {
    by_level.assign(n + 1, {});
    idx.assign(std::size_t{1} << n, 0);
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      auto& v = by_level[std::popcount(m)];
      idx[m] = static_cast<int>(v.size());
      v.push_back(m);
    }
  }

  std::size_t pos(int d, std::uint32_t D, int s, std::uint32_t E, int t) const {
    std::size_t right = subn_[d].size() * n_.n;
    return (static_cast<std::size_t>(idxm_[D]) * m_.n + s) * right + static_cast<std::size_t>(idxn_[E]) * n_.n + t;
  }

  std::int32_t stamp(int d, std::uint32_t D, int s, std::uint32_t E, int t) const {
    return stamps_[d][pos(d, D, s, E, t)];
  }
  bool alive(int d, std::uint32_t D, int s, std::uint32_t E, int t) const { return stamp(d, D, s, E, t) == 0; }

  void init() {
    stamps_.resize(levels_);
    reasons_.resize(levels_);
    for (int d = 0; d < levels_; ++d) {
      std::size_t size = subm_[d].size() * m_.n * subn_[d].size() * n_.n;
      stamps_[d].assign(size, -1);
      reasons_[d].assign(size, Reason{Atom, 0, 0});
      for (auto D : subm_[d])
        for (int s = 0; s < m_.n; ++s) {
          if (D >> s & 1) continue;
          for (auto E : subn_[d])
            for (int t = 0; t < n_.n; ++t) {
              if (E >> t & 1) continue;
              std::size_t p = pos(d, D, s, E, t);
              std::uint64_t diff = m_.props[s] ^ n_.props[t];
              if (diff) {
                stamps_[d][p] = ++clock_;
                reasons_[d][p] = Reason{Atom, 0, static_cast<std::uint8_t>(std::countr_zero(diff))};
              } else {
                stamps_[d][p] = 0;
              }
            }
        }
    }
  }

  bool violated(int d, std::uint32_t D, int s, std::uint32_t E, int t, Reason& why) const {
    std::uint32_t liveM = ((1u << m_.n) - 1) & ~D, liveN = ((1u << n_.n) - 1) & ~E;
    for (std::size_t l = 0; l < labels_.size(); ++l) {
      std::uint32_t sm = m_.succ[l][s] & liveM, sn = n_.succ[l][t] & liveN;
      bool bad = false;
      for_bits(sm, [&](int s2) {
        if (bad) return;
        bool ok = false;
        for_bits(sn, [&](int t2) { ok = ok || alive(d, D, s2, E, t2); });
        if (!ok) {
          bad = true;
          why = Reason{Forth, static_cast<std::uint8_t>(l), static_cast<std::uint8_t>(s2)};
        }
      });
      if (bad) return true;
      for_bits(sn, [&](int t2) {
        if (bad) return;
        bool ok = false;
        for_bits(sm, [&](int s2) { ok = ok || alive(d, D, s2, E, t2); });
        if (!ok) {
          bad = true;
          why = Reason{Back, static_cast<std::uint8_t>(l), static_cast<std::uint8_t>(t2)};
        }
      });
      if (bad) return true;
    }
    std::uint32_t um = liveM & ~(1u << s), vn = liveN & ~(1u << t);
    auto linked = [&](int u, int v) {
      return alive(d, D, u, E, v) && alive(d + 1, D | 1u << u, s, E | 1u << v, t);
    };
    bool bad = false;
    for_bits(um, [&](int u) {
      if (bad) return;
      bool ok = false;
      for_bits(vn, [&](int v) { ok = ok || linked(u, v); });
      if (!ok) {
        bad = true;
        why = Reason{RemA, 0, static_cast<std::uint8_t>(u)};
      }
    });
    if (bad) return true;
    for_bits(vn, [&](int v) {
      if (bad) return;
      bool ok = false;
      for_bits(um, [&](int u) { ok = ok || linked(u, v); });
      if (!ok) {
        bad = true;
        why = Reason{RemB, 0, static_cast<std::uint8_t>(v)};
      }
    });
    return bad;
  }

  void solve() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int d = levels_ - 1; d >= 0; --d)
        for (auto D : subm_[d])
          for (int s = 0; s < m_.n; ++s) {
            if (D >> s & 1) continue;
            for (auto E : subn_[d])
              for (int t = 0; t < n_.n; ++t) {
                if (E >> t & 1) continue;
                std::size_t p = pos(d, D, s, E, t);
                if (stamps_[d][p] != 0) continue;
                Reason why{};
                if (violated(d, D, s, E, t, why)) {
                  stamps_[d][p] = ++clock_;
                  reasons_[d][p] = why;
                  changed = true;
                }
              }
          }
    }
  }

  // Removed strictly before `limit`.
  bool gone_before(int d, std::uint32_t D, int s, std::uint32_t E, int t, std::int32_t limit) const {
    auto st = stamp(d, D, s, E, t);
    return st > 0 && st < limit;
  }

  // True at (M - D, s), false at (N - E, t).
  Formula dist(int d, std::uint32_t D, int s, std::uint32_t E, int t) {
    std::size_t p = pos(d, D, s, E, t);
    auto key = std::make_pair(d, p);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::int32_t when = stamps_[d][p];
    if (when <= 0) throw Error("bisim: no distinguishing step for a surviving tuple");
    const Reason r = reasons_[d][p];
    std::uint32_t liveM = ((1u << m_.n) - 1) & ~D, liveN = ((1u << n_.n) - 1) & ~E;
    Formula out;
    switch (r.kind) {
      case Atom: {
        Formula a = prop(props_[r.witness]);
        out = (m_.props[s] >> r.witness & 1) ? a : neg(a);
        break;
      }
      case Forth: {
        std::vector<Formula> cs;
        for_bits(n_.succ[r.label][t] & liveN, [&](int t2) { cs.push_back(dist(d, D, r.witness, E, t2)); });
        out = dia(cand_all(cs), labels_[r.label]);
        break;
      }
      case Back: {
        std::vector<Formula> cs;
        for_bits(m_.succ[r.label][s] & liveM, [&](int s2) { cs.push_back(cneg(dist(d, D, s2, E, r.witness))); });
        out = neg(dia(cand_all(cs), labels_[r.label]));
        break;
      }
      case RemA: {
        int u = r.witness;
        std::vector<Formula> as, bs;
        for_bits(liveN & ~(1u << t), [&](int v) {
          if (gone_before(d, D, u, E, v, when))
            as.push_back(dist(d, D, u, E, v));
          else
            bs.push_back(dist(d + 1, D | 1u << u, s, E | 1u << v, t));
        });
        out = rem(cand_all(as), cand_all(bs));
        break;
      }
      case RemB: {
        int v = r.witness;
        std::vector<Formula> as, bs;
        for_bits(liveM & ~(1u << s), [&](int u) {
          if (gone_before(d, D, u, E, v, when))
            as.push_back(cneg(dist(d, D, u, E, v)));
          else
            bs.push_back(cneg(dist(d + 1, D | 1u << u, s, E | 1u << v, t)));
        });
        out = neg(rem(cand_all(as), cand_all(bs)));
        break;
      }
    }
    memo_.emplace(key, out);
    return out;
  }
};

}  // namespace

bool sr_bisimilar(const PointedModel& pm, const PointedModel& pn, const BisimOptions& opts) {
  return TupleSolver(pm, pn, opts).root_alive();
}

std::optional<Formula> distinguishing_formula(const PointedModel& pm, const PointedModel& pn,
                                              const BisimOptions& opts) {
  TupleSolver solver(pm, pn, opts);
  if (solver.root_alive()) return std::nullopt;
  Formula f = solver.root_formula();
  if (!check(pm.model, pm.point, f) || check(pn.model, pn.point, f))
    throw Error("bisim: synthesized formula failed verification: " + print(f));
  return f;
}

// ---------------------------------------------------------------------------

BisimPartition::BisimPartition(const std::vector<Model>& models, unsigned max_worlds) {
  std::set<std::string> ls, ps;
  for (const auto& m : models) {
    if (m.worlds.empty()) throw InputError("bisim: empty model");
    if (m.worlds.size() > max_worlds || m.worlds.size() > 16)
      throw InputError("bisim: model exceeds " + std::to_string(max_worlds) + " worlds");
    for (const auto& [l, _] : m.relations) ls.insert(l);
    for (const auto& [p, _] : m.valuation) ps.insert(p);
  }
  if (ls.empty()) ls.insert("r");
  labels_.assign(ls.begin(), ls.end());
  props_.assign(ps.begin(), ps.end());
  if (props_.size() > 64) throw InputError("bisim: too many propositions");

  std::size_t total = 0;
  for (const auto& m : models) {
    models_.push_back(IndexedModel::from(m));
    base_.push_back(total);
    std::size_t n = m.worlds.size();
    total += n << n;
  }
  base_.push_back(total);

  // Round 0: level and valuation.
  std::vector<int> col(total, -1);
  {
    std::map<std::pair<int, std::vector<bool>>, int> ids;
    for (std::size_t i = 0; i < models_.size(); ++i) {
      const auto& im = models_[i];
      int n = im.size();
      for (std::uint32_t D = 0; D < (1u << n); ++D)
        for (int s = 0; s < n; ++s) {
          if (D >> s & 1) continue;
          std::vector<bool> val;
          for (const auto& p : props_) {
            auto it = im.props.find(p);
            val.push_back(it != im.props.end() && it->second.test(s));
          }
          auto key = std::make_pair(std::popcount(D), std::move(val));
          auto [it, _] = ids.emplace(std::move(key), static_cast<int>(ids.size()));
          col[slot(i, D, s)] = it->second;
        }
    }
    num_classes_ = ids.size();
  }
  colors_.push_back(col);

  while (true) {
    const auto& prev = colors_.back();
    std::vector<int> next(total, -1);
    std::map<std::vector<int>, int> ids;
    std::vector<int> sig;
    for (std::size_t i = 0; i < models_.size(); ++i) {
      int n = models_[i].size();
      for (std::uint32_t D = 0; D < (1u << n); ++D)
        for (int s = 0; s < n; ++s) {
          if (D >> s & 1) continue;
          sig.clear();
          sig.push_back(prev[slot(i, D, s)]);
          for (std::size_t l = 0; l < labels_.size(); ++l) {
            sig.push_back(-1 - static_cast<int>(l));
            std::size_t mark = sig.size();
            succ(i, l, s).for_each([&](int s2) {
              if (!(D >> s2 & 1)) sig.push_back(prev[slot(i, D, s2)]);
            });
            std::sort(sig.begin() + mark, sig.end());
            sig.erase(std::unique(sig.begin() + mark, sig.end()), sig.end());
          }
          sig.push_back(-1000);
          std::vector<std::pair<int, int>> pairs;
          for (int u = 0; u < n; ++u) {
            if (u == s || (D >> u & 1)) continue;
            pairs.emplace_back(prev[slot(i, D, u)], prev[slot(i, D | 1u << u, s)]);
          }
          std::sort(pairs.begin(), pairs.end());
          pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
          for (auto [a, b] : pairs) {
            sig.push_back(a);
            sig.push_back(b);
          }
          auto [it, _] = ids.emplace(sig, static_cast<int>(ids.size()));
          next[slot(i, D, s)] = it->second;
        }
    }
    bool stable = ids.size() == num_classes_;
    num_classes_ = ids.size();
    if (stable) break;
    colors_.push_back(std::move(next));
  }
}

std::size_t BisimPartition::slot(std::size_t model, std::uint32_t deleted, int point) const {
  return base_[model] + static_cast<std::size_t>(deleted) * models_[model].size() + point;
}

const WorldSet& BisimPartition::succ(std::size_t model, std::size_t label, int w) const {
  static const WorldSet none;
  const auto& im = models_[model];
  int li = im.label_index(labels_[label]);
  if (li < 0) return none;
  return im.succ[li][w];
}

int BisimPartition::class_of(std::size_t model, int point_index) const {
  if (model >= models_.size() || point_index < 0 || point_index >= models_[model].size())
    throw InputError("bisim: no such configuration");
  return colors_.back()[slot(model, 0, point_index)];
}

int BisimPartition::class_of(std::size_t model, const std::string& point) const {
  if (model >= models_.size()) throw InputError("bisim: no such model");
  return class_of(model, models_[model].world(point));
}

Formula BisimPartition::distinguish(std::size_t ma, int pa, std::size_t mb, int pb) {
  std::size_t a = slot(ma, 0, pa), b = slot(mb, 0, pb);
  if (colors_.back()[a] == colors_.back()[b]) throw Error("bisim: configurations are bisimilar");
  return dist(a, b);
}

Formula BisimPartition::dist(std::size_t a, std::size_t b) {
  std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  auto locate = [&](std::size_t x) {
    std::size_t i = std::upper_bound(base_.begin(), base_.end(), x) - base_.begin() - 1;
    int n = models_[i].size();
    std::size_t off = x - base_[i];
    return Cfg{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(off / n), static_cast<std::uint8_t>(off % n)};
  };
  Cfg ca = locate(a), cb = locate(b);
  const auto& ima = models_[ca.model];
  const auto& imb = models_[cb.model];

  std::size_t r = 0;
  while (colors_[r][a] == colors_[r][b]) ++r;

  Formula out;
  if (r == 0) {
    for (const auto& p : props_) {
      auto ia = ima.props.find(p);
      auto ib = imb.props.find(p);
      bool va = ia != ima.props.end() && ia->second.test(ca.point);
      bool vb = ib != imb.props.end() && ib->second.test(cb.point);
      if (va != vb) {
        out = va ? prop(p) : neg(prop(p));
        break;
      }
    }
    if (out.is_null()) throw Error("bisim: configurations differ only in level");
  } else {
    const auto& prev = colors_[r - 1];
    auto live_succ = [&](const Cfg& c, std::size_t l) {
      std::vector<int> out;
      succ(c.model, l, c.point).for_each([&](int w) {
        if (!(c.deleted >> w & 1)) out.push_back(w);
      });
      return out;
    };
    for (std::size_t l = 0; l < labels_.size() && out.is_null(); ++l) {
      auto sa = live_succ(ca, l), sb = live_succ(cb, l);
      auto color_in = [&](int c, const Cfg& on, const std::vector<int>& ws) {
        for (int w : ws)
          if (prev[slot(on.model, on.deleted, w)] == c) return true;
        return false;
      };
      for (int s2 : sa) {
        std::size_t x = slot(ca.model, ca.deleted, s2);
        if (color_in(prev[x], cb, sb)) continue;
        std::vector<Formula> cs;
        for (int t2 : sb) cs.push_back(dist(x, slot(cb.model, cb.deleted, t2)));
        out = dia(cand_all(cs), labels_[l]);
        break;
      }
      if (!out.is_null()) break;
      for (int t2 : sb) {
        std::size_t y = slot(cb.model, cb.deleted, t2);
        if (color_in(prev[y], ca, sa)) continue;
        std::vector<Formula> cs;
        for (int s2 : sa) cs.push_back(cneg(dist(slot(ca.model, ca.deleted, s2), y)));
        out = neg(dia(cand_all(cs), labels_[l]));
        break;
      }
    }
    if (out.is_null()) {
      auto removable = [&](const Cfg& c) {
        std::vector<int> out;
        for (int w = 0; w < models_[c.model].size(); ++w)
          if (w != c.point && !(c.deleted >> w & 1)) out.push_back(w);
        return out;
      };
      auto ua = removable(ca), vb = removable(cb);
      auto rest = [&](const Cfg& c, int w) { return slot(c.model, c.deleted | 1u << w, c.point); };
      auto here = [&](const Cfg& c, int w) { return slot(c.model, c.deleted, w); };
      auto matched = [&](int u, int v) {
        return prev[here(ca, u)] == prev[here(cb, v)] && prev[rest(ca, u)] == prev[rest(cb, v)];
      };
      for (int u : ua) {
        bool ok = std::any_of(vb.begin(), vb.end(), [&](int v) { return matched(u, v); });
        if (ok) continue;
        std::vector<Formula> as, bs;
        for (int v : vb) {
          if (prev[here(ca, u)] != prev[here(cb, v)])
            as.push_back(dist(here(ca, u), here(cb, v)));
          else
            bs.push_back(dist(rest(ca, u), rest(cb, v)));
        }
        out = rem(cand_all(as), cand_all(bs));
        break;
      }
      if (out.is_null())
        for (int v : vb) {
          bool ok = std::any_of(ua.begin(), ua.end(), [&](int u) { return matched(u, v); });
          if (ok) continue;
          std::vector<Formula> as, bs;
          for (int u : ua) {
            if (prev[here(ca, u)] != prev[here(cb, v)])
              as.push_back(cneg(dist(here(ca, u), here(cb, v))));
            else
              bs.push_back(cneg(dist(rest(ca, u), rest(cb, v))));
          }
          out = neg(rem(cand_all(as), cand_all(bs)));
          break;
        }
    }
    if (out.is_null()) throw Error("bisim: refinement step without a witness");
  }
  memo_.emplace(key, out);
  return out;
}

}  // namespace mlsr
