// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mlsr/bisim.hpp"
#include "mlsr/checker.hpp"
#include "mlsr/counting.hpp"
#include "mlsr/fol.hpp"
#include "mlsr/hilbert.hpp"
#include "mlsr/qbf.hpp"
#include "mlsr/tiling.hpp"
#include "oracle.hpp"
#include "proof_mutations.hpp"

using namespace mlsr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// 1. Checker against the first-order translation.
Outcome translation() {
  std::mt19937_64 rng(20240601);
  RandomFormulaOptions o;
  o.max_depth = 4;
  o.props = {"p", "q"};
  o.nominals = {"n"};
  o.labels = {"r", "u"};
  o.sugar = true;
  int agree = 0, total = 0;
  std::string first;
  while (total < 2000) {
    unsigned n = 1 + rng() % 5;
    Model m = generate_random(n, o.props, 0.15 + 0.1 * (rng() % 5), rng(), o.labels);
    std::vector<std::string> ws(m.worlds.begin(), m.worlds.end());
    std::size_t pick = rng() % (n + 1);
    m.set_nominal("n", pick == n ? std::nullopt : std::optional<std::string>(ws[pick]));
    Formula f = random_formula(rng, o);
    const std::string& s = ws[rng() % n];
    ++total;
    bool direct = check(m, s, f);
    bool via_fol = fol_eval(m, {{kFolFreeVar, s}}, translate(f));
    if (direct == via_fol)
      ++agree;
    else if (first.empty())
      first = " first mismatch: " + print(f) + " at " + s;
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " cases agree" + first};
}

// 2. QBF reduction, three ways.
Outcome qbf() {
  auto sample = qbf_sample();
  int agree = 0, truths = 0;
  bool size_ok = true;
  std::string first;
  for (const auto& q : sample) {
    PointedModel pm = build_model(q);
    GameSchedule s = build_schedule(q);
    bool b = brute_eval(q), g = game_solve(pm, s), c = check(pm, build_formula(q));
    if (b == g && g == c)
      ++agree;
    else if (first.empty())
      first = " first disagreement: " + qbf_to_string(q);
    truths += b;
    if (pm.model.worlds.size() > static_cast<std::size_t>(10 * q.num_vars() + q.num_clauses() + 1)) size_ok = false;
  }
  QbfInstance fig = qbf_from_json(
      R"({"prefix":[["A",1],["E",2],["A",3]],"clauses":[[[1,false],[2,true]],[[1,false],[2,true],[3,false]],[[1,true],[2,true],[3,true]]]})");
  PointedModel fm = build_model(fig);
  bool fig_true = brute_eval(fig) && game_solve(fm, build_schedule(fig)) && check(fm, build_formula(fig));
  std::ostringstream d;
  d << agree << "/" << sample.size() << " instances agree (" << truths << " true), figure instance "
    << (fig_true ? "true" : "FALSE") << ", worlds <= 10n+k+1: " << (size_ok ? "yes" : "NO") << first;
  return {agree == static_cast<int>(sample.size()) && sample.size() >= 200 && fig_true && size_ok, d.str()};
}

// 3. Validity corpus and the negative control.
Outcome validity() {
  std::vector<std::pair<std::string, Formula>> corpus;
  auto add = [&](const std::string& name, const std::string& text) { corpus.emplace_back(name, parse(text)); };
  Formula p = prop("p"), q = prop("q"), n = nominal("n");
  Formula dp = dia(p);
  auto axiom = [&](const std::string& name, const Substitution& s) {
    corpus.emplace_back("axiom " + name, instantiate(schema(name), s));
  };
  axiom("Taut", {{"phi", parse("<>p | ~<>p")}});
  axiom("K_box", {{"phi", p}, {"psi", q}});
  axiom("K_U", {{"phi", p}, {"psi", q}});
  axiom("K_ann", {{"alpha", dp}, {"phi", p}, {"psi", q}});
  axiom("K_rem", {{"alpha", p}, {"phi", dp}, {"psi", q}});
  axiom("T_U", {{"phi", dp}});
  axiom("4_U", {{"phi", parse("<-p>T")}});
  axiom("B_U", {{"phi", parse("p & <>q")}});
  axiom("U_box", {{"phi", p}});
  axiom("PAL_atom", {{"phi", dp}, {"p", q}});
  axiom("PAL_nom", {{"phi", dp}, {"n", n}});
  axiom("PAL_top", {{"phi", dp}});
  axiom("PAL_neg", {{"phi", dp}, {"psi", q}});
  axiom("PAL_or", {{"phi", dp}, {"psi", p}, {"alpha", q}});
  axiom("PAL_dia", {{"phi", p}, {"psi", q}});
  axiom("PAL_ann", {{"phi", dp}, {"psi", q}, {"alpha", dia(q)}});
  axiom("PAL_E", {{"phi", p}, {"psi", dia(q)}});
  axiom("Truth", {{"phi", parse("<-p>T")}});
  axiom("H", {{"n", n}, {"phi", dp}});
  axiom("Mix", {{"n", n}, {"alpha", p}, {"phi", q}});
  axiom("Mix", {{"n", n}, {"alpha", dp}, {"phi", neg(p)}});
  add("distributivity, body", "<-p>(q | <>p) <-> (<-p>q | <-p><>p)");
  add("distributivity, removed", "<-(p | q)><>p <-> (<-p><>p | <-q><>p)");
  add("announced formulas hold", "<!<>p>q -> <>p");
  add("announced formulas hold, nested", "<!p><-q>T -> p");
  add("removal of a disjunction", "<-(<>p | q)>~q <-> (<-<>p>~q | <-q>~q)");
  add("E by removal", "E(<>p) <-> (<>p | <-<>p>T)");
  add("E by removal, atom", "E(p & q) <-> ((p & q) | <-(p & q)>T)");
  // Preconditions of announcement sequences, lengths 2 and 3.
  std::vector<std::vector<Formula>> seqs{{dp, q}, {p, dp, neg(q)}};
  for (const auto& seq : seqs) {
    auto wrap = [&](Formula f) {
      for (auto it = seq.rbegin(); it != seq.rend(); ++it) f = ann(*it, f);
      return f;
    };
    std::vector<Formula> pre;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      Formula f = seq[i];
      for (std::size_t j = i; j-- > 0;) f = ann(seq[j], f);
      pre.push_back(f);
    }
    Formula pc = conj_all(pre);
    std::string len = " (length " + std::to_string(seq.size()) + ")";
    corpus.emplace_back("announced T" + len, iff(wrap(top()), pc));
    corpus.emplace_back("announced letter" + len, iff(wrap(p), conj(pc, p)));
    corpus.emplace_back("announced nominal" + len, iff(wrap(n), conj(pc, n)));
    corpus.emplace_back("announced negation" + len, iff(wrap(neg(dp)), conj(pc, neg(wrap(dp)))));
    corpus.emplace_back("announced conjunction" + len, iff(wrap(conj(p, dia(q))), conj(wrap(p), wrap(dia(q)))));
    corpus.emplace_back("announced diamond" + len, iff(wrap(dia(p)), conj(pc, dia(wrap(p)))));
    corpus.emplace_back("announced E" + len, iff(wrap(exists(p)), conj(pc, exists(wrap(p)))));
  }
  for (const auto& phi : {dp, parse("<-p>q")}) {
    corpus.emplace_back("nominal negation", iff(exists(conj(n, neg(phi))), conj(exists(n), neg(exists(conj(n, phi))))));
    corpus.emplace_back("nominal at point", implies(n, iff(exists(conj(n, phi)), phi)));
  }
  add("nominals name at most one point", "'n -> ~<-'n>T");

  int ok = 0;
  std::string first;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& [name, f] = corpus[i];
    auto t0 = std::chrono::steady_clock::now();
    auto ls = labels_of(f);
    if (ls.empty()) ls.insert("r");
    bool none = !find_countermodel(f, 4, std::vector<std::string>(ls.begin(), ls.end()));
    auto t1 = std::chrono::steady_clock::now();
    bool random_ok = soundness_spotcheck(f, 500, 1000 + i).ok;
    auto t2 = std::chrono::steady_clock::now();
    if (std::getenv("MLSR_ACCEPT_TIMING"))
      std::fprintf(stderr, "  %-36s %6.2fs %6.2fs\n", name.c_str(), std::chrono::duration<double>(t1 - t0).count(),
                   std::chrono::duration<double>(t2 - t1).count());
    if (none && random_ok)
      ++ok;
    else if (first.empty())
      first = " first failure: " + name + " " + print(f);
  }
  Formula control = parse("<!<>p><-[]F>T <-> (<>p & <-<!<>p>[]F><!<>p>T)");
  auto cm = find_countermodel(control, 4);
  bool control_ok = cm && !oracle::holds(cm->model, cm->point, control);
  std::ostringstream d;
  d << ok << "/" << corpus.size() << " valid formulas without countermodel (bound 4, 500 random models); "
    << "negative control countermodel " << (control_ok ? "found at " + std::to_string(cm->model.worlds.size()) + " worlds" : "MISSING")
    << first;
  return {ok == static_cast<int>(corpus.size()) && control_ok, d.str()};
}

bool is_two_loop(const Model& m) {
  if (m.worlds.size() != 2) return false;
  auto it = m.relations.find("r");
  if (it == m.relations.end()) return false;
  auto a = *m.worlds.begin(), b = *m.worlds.rbegin();
  return it->second == std::set<Edge>{{a, b}, {b, a}};
}

// 4. The two-point loop formula, exhaustively.
Outcome two_loop() {
  Formula f = conj_all({rho2(), univ(rem(top(), box(bot()))), dia(dia(top()))});
  std::size_t models = 0, points = 0, wrong = 0, loops = 0;
  Evaluator ev(f);
  enumerate_models(4, {}, {"r"}, [&](const Model& m) {
    ++models;
    IndexedModel im = IndexedModel::from(m);
    ev.bind(im);
    WorldSet ext = ev.extension(im.all);
    bool loop = is_two_loop(m);
    loops += loop;
    for (int w = 0; w < im.size(); ++w) {
      ++points;
      if (ext.test(w) != loop) ++wrong;
    }
    return true;
  });
  std::ostringstream d;
  d << points << " pointed models over " << models << " models, " << wrong << " misclassified, " << loops
    << " two-loop models";
  return {wrong == 0 && loops == 1 && models == 66066, d.str()};
}

// 5. The M2/M3 pair.
Outcome bisimilar_pair() {
  Model m2, m3;
  m2.add_edge("a", "a").add_edge("b", "b");
  m3.add_edge("a", "a").add_edge("a", "b").add_edge("b", "a").add_edge("b", "b");
  bool bis = sr_bisimilar({m2, "a"}, {m3, "a"}) && sr_bisimilar({m2, "b"}, {m3, "a"});
  Fol connected = fol_parse("(not (exists z (not (or (R_r y z) (R_r z y)))))");
  bool fol_differs = !fol_eval(m2, {{"y", "a"}}, connected) && fol_eval(m3, {{"y", "a"}}, connected);

  // Every formula of depth <= 3 over p, T, ~, |, <>, <->.
  std::vector<Formula> level{prop("p"), top()};
  std::vector<Formula> all = level;
  for (int d = 1; d <= 3; ++d) {
    std::vector<Formula> next{prop("p"), top()};
    for (const auto& a : all) {
      next.push_back(neg(a));
      next.push_back(dia(a));
    }
    for (const auto& a : all)
      for (const auto& b : all) {
        next.push_back(disj(a, b));
        next.push_back(rem(a, b));
      }
    all = std::move(next);
  }
  IndexedModel i2 = IndexedModel::from(m2), i3 = IndexedModel::from(m3);
  int a2 = i2.index.at("a"), a3 = i3.index.at("a");
  std::size_t separating = 0;
  for (const auto& f : all)
    if (Evaluator(i2, f).at(a2) != Evaluator(i3, f).at(a3)) ++separating;
  std::ostringstream d;
  d << "bisimilar: " << (bis ? "yes" : "NO") << ", connectedness differs: " << (fol_differs ? "yes" : "NO") << ", "
    << all.size() << " formulas of depth <= 3, " << separating << " separate the pair";
  return {bis && fol_differs && separating == 0 && all.size() == 357014, d.str()};
}

// 6. Bisimulation invariance and distinguishing formulas.
Outcome invariance() {
  std::vector<Model> ms = all_models(3, {"p"}, {"r"});
  BisimPartition part(ms, 3);
  std::mt19937_64 rng(6);
  RandomFormulaOptions o;
  o.max_depth = 3;
  o.props = {"p"};
  std::vector<Formula> fs;
  for (int i = 0; i < 200; ++i) fs.push_back(expand_core(random_formula(rng, o)));

  std::map<int, std::vector<bool>> rows;
  std::map<int, std::pair<std::size_t, int>> rep;
  std::size_t pointed = 0, bis_pairs_checked = 0, disagreements = 0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    IndexedModel im = IndexedModel::from(ms[i]);
    std::vector<WorldSet> ext;
    for (const auto& f : fs) ext.push_back(Evaluator(im, f).extension(im.all));
    for (int w = 0; w < im.size(); ++w) {
      ++pointed;
      std::vector<bool> row;
      for (const auto& e : ext) row.push_back(e.test(w));
      int c = part.class_of(i, w);
      auto [it, fresh] = rows.emplace(c, row);
      if (fresh) {
        rep[c] = {i, w};
      } else {
        ++bis_pairs_checked;
        if (it->second != row) ++disagreements;
      }
    }
  }
  // Separators for every ordered pair of classes, checked with the oracle.
  std::size_t separators = 0, bad = 0;
  std::vector<std::pair<std::size_t, int>> reps;
  for (const auto& [_, r] : rep) reps.push_back(r);
  for (std::size_t x = 0; x < reps.size(); ++x)
    for (std::size_t y = 0; y < reps.size(); ++y) {
      if (x == y) continue;
      auto [ma, pa] = reps[x];
      auto [mb, pb] = reps[y];
      Formula f = part.distinguish(ma, pa, mb, pb);
      ++separators;
      IndexedModel ia = IndexedModel::from(ms[ma]), ib = IndexedModel::from(ms[mb]);
      if (!oracle::holds(ms[ma], ia.names[pa], f) || oracle::holds(ms[mb], ib.names[pb], f)) ++bad;
    }
  // The partition against the tuple fixpoint on random pairs.
  std::size_t cross = 0, cross_bad = 0;
  for (int t = 0; t < 3000; ++t) {
    std::size_t i = rng() % ms.size(), j = rng() % ms.size();
    IndexedModel ia = IndexedModel::from(ms[i]), ib = IndexedModel::from(ms[j]);
    int s = static_cast<int>(rng() % ia.size()), u = static_cast<int>(rng() % ib.size());
    if (t % 3 == 0) {
      // Favor bisimilar pairs: pick a partner from the same class.
      auto [mj, pj] = rep[part.class_of(i, s)];
      j = mj;
      ib = IndexedModel::from(ms[j]);
      u = pj;
    }
    ++cross;
    bool same = part.class_of(i, s) == part.class_of(j, u);
    if (same != sr_bisimilar({ms[i], ia.names[s]}, {ms[j], ib.names[u]})) ++cross_bad;
  }
  std::ostringstream d;
  d << pointed << " pointed models, " << rep.size() << " classes; " << bis_pairs_checked
    << " same-class members agree on 200 formulas (" << disagreements << " disagreements); " << separators
    << " separators verified (" << bad << " bad); partition vs fixpoint " << cross - cross_bad << "/" << cross;
  return {disagreements == 0 && bad == 0 && cross_bad == 0, d.str()};
}

// 7. Periodic tilings satisfy the encoding.
Outcome tiling() {
  std::mt19937_64 rng(77);
  std::size_t total = 0, good = 0;
  for (int i = 0; i < 200; ++i) {
    int w = 2 + i % 3, h = 2 + (i / 3) % 3, colors = 2 + i % 2;
    std::vector<std::string> horiz(w * h), vert(w * h);
    for (auto& c : horiz) c = "h" + std::to_string(rng() % colors);
    for (auto& c : vert) c = "v" + std::to_string(rng() % colors);
    TileSet ts;
    std::vector<int> assign;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        Tile t{vert[y * w + x], horiz[y * w + x], vert[((y + h - 1) % h) * w + x], horiz[y * w + (x + w - 1) % w]};
        auto it = std::find(ts.tiles.begin(), ts.tiles.end(), t);
        if (it == ts.tiles.end()) it = ts.tiles.insert(ts.tiles.end(), t);
        assign.push_back(static_cast<int>(it - ts.tiles.begin()));
      }
    // Unused extra tile: the encoding must still hold.
    if (i % 4 == 0) ts.tiles.push_back(Tile{"zz", "zz", "zz", "zz"});
    PeriodicTiling pt = make_periodic(ts, w, h, assign);
    ++total;
    good += valid_on(torus_model(pt), encode(ts));
  }
  TileSet board{{Tile{"x", "y", "z", "w"}, Tile{"z", "w", "x", "y"}}};
  ++total;
  good += valid_on(torus_model(make_periodic(board, 2, 2, {0, 1, 1, 0})), encode(board));
  return {good == total, std::to_string(good) + "/" + std::to_string(total) + " periodic tilings satisfy the encoding"};
}

// 8. Proof corpus.
Outcome proofs() {
  auto corpus = proof_corpus();
  auto reports = check_all(corpus);
  std::size_t accepted = 0, mutants = 0, rejected = 0, theorems = 0, sound = 0;
  std::string first;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!reports[i].ok) {
      if (first.empty()) first = " rejected: " + corpus[i].name + " line " + std::to_string(reports[i].line);
      continue;
    }
    ++accepted;
    for (const auto& m : testing::single_line_mutations(corpus[i], reports[i].formulas)) {
      ++mutants;
      if (!check_derivation(m.d).ok)
        ++rejected;
      else if (first.empty())
        first = " mutant accepted: " + corpus[i].name + " line " + std::to_string(m.line) + " " + m.what;
    }
    if (!reports[i].uses_hypotheses) {
      ++theorems;
      sound += soundness_spotcheck(reports[i].theorem, 500, 8 + i).ok;
    }
  }
  std::ostringstream d;
  d << accepted << "/" << corpus.size() << " derivations accepted, " << rejected << "/" << mutants
    << " mutations rejected, " << sound << "/" << theorems << " theorems pass 500-model spot checks" << first;
  return {accepted == corpus.size() && rejected == mutants && sound == theorems, d.str()};
}

// 9. Counting encodings and the two rewrites.
Outcome counting() {
  auto lines = counting_sweep(4, 2);
  bool ok = true;
  std::ostringstream d;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) d << "; ";
    d << lines[i].name << " " << lines[i].failures << "/" << lines[i].checks;
    if (i + 1 < lines.size()) ok = ok && lines[i].failures == 0 && lines[i].checks > 0;
  }
  d << " (last line reported, not required)";
  return {ok, d.str()};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"translation equivalence", translation}, {"QBF reduction", qbf},
      {"validity corpus", validity},            {"two-point loop", two_loop},
      {"non-definability pair", bisimilar_pair},         {"bisimulation invariance", invariance},
      {"periodic tilings", tiling},             {"proof checker", proofs},
      {"counting rewrites", counting}};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu %s: %s (%s, %.1fs)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
