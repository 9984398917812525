#include <random>

#include "doctest.h"
#include "mlsr/bisim.hpp"
#include "mlsr/checker.hpp"

using namespace mlsr;

namespace {

Model m2() {
  Model m;
  m.add_edge("a", "a").add_edge("b", "b");
  return m;
}

Model m3() {
  Model m;
  for (auto x : {"a", "b"})
    for (auto y : {"a", "b"}) m.add_edge(x, y);
  return m;
}

Model edgeless(int n) {
  Model m;
  for (int i = 0; i < n; ++i) m.add_world(world_name(i));
  return m;
}

void expect_separates(const PointedModel& a, const PointedModel& b, const Formula& f) {
  CHECK(is_core(f));
  CHECK(check(a, f));
  CHECK_FALSE(check(b, f));
}

}  // namespace

TEST_CASE("reflexive and irreflexive pair is bisimilar") {
  for (auto s : {"a", "b"})
    for (auto t : {"a", "b"}) {
      PointedModel a{m2(), s}, b{m3(), t};
      CHECK(sr_bisimilar(a, b));
      CHECK(sr_bisimilar(b, a));
      CHECK_FALSE(distinguishing_formula(a, b).has_value());
    }
}

TEST_CASE("every model is bisimilar to itself") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    Model m = generate_random(1 + rng() % 5, {"p", "q"}, 0.4, rng());
    for (const auto& w : m.worlds) CHECK(sr_bisimilar({m, w}, {m, w}));
  }
}

TEST_CASE("loop against no loop") {
  Model refl;
  refl.add_edge("w", "w");
  Model irr = edgeless(1);
  PointedModel a{refl, "w"}, b{irr, "w0"};
  CHECK_FALSE(sr_bisimilar(a, b));
  auto f = distinguishing_formula(a, b);
  REQUIRE(f.has_value());
  CHECK(*f == dia(top()));
  auto g = distinguishing_formula(b, a);
  REQUIRE(g.has_value());
  expect_separates(b, a, *g);
}

TEST_CASE("edgeless models of different size") {
  PointedModel a{edgeless(2), "w0"}, b{edgeless(3), "w0"};
  CHECK_FALSE(sr_bisimilar(a, b));
  auto f = distinguishing_formula(a, b);
  REQUIRE(f.has_value());
  expect_separates(a, b, *f);
  CHECK(f->depth() <= 3);
  auto g = distinguishing_formula(b, a);
  REQUIRE(g.has_value());
  expect_separates(b, a, *g);
}

TEST_CASE("propositional mismatch") {
  Model a = edgeless(1), b = edgeless(1);
  a.set_true("p", "w0");
  auto f = distinguishing_formula({a, "w0"}, {b, "w0"});
  REQUIRE(f.has_value());
  CHECK(*f == prop("p"));
  auto g = distinguishing_formula({b, "w0"}, {a, "w0"});
  REQUIRE(g.has_value());
  CHECK(*g == neg(prop("p")));
}

TEST_CASE("nominals do not take part") {
  Model a = m2(), b = m3();
  a.set_nominal("n", "a");
  CHECK(sr_bisimilar({a, "a"}, {b, "a"}));
}

TEST_CASE("symmetry and separators on random pairs") {
  std::mt19937_64 rng(41);
  int bisimilar = 0;
  for (int i = 0; i < 300; ++i) {
    Model x = generate_random(1 + rng() % 4, {"p"}, 0.5, rng());
    Model y = generate_random(1 + rng() % 4, {"p"}, 0.5, rng());
    std::string s = world_name(rng() % x.worlds.size()), t = world_name(rng() % y.worlds.size());
    PointedModel a{x, s}, b{y, t};
    bool ab = sr_bisimilar(a, b);
    CHECK(ab == sr_bisimilar(b, a));
    auto f = distinguishing_formula(a, b);
    CHECK(f.has_value() != ab);
    if (f) expect_separates(a, b, *f);
    bisimilar += ab;
  }
  MESSAGE("bisimilar random pairs: " << bisimilar);
}

TEST_CASE("partition refinement agrees with the tuple fixpoint") {
  std::mt19937_64 rng(73);
  std::vector<Model> ms;
  for (int i = 0; i < 40; ++i) ms.push_back(generate_random(1 + rng() % 3, {"p"}, 0.5, rng()));
  ms.push_back(m2());
  ms.push_back(m3());
  BisimPartition part(ms);
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = 0; j < ms.size(); ++j) {
      int s = static_cast<int>(rng() % ms[i].worlds.size()), t = static_cast<int>(rng() % ms[j].worlds.size());
      auto ws = world_name(s), wt = world_name(t);
      PointedModel a{ms[i], ms[i].worlds.count("a") ? std::string(s ? "b" : "a") : ws};
      PointedModel b{ms[j], ms[j].worlds.count("a") ? std::string(t ? "b" : "a") : wt};
      bool same = part.class_of(i, s) == part.class_of(j, t);
      REQUIRE(same == sr_bisimilar(a, b));
      if (!same) expect_separates(a, b, part.distinguish(i, s, j, t));
    }
  CHECK(part.class_of(ms.size() - 1, "a") == part.class_of(ms.size() - 2, "b"));
}

TEST_CASE("bisimilar models agree on random core formulas") {
  std::vector<Model> ms;
  enumerate_models(2, {"p"}, {"r"}, [&](const Model& m) {
    ms.push_back(m);
    return true;
  });
  enumerate_models(3, {}, {"r"}, [&](const Model& m) {
    if (m.worlds.size() == 3) ms.push_back(m);
    return true;
  });
  BisimPartition part(ms);
  std::mt19937_64 rng(3);
  RandomFormulaOptions o;
  o.max_depth = 3;
  o.props = {"p"};
  o.exists = true;
  std::vector<Formula> fs;
  for (int i = 0; i < 200; ++i) fs.push_back(expand_core(random_formula(rng, o)));
  std::map<int, std::vector<bool>> seen;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    IndexedModel im = IndexedModel::from(ms[i]);
    std::vector<WorldSet> ext;
    for (const auto& f : fs) ext.push_back(Evaluator(im, f).extension(im.all));
    for (int w = 0; w < im.size(); ++w) {
      std::vector<bool> row;
      for (const auto& e : ext) row.push_back(e.test(w));
      auto [it, fresh] = seen.emplace(part.class_of(i, w), row);
      if (!fresh) {
        REQUIRE(it->second == row);
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("errors") {
  Model empty;
  CHECK_THROWS_AS(sr_bisimilar({empty, ""}, {m2(), "a"}), InputError);
  CHECK_THROWS_AS(sr_bisimilar({edgeless(9), "w0"}, {m2(), "a"}), InputError);
  CHECK_NOTHROW(sr_bisimilar({edgeless(9), "w0"}, {m2(), "a"}, {.max_worlds = 9}));
  CHECK_THROWS_AS(sr_bisimilar({m2(), "zz"}, {m2(), "a"}), InputError);
}
