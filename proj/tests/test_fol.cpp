#include <random>

#include "doctest.h"
#include "mlsr/checker.hpp"
#include "mlsr/fol.hpp"

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

Fol connected() { return fol_forall("y", fol_or(fol_rel("R_r", "x", "y"), fol_rel("R_r", "y", "x"))); }

}  // namespace

TEST_CASE("translation clauses") {
  CHECK(translate(prop("p")) == fol_pred("P_p", "y"));
  CHECK(fol_print(translate(parse("<>p"))) == "(exists v1 (and (R_r y v1) (P_p v1)))");
  CHECK(fol_print(translate(parse("<-p>q"))) == "(exists v1 (and (not (= v1 y)) (and (P_p v1) (P_q y))))");
  // The witness joins the deleted list for the inner modality.
  CHECK(fol_print(translate(parse("<-p><>q"))) ==
        "(exists v1 (and (not (= v1 y)) (and (P_p v1) "
        "(exists v2 (and (R_r y v2) (and (not (= v2 v1)) (P_q v2)))))))");
  CHECK(fol_print(translate(parse("E'n"))) == "(exists v1 (N_n v1))");
  // Announcements guard later quantifiers.
  CHECK(fol_print(translate(parse("<!p><>q"))) == "(and (P_p y) (exists v1 (and (R_r y v1) (and (P_p v1) (P_q v1)))))");
}

TEST_CASE("fol_eval") {
  CHECK_FALSE(fol_eval(m2(), {{"x", "a"}}, connected()));
  CHECK(fol_eval(m3(), {{"x", "a"}}, connected()));
  CHECK(fol_eval(m2(), {{"x", "a"}}, fol_eq("x", "x")));
  CHECK_THROWS_AS(fol_eval(m2(), {}, connected()), InputError);
  CHECK_THROWS_AS(fol_eval(m2(), {{"x", "zz"}}, connected()), InputError);
}

TEST_CASE("translation equivalence examples") {
  Model loop;
  loop.add_edge("a", "b").add_edge("b", "a");
  loop.set_true("p", "a");
  CHECK(translation_equivalent(loop, "a", parse("<-T>[]F")));
  CHECK(check(loop, "a", parse("<-T>[]F")));
  Model one;
  one.add_world("w");
  CHECK(translation_equivalent(one, "w", parse("<-T>T")));
  CHECK_FALSE(check(one, "w", parse("<-T>T")));
  CHECK(translation_equivalent(loop, "a", parse("<!p><>p")));
}

TEST_CASE("translation equivalence on random inputs") {
  std::mt19937_64 rng(2024);
  RandomFormulaOptions o;
  o.max_depth = 4;
  o.sugar = true;
  o.nominals = {"n"};
  for (int i = 0; i < 300; ++i) {
    unsigned n = 1 + rng() % 5;
    Model m = generate_random(n, {"p", "q"}, 0.4, rng());
    if (rng() % 2) m.set_nominal("n", world_name(rng() % n));
    Formula f = random_formula(rng, o);
    Fol t = translate(f);
    auto fv = fol_free_vars(t);
    CHECK((fv.empty() || fv == std::set<std::string>{"y"}));
    CHECK(fol_bound_once(t));
    for (const auto& w : m.worlds) REQUIRE_MESSAGE(translation_equivalent(m, w, f), print(f));
  }
}

TEST_CASE("deletion fragment translation is quadratic") {
  std::mt19937_64 rng(9);
  RandomFormulaOptions o;
  o.max_depth = 6;
  o.announcements = false;
  o.exists = false;
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, o);
    std::size_t n = f.size();
    CHECK(fol_size(translate(f)) <= 4 * n * n + 4);
  }
  // A removal chain needs one inequality per earlier witness.
  Formula chain = top();
  for (int k = 0; k < 8; ++k) chain = rem(top(), chain);
  CHECK(fol_size(translate(chain)) <= 4 * chain.size() * chain.size());
}

TEST_CASE("text form round trip") {
  std::mt19937_64 rng(31);
  RandomFormulaOptions o;
  o.max_depth = 4;
  o.nominals = {"n"};
  for (int i = 0; i < 100; ++i) {
    Fol t = translate(random_formula(rng, o));
    CHECK(fol_parse(fol_print(t)) == t);
  }
  CHECK_THROWS_AS(fol_parse("(foo x)"), ParseError);
  CHECK_THROWS_AS(fol_parse("(and (P_p y)"), ParseError);
}
