#include <chrono>

#include "doctest.h"
#include "mlsr/checker.hpp"
#include "mlsr/error.hpp"
#include "mlsr/qbf.hpp"

using namespace mlsr;

namespace {

QbfInstance fig3() {
  return qbf_from_json(
      R"({"prefix":[["A",1],["E",2],["A",3]],)"
      R"("clauses":[[[1,false],[2,true]],[[1,false],[2,true],[3,false]],[[1,true],[2,true],[3,true]]]})");
}

QbfInstance single(Quant qt) {
  QbfInstance q;
  q.prefix = {{qt, 1}};
  q.clauses = {{Literal{1, true}}};
  return q;
}

bool model_check(const QbfInstance& q, GoalRule rule = GoalRule::Escape) {
  auto pm = build_model(q);
  return check_ex(pm.model, pm.point, build_formula(q, rule), {.memo = true}).value;
}

}  // namespace

TEST_CASE("brute force truth") {
  CHECK(brute_eval(fig3()));
  CHECK(brute_eval(single(Quant::Exists)));
  CHECK_FALSE(brute_eval(single(Quant::Forall)));
  QbfInstance big;
  for (int v = 1; v <= 21; ++v) big.prefix.emplace_back(v % 2 ? Quant::Forall : Quant::Exists, v);
  big.clauses = {{Literal{1, true}}};
  CHECK_THROWS_AS(brute_eval(big), InputError);
}

TEST_CASE("instance validation and json") {
  QbfInstance q = fig3();
  CHECK(qbf_from_json(qbf_to_json(q)).clauses == q.clauses);
  CHECK(qbf_to_string(single(Quant::Exists)) == "E1 : (x1)");
  CHECK_THROWS_AS(qbf_from_json(R"({"prefix":[["A",1],["A",2]],"clauses":[[[1,true]]]})"), InputError);
  CHECK_THROWS_AS(qbf_from_json(R"({"prefix":[["A",1],["E",1]],"clauses":[[[1,true]]]})"), InputError);
  CHECK_THROWS_AS(qbf_from_json(R"({"prefix":[["A",1]],"clauses":[[[2,true]]]})"), InputError);
  CHECK_THROWS_AS(qbf_from_json(R"({"prefix":[["X",1]],"clauses":[[[1,true]]]})"), InputError);
  CHECK_THROWS_AS(qbf_from_json("{"), InputError);
}

TEST_CASE("figure model matches the hand transcription") {
  Model golden = load_model(MLSR_TEST_DATA "/fig3_model.json");
  PointedModel pm = build_model(fig3());
  CHECK(pm.point == "s");
  CHECK(pm.model.worlds == golden.worlds);
  CHECK(pm.model.relations == golden.relations);
  CHECK(pm.model.valuation == golden.valuation);
  CHECK(pm.model.worlds.size() == 32);
}

TEST_CASE("single quantifier model") {
  PointedModel pm = build_model(single(Quant::Exists));
  CHECK(pm.model.worlds.size() == 12);
  CHECK(pm.model.edge("c1", "nx1"));
  CHECK_FALSE(pm.model.edge("c1", "x1"));
  CHECK(pm.model.holds("c1", "c1"));
}

TEST_CASE("schedule shape") {
  auto e = build_schedule(single(Quant::Exists));
  CHECK(e.rounds.front().kind == Round::TravelerMove);
  auto a = build_schedule(single(Quant::Forall));
  REQUIRE(a.rounds.front().kind == Round::DemonDelete);
  CHECK(a.rounds.front().restriction == prop("p1"));
  // k = 1: no clause-elimination rounds and no clause letters in the formula.
  for (const auto& r : e.rounds)
    if (r.kind == Round::DemonDelete) CHECK(r.restriction != exactly_one_clause(1));
  CHECK(props_of(build_formula(single(Quant::Exists))) == std::set<std::string>{"g"});
  // Delete/move pairs up to the hub stay within three per quantifier.
  for (const auto& q : qbf_sample()) {
    auto s = build_schedule(q);
    std::size_t deletions = 0;
    for (std::size_t i = 0; i + q.num_clauses() - 1 + 4 < s.rounds.size(); ++i)
      deletions += s.rounds[i].kind == Round::DemonDelete;
    CHECK(deletions <= 3u * q.num_vars());
    CHECK(s.rounds.size() <= 6u * q.num_vars() + q.num_clauses() + 4);
  }
}

TEST_CASE("trivial games") {
  Model m;
  m.add_edge("s", "t");
  m.set_true("g", "t");
  GameSchedule one{{Round{Round::TravelerMove, Formula()}}};
  CHECK(game_solve({m, "s"}, one));
  Model n;
  n.add_edge("s", "t");
  CHECK_FALSE(game_solve({n, "s"}, one));
  // No legal deletion: the box is vacuous.
  Model lone;
  lone.add_world("s");
  lone.set_true("g", "s");
  GameSchedule del{{Round{Round::DemonDelete, top()}}};
  CHECK(game_solve({lone, "s"}, del));
  CHECK(check(lone, "s", schedule_formula(del)));
}

TEST_CASE("figure instance three ways") {
  QbfInstance q = fig3();
  auto pm = build_model(q);
  CHECK(game_solve(pm, build_schedule(q)));
  CHECK(model_check(q));
  // Last clause replaced by (x3): now false.
  QbfInstance f = q;
  f.clauses[2] = {Literal{3, true}};
  CHECK_FALSE(brute_eval(f));
  CHECK_FALSE(game_solve(build_model(f), build_schedule(f)));
  CHECK_FALSE(model_check(f));
}

TEST_CASE("ending only on the last move loses true instances") {
  // Demon removes the literal node under Traveler and strands her on a goal leaf.
  QbfInstance q = single(Quant::Exists);
  CHECK(brute_eval(q));
  CHECK(game_solve(build_model(q), build_schedule(q)));
  CHECK_FALSE(game_solve(build_model(q), build_schedule(q, GoalRule::Final)));
  CHECK_FALSE(model_check(q, GoalRule::Final));
}

TEST_CASE("three-way agreement on the instance sample") {
  auto sample = qbf_sample();
  CHECK(sample.size() >= 200);
  int truths = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& q : sample) {
    bool b = brute_eval(q);
    truths += b;
    auto pm = build_model(q);
    auto sched = build_schedule(q);
    auto game = game_solve_ex(pm, sched);
    REQUIRE_MESSAGE(game.traveler_wins == b, qbf_to_string(q));
    REQUIRE_MESSAGE(model_check(q) == b, qbf_to_string(q));

    // Replay the principal line and check every deletion respects its round.
    Model cur = pm.model;
    std::string pos = pm.point;
    for (const auto& mv : game.trace) {
      if (mv.kind == Round::DemonDelete) {
        CHECK(mv.world != pos);
        CHECK(check(cur, mv.world, sched.rounds[mv.round].restriction));
        cur = delete_worlds(cur, {mv.world});
      } else {
        CHECK(cur.edge(pos, mv.world));
        pos = mv.world;
      }
    }
    CHECK(cur.holds("g", pos) == b);

    CHECK(pm.model.worlds.size() <= 10u * q.num_vars() + q.num_clauses() + 1);
    CHECK(build_formula(q).size() <= 30u * q.num_vars() + 60u * q.num_clauses() + 40);
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE(sample.size() << " instances, " << truths << " true, " << ms << " ms");
  CHECK(truths > 0);
  CHECK(truths < static_cast<int>(sample.size()));
}
