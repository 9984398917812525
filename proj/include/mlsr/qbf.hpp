#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlsr/formula.hpp"
#include "mlsr/kripke.hpp"

namespace mlsr {

enum class Quant : std::uint8_t { Exists, Forall };

struct Literal {
  int var = 0;
  bool positive = true;
  bool operator==(const Literal&) const = default;
  auto operator<=>(const Literal&) const = default;
};

struct QbfInstance {
  std::vector<std::pair<Quant, int>> prefix;
  std::vector<std::vector<Literal>> clauses;

  int num_vars() const { return static_cast<int>(prefix.size()); }
  int num_clauses() const { return static_cast<int>(clauses.size()); }
  // Throws InputError unless the prefix alternates, quantifies each variable
  // once, and every literal is over a quantified variable. At least one
  // variable and one clause are required.
  void validate() const;
};

// {"prefix":[["A",1],["E",2]], "clauses":[[[1,false],[2,true]]]}
QbfInstance qbf_from_json(const std::string& text);
std::string qbf_to_json(const QbfInstance& q);
QbfInstance load_qbf(const std::string& path);
// A1 E2 : (~x1 | x2) & (x1)
std::string qbf_to_string(const QbfInstance& q);

// Exhaustive evaluation, at most 20 variables.
bool brute_eval(const QbfInstance& q);

// World names: s; branch nodes m<v>p / m<v>n; chain nodes r<v>p / r<v>n;
// literal nodes x<v> / nx<v>; goals g_<node>; hubs h_p / h_n; clause
// vertices c<i>. Letters: g, level markers p<v>, clause letters c<i>.
PointedModel build_model(const QbfInstance& q);

struct Round {
  enum Kind : std::uint8_t { DemonDelete, TravelerMove };
  Kind kind;
  Formula restriction;  // DemonDelete only
};

enum class GoalRule : std::uint8_t {
  Escape,  // any Traveler move onto a g-point wins at once
  Final,   // only the position after the last round counts
};

struct GameSchedule {
  std::vector<Round> rounds;
  GoalRule goal = GoalRule::Escape;
};

GameSchedule build_schedule(const QbfInstance& q, GoalRule goal = GoalRule::Escape);

// Formula for an arbitrary schedule: DemonDelete(a) -> [-a]X, TravelerMove ->
// <>X, with X = g | rest under the escape rule; the final move is <>g.
Formula schedule_formula(const GameSchedule& sched);
Formula build_formula(const QbfInstance& q, GoalRule goal = GoalRule::Escape);
// Exactly one of c1..ck.
Formula exactly_one_clause(int k);

struct GameMove {
  std::size_t round;
  Round::Kind kind;
  std::string world;  // deleted point or new position
};

struct GameResult {
  bool traveler_wins = false;
  // Principal line of play: Traveler plays a winning move when she has one,
  // Demon a winning deletion when he has one.
  std::vector<GameMove> trace;
  std::size_t positions = 0;  // distinct states solved
};

GameResult game_solve_ex(const PointedModel& pm, const GameSchedule& sched);
bool game_solve(const PointedModel& pm, const GameSchedule& sched);

// The alternating prefixes with up to three variables, each paired with a
// deterministic spread of clause lists of one to three clauses.
std::vector<QbfInstance> qbf_sample();

}  // namespace mlsr
