#include "doctest.h"
#include "mlsr/checker.hpp"
#include "mlsr/counting.hpp"
#include "mlsr/error.hpp"

using namespace mlsr;

namespace {

// Relation-free model: one world per entry, holding the listed predicates.
Model monadic(const std::vector<std::vector<std::string>>& cells) {
  Model m;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    m.add_world(world_name(i));
    for (const auto& p : cells[i]) m.set_true(p, world_name(i));
  }
  return m;
}

// All relation-free models over `preds` with 1..n worlds.
std::vector<Model> all_monadic(const std::vector<std::string>& preds, unsigned n) {
  std::vector<Model> out;
  unsigned k = preds.size();
  for (unsigned w = 1; w <= n; ++w)
    for (unsigned long v = 0; v < (1ul << (k * w)); ++v) {
      std::vector<std::vector<std::string>> cells(w);
      for (unsigned i = 0; i < w; ++i)
        for (unsigned j = 0; j < k; ++j)
          if (v >> (i * k + j) & 1) cells[i].push_back(preds[j]);
      out.push_back(monadic(cells));
    }
  return out;
}

int count_sd(const Model& m, const LocalSD& sd) {
  int c = 0;
  for (const auto& w : m.worlds) {
    bool ok = true;
    for (std::size_t i = 0; i < sd.preds.size(); ++i) ok = ok && m.holds(sd.preds[i], w) == bool(sd.mask >> i & 1);
    c += ok;
  }
  return c;
}

GlobalSD with_entries(const std::vector<std::string>& preds, unsigned n, std::vector<CountEntry> es) {
  return GlobalSD{preds, n, std::move(es)};
}

}  // namespace

TEST_CASE("state descriptions") {
  LocalSD p = parse_sd("+P");
  CHECK(sd_formula(p) == prop("P"));
  CHECK(sd_formula(parse_sd("+P1-P2")) == conj(prop("P1"), neg(prop("P2"))));
  CHECK(sd_to_string(parse_sd("-A+B")) == "-A+B");
  CHECK(fol_print(sd_to_fol(parse_sd("+P1-P2"))) == "(and (P_P1 y) (not (P_P2 y)))");
  CHECK(all_local({"A", "B"}).size() == 4);
  CHECK(all_global({"A", "B"}, 2).size() == 81);
  CHECK_THROWS_AS(parse_sd("P"), ParseError);
  CHECK_THROWS_AS(parse_sd("+P+P"), ParseError);
  CHECK_THROWS_AS(parse_sd(""), ParseError);
}

TEST_CASE("at_least encodings") {
  LocalSD p = parse_sd("+P");
  CHECK(at_least(0, p) == top());
  CHECK(at_least(1, p) == exists(prop("P")));
  CHECK(at_least(3, p) == rem(prop("P"), rem(prop("P"), exists(prop("P")))));
  Model two = monadic({{"P"}, {"P"}, {}});
  for (const auto& w : two.worlds) {
    CHECK(check(two, w, at_least(2, p)));
    CHECK_FALSE(check(two, w, at_least(3, p)));
  }
  GlobalSD none = with_entries({"P"}, 1, {{true, 1}, {false, 0}});
  CHECK(global_formula(none) == conj(at_least(1, parse_sd("-P")), neg(exists(prop("P")))));
}

TEST_CASE("at_least against cardinality") {
  for (auto preds : {std::vector<std::string>{"P"}, std::vector<std::string>{"P", "Q"}})
    for (const auto& m : all_monadic(preds, 4))
      for (const auto& sd : all_local(preds)) {
        int c = count_sd(m, sd);
        for (unsigned k = 0; k <= 5; ++k) {
          Formula f = at_least(k, sd);
          for (const auto& w : m.worlds) REQUIRE(check(m, w, f) == (c >= static_cast<int>(k)));
        }
      }
}

TEST_CASE("global descriptions do not depend on the point") {
  std::vector<std::string> preds{"P", "Q"};
  auto gs = all_global(preds, 2);
  auto ms = all_monadic(preds, 3);
  for (std::size_t i = 0; i < gs.size(); i += 3) {
    Formula f = global_formula(gs[i]);
    for (const auto& m : ms) {
      IndexedModel im = IndexedModel::from(m);
      auto ext = Evaluator(im, f).extension(im.all);
      CHECK((ext.empty() || ext == im.all));
    }
  }
}

TEST_CASE("pull-out examples") {
  std::vector<std::string> preds{"P"};
  LocalSD p = parse_sd("+P");
  GlobalSD trivial = all_global(preds, 0).front();
  CHECK(global_formula(trivial) == top());
  Formula inner = prop("Q");
  Model m = monadic({{"P"}, {"Q"}});
  for (const auto& w : m.worlds) {
    bool lhs = check(m, w, rem(conj(sd_formula(p), global_formula(trivial)), inner));
    CHECK(lhs == check(m, w, rewrite_pull_out(p, trivial, inner)));
    CHECK(lhs == check(m, w, rem(sd_formula(p), inner)));
  }
  Model none = monadic({{}, {"Q"}});
  GlobalSD one = all_global(preds, 1).back();
  for (const auto& w : none.worlds) {
    CHECK_FALSE(check(none, w, rem(conj(sd_formula(p), global_formula(one)), inner)));
    CHECK_FALSE(check(none, w, rewrite_pull_out(p, one, inner)));
  }
}

TEST_CASE("increment examples") {
  std::vector<std::string> preds{"P"};
  LocalSD p = parse_sd("+P"), q = parse_sd("-P");
  // Two P-points among three; after removing one, exactly one P remains.
  Model m = monadic({{"P"}, {"P"}, {}});
  GlobalSD g = with_entries(preds, 2, {{false, 1}, {false, 1}});  // index 0 is -P, 1 is +P
  Formula lhs = rem(sd_formula(p), conj(sd_formula(q), global_formula(g)));
  Formula rhs = rewrite_increment(p, q, g);
  CHECK(increment(g, 1).entries[1] == CountEntry{false, 2});
  for (const auto& w : m.worlds) CHECK(check(m, w, lhs) == check(m, w, rhs));
  CHECK(check(m, "w2", rhs));
  // No P-point at all: nothing to remove.
  Model empty = monadic({{}, {}});
  for (const auto& w : empty.worlds) {
    CHECK_FALSE(check(empty, w, lhs));
    CHECK_FALSE(check(empty, w, rhs));
  }
  // AtLeast entries grow by one.
  GlobalSD a = with_entries(preds, 1, {{true, 1}, {true, 1}});
  CHECK(increment(a, 1).entries[1] == CountEntry{true, 2});
  for (const auto& mm : all_monadic(preds, 4))
    for (const auto& w : mm.worlds)
      CHECK(check(mm, w, rem(sd_formula(p), conj(sd_formula(q), global_formula(a)))) ==
            check(mm, w, rewrite_increment(p, q, a)));
}

TEST_CASE("increment needs sd' to be allowed by SD") {
  // The only P-point is the current one; SD claims there is none.
  std::vector<std::string> preds{"P"};
  LocalSD p = parse_sd("+P");
  GlobalSD g = with_entries(preds, 1, {{true, 1}, {false, 0}});
  CHECK_FALSE(consistent(p, g));
  Model m = monadic({{"P"}, {}});
  CHECK_FALSE(check(m, "w0", rem(sd_formula(p), conj(sd_formula(p), global_formula(g)))));
  CHECK(check(m, "w0", rewrite_increment(p, p, g)));
}

TEST_CASE("sweep at three worlds") {
  auto lines = counting_sweep(3, 2);
  REQUIRE(lines.size() == 5);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK_MESSAGE(lines[i].failures == 0, lines[i].name << ": " << lines[i].first_failure);
    CHECK(lines[i].checks > 0);
  }
  CHECK(lines[4].failures > 0);
}
