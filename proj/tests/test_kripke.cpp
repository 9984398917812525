#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mlsr/checker.hpp"
#include "mlsr/kripke.hpp"

using namespace mlsr;

namespace {

Model loop2() {
  Model m;
  m.add_edge("a", "b").add_edge("b", "a");
  return m;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("delete") {
  Model m = loop2();
  CHECK(delete_worlds(m, {}) == m);
  Model d = delete_worlds(m, {"b"});
  CHECK(d.worlds == std::set<std::string>{"a"});
  CHECK(d.relations.at("r").empty());
  CHECK_THROWS_AS(delete_worlds(m, {"zz"}), InputError);

  m.set_nominal("n", "b");
  Model e = delete_worlds(m, {"b"});
  CHECK_FALSE(e.nominals.at("n").has_value());
  CHECK_FALSE(check(e, "a", parse("E'n")));
  CHECK(check(m, "a", parse("E'n")));
}

TEST_CASE("relativize") {
  Model m = loop2();
  CHECK(relativize(m, {"a", "b"}) == m);
  Model empty = relativize(m, {});
  CHECK(empty.worlds.empty());
  CHECK_THROWS_AS(check(empty, "a", top()), InputError);
  CHECK_THROWS_AS(valid_on(empty, top()), InputError);
  Model one = relativize(m, {"a"});
  CHECK(one.worlds.size() == 1);
  CHECK(one.relations.at("r").empty());
}

TEST_CASE("deletion composes and never adds structure") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    Model m = generate_random(5, {"p", "q"}, 0.5, rng());
    m.set_nominal("n", world_name(rng() % 5));
    std::set<std::string> d1, d2;
    for (const auto& w : m.worlds) {
      auto r = rng() % 3;
      if (r == 0) d1.insert(w);
      if (r == 1) d2.insert(w);
    }
    std::set<std::string> both = d1;
    both.insert(d2.begin(), d2.end());
    Model a = delete_worlds(delete_worlds(m, d1), d2);
    CHECK(a == delete_worlds(m, both));
    for (const auto& [l, es] : a.relations)
      for (const auto& e : es) CHECK(m.relations.at(l).count(e));
    for (const auto& [p, ws] : a.valuation)
      for (const auto& w : ws) CHECK(m.valuation.at(p).count(w));
  }
}

TEST_CASE("generate_random") {
  Model one = generate_random(1, {}, 0.0, 99);
  CHECK(one.worlds.size() == 1);
  CHECK(one.relations.at("r").empty());
  CHECK(generate_random(4, {"p"}, 0.5, 3) == generate_random(4, {"p"}, 0.5, 3));
  CHECK_THROWS_AS(generate_random(0, {}, 0.5, 1), InputError);
  CHECK_THROWS_AS(generate_random(2, {}, 1.5, 1), InputError);
}

TEST_CASE("generate_random snapshot") {
  Model m = generate_random(4, {"p"}, 0.5, 7);
  std::string golden = slurp(std::string(MLSR_TEST_DATA) + "/random_4_p_0.5_7.json");
  CHECK(model_to_json(m) + "\n" == golden);
}

TEST_CASE("enumerate_models counts") {
  CHECK(all_models(1, {}, {"r"}).size() == 2);
  CHECK(all_models(1, {"p"}, {"r"}).size() == 4);
  std::size_t two = 0;
  enumerate_models(2, {}, {"r"}, [&](const Model& m) {
    if (m.worlds.size() == 2) ++two;
    return true;
  });
  CHECK(two == 16);
  // Early stop.
  std::size_t seen = 0;
  enumerate_models(3, {}, {"r"}, [&](const Model&) { return ++seen < 5; });
  CHECK(seen == 5);
}

TEST_CASE("json round trip") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    Model m = generate_random(1 + rng() % 5, {"p", "q"}, 0.3, rng(), {"r", "u"});
    m.set_nominal("n", world_name(0));
    m.set_nominal("k", std::nullopt);
    if (i % 2) m.point = world_name(0);
    std::string text = model_to_json(m);
    Model back = model_from_json(text);
    CHECK(back == m);
    CHECK(model_to_json(back) == text);
  }
}

TEST_CASE("json validation") {
  CHECK_THROWS_AS(model_from_json("{"), InputError);
  CHECK_THROWS_AS(model_from_json("[]"), InputError);
  CHECK_THROWS_AS(model_from_json(R"({"worlds":["a"],"relations":{"r":[["a","b"]]}})"), InputError);
  CHECK_THROWS_AS(model_from_json(R"({"worlds":["a"],"valuation":{"p":["b"]}})"), InputError);
  CHECK_THROWS_AS(model_from_json(R"({"worlds":["a"],"nominals":{"n":"b"}})"), InputError);
  CHECK_THROWS_AS(model_from_json(R"({"worlds":["a"],"point":"b"})"), InputError);
  CHECK_THROWS_AS(model_from_json(R"({"worlds":["a"],"relations":{"r":[["a"]]}})"), InputError);
  Model m = model_from_json(R"({"worlds":["b","a"],"relations":{"r":[["b","a"]]},"nominals":{"n":null}})");
  CHECK(m.worlds.size() == 2);
  CHECK(m.edge("b", "a"));
  CHECK_FALSE(m.nominals.at("n").has_value());
}
