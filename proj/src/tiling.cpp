#include "mlsr/tiling.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mlsr/checker.hpp"
#include "mlsr/error.hpp"

namespace mlsr {

using nlohmann::json;

TileSet tiles_from_json(const std::string& text) {
  TileSet ts;
  try {
    json j = json::parse(text);
    for (const auto& t : j.at("tiles"))
      ts.tiles.push_back(Tile{t.at("u").get<std::string>(), t.at("r").get<std::string>(),
                              t.at("d").get<std::string>(), t.at("l").get<std::string>()});
  } catch (const json::exception& e) {
    throw InputError(std::string("tiles: ") + e.what());
  }
  if (ts.tiles.empty()) throw InputError("tiles: empty tile set");
  return ts;
}

std::string tiles_to_json(const TileSet& ts) {
  json j;
  j["tiles"] = json::array();
  for (const auto& t : ts.tiles) j["tiles"].push_back({{"u", t.u}, {"r", t.r}, {"d", t.d}, {"l", t.l}});
  return j.dump();
}

TileSet load_tiles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return tiles_from_json(ss.str());
}

std::string tile_letter(int index) { return "t" + std::to_string(index + 1); }

std::string periodic_violation(const TileSet& ts, const PeriodicTiling& pt) {
  if (pt.width < 2 || pt.height < 2) return "torus dimensions must be at least 2x2";
  if (pt.assign.size() != static_cast<std::size_t>(pt.width * pt.height)) return "assignment size does not match";
  int n = static_cast<int>(ts.tiles.size());
  for (int v : pt.assign)
    if (v < 0 || v >= n) return "tile index out of range";
  for (int y = 0; y < pt.height; ++y)
    for (int x = 0; x < pt.width; ++x) {
      const Tile& here = ts.tiles[pt.at(x, y)];
      const Tile& right = ts.tiles[pt.at((x + 1) % pt.width, y)];
      const Tile& up = ts.tiles[pt.at(x, (y + 1) % pt.height)];
      auto cell = "(" + std::to_string(x) + "," + std::to_string(y) + ")";
      if (here.r != right.l) return "horizontal mismatch at " + cell;
      if (here.u != up.d) return "vertical mismatch at " + cell;
    }
  return "";
}

PeriodicTiling make_periodic(const TileSet& ts, int width, int height, std::vector<int> assign) {
  PeriodicTiling pt{width, height, std::move(assign)};
  if (auto why = periodic_violation(ts, pt); !why.empty()) throw InputError("tiling: " + why);
  return pt;
}

std::vector<int> assignment_from_json(const std::string& text, int width, int height) {
  std::vector<int> out;
  try {
    json j = json::parse(text);
    if (j.is_object()) j = j.at("assign");
    if (!j.is_array() || static_cast<int>(j.size()) != height) throw InputError("assignment: expected " + std::to_string(height) + " rows");
    for (const auto& row : j) {
      if (!row.is_array() || static_cast<int>(row.size()) != width)
        throw InputError("assignment: expected rows of " + std::to_string(width) + " tiles");
      for (const auto& v : row) out.push_back(v.get<int>() - 1);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("assignment: ") + e.what());
  }
  return out;
}

Formula encode(const TileSet& ts) {
  if (ts.tiles.empty()) throw InputError("tiles: empty tile set");
  const int n = static_cast<int>(ts.tiles.size());
  auto t = [](int i) { return prop(tile_letter(i)); };
  Formula bu = box(bot(), "u"), br = box(bot(), "r");
  Formula func1 = univ(rem(top(), conj(bu, dia(top(), "r"))));
  Formula func2 = univ(rem(top(), conj(br, dia(top(), "u"))));
  Formula confl = univ(rem(top(), conj(dia(bu, "r"), dia(br, "u"))));

  std::vector<Formula> some, excl;
  for (int i = 0; i < n; ++i) some.push_back(t(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) excl.push_back(implies(t(i), neg(t(j))));
  Formula unique = univ(excl.empty() ? disj_all(some) : conj(disj_all(some), conj_all(excl)));

  std::vector<Formula> vert, horiz;
  for (int i = 0; i < n; ++i) {
    std::vector<Formula> above, right;
    for (int j = 0; j < n; ++j) {
      if (ts.tiles[i].u == ts.tiles[j].d) above.push_back(t(j));
      if (ts.tiles[i].r == ts.tiles[j].l) right.push_back(t(j));
    }
    vert.push_back(implies(t(i), dia(disj_all(above), "u")));
    horiz.push_back(implies(t(i), dia(disj_all(right), "r")));
  }
  return conj_all({func1, func2, confl, unique, univ(conj_all(vert)), univ(conj_all(horiz))});
}

Model torus_model(const PeriodicTiling& pt) {
  if (pt.width < 2 || pt.height < 2) throw InputError("tiling: torus dimensions must be at least 2x2");
  if (pt.assign.size() != static_cast<std::size_t>(pt.width * pt.height))
    throw InputError("tiling: assignment size does not match");
  auto cell = [](int x, int y) { return "x" + std::to_string(x) + "y" + std::to_string(y); };
  Model m;
  for (int y = 0; y < pt.height; ++y)
    for (int x = 0; x < pt.width; ++x) {
      m.add_edge(cell(x, y), cell(x, (y + 1) % pt.height), "u");
      m.add_edge(cell(x, y), cell((x + 1) % pt.width, y), "r");
      m.set_true(tile_letter(pt.at(x, y)), cell(x, y));
    }
  return m;
}

bool verify_periodic(const TileSet& ts, const PeriodicTiling& pt) {
  if (!periodic_violation(ts, pt).empty()) return false;
  return valid_on(torus_model(pt), encode(ts));
}

}  // namespace mlsr
