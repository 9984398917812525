#pragma once

#include <string>
#include <vector>

#include "mlsr/formula.hpp"
#include "mlsr/kripke.hpp"

namespace mlsr {

struct Tile {
  std::string u, r, d, l;
  bool operator==(const Tile&) const = default;
};

// Tile i (0-based) is named by the letter t<i+1>.
struct TileSet {
  std::vector<Tile> tiles;
};

// {"tiles":[{"u":"c1","r":"c2","d":"c1","l":"c2"},...]}
TileSet tiles_from_json(const std::string& text);
std::string tiles_to_json(const TileSet& ts);
TileSet load_tiles(const std::string& path);

std::string tile_letter(int index);  // t1, t2, ...

// Cell (x, y) holds tiles[assign[y * width + x]]. Row y+1 lies above row y.
struct PeriodicTiling {
  int width = 0;
  int height = 0;
  std::vector<int> assign;
  int at(int x, int y) const { return assign[y * width + x]; }
};

// Checks dimensions >= 2, tile indices and both color-matching conditions.
PeriodicTiling make_periodic(const TileSet& ts, int width, int height, std::vector<int> assign);
// Empty string when `pt` is a valid periodic tiling of `ts`, else the first problem.
std::string periodic_violation(const TileSet& ts, const PeriodicTiling& pt);
// Rows of 1-based tile numbers, bottom row first: [[1,2],[2,1]].
// Also accepts {"assign": [...]}.
std::vector<int> assignment_from_json(const std::string& text, int width, int height);

// Conjunction of the grid-shape constraints (two functionality conjuncts,
// confluence) and the tiling constraints (unique tile, vertical and
// horizontal matching) over labels u and r.
Formula encode(const TileSet& ts);

// Grid cells x<col>y<row>; u goes up one row, r one column right, both mod
// the dimensions. Does not check color matching.
Model torus_model(const PeriodicTiling& pt);

bool verify_periodic(const TileSet& ts, const PeriodicTiling& pt);

}  // namespace mlsr
