#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlsr/error.hpp"

namespace mlsr {

using Edge = std::pair<std::string, std::string>;

// Finite Kripke model with string world identifiers. Empty models are legal
// values; operations that need a point reject them.
struct Model {
  std::set<std::string> worlds;
  std::map<std::string, std::set<Edge>> relations;
  std::map<std::string, std::set<std::string>> valuation;
  // Nominal name -> denoted world, or nullopt when it does not denote.
  std::map<std::string, std::optional<std::string>> nominals;
  std::optional<std::string> point;

  bool operator==(const Model& o) const = default;

  bool has_world(const std::string& w) const { return worlds.count(w) != 0; }
  Model& add_world(const std::string& w);
  // Adds both endpoints if missing.
  Model& add_edge(const std::string& from, const std::string& to, const std::string& label = "r");
  Model& set_true(const std::string& prop, const std::string& w);
  Model& set_nominal(const std::string& nom, std::optional<std::string> w);

  bool edge(const std::string& from, const std::string& to, const std::string& label = "r") const;
  bool holds(const std::string& prop, const std::string& w) const;

  // Throws InputError when a pair, valuation entry, nominal or point
  // references an unknown world.
  void validate() const;
};

struct PointedModel {
  Model model;
  std::string point;
};

// M - d. A nominal whose world is removed stops denoting; a removed point is
// cleared.
Model delete_worlds(const Model& m, const std::set<std::string>& d);
// Restriction of m to `keep`; same as deleting the complement.
Model relativize(const Model& m, const std::set<std::string>& keep);

Model generate_random(unsigned worlds, const std::vector<std::string>& props, double edge_density,
                      std::uint64_t seed, const std::vector<std::string>& labels = {"r"});

// Visits every model on worlds w0..w{n-1} for n = 1..max_worlds, over all
// relations for the given labels and all valuations. The visitor returns
// false to stop early.
void enumerate_models(unsigned max_worlds, const std::vector<std::string>& props,
                      const std::vector<std::string>& labels,
                      const std::function<bool(const Model&)>& visit);
std::vector<Model> all_models(unsigned max_worlds, const std::vector<std::string>& props,
                              const std::vector<std::string>& labels);

// Canonical JSON text: object keys and all arrays sorted.
std::string model_to_json(const Model& m, int indent = 2);
Model model_from_json(std::string_view text);
Model load_model(const std::string& path);
void save_model(const Model& m, const std::string& path);

std::string world_name(unsigned i);

}  // namespace mlsr
