#include "mlsr/kripke.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mlsr/indexed.hpp"

namespace mlsr {

using json = nlohmann::json;

Model& Model::add_world(const std::string& w) {
  worlds.insert(w);
  return *this;
}

Model& Model::add_edge(const std::string& from, const std::string& to, const std::string& label) {
  worlds.insert(from);
  worlds.insert(to);
  relations[label].insert({from, to});
  return *this;
}

Model& Model::set_true(const std::string& prop, const std::string& w) {
  worlds.insert(w);
  valuation[prop].insert(w);
  return *this;
}

Model& Model::set_nominal(const std::string& nom, std::optional<std::string> w) {
  if (w) worlds.insert(*w);
  nominals[nom] = std::move(w);
  return *this;
}

bool Model::edge(const std::string& from, const std::string& to, const std::string& label) const {
  auto it = relations.find(label);
  return it != relations.end() && it->second.count({from, to});
}

bool Model::holds(const std::string& prop, const std::string& w) const {
  auto it = valuation.find(prop);
  return it != valuation.end() && it->second.count(w);
}

void Model::validate() const {
  auto need = [&](const std::string& w, const std::string& where) {
    if (!worlds.count(w)) throw InputError("unknown world '" + w + "' in " + where);
  };
  for (const auto& [l, es] : relations)
    for (const auto& [a, b] : es) {
      need(a, "relation " + l);
      need(b, "relation " + l);
    }
  for (const auto& [p, ws] : valuation)
    for (const auto& w : ws) need(w, "valuation of " + p);
  for (const auto& [n, w] : nominals)
    if (w) need(*w, "nominal " + n);
  if (point) need(*point, "point");
}

Model delete_worlds(const Model& m, const std::set<std::string>& d) {
  for (const auto& w : d)
    if (!m.worlds.count(w)) throw InputError("cannot delete unknown world '" + w + "'");
  Model r;
  for (const auto& w : m.worlds)
    if (!d.count(w)) r.worlds.insert(w);
  for (const auto& [l, es] : m.relations) {
    auto& out = r.relations[l];
    for (const auto& e : es)
      if (!d.count(e.first) && !d.count(e.second)) out.insert(e);
  }
  for (const auto& [p, ws] : m.valuation) {
    auto& out = r.valuation[p];
    for (const auto& w : ws)
      if (!d.count(w)) out.insert(w);
  }
  for (const auto& [n, w] : m.nominals) r.nominals[n] = (w && !d.count(*w)) ? w : std::nullopt;
  if (m.point && !d.count(*m.point)) r.point = m.point;
  return r;
}

Model relativize(const Model& m, const std::set<std::string>& keep) {
  for (const auto& w : keep)
    if (!m.worlds.count(w)) throw InputError("cannot keep unknown world '" + w + "'");
  std::set<std::string> d;
  for (const auto& w : m.worlds)
    if (!keep.count(w)) d.insert(w);
  return delete_worlds(m, d);
}

std::string world_name(unsigned i) { return "w" + std::to_string(i); }

Model generate_random(unsigned worlds, const std::vector<std::string>& props, double edge_density,
                      std::uint64_t seed, const std::vector<std::string>& labels) {
  if (worlds == 0) throw InputError("generate_random needs at least one world");
  if (!(edge_density >= 0.0 && edge_density <= 1.0)) throw InputError("edge density must lie in [0,1]");
  std::mt19937_64 rng(seed);
  // 53 random bits mapped to [0,1); fixed here so snapshots do not depend on
  // the standard library's distribution implementation.
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  Model m;
  for (unsigned i = 0; i < worlds; ++i) m.worlds.insert(world_name(i));
  for (const auto& l : labels) {
    auto& es = m.relations[l];
    for (unsigned i = 0; i < worlds; ++i)
      for (unsigned j = 0; j < worlds; ++j)
        if (unit() < edge_density) es.insert({world_name(i), world_name(j)});
  }
  for (const auto& p : props) {
    auto& ext = m.valuation[p];
    for (unsigned i = 0; i < worlds; ++i)
      if (rng() & 1) ext.insert(world_name(i));
  }
  return m;
}

void enumerate_models(unsigned max_worlds, const std::vector<std::string>& props,
                      const std::vector<std::string>& labels,
                      const std::function<bool(const Model&)>& visit) {
  for (unsigned n = 1; n <= max_worlds; ++n) {
    const unsigned rel_bits = n * n * static_cast<unsigned>(labels.size());
    const unsigned bits = rel_bits + n * static_cast<unsigned>(props.size());
    if (bits > 40) throw InputError("enumeration scope too large");
    std::vector<std::string> names;
    for (unsigned i = 0; i < n; ++i) names.push_back(world_name(i));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
      Model m;
      m.worlds.insert(names.begin(), names.end());
      unsigned b = 0;
      for (const auto& l : labels) {
        auto& es = m.relations[l];
        for (unsigned i = 0; i < n; ++i)
          for (unsigned j = 0; j < n; ++j, ++b)
            if (mask >> b & 1) es.insert({names[i], names[j]});
      }
      for (const auto& p : props) {
        auto& ext = m.valuation[p];
        for (unsigned i = 0; i < n; ++i, ++b)
          if (mask >> b & 1) ext.insert(names[i]);
      }
      if (!visit(m)) return;
    }
  }
}

std::vector<Model> all_models(unsigned max_worlds, const std::vector<std::string>& props,
                              const std::vector<std::string>& labels) {
  std::vector<Model> out;
  enumerate_models(max_worlds, props, labels, [&](const Model& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------- JSON

std::string model_to_json(const Model& m, int indent) {
  json j;
  j["worlds"] = json::array();
  for (const auto& w : m.worlds) j["worlds"].push_back(w);
  j["relations"] = json::object();
  for (const auto& [l, es] : m.relations) {
    json arr = json::array();
    for (const auto& [a, b] : es) arr.push_back(json::array({a, b}));
    j["relations"][l] = arr;
  }
  j["valuation"] = json::object();
  for (const auto& [p, ws] : m.valuation) {
    json arr = json::array();
    for (const auto& w : ws) arr.push_back(w);
    j["valuation"][p] = arr;
  }
  j["nominals"] = json::object();
  for (const auto& [n, w] : m.nominals) j["nominals"][n] = w ? json(*w) : json(nullptr);
  if (m.point) j["point"] = *m.point;
  return j.dump(indent);
}

namespace {

const json& field(const json& j, const char* key, json::value_t type, const json& fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (it->type() != type) throw InputError(std::string("model field '") + key + "' has the wrong type");
  return *it;
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) throw InputError("expected a string in " + where);
  return j.get<std::string>();
}

}  // namespace

Model model_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("model JSON must be an object");
  static const json empty_arr = json::array();
  static const json empty_obj = json::object();
  Model m;
  for (const auto& w : field(j, "worlds", json::value_t::array, empty_arr)) m.worlds.insert(str(w, "worlds"));
  for (const auto& [l, es] : field(j, "relations", json::value_t::object, empty_obj).items()) {
    if (!es.is_array()) throw InputError("relation '" + l + "' must be an array of pairs");
    auto& out = m.relations[l];
    for (const auto& e : es) {
      if (!e.is_array() || e.size() != 2) throw InputError("relation '" + l + "' must contain pairs");
      out.insert({str(e[0], "relation " + l), str(e[1], "relation " + l)});
    }
  }
  for (const auto& [p, ws] : field(j, "valuation", json::value_t::object, empty_obj).items()) {
    if (!ws.is_array()) throw InputError("valuation of '" + p + "' must be an array");
    auto& out = m.valuation[p];
    for (const auto& w : ws) out.insert(str(w, "valuation of " + p));
  }
  for (const auto& [n, w] : field(j, "nominals", json::value_t::object, empty_obj).items()) {
    if (w.is_null())
      m.nominals[n] = std::nullopt;
    else
      m.nominals[n] = str(w, "nominal " + n);
  }
  if (auto it = j.find("point"); it != j.end() && !it->is_null()) m.point = str(*it, "point");
  m.validate();
  return m;
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file '" + path + "'");
  out << model_to_json(m) << "\n";
}

// ---------------------------------------------------------------- indexed

int IndexedModel::label_index(const std::string& l) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == l) return static_cast<int>(i);
  return -1;
}

int IndexedModel::world(const std::string& id) const {
  auto it = index.find(id);
  if (it == index.end()) throw InputError("unknown world '" + id + "'");
  return it->second;
}

IndexedModel IndexedModel::from(const Model& m) {
  if (m.worlds.size() > static_cast<std::size_t>(WorldSet::kCapacity))
    throw InputError("model has more than " + std::to_string(WorldSet::kCapacity) + " worlds");
  m.validate();
  IndexedModel im;
  for (const auto& w : m.worlds) {
    im.index[w] = static_cast<int>(im.names.size());
    im.names.push_back(w);
  }
  im.all = WorldSet::range(im.size());
  for (const auto& [l, es] : m.relations) {
    im.labels.push_back(l);
    std::vector<WorldSet> s(im.names.size());
    for (const auto& [a, b] : es) s[im.index.at(a)].set(im.index.at(b));
    im.succ.push_back(std::move(s));
  }
  for (const auto& [p, ws] : m.valuation) {
    WorldSet s;
    for (const auto& w : ws) s.set(im.index.at(w));
    im.props[p] = s;
  }
  for (const auto& [n, w] : m.nominals) im.nominals[n] = w ? im.index.at(*w) : -1;
  return im;
}

Model IndexedModel::to_model() const {
  Model m;
  m.worlds.insert(names.begin(), names.end());
  for (std::size_t l = 0; l < labels.size(); ++l) {
    auto& es = m.relations[labels[l]];
    for (int a = 0; a < size(); ++a) succ[l][a].for_each([&](int b) { es.insert({names[a], names[b]}); });
  }
  for (const auto& [p, s] : props) {
    auto& ext = m.valuation[p];
    s.for_each([&](int w) { ext.insert(names[w]); });
  }
  for (const auto& [n, w] : nominals) m.nominals[n] = w >= 0 ? std::optional<std::string>(names[w]) : std::nullopt;
  return m;
}

}  // namespace mlsr
