#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlsr/bisim.hpp"
#include "mlsr/checker.hpp"
#include "mlsr/counting.hpp"
#include "mlsr/error.hpp"
#include "mlsr/fol.hpp"
#include "mlsr/hilbert.hpp"
#include "mlsr/kripke.hpp"
#include "mlsr/qbf.hpp"
#include "mlsr/tiling.hpp"

using namespace mlsr;
using nlohmann::json;

namespace {

enum Exit { kTrue = 0, kFalse = 1, kUsage = 2, kInput = 3 };

struct Globals {
  bool json = false;
  std::uint64_t seed = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

ParseOptions labels_of_model(const Model& m) {
  ParseOptions o;
  for (const auto& [l, _] : m.relations) o.labels.insert(l);
  return o;
}

std::string point_of(const Model& m, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (m.point) return *m.point;
  if (m.worlds.empty()) throw InputError("empty model");
  return *m.worlds.begin();
}

int boolean(const Globals& g, bool value, json extra, const std::string& text) {
  if (g.json) {
    extra["value"] = value;
    std::cout << extra.dump(2) << "\n";
  } else {
    std::cout << text << "\n";
  }
  return value ? kTrue : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model checking, bisimulation, reductions and proof checking for stepwise removal logic"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "JSON output");
  app.add_option("--seed", g.seed, "Random seed");
  std::function<int()> run;

  // check
  auto* check_cmd = app.add_subcommand("check", "Evaluate a formula at a point");
  std::string model_path, point, formula_text;
  bool trace = false;
  check_cmd->add_option("--model", model_path, "Model JSON")->required();
  check_cmd->add_option("--point", point, "Evaluation point (default: the model's point)");
  check_cmd->add_option("--formula", formula_text, "Formula")->required();
  check_cmd->add_flag("--trace", trace, "Print the evaluation tree as JSON");
  check_cmd->callback([&] {
    run = [&]() -> int {
      Model m = load_model(model_path);
      Formula f = parse(formula_text, labels_of_model(m));
      std::string pt = point_of(m, point);
      CheckOptions o;
      o.trace = trace;
      CheckResult r = check_ex(m, pt, f, o);
      if (trace) {
        std::cout << trace_to_json(*r.trace) << "\n";
        return r.value ? kTrue : kFalse;
      }
      return boolean(g, r.value, {{"formula", print(f)}, {"point", pt}}, r.value ? "true" : "false");
    };
  });

  // translate
  auto* tr_cmd = app.add_subcommand("translate", "First-order translation of a formula");
  std::string labels_csv;
  tr_cmd->add_option("--formula", formula_text, "Formula")->required();
  tr_cmd->add_option("--labels", labels_csv, "Extra relation labels, comma separated");
  tr_cmd->callback([&] {
    run = [&]() -> int {
      ParseOptions o;
      std::stringstream ss(labels_csv);
      for (std::string l; std::getline(ss, l, ',');)
        if (!l.empty()) o.labels.insert(l);
      Fol t = translate(parse(formula_text, o));
      if (g.json)
        std::cout << json{{"formula", formula_text}, {"fol", fol_print(t)}, {"size", fol_size(t)}}.dump(2) << "\n";
      else
        std::cout << fol_print(t) << "\n";
      return kTrue;
    };
  });

  // fol-check
  auto* fc_cmd = app.add_subcommand("fol-check", "Evaluate a first-order formula on a model");
  std::vector<std::string> assigns;
  std::string fol_path, fol_text;
  fc_cmd->add_option("--model", model_path, "Model JSON")->required();
  fc_cmd->add_option("--assign", assigns, "var=world, repeatable");
  auto* fol_file = fc_cmd->add_option("--fol", fol_path, "File holding a prefix-form formula");
  auto* fol_inline = fc_cmd->add_option("--fol-text", fol_text, "Prefix-form formula");
  fol_file->excludes(fol_inline);
  fc_cmd->callback([&] {
    run = [&]() -> int {
      Model m = load_model(model_path);
      std::map<std::string, std::string> env;
      for (const auto& a : assigns) {
        auto eq = a.find('=');
        if (eq == std::string::npos) throw InputError("--assign expects var=world");
        env[a.substr(0, eq)] = a.substr(eq + 1);
      }
      if (fol_path.empty() && fol_text.empty()) throw InputError("one of --fol or --fol-text is required");
      Fol f = fol_parse(fol_path.empty() ? fol_text : read_file(fol_path));
      bool v = fol_eval(m, env, f);
      return boolean(g, v, {{"fol", fol_print(f)}}, v ? "true" : "false");
    };
  });

  // bisim
  auto* bi_cmd = app.add_subcommand("bisim", "Decide SR-bisimilarity of two pointed models");
  std::string left, right, left_point, right_point;
  bool witness = false;
  unsigned max_worlds = 8;
  bi_cmd->add_option("--left", left, "Model JSON")->required();
  bi_cmd->add_option("--right", right, "Model JSON")->required();
  bi_cmd->add_option("--left-point", left_point, "Point of the left model");
  bi_cmd->add_option("--right-point", right_point, "Point of the right model");
  bi_cmd->add_flag("--witness", witness, "Print a distinguishing formula when not bisimilar");
  bi_cmd->add_option("--max-worlds", max_worlds, "Size cap per model")->capture_default_str();
  bi_cmd->callback([&] {
    run = [&]() -> int {
      Model a = load_model(left), b = load_model(right);
      PointedModel pa{a, point_of(a, left_point)}, pb{b, point_of(b, right_point)};
      BisimOptions o;
      o.max_worlds = max_worlds;
      auto f = distinguishing_formula(pa, pb, o);
      bool same = !f;
      json extra{{"left_point", pa.point}, {"right_point", pb.point}};
      std::string text = same ? "bisimilar" : "not bisimilar";
      if (f && witness) {
        extra["witness"] = print(*f);
        text += "\nwitness: " + print(*f);
      }
      return boolean(g, same, extra, text);
    };
  });

  // qbf
  auto* qbf_cmd = app.add_subcommand("qbf", "QBF reduction to model checking");
  qbf_cmd->require_subcommand(1);
  std::string qbf_path, out_model, out_formula, goal_name = "escape";
  auto goal = [&] {
    if (goal_name == "escape") return GoalRule::Escape;
    if (goal_name == "final") return GoalRule::Final;
    throw InputError("--goal must be escape or final");
  };
  auto* qe = qbf_cmd->add_subcommand("encode", "Build the game model and formula");
  qe->add_option("--qbf", qbf_path, "QBF JSON")->required();
  qe->add_option("--out-model", out_model, "Write the model here");
  qe->add_option("--out-formula", out_formula, "Write the formula here");
  qe->add_option("--goal", goal_name, "escape or final")->capture_default_str();
  qe->callback([&] {
    run = [&]() -> int {
      QbfInstance q = load_qbf(qbf_path);
      PointedModel pm = build_model(q);
      pm.model.point = pm.point;
      Formula f = build_formula(q, goal());
      if (!out_model.empty()) write_file(out_model, model_to_json(pm.model) + "\n");
      if (!out_formula.empty()) write_file(out_formula, print(f) + "\n");
      std::size_t edges = 0;
      for (const auto& [_, es] : pm.model.relations) edges += es.size();
      if (g.json) {
        json j{{"qbf", qbf_to_string(q)}, {"worlds", pm.model.worlds.size()}, {"edges", edges},
               {"point", pm.point}, {"formula_size", f.size()}};
        if (out_formula.empty()) j["formula"] = print(f);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "qbf: " << qbf_to_string(q) << "\nworlds: " << pm.model.worlds.size() << "\nedges: " << edges
                  << "\npoint: " << pm.point << "\nformula size: " << f.size() << "\n";
        if (out_formula.empty()) std::cout << "formula: " << print(f) << "\n";
      }
      return kTrue;
    };
  });
  auto* qs = qbf_cmd->add_subcommand("solve", "Evaluate the QBF by brute force");
  qs->add_option("--qbf", qbf_path, "QBF JSON")->required();
  qs->callback([&] {
    run = [&]() -> int {
      QbfInstance q = load_qbf(qbf_path);
      bool v = brute_eval(q);
      return boolean(g, v, {{"qbf", qbf_to_string(q)}}, v ? "true" : "false");
    };
  });
  auto* qv = qbf_cmd->add_subcommand("verify", "Compare brute force, the game and model checking");
  qv->add_option("--qbf", qbf_path, "QBF JSON")->required();
  qv->add_option("--goal", goal_name, "escape or final")->capture_default_str();
  qv->callback([&] {
    run = [&]() -> int {
      QbfInstance q = load_qbf(qbf_path);
      PointedModel pm = build_model(q);
      GameSchedule s = build_schedule(q, goal());
      bool brute = brute_eval(q);
      bool game = game_solve(pm, s);
      bool mc = check(pm, schedule_formula(s));
      bool agree = brute == game && game == mc;
      if (g.json) {
        std::cout << json{{"qbf", qbf_to_string(q)}, {"brute", brute}, {"game", game}, {"model_check", mc},
                          {"agreement", agree}}
                         .dump(2)
                  << "\n";
      } else {
        std::cout << std::boolalpha << "brute force: " << brute << "\ngame: " << game << "\nmodel check: " << mc
                  << "\n3-way agreement: " << (agree ? "true" : "false") << "\n";
      }
      return agree ? kTrue : kFalse;
    };
  });

  // tile
  auto* tile_cmd = app.add_subcommand("tile", "Tiling encoding");
  tile_cmd->require_subcommand(1);
  std::string tiles_path, torus, assign_path;
  auto* te = tile_cmd->add_subcommand("encode", "Print the tiling formula");
  te->add_option("--tiles", tiles_path, "Tile JSON")->required();
  te->callback([&] {
    run = [&]() -> int {
      Formula f = encode(load_tiles(tiles_path));
      if (g.json)
        std::cout << json{{"formula", print(f)}, {"size", f.size()}}.dump(2) << "\n";
      else
        std::cout << print(f) << "\n";
      return kTrue;
    };
  });
  auto* tv = tile_cmd->add_subcommand("verify", "Check a periodic tiling and its torus model");
  tv->add_option("--tiles", tiles_path, "Tile JSON")->required();
  tv->add_option("--torus", torus, "WxH")->required();
  tv->add_option("--assign", assign_path, "Assignment JSON, rows bottom first, tiles numbered from 1")->required();
  tv->callback([&] {
    run = [&]() -> int {
      TileSet ts = load_tiles(tiles_path);
      int w = 0, h = 0;
      char x = 0;
      std::stringstream ss(torus);
      if (!(ss >> w >> x >> h) || (x != 'x' && x != 'X') || !ss.eof()) throw InputError("--torus expects WxH");
      PeriodicTiling pt{w, h, assignment_from_json(read_file(assign_path), w, h)};
      std::string why = periodic_violation(ts, pt);
      if (!why.empty() && why.find("mismatch") == std::string::npos) throw InputError("tiling: " + why);
      bool formula = valid_on(torus_model(pt), encode(ts));
      bool ok = why.empty() && formula;
      json extra{{"matching", why.empty()}, {"formula_holds", formula}};
      if (!why.empty()) extra["problem"] = why;
      std::string text = std::string("matching: ") + (why.empty() ? "ok" : why) +
                         "\nformula holds everywhere: " + (formula ? "true" : "false");
      return boolean(g, ok, extra, text);
    };
  });

  // proof
  auto* proof_cmd = app.add_subcommand("proof", "Derivations");
  proof_cmd->require_subcommand(1);
  std::string proof_path, out_dir;
  unsigned trials = 0;
  auto* pc = proof_cmd->add_subcommand("check", "Check a derivation");
  pc->add_option("derivation", proof_path, "Derivation JSON")->required();
  pc->add_option("--soundness-trials", trials, "Random models for the soundness spot check");
  pc->callback([&] {
    run = [&]() -> int {
      Derivation d = load_derivation(proof_path);
      CheckReport r = check_derivation(d);
      json j{{"accepted", r.ok}, {"lines", d.lines.size()}};
      std::string text;
      if (!r.ok) {
        j["line"] = r.line;
        j["error"] = r.kind;
        j["message"] = r.message;
        text = "rejected at line " + std::to_string(r.line) + " (" + r.kind + "): " + r.message;
      } else {
        j["theorem"] = print(r.theorem);
        j["hypotheses"] = r.uses_hypotheses;
        text = "accepted: " + print(r.theorem) + (r.uses_hypotheses ? " (from hypotheses)" : "");
      }
      bool ok = r.ok;
      if (r.ok && trials > 0) {
        if (r.uses_hypotheses) {
          j["spotcheck"] = "skipped";
          text += "\nspot check: skipped (hypotheses)";
        } else {
          SpotcheckResult s = soundness_spotcheck(r.theorem, trials, g.seed);
          j["spotcheck"] = s.ok;
          j["spotcheck_models"] = s.models;
          text += "\nspot check: " + std::string(s.ok ? "passed" : "FAILED") + " on " + std::to_string(s.models) +
                  " models";
          if (!s.ok) {
            j["countermodel"] = json::parse(model_to_json(s.countermodel->model));
            text += "\ncountermodel at " + s.countermodel->point + ":\n" + model_to_json(s.countermodel->model);
          }
          ok = s.ok;
        }
      }
      if (g.json)
        std::cout << j.dump(2) << "\n";
      else
        std::cout << text << "\n";
      return ok ? kTrue : kFalse;
    };
  });
  auto* pe = proof_cmd->add_subcommand("corpus", "Write the built-in derivations as JSON files");
  pe->add_option("--out-dir", out_dir, "Target directory")->required();
  pe->callback([&] {
    run = [&]() -> int {
      for (const auto& d : proof_corpus()) {
        write_file(out_dir + "/" + d.name + ".json", derivation_to_json(d) + "\n");
        std::cout << d.name << ".json " << d.lines.size() << " lines\n";
      }
      return kTrue;
    };
  });

  // count
  auto* count_cmd = app.add_subcommand("count", "Counting encodings");
  count_cmd->require_subcommand(1);
  unsigned m = 0, sweep_worlds = 4, sweep_preds = 2;
  std::string sd_text;
  auto* ca = count_cmd->add_subcommand("atleast", "At least m points satisfy a state description");
  ca->add_option("--m", m, "Count")->required();
  ca->add_option("--sd", sd_text, "State description such as +P1-P2")->required();
  ca->callback([&] {
    run = [&]() -> int {
      Formula f = at_least(m, parse_sd(sd_text));
      if (g.json)
        std::cout << json{{"formula", print(f)}, {"size", f.size()}, {"fol", fol_print(translate(f))}}.dump(2)
                  << "\n";
      else
        std::cout << print(f) << "\n";
      return kTrue;
    };
  });
  auto* cv = count_cmd->add_subcommand("verify", "Exhaustive check over relation-free models");
  cv->add_option("--worlds", sweep_worlds, "Largest model")->capture_default_str();
  cv->add_option("--preds", sweep_preds, "Largest predicate count")->capture_default_str();
  cv->callback([&] {
    run = [&]() -> int {
      auto lines = counting_sweep(sweep_worlds, sweep_preds);
      bool ok = true;
      json arr = json::array();
      for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& l = lines[i];
        bool expected_to_fail = i + 1 == lines.size();
        if (!expected_to_fail) ok = ok && l.failures == 0;
        arr.push_back({{"name", l.name}, {"checks", l.checks}, {"failures", l.failures},
                       {"first_failure", l.first_failure}});
        if (!g.json)
          std::cout << l.name << ": " << l.failures << " failures in " << l.checks << " checks"
                    << (expected_to_fail ? " (expected)" : "") << "\n";
      }
      if (g.json) std::cout << json{{"lines", arr}, {"ok", ok}}.dump(2) << "\n";
      return ok ? kTrue : kFalse;
    };
  });

  // gen-model
  auto* gm = app.add_subcommand("gen-model", "Random model");
  unsigned worlds = 3;
  std::string props_csv = "p", gm_labels = "r", gm_out;
  double density = 0.3;
  gm->add_option("--worlds", worlds, "Number of worlds")->capture_default_str();
  gm->add_option("--props", props_csv, "Proposition letters, comma separated")->capture_default_str();
  gm->add_option("--labels", gm_labels, "Relation labels, comma separated")->capture_default_str();
  gm->add_option("--density", density, "Edge probability")->capture_default_str();
  gm->add_option("--out", gm_out, "Write here instead of standard output");
  gm->callback([&] {
    run = [&]() -> int {
      auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        for (std::string x; std::getline(ss, x, ',');)
          if (!x.empty()) out.push_back(x);
        return out;
      };
      if (worlds == 0) throw InputError("--worlds must be positive");
      if (density < 0 || density > 1) throw InputError("--density must lie in [0, 1]");
      Model mm = generate_random(worlds, split(props_csv), density, g.seed, split(gm_labels));
      std::string text = model_to_json(mm) + "\n";
      if (gm_out.empty())
        std::cout << text;
      else
        write_file(gm_out, text);
      return kTrue;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    return run();
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
