#include "mlsr/counting.hpp"

#include <bit>
#include <cctype>

#include "mlsr/checker.hpp"
#include "mlsr/error.hpp"
#include "mlsr/indexed.hpp"

namespace mlsr {

LocalSD parse_sd(const std::string& text) {
  LocalSD sd;
  std::size_t i = 0;
  while (i < text.size()) {
    char sign = text[i];
    if (sign != '+' && sign != '-') throw ParseError("expected '+' or '-' in state description", i);
    std::size_t j = i + 1;
    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
    if (j == i + 1) throw ParseError("expected predicate name", j);
    std::string name = text.substr(i + 1, j - i - 1);
    for (const auto& p : sd.preds)
      if (p == name) throw ParseError("predicate " + name + " repeated", i + 1);
    if (sign == '+') sd.mask |= 1u << sd.preds.size();
    sd.preds.push_back(name);
    i = j;
  }
  if (sd.preds.empty()) throw ParseError("empty state description", 0);
  if (sd.preds.size() > 16) throw InputError("state description: at most 16 predicates");
  return sd;
}

std::string sd_to_string(const LocalSD& sd) {
  std::string out;
  for (std::size_t i = 0; i < sd.preds.size(); ++i) out += ((sd.mask >> i & 1) ? "+" : "-") + sd.preds[i];
  return out;
}

std::vector<LocalSD> all_local(const std::vector<std::string>& preds) {
  std::vector<LocalSD> out;
  for (unsigned m = 0; m < (1u << preds.size()); ++m) out.push_back(LocalSD{preds, m});
  return out;
}

std::vector<GlobalSD> all_global(const std::vector<std::string>& preds, unsigned threshold) {
  std::size_t slots = std::size_t{1} << preds.size();
  std::vector<GlobalSD> out;
  std::vector<unsigned> choice(slots, 0);  // 0..threshold-1 exact, threshold = at least
  while (true) {
    GlobalSD g{preds, threshold, {}};
    for (unsigned c : choice) g.entries.push_back(c == threshold ? CountEntry{true, threshold} : CountEntry{false, c});
    out.push_back(std::move(g));
    std::size_t i = 0;
    while (i < slots && choice[i] == threshold) choice[i++] = 0;
    if (i == slots) break;
    ++choice[i];
  }
  return out;
}

std::string sd_to_string(const GlobalSD& g) {
  std::string out;
  for (std::size_t i = 0; i < g.entries.size(); ++i) {
    if (i) out += " ";
    out += sd_to_string(LocalSD{g.preds, static_cast<unsigned>(i)});
    out += (g.entries[i].at_least ? ">=" : "=") + std::to_string(g.entries[i].m);
  }
  return out;
}

Formula sd_formula(const LocalSD& sd) {
  std::vector<Formula> lits;
  for (std::size_t i = 0; i < sd.preds.size(); ++i) {
    Formula p = prop(sd.preds[i]);
    lits.push_back((sd.mask >> i & 1) ? p : neg(p));
  }
  return conj_all(lits);
}

Fol sd_to_fol(const LocalSD& sd, const std::string& var) {
  Fol out;
  for (std::size_t i = sd.preds.size(); i-- > 0;) {
    Fol p = fol_pred(prop_symbol(sd.preds[i]), var);
    Fol lit = (sd.mask >> i & 1) ? p : fol_not(p);
    out = out.is_null() ? lit : fol_and(lit, out);
  }
  return out;
}

Formula at_least(unsigned m, const Formula& phi) {
  if (m == 0) return top();
  Formula f = exists(phi);
  for (unsigned i = 1; i < m; ++i) f = rem(phi, f);
  return f;
}

Formula at_least(unsigned m, const LocalSD& sd) { return at_least(m, sd_formula(sd)); }

Formula exactly(unsigned m, const Formula& phi) {
  Formula no_more = neg(at_least(m + 1, phi));
  return m == 0 ? no_more : conj(at_least(m, phi), no_more);
}

Formula global_formula(const GlobalSD& g) {
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < g.entries.size(); ++i) {
    Formula sd = sd_formula(LocalSD{g.preds, static_cast<unsigned>(i)});
    const auto& e = g.entries[i];
    if (e.at_least) {
      if (e.m > 0) parts.push_back(at_least(e.m, sd));
    } else {
      parts.push_back(exactly(e.m, sd));
    }
  }
  return conj_all(parts);
}

bool consistent(const LocalSD& sd, const GlobalSD& g) {
  if (sd.preds != g.preds) throw InputError("state descriptions over different predicates");
  return g.entries.at(sd.mask).m > 0;
}

GlobalSD increment(const GlobalSD& g, unsigned i) {
  GlobalSD out = g;
  out.entries.at(i).m += 1;
  return out;
}

Formula rewrite_pull_out(const LocalSD& sd, const GlobalSD& g, const Formula& inner) {
  return conj(global_formula(g), rem(sd_formula(sd), inner));
}

Formula rewrite_increment(const LocalSD& sd_i, const LocalSD& sd_prime, const GlobalSD& g) {
  if (sd_i.preds != g.preds || sd_prime.preds != g.preds)
    throw InputError("state descriptions over different predicates");
  return conj(sd_formula(sd_prime), global_formula(increment(g, sd_i.mask)));
}

namespace {

struct MonadicModel {
  IndexedModel im;
  std::vector<int> counts;  // per local description mask
  std::string text;
};

std::vector<MonadicModel> monadic_models(const std::vector<std::string>& preds, unsigned max_worlds) {
  std::vector<MonadicModel> out;
  unsigned k = static_cast<unsigned>(preds.size());
  for (unsigned n = 1; n <= max_worlds; ++n)
    for (std::uint64_t val = 0; val < (std::uint64_t{1} << (k * n)); ++val) {
      Model m;
      std::vector<int> counts(std::size_t{1} << k, 0);
      std::string text;
      for (unsigned w = 0; w < n; ++w) {
        m.add_world(world_name(w));
        unsigned mask = (val >> (k * w)) & ((1u << k) - 1);
        ++counts[mask];
        text += world_name(w) + ":" + sd_to_string(LocalSD{preds, mask}) + " ";
        for (unsigned i = 0; i < k; ++i)
          if (mask >> i & 1) m.set_true(preds[i], world_name(w));
      }
      // Keep every predicate in the valuation so the evaluator sees it.
      for (const auto& p : preds) m.valuation[p];
      out.push_back({IndexedModel::from(m), std::move(counts), text});
    }
  return out;
}

void compare(SweepLine& line, const std::vector<MonadicModel>& models, const Formula& lhs, const Formula& rhs) {
  Evaluator el(lhs), er(rhs);
  for (const auto& mm : models) {
    el.bind(mm.im);
    er.bind(mm.im);
    ++line.checks;
    if (!(el.extension(mm.im.all) == er.extension(mm.im.all))) {
      if (line.failures++ == 0) line.first_failure = print(lhs) + " vs " + print(rhs) + " on " + mm.text;
    }
  }
}

}  // namespace

std::vector<SweepLine> counting_sweep(unsigned max_worlds, unsigned max_preds) {
  SweepLine card, mono, pull, inc, bad;
  card.name = "at_least matches cardinality";
  mono.name = "at_least is monotone";
  pull.name = "pull-out rewrite";
  inc.name = "increment rewrite (consistent)";
  bad.name = "increment rewrite (sd' excluded by SD)";
  for (unsigned k = 1; k <= max_preds; ++k) {
    std::vector<std::string> preds;
    for (unsigned i = 1; i <= k; ++i) preds.push_back("P" + std::to_string(i));
    auto models = monadic_models(preds, max_worlds);
    auto locals = all_local(preds);

    for (const auto& sd : locals) {
      std::vector<Evaluator> evs;
      for (unsigned m = 0; m <= max_worlds + 1; ++m) evs.emplace_back(at_least(m, sd));
      for (const auto& mm : models) {
        std::vector<WorldSet> ext;
        for (auto& ev : evs) {
          ev.bind(mm.im);
          ext.push_back(ev.extension(mm.im.all));
        }
        for (unsigned m = 0; m < ext.size(); ++m) {
          ++card.checks;
          WorldSet want = mm.counts[sd.mask] >= static_cast<int>(m) ? mm.im.all : WorldSet{};
          if (!(ext[m] == want) && card.failures++ == 0)
            card.first_failure = "m=" + std::to_string(m) + " " + sd_to_string(sd) + " on " + mm.text;
          if (m + 1 < ext.size()) {
            ++mono.checks;
            if (!((ext[m + 1] & ext[m]) == ext[m + 1]) && mono.failures++ == 0)
              mono.first_failure = "m=" + std::to_string(m) + " " + sd_to_string(sd) + " on " + mm.text;
          }
        }
      }
    }

    std::vector<GlobalSD> shallow = all_global(preds, 1), mid = all_global(preds, 2);
    std::vector<GlobalSD> outer = shallow;
    outer.insert(outer.end(), mid.begin(), mid.end());
    std::vector<GlobalSD> deep = outer;
    auto d3 = all_global(preds, 3);
    deep.insert(deep.end(), d3.begin(), d3.end());

    // Inner formulas sd' & SD' from a fixed spread of depth-1 descriptions.
    std::vector<Formula> inner;
    for (const auto& sp : locals)
      for (std::size_t j = 0; j < shallow.size(); j += std::max<std::size_t>(1, shallow.size() / 4))
        inner.push_back(conj(sd_formula(sp), global_formula(shallow[j])));

    for (const auto& sd : locals)
      for (const auto& g : outer)
        for (const auto& in : inner)
          compare(pull, models, rem(conj(sd_formula(sd), global_formula(g)), in), rewrite_pull_out(sd, g, in));

    for (const auto& si : locals)
      for (const auto& sp : locals)
        for (const auto& g : deep) {
          Formula lhs = rem(sd_formula(si), conj(sd_formula(sp), global_formula(g)));
          compare(consistent(sp, g) ? inc : bad, models, lhs, rewrite_increment(si, sp, g));
        }
  }
  return {card, mono, pull, inc, bad};
}

}  // namespace mlsr
