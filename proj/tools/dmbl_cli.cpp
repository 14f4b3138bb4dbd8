// Command-line front end for the dmbl engine.
//
//   dmbl check "(q|p) -> (p -> q)"
//   dmbl prob "(q|p)" --dist uniform.dist
//   dmbl regress --atoms 2 --depth 2
//
// Exit codes: 0 proved / valid in model / success, 1 refuted or a failing
// check, 2 usage or input error, 3 inconclusive (world guard), 4 degenerate
// distribution.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dmbl.hpp"

namespace {

using nlohmann::json;
using namespace dmbl;

enum Exit { kOk = 0, kRefuted = 1, kUsage = 2, kInconclusive = 3, kDegenerate = 4 };

struct Globals {
  std::string atoms;
  std::string schedule = "query";
  std::size_t max_worlds = kDefaultMaxWorlds;
  std::string dist_path;
  bool json = false;
  std::uint64_t seed = 1;
  bool timing = false;
};

struct UsageError : Error {
  using Error::Error;
};

ModelOptions options(const Globals& g) { return ModelOptions{parse_schedule(g.schedule), g.max_worlds}; }

// --atoms N, --atoms p,q,r, or inferred: a prefix of p..w when the formula
// only uses those letters, otherwise the identifiers in order of appearance.
AtomContext atoms_for(const Globals& g, const std::vector<std::string>& texts) {
  if (!g.atoms.empty()) {
    if (g.atoms.find_first_not_of("0123456789") == std::string::npos) {
      const auto n = std::stoul(g.atoms);
      if (n == 0 || n > 8) throw UsageError("--atoms must be between 1 and 8");
      return AtomContext::standard(n);
    }
    std::vector<std::string> names;
    std::stringstream in(g.atoms);
    std::string name;
    while (std::getline(in, name, ',')) names.push_back(name);
    return AtomContext(names);
  }
  std::vector<std::string> seen;
  for (const auto& t : texts)
    for (const auto& id : scan_identifiers(t))
      if (std::find(seen.begin(), seen.end(), id) == seen.end()) seen.push_back(id);
  const AtomContext standard = AtomContext::standard(8);
  std::size_t highest = 0;
  for (const auto& id : seen) {
    const auto idx = standard.index_of(id);
    if (!idx) return AtomContext(seen);
    highest = std::max(highest, *idx + 1);
  }
  return AtomContext::standard(std::max<std::size_t>(highest, 1));
}

Distribution read_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open distribution file '" + path + "'");
  return load_distribution(in);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

json check_json(const CheckRecord& c) {
  json j{{"name", c.name}, {"status", to_string(c.status)}, {"instances", c.instances}, {"failures", c.failures},
         {"inconclusive", c.inconclusive}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

json report_json(const ScenarioReport& r, bool timing) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(check_json(c));
  json j{{"scenario", r.id}, {"passed", r.passed()}, {"worldCount", r.world_high_water}, {"checks", checks}};
  if (timing) j["seconds"] = r.seconds;
  return j;
}

void print_report(const ScenarioReport& r, bool timing) {
  std::cout << "== " << r.id << "\n";
  for (const auto& c : r.checks) {
    std::cout << "  " << to_string(c.status) << "  " << c.name;
    if (c.instances > 1) std::cout << "  [" << c.instances << " instances";
    if (c.instances > 1 && c.failures > 0) std::cout << ", " << c.failures << " not holding";
    if (c.instances > 1 && c.inconclusive > 0) std::cout << ", " << c.inconclusive << " past the guard";
    if (c.instances > 1) std::cout << "]";
    if (!c.detail.empty()) std::cout << "  " << c.detail;
    std::cout << "\n";
  }
  std::cout << "  world high-water mark: " << r.world_high_water << "\n";
  if (timing) std::cout << "  seconds: " << r.seconds << "\n";
}

int verdict_exit(VerdictKind k) {
  switch (k) {
    case VerdictKind::Proved:
    case VerdictKind::ValidInModel: return kOk;
    case VerdictKind::Refuted: return kRefuted;
    case VerdictKind::Inconclusive: return kInconclusive;
  }
  return kUsage;
}

int cmd_check(const Globals& g, const std::string& text, const std::string& dump_path) {
  const AtomContext ctx = atoms_for(g, {text});
  const Formula f = parse(text, ctx);
  ModelState m = ModelState::standard(ctx, options(g));
  const Verdict v = verdict(m, f);
  if (!dump_path.empty()) write_file(dump_path, dump_model(m));
  if (g.json) {
    json j{{"verdict", to_string(v.kind)}, {"witness", v.witness.empty() ? json(nullptr) : json(v.witness)},
           {"values", json::object()}, {"worldCount", v.world_count}};
    j["values"]["stage"] = v.stage;
    if (!v.detail.empty()) j["values"]["detail"] = v.detail;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << to_string(v.kind) << "\n";
    if (v.kind == VerdictKind::Refuted) std::cout << "witness: " << v.witness << "\n";
    if (v.kind == VerdictKind::ValidInModel)
      std::cout << "note: holds in every world of the model; formulas with box or diamond are valid in the model, "
                   "which is weaker than provable\n";
    if (v.kind == VerdictKind::Inconclusive) std::cout << "note: " << v.detail << "\n";
    std::cout << "stage " << v.stage << ", " << v.world_count << " worlds\n";
  }
  return verdict_exit(v.kind);
}

int cmd_prob(const Globals& g, const std::string& text, bool epsilon) {
  if (g.dist_path.empty()) throw UsageError("prob needs --dist");
  const Distribution d = read_distribution(g.dist_path);
  const Formula f = parse(text, d.context());
  Rational value;
  std::size_t worlds = 0;
  if (epsilon) {
    ModelState m = epsilon_model_for(d, options(g));
    value = epsilon_value(m, f);
    worlds = m.world_count();
  } else {
    if (!d.strictly_positive())
      throw DegenerateDistribution("distribution has zero weights; rerun with --epsilon for the limit extension");
    ModelState m = model_for(d, options(g));
    value = prob(m, f);
    worlds = m.world_count();
  }
  if (g.json) {
    json j{{"verdict", nullptr}, {"witness", nullptr}, {"values", {{"probability", to_string(value)}}},
           {"worldCount", worlds}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << to_string(value) << "\n";
  }
  return kOk;
}

int cmd_indep(const Globals& g, const std::string& psi_text, const std::string& phi_text) {
  const AtomContext ctx = atoms_for(g, {psi_text, phi_text});
  const Formula psi = parse(psi_text, ctx);
  const Formula phi = parse(phi_text, ctx);
  ModelState m = ModelState::standard(ctx, options(g));
  const Verdict v = verdict(m, Formula::indep(psi, phi));
  if (g.json) {
    json j{{"verdict", to_string(v.kind)}, {"witness", v.witness.empty() ? json(nullptr) : json(v.witness)},
           {"values", {{"independent", v.kind == VerdictKind::Inconclusive ? json(nullptr)
                                                                               : json(v.kind != VerdictKind::Refuted)}}},
           {"worldCount", v.world_count}};
    std::cout << j.dump(2) << "\n";
  } else if (v.kind == VerdictKind::Inconclusive) {
    std::cout << "Inconclusive\nnote: " << v.detail << "\n";
  } else {
    std::cout << (v.kind == VerdictKind::Refuted ? "dependent" : "independent") << "\n";
  }
  if (v.kind == VerdictKind::Inconclusive) return kInconclusive;
  return v.kind == VerdictKind::Refuted ? kRefuted : kOk;
}

int cmd_lewis(const Globals& g) {
  std::optional<Distribution> d;
  if (!g.dist_path.empty()) d = read_distribution(g.dist_path);
  const LewisReport r = lewis_demo(d);
  if (g.json) {
    json ws = json::array();
    for (const auto& w : r.witnesses)
      ws.push_back({{"A", render(w.a)},
                    {"B", render(w.b)},
                    {"C", render(w.c)},
                    {"conditionalOfConditional", to_string(w.nested)},
                    {"ratio", to_string(w.ratio)},
                    {"classicalValue", to_string(w.flattened)}});
    json j{{"verdict", r.passed() ? "witness-found" : "no-witness"},
           {"witness", ws.empty() ? json(nullptr) : ws[0]},
           {"values", {{"tested", r.tested}, {"bayesFailures", r.bayes_failures}, {"witnesses", ws},
                       {"distribution", format_distribution(r.distribution)}}},
           {"worldCount", nullptr}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "distribution:\n" << format_distribution(r.distribution);
    for (const auto& w : r.witnesses) {
      std::cout << "A = " << render(w.a) << ", B = " << render(w.b) << ", C = " << render(w.c) << "\n"
                << "  P(((B|A)|C))           = " << to_string(w.nested) << "\n"
                << "  P((B|A) /\\ C) / P(C)   = " << to_string(w.ratio) << "\n"
                << "  P((B|C /\\ A))          = " << to_string(w.flattened) << "  (differs)\n";
    }
    std::cout << r.tested << " triples tested, Bayes identity failed on " << r.bayes_failures << "\n";
    std::cout << (r.passed() ? "witness found" : "no witness found") << "\n";
  }
  return r.passed() ? kOk : kRefuted;
}

int cmd_appendix_f(const Globals& g, const std::string& dump_path) {
  const ModelState m = abc_example_model();
  if (!dump_path.empty()) write_file(dump_path, dump_model(m));
  const ScenarioReport r = check_abc_example(m);
  if (g.json)
    std::cout << report_json(r, g.timing).dump(2) << "\n";
  else
    print_report(r, g.timing);
  return r.passed() ? kOk : kRefuted;
}

int cmd_regress(const Globals& g, std::size_t depth, std::size_t runs) {
  std::size_t atoms = 2;
  if (!g.atoms.empty()) {
    if (g.atoms.find_first_not_of("0123456789") != std::string::npos) throw UsageError("regress takes --atoms N");
    atoms = std::stoul(g.atoms);
  }
  if (atoms < 1 || atoms > 2) throw UsageError("regress supports 1 or 2 atoms");
  std::vector<ScenarioReport> reports;

  ConstructionSuiteOptions co;
  co.runs = runs;
  co.seed = g.seed;
  co.max_steps = depth;
  co.max_atoms = atoms;
  co.max_worlds = std::min<std::size_t>(g.max_worlds, 4096);
  reports.push_back(run_construction_suite(co));

  ScenarioReport schemata;
  schemata.id = "schemata";
  const auto t0 = std::chrono::steady_clock::now();
  SchemaSuiteOptions so;
  so.atoms = atoms;
  so.schedule = parse_schedule(g.schedule);
  so.max_worlds = g.max_worlds;
  so.seed = g.seed;
  schemata.checks = run_schema_suite(so, &schemata.world_high_water);
  schemata.seconds = detail::seconds_since(t0);
  reports.push_back(schemata);

  ScenarioReport probability;
  probability.id = "probability";
  const auto t1 = std::chrono::steady_clock::now();
  probability.append(check_classical_completeness(3, 1000, 4, g.seed));
  probability.append(check_nondistortion(atoms, 10, 20, g.seed));
  probability.append(check_bayes_suite(5, g.seed, g.max_worlds));
  probability.append(check_multiplicativity(5, g.seed));
  probability.append(check_epsilon_suite(10, 5, g.seed));
  probability.append(check_probability_axioms(10, g.seed));
  probability.seconds = detail::seconds_since(t1);
  reports.push_back(probability);

  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed();
  if (g.json) {
    json all = json::array();
    for (const auto& r : reports) all.push_back(report_json(r, g.timing));
    std::cout << json{{"verdict", ok ? "pass" : "fail"}, {"witness", nullptr}, {"values", all}, {"worldCount", nullptr}}
                     .dump(2)
              << "\n";
  } else {
    for (const auto& r : reports) print_report(r, g.timing);
    std::cout << (ok ? "all must-hold checks pass" : "FAILURES") << "\n";
  }
  return ok ? kOk : kRefuted;
}

int cmd_dump(const Globals& g, const std::string& text, const std::string& out_path) {
  ModelState m = [&] {
    if (!g.dist_path.empty()) return model_for(read_distribution(g.dist_path), options(g));
    return ModelState::standard(atoms_for(g, {text}), options(g));
  }();
  if (!text.empty()) evaluate(m, parse(text, m.atoms()));
  const std::string dump = dump_model(m);
  if (out_path.empty() || out_path == "-")
    std::cout << dump;
  else
    write_file(out_path, dump);
  return kOk;
}

int cmd_load(const Globals& g, const std::string& path, bool appendix) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  const ModelState m = load_model(in);
  if (appendix) {
    const ScenarioReport r = check_abc_example(m);
    if (g.json)
      std::cout << report_json(r, g.timing).dump(2) << "\n";
    else
      print_report(r, g.timing);
    return r.passed() ? kOk : kRefuted;
  }
  if (g.json) {
    json j{{"verdict", "loaded"},
           {"witness", nullptr},
           {"values", {{"stage", m.stage()}, {"steps", m.history().size()}, {"measured", m.has_rational_measure()}}},
           {"worldCount", m.world_count()}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "loaded: stage " << m.stage() << ", " << m.world_count() << " worlds, " << m.history().size()
              << " steps" << (m.has_rational_measure() ? ", measured" : "") << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact model builder and checker for the free conditional model"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--atoms", g.atoms, "atom count or comma-separated names");
  app.add_option("--schedule", g.schedule, "query or faithful")->check(CLI::IsMember({"query", "faithful"}));
  app.add_option("--max-worlds", g.max_worlds, "world guard per stage");
  app.add_option("--dist", g.dist_path, "distribution file");
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--seed", g.seed, "seed for randomized suites");
  app.add_flag("--timing", g.timing, "include wall time in reports");

  std::string formula;
  std::string second;
  std::string dump_path;
  bool epsilon = false;
  bool appendix = false;
  std::size_t depth = 5;
  std::size_t runs = 100;

  auto* check = app.add_subcommand("check", "decide a formula");
  check->add_option("formula", formula)->required();
  check->add_option("--dump", dump_path, "write the model reached to a file");
  auto* probc = app.add_subcommand("prob", "exact probability of a formula");
  probc->add_option("formula", formula)->required();
  probc->add_flag("--epsilon", epsilon, "limit of the smoothed extension");
  auto* indep = app.add_subcommand("indep", "is psi independent of phi");
  indep->add_option("psi", formula)->required();
  indep->add_option("phi", second)->required();
  auto* lewis = app.add_subcommand("lewis-demo", "search for a conditional-of-conditional witness");
  auto* appf = app.add_subcommand("appendix-f", "reproduce the three-world worked example");
  appf->add_option("--dump", dump_path, "write the stage 1 model to a file");
  auto* regress = app.add_subcommand("regress", "property, schema and probability suites");
  regress->add_option("--depth", depth, "processing steps per randomized run");
  regress->add_option("--runs", runs, "randomized construction runs");
  auto* dump = app.add_subcommand("dump", "evaluate a formula and dump the model");
  dump->add_option("formula", formula);
  dump->add_option("-o,--out", dump_path, "output path (default stdout)");
  auto* load = app.add_subcommand("load", "load and verify a model dump");
  load->add_option("path", dump_path)->required();
  load->add_flag("--appendix-f", appendix, "rerun the worked-example comparisons on the loaded model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(g, formula, dump_path);
    if (*probc) return cmd_prob(g, formula, epsilon);
    if (*indep) return cmd_indep(g, formula, second);
    if (*lewis) return cmd_lewis(g);
    if (*appf) return cmd_appendix_f(g, dump_path);
    if (*regress) return cmd_regress(g, depth, runs);
    if (*dump) return cmd_dump(g, formula, dump_path);
    if (*load) return cmd_load(g, dump_path, appendix);
  } catch (const DegenerateDistribution& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDegenerate;
  } catch (const WorldLimitExceeded& e) {
    std::cerr << "Inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
