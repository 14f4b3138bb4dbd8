// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dmbl.hpp"

using namespace dmbl;

namespace {

struct Outcome {
  bool ok = false;
  std::string summary;
};

struct Criterion {
  const char* id;
  const char* title;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

std::string failures_of(const std::vector<CheckRecord>& checks) {
  std::string out;
  for (const auto& c : checks)
    if (c.status == CheckStatus::Fail) out += " " + c.name + " (" + c.detail + ")";
  return out;
}

bool none_failed(const std::vector<CheckRecord>& checks) {
  for (const auto& c : checks)
    if (c.status == CheckStatus::Fail) return false;
  return true;
}

const CheckRecord* find(const std::vector<CheckRecord>& checks, const std::string& name) {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

Outcome worked_example() {
  const ModelState m = abc_example_model();
  const ScenarioReport r = check_abc_example(m);
  const ScenarioReport reloaded = check_abc_example(load_model_text(dump_model(m)));
  std::ostringstream s;
  s << r.checks.size() << " values exact, also after dump and reload";
  const bool ok = r.passed() && reloaded.passed() && r.checks.size() >= 20;
  return {ok, ok ? s.str() : "mismatch:" + failures_of(r.checks) + failures_of(reloaded.checks)};
}

Outcome construction_laws() {
  ConstructionSuiteOptions opt;
  opt.runs = 100;
  opt.seed = 2024;
  opt.max_steps = 5;
  const ScenarioReport r = run_construction_suite(opt);
  const std::vector<std::string> required{"beta1", "beta2", "beta3", "beta4", "beta5w", "beta6", "partition-lemma",
                                          "idempotence", "reprocessing-consistency", "size-law"};
  std::string missing;
  for (const auto& name : required) {
    const CheckRecord* c = find(r.checks, name);
    if (!c || c->instances == 0) missing += " " + name;
  }
  std::ostringstream s;
  std::size_t total = 0;
  for (const auto& c : r.checks) total += c.instances;
  s << "100 runs, both schedules, " << total << " checks; " << find(r.checks, "runs")->detail;
  if (!missing.empty()) return {false, "never exercised:" + missing};
  return {r.passed(), r.passed() ? s.str() : "failed:" + failures_of(r.checks)};
}

Outcome schemata() {
  std::vector<CheckRecord> all;
  std::size_t instances = 0;
  std::size_t guard = 0;
  std::size_t reported_not_holding = 0;
  for (std::size_t atoms : {1, 2}) {
    SchemaSuiteOptions opt;
    opt.atoms = atoms;
    opt.max_worlds = 2000000;
    opt.seed = 7;
    for (const auto& c : run_schema_suite(opt)) {
      if (c.status == CheckStatus::Reported) {
        reported_not_holding += c.failures;
        continue;
      }
      instances += c.instances;
      guard += c.inconclusive;
      all.push_back(c);
    }
  }
  std::ostringstream s;
  s << instances << " must-hold instances on 1 and 2 atoms evaluate to the full set, " << guard
    << " past the world guard; " << reported_not_holding << " reported-only instances do not hold";
  const bool ok = none_failed(all) && guard == 0 && instances > 0;
  if (!none_failed(all)) return {false, "failed:" + failures_of(all)};
  return {ok, s.str()};
}

Outcome classical() {
  const CheckRecord c = check_classical_completeness(3, 10000, 4, 31);
  const CheckRecord d = check_nondistortion(3, 50, 40, 37);
  std::ostringstream s;
  s << c.instances << " formulas over 3 atoms (" << c.detail << "), " << d.instances
    << " probability comparisons over 50 distributions";
  const bool ok = c.status == CheckStatus::Pass && d.status == CheckStatus::Pass && c.instances >= 10000;
  return {ok, ok ? s.str() : "failed:" + failures_of({c, d})};
}

Outcome bayes() {
  const auto checks = check_bayes_suite(20, 41);
  const CheckRecord* nested = find(checks, "bayes-identity-nested");
  const std::size_t nested_pairs = nested ? nested->instances / 20 : 0;
  std::ostringstream s;
  s << checks[0].instances << " flat and " << checks[1].instances << " nested comparisons (" << nested_pairs
    << " nested pairs) over 20 distributions";
  const bool ok = none_failed(checks) && checks[0].inconclusive == 0 && nested_pairs >= 5;
  return {ok, ok ? s.str() : "failed:" + failures_of(checks) + " nested pairs " + std::to_string(nested_pairs)};
}

Outcome multiplicativity() {
  const CheckRecord c = check_multiplicativity(20, 43);
  const bool ok = c.status == CheckStatus::Pass && c.instances > 0;
  return {ok, ok ? std::to_string(c.instances) + " comparisons; " + c.detail : "failed:" + failures_of({c})};
}

Outcome lewis() {
  const LewisReport r = lewis_demo(std::nullopt);
  if (!r.passed()) return {false, "no witness or Bayes failure"};
  // The identity suite on the same distribution.
  std::size_t pairs = 0;
  std::size_t bad = 0;
  const auto pool = formula_pool(2);
  for (const auto& psi : pool)
    for (const auto& phi : pool) {
      ModelState m = model_for(r.distribution);
      ++pairs;
      if (!bayes_check(m, psi, phi).equal) ++bad;
    }
  const auto& w = r.witnesses.front();
  std::ostringstream s;
  s << "A=" << render(w.a) << " B=" << render(w.b) << " C=" << render(w.c) << ": " << to_string(w.nested)
    << " vs " << to_string(w.flattened) << "; Bayes identity on " << pairs << " pairs under the same distribution";
  return {bad == 0, bad == 0 ? s.str() : std::to_string(bad) + " Bayes failures"};
}

Outcome epsilon() {
  const auto checks = check_epsilon_suite(20, 10, 47);
  const bool ok = none_failed(checks) && checks[0].instances == 20 && checks[1].instances == 10;
  return {ok, ok ? "20 positive distributions agree, 10 degenerate limits are coherent" : "failed:" + failures_of(checks)};
}

Outcome guard() {
  const AtomContext ctx = AtomContext::standard(2);
  const std::vector<std::string> formulas{"((q|p)|(p|q)) -> (q|p)", "(q|p) <-> q", "((p|q)|q) <-> (p|q)",
                                          "indep((q|p), (p|q))", "(q|p) -> (p -> q)", "(p|(q|p)) <-> p"};
  std::size_t inconclusive = 0;
  std::size_t decided = 0;
  for (const auto& text : formulas) {
    const Formula f = parse(text, ctx);
    ModelState big = ModelState::standard(ctx, {Schedule::Query, 2000000});
    const Verdict ref = verdict(big, f);
    for (std::size_t limit : {4, 8, 16, 64, 256, 1024, 4096, 65536}) {
      for (Schedule s : {Schedule::Query, Schedule::Faithful}) {
        ModelState m = ModelState::standard(ctx, {s, limit});
        const Verdict v = verdict(m, f);
        if (v.kind == VerdictKind::Inconclusive) {
          ++inconclusive;
          if (m.world_count() > limit) return {false, "model exceeded the guard on " + text};
          continue;
        }
        ++decided;
        if (ref.kind != VerdictKind::Inconclusive && v.kind != ref.kind)
          return {false, "wrong verdict under a small guard: " + text};
      }
    }
  }
  const bool ok = inconclusive > 0;
  return {ok, std::to_string(inconclusive) + " runs stopped by the guard as Inconclusive, " + std::to_string(decided) +
                  " decided runs agree with the unguarded verdict"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "worked three-world example", 1.0, worked_example},
      {"AC2", "construction laws on randomized runs", 60.0, construction_laws},
      {"AC3", "axiom and theorem schemata", 120.0, schemata},
      {"AC4", "classical non-distortion", 0, classical},
      {"AC5", "Bayes identity", 0, bayes},
      {"AC6", "multiplicativity under independence", 0, multiplicativity},
      {"AC7", "conditional of a conditional differs from the flattened value", 0, lewis},
      {"AC8", "epsilon extension", 0, epsilon},
      {"AC9", "world guard", 0, guard},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0 && secs >= c.time_limit) {
      o.ok = false;
      o.summary += " (over the time limit)";
    }
    std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << c.id << " " << c.title << ": " << o.summary << " ("
              << static_cast<long>(secs * 1000) << " ms)" << std::endl;
    if (!o.ok) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
  return failed == 0 ? 0 : 1;
}
