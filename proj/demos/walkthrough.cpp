// Small tour of the library: decide a few formulas, then attach a
// distribution and compute exact probabilities.

#include <iostream>

#include "dmbl.hpp"

int main() {
  using namespace dmbl;
  const AtomContext ctx = AtomContext::standard(2);

  for (const char* text : {"(p /\\ q) -> p", "(q|p) -> (p -> q)", "(q|p) <-> q", "~(q|p) <-> (~q|p)", "box p -> p"}) {
    ModelState m = ModelState::standard(ctx);
    const Verdict v = verdict(m, parse(text, ctx));
    std::cout << text << "  =>  " << to_string(v.kind);
    if (!v.witness.empty()) std::cout << "  at " << v.witness;
    std::cout << "  (" << v.world_count << " worlds)\n";
  }

  const Distribution d = parse_distribution("atoms: p q\n11 1/10\n10 1/5\n01 3/10\n00 2/5\n");
  ModelState m = model_for(d);
  for (const char* text : {"p", "(q|p)", "((q|p)|q)", "(q|p) /\\ p"})
    std::cout << "P(" << text << ") = " << to_string(prob(m, parse(text, ctx))) << "\n";

  const BayesReport b = bayes_check(m, parse("(q|p)", ctx), parse("(p|q)", ctx));
  std::cout << "P(((q|p)|(p|q))) P((p|q)) = " << to_string(b.product) << ", P((p|q) /\\ (q|p)) = "
            << to_string(b.joint) << "\n";
}
