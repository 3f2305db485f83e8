#pragma once

// Deterministic random generators for property tests.

#include <random>
#include <string>
#include <vector>

#include "deon/eval.hpp"
#include "deon/formula.hpp"
#include "deon/model.hpp"
#include "deon/theory.hpp"

namespace deon::test {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) {  // inclusive
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Signature sig_for(TheoryId t, int atoms) {
  Signature s;
  s.theory = t;
  static const char* names[] = {"p", "q", "r", "s", "t_a", "u"};
  for (int i = 0; i < atoms; ++i) s.atoms.push_back({names[i]});
  return s;
}

// Random well-formed formula for the signature's theory.
inline Formula gen_formula(Rng& rng, const Signature& sig, int depth) {
  const TheorySpec& spec = builtin_theory(sig.theory);
  auto atom = [&]() -> Formula {
    if (sig.atoms.empty()) return pick(rng, 0, 1) ? Formula::truth() : Formula::falsity();
    int roll = pick(rng, 0, 9);
    if (roll == 0) return Formula::truth();
    if (roll == 1) return Formula::falsity();
    return Formula::prop(sig.atoms[pick(rng, 0, static_cast<int>(sig.atoms.size()) - 1)].name);
  };
  if (depth <= 0) return atom();
  auto sub = [&]() { return gen_formula(rng, sig, depth - 1); };
  std::vector<Formula::Kind> ops(spec.operators.begin(), spec.operators.end());
  for (;;) {
    Formula::Kind k = ops[pick(rng, 0, static_cast<int>(ops.size()) - 1)];
    switch (k) {
      case Formula::Kind::True: return Formula::truth();
      case Formula::Kind::False: return Formula::falsity();
      case Formula::Kind::Prop: return atom();
      case Formula::Kind::Not: return Formula::neg(sub());
      case Formula::Kind::And: return Formula::conj(sub(), sub());
      case Formula::Kind::Or: return Formula::disj(sub(), sub());
      case Formula::Kind::Implies: return Formula::implies(sub(), sub());
      case Formula::Kind::Iff: return Formula::iff(sub(), sub());
      case Formula::Kind::Box: return Formula::box(sub());
      case Formula::Kind::Dia: return Formula::dia(sub());
      case Formula::Kind::BoxRel: {
        std::vector<std::string> rels;
        for (const auto& r : spec.relations) rels.push_back(r.id.name);
        if (rels.empty()) continue;
        return Formula::box_rel(rels[pick(rng, 0, static_cast<int>(rels.size()) - 1)], sub());
      }
      case Formula::Kind::BoxAv: return Formula::box_av(sub());
      case Formula::Kind::BoxPv: return Formula::box_pv(sub());
      case Formula::Kind::Ob: return Formula::ob(sub());
      case Formula::Kind::Perm: return Formula::perm(sub());
      case Formula::Kind::Forb: return Formula::forb(sub());
      case Formula::Kind::CondOb: {
        bool tagged = (sig.theory == TheoryId::Xddl1 || sig.theory == TheoryId::Xddl2) &&
                      pick(rng, 0, 1);
        if (tagged)
          return Formula::cond_ob(pick(rng, 0, 1) ? "d" : "b", sub(), sub());
        return Formula::cond_ob(sub(), sub());
      }
      case Formula::Kind::ActualOb: return Formula::actual_ob(sub());
      case Formula::Kind::PrimaryOb: return Formula::primary_ob(sub());
      case Formula::Kind::AgentOb:
        return Formula::agent_ob(pick(rng, 0, 1) ? "d" : "b", sub());
      case Formula::Kind::Stit:
        return Formula::stit(pick(rng, 0, 1) ? "d" : "b", sub());
    }
  }
}

// Random SDL problem: a few globals/locals and a goal over <= atoms atoms.
inline Problem gen_sdl_problem(Rng& rng, int atoms, int axioms, int depth) {
  Problem p;
  p.signature = sig_for(TheoryId::Sdl, atoms);
  for (int i = 0; i < axioms; ++i) {
    Formula f = gen_formula(rng, p.signature, depth);
    if (pick(rng, 0, 1))
      p.globals.push_back({"G" + std::to_string(i), f});
    else
      p.locals.push_back({"L" + std::to_string(i), f});
  }
  return p;
}

// Random frame-valid XDDL1 model: av/pv drawn directly, ob families drawn
// as generators and closed.
inline FiniteModel gen_xddl1_model(Rng& rng, int n) {
  FiniteModel m;
  m.theory = TheoryId::Xddl1;
  m.n = n;
  m.actual = pick(rng, 0, n - 1);
  const WorldSet all = full_set(n);
  for (const char* atom : {"p", "q"})
    m.valuation[atom] = static_cast<WorldSet>(pick(rng, 0, static_cast<int>(all)));
  for (const auto& tag : builtin_theory(TheoryId::Xddl1).tags) {
    std::vector<WorldSet> av(n), pv(n);
    for (int w = 0; w < n; ++w) {
      av[w] = static_cast<WorldSet>(pick(rng, 1, static_cast<int>(all)));
      WorldSet base = av[w] | world_bit(w);
      WorldSet extra = static_cast<WorldSet>(pick(rng, 0, static_cast<int>(all)));
      pv[w] = base | extra;
    }
    m.av[tag] = std::move(av);
    m.pv[tag] = std::move(pv);
    ObMap gen;
    int entries = pick(rng, 0, 2);
    for (int i = 0; i < entries; ++i) {
      WorldSet ctx = static_cast<WorldSet>(pick(rng, 1, static_cast<int>(all)));
      WorldSet core = ctx & static_cast<WorldSet>(pick(rng, 1, static_cast<int>(all)));
      if (core) gen[ctx].insert(core);
    }
    m.ob[tag] = close_ob(gen, n);
  }
  return m;
}

}  // namespace deon::test
