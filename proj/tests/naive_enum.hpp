#pragma once

// Brute-force model enumeration used as an independent oracle for the
// finder. Deliberately naive: raw nested loops over every structure, every
// actual world, no pruning, no symmetry breaking, no shared code with the
// search. Only the evaluator and frame checker are reused (they are
// themselves pinned by hand-computed unit values).

#include <functional>
#include <vector>

#include "deon/eval.hpp"
#include "deon/formula.hpp"
#include "deon/model.hpp"
#include "deon/theory.hpp"

namespace deon::test {

// Visits every frame-valid model of the signature's theory at exactly n
// worlds (SDL and CJDDL only). Returns false from fn to stop early.
// Returns true if the sweep ran to completion.
inline bool naive_models(const Signature& sig, int n,
                         const std::function<bool(const FiniteModel&)>& fn) {
  const TheorySpec& spec = builtin_theory(sig.theory);
  const WorldSet all = full_set(n);
  const int atom_count = static_cast<int>(sig.atoms.size());

  // all families of nonempty subsets of a context
  auto families = [&](WorldSet ctx) {
    std::vector<WorldSet> subs;
    for (WorldSet s = 1; s <= ctx; ++s)
      if ((s & ~ctx) == 0) subs.push_back(s);
    std::vector<std::set<WorldSet>> fams;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << subs.size()); ++bits) {
      std::set<WorldSet> fam;
      for (std::size_t j = 0; j < subs.size(); ++j)
        if ((bits >> j) & 1) fam.insert(subs[j]);
      fams.push_back(std::move(fam));
    }
    return fams;
  };

  std::vector<WorldSet> contexts;
  for (WorldSet x = 0; x <= all; ++x) contexts.push_back(x);
  std::vector<std::vector<std::set<WorldSet>>> fams_per_ctx;
  if (sig.theory == TheoryId::Cjddl)
    for (WorldSet x : contexts) fams_per_ctx.push_back(families(x));

  // iterate valuations as one big counter: atom_count * n bits
  const std::uint64_t val_total = std::uint64_t{1} << (atom_count * n);
  for (std::uint64_t vbits = 0; vbits < val_total; ++vbits) {
    FiniteModel base;
    base.theory = sig.theory;
    base.n = n;
    for (int a = 0; a < atom_count; ++a) {
      WorldSet ext = 0;
      for (int w = 0; w < n; ++w)
        if ((vbits >> (a * n + w)) & 1) ext |= world_bit(w);
      if (ext) base.valuation[sig.atoms[a].name] = ext;
    }
    for (int actual = 0; actual < n; ++actual) {
      base.actual = actual;
      if (sig.theory == TheoryId::Sdl) {
        // every relation, including non-serial ones; checkFrame filters
        std::uint64_t rel_total = std::uint64_t{1} << (n * n);
        for (std::uint64_t rbits = 0; rbits < rel_total; ++rbits) {
          FiniteModel m = base;
          std::vector<WorldSet> rows(n, 0);
          for (int w = 0; w < n; ++w)
            rows[w] = (rbits >> (w * n)) & all;
          m.relations["R"] = rows;
          if (!check_frame(m, spec).empty()) continue;
          if (!fn(m)) return false;
        }
        continue;
      }
      // CJDDL: av rows (nonempty), pv rows (any; filtered), ob families
      std::vector<std::vector<WorldSet>> av_choices, pv_choices;
      {
        std::vector<WorldSet> row(n);
        std::function<void(int, bool)> build = [&](int w, bool av) {
          if (w == n) {
            (av ? av_choices : pv_choices).push_back(row);
            return;
          }
          for (WorldSet s = av ? 1 : 0; s <= all; ++s) {
            row[w] = s;
            build(w + 1, av);
          }
        };
        build(0, true);
        build(0, false);
      }
      std::vector<std::size_t> pick(contexts.size(), 0);
      for (const auto& av : av_choices)
        for (const auto& pv : pv_choices) {
          // odometer over core families per context
          std::fill(pick.begin(), pick.end(), 0);
          for (;;) {
            FiniteModel m = base;
            m.av[AgentTag::def()] = av;
            m.pv[AgentTag::def()] = pv;
            ObMap ob;
            for (std::size_t c = 0; c < contexts.size(); ++c)
              if (!fams_per_ctx[c][pick[c]].empty()) ob[contexts[c]] = fams_per_ctx[c][pick[c]];
            if (!ob.empty()) m.ob[AgentTag::def()] = std::move(ob);
            if (m.ob.empty()) m.ob[AgentTag::def()] = {};
            if (check_frame(m, spec).empty()) {
              if (!fn(m)) return false;
            }
            std::size_t c = 0;
            while (c < contexts.size()) {
              if (++pick[c] < fams_per_ctx[c].size()) break;
              pick[c] = 0;
              ++c;
            }
            if (c == contexts.size()) break;
          }
        }
    }
  }
  return true;
}

// Naive satisfiability of a problem at up to max_n worlds.
inline bool naive_satisfiable(const Problem& p, int max_n) {
  for (int n = 1; n <= max_n; ++n) {
    bool found = false;
    naive_models(p.signature, n, [&](const FiniteModel& m) {
      if (verify_problem(m, p)) {
        found = true;
        return false;
      }
      return true;
    });
    if (found) return true;
  }
  return false;
}

// Naive countermodel existence: a model of p with the goal false at actual.
inline bool naive_refutable(const Problem& p, const Formula& goal, int max_n) {
  for (int n = 1; n <= max_n; ++n) {
    bool found = false;
    naive_models(p.signature, n, [&](const FiniteModel& m) {
      if (verify_problem(m, p) && !eval(m, m.actual, goal)) {
        found = true;
        return false;
      }
      return true;
    });
    if (found) return true;
  }
  return false;
}

}  // namespace deon::test
