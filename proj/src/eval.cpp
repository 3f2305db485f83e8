#include "deon/eval.hpp"

namespace deon {

namespace {

using K = Formula::Kind;

const std::vector<WorldSet>& structure(const std::map<AgentTag, std::vector<WorldSet>>& map,
                                       const AgentTag& tag, const char* what) {
  auto it = map.find(tag);
  if (it == map.end()) throw EvalError(std::string(what) + " structure missing for tag " + tag.display());
  return it->second;
}

// Y ∈ ob(X) iff Y∩X is a stored core of X. ob1 (no empty core) makes
// membership of sets disjoint from X false automatically.
bool ob_member(const FiniteModel& m, const AgentTag& tag, WorldSet y, WorldSet x) {
  auto it = m.ob.find(tag);
  if (it == m.ob.end()) return false;
  auto ctx = it->second.find(x);
  if (ctx == it->second.end()) return false;
  return ctx->second.count(y & x) != 0;
}

struct Evaluator {
  const FiniteModel& m;
  const TheorySpec& spec;
  WorldSet all;

  WorldSet box_over(const std::vector<WorldSet>& succ, WorldSet ext) const {
    WorldSet out = 0;
    for (int w = 0; w < m.n; ++w)
      if ((succ[w] & ~ext) == 0) out |= world_bit(w);
    return out;
  }

  const std::vector<WorldSet>& relation(const std::string& name, bool* converse) const {
    const RelationDecl* decl = spec.find_relation(name);
    if (!decl) throw EvalError("relation " + name + " not declared by theory " + to_string(spec.id));
    const std::string& stored = decl->stored ? name : decl->converse_of;
    *converse = !decl->stored;
    auto it = m.relations.find(stored);
    if (it == m.relations.end() || static_cast<int>(it->second.size()) < m.n)
      throw EvalError("relation " + stored + " missing from model");
    return it->second;
  }

  WorldSet box_rel(const std::string& name, WorldSet ext) const {
    bool converse = false;
    const auto& rel = relation(name, &converse);
    if (!converse) return box_over(rel, ext);
    WorldSet out = all;
    // successors of w under the converse are the v with w ∈ rel[v]
    for (int v = 0; v < m.n; ++v)
      if (!world_in(ext, v)) out &= ~rel[v];
    return out;
  }

  WorldSet go(const Formula& f) const {
    if (!spec.allows(f.kind())) throw EvalError("operator not in theory " + to_string(spec.id));
    switch (f.kind()) {
      case K::True: return all;
      case K::False: return 0;
      case K::Prop: return m.atom_ext(f.sym()) & all;
      case K::Not: return all & ~go(f.child(0));
      case K::And: return go(f.child(0)) & go(f.child(1));
      case K::Or: return go(f.child(0)) | go(f.child(1));
      case K::Implies: return (all & ~go(f.child(0))) | go(f.child(1));
      case K::Iff: {
        WorldSet a = go(f.child(0)), b = go(f.child(1));
        return (a & b) | (all & ~a & ~b);
      }
      case K::Box: return go(f.child(0)) == all ? all : 0;
      case K::Dia: return go(f.child(0)) != 0 ? all : 0;
      case K::BoxRel: return box_rel(f.sym(), go(f.child(0)));
      case K::BoxAv: return box_over(structure(m.av, AgentTag::def(), "av"), go(f.child(0)));
      case K::BoxPv: return box_over(structure(m.pv, AgentTag::def(), "pv"), go(f.child(0)));
      case K::Ob:
        if (spec.id == TheoryId::Sdl) return box_rel("R", go(f.child(0)));
        return ob_member(m, AgentTag::def(), go(f.child(0)), all) ? all : 0;
      case K::Perm: {
        WorldSet neg = all & ~go(f.child(0));
        if (spec.id == TheoryId::Sdl) return all & ~box_rel("R", neg);
        return ob_member(m, AgentTag::def(), neg, all) ? 0 : all;
      }
      case K::Forb:
        if (spec.id == TheoryId::Sdl) return box_rel("R", all & ~go(f.child(0)));
        return ob_member(m, AgentTag::def(), all & ~go(f.child(0)), all) ? all : 0;
      case K::CondOb: {
        AgentTag tag = f.sym().empty() ? AgentTag::def() : AgentTag::agent(f.sym());
        return ob_member(m, tag, go(f.child(0)), go(f.child(1))) ? all : 0;
      }
      case K::ActualOb:
      case K::PrimaryOb: {
        const auto& view = f.kind() == K::ActualOb ? structure(m.av, AgentTag::def(), "av")
                                                   : structure(m.pv, AgentTag::def(), "pv");
        WorldSet ext = go(f.child(0));
        WorldSet out = 0;
        for (int w = 0; w < m.n; ++w) {
          if (!ob_member(m, AgentTag::def(), ext, view[w])) continue;
          if (spec.actual_ob_requires_violation && (view[w] & ~ext) == 0) continue;
          out |= world_bit(w);
        }
        return out;
      }
      case K::AgentOb:
        return ob_member(m, AgentTag::agent(f.sym()), go(f.child(0)), all) ? all : 0;
      case K::Stit:
        return m.stit_choice(f.sym(), go(f.child(0))) & all;
    }
    throw EvalError("unhandled operator");
  }
};

}  // namespace

WorldSet extension(const FiniteModel& m, const Formula& f, const TheorySpec& spec) {
  if (m.n < 1 || m.n > kMaxWorlds) throw EvalError("world count out of range");
  Evaluator ev{m, spec, full_set(m.n)};
  return ev.go(f);
}

WorldSet extension(const FiniteModel& m, const Formula& f) {
  return extension(m, f, builtin_theory(m.theory));
}

bool eval(const FiniteModel& m, int world, const Formula& f, const TheorySpec& spec) {
  if (world < 0 || world >= m.n) throw EvalError("world index out of range");
  return world_in(extension(m, f, spec), world);
}

bool eval(const FiniteModel& m, int world, const Formula& f) {
  return eval(m, world, f, builtin_theory(m.theory));
}

bool verify_problem(const FiniteModel& m, const Problem& p, const TheorySpec& spec) {
  const WorldSet all = full_set(m.n);
  for (const auto& g : p.globals)
    if (extension(m, g.formula, spec) != all) return false;
  for (const auto& l : p.locals)
    if (!world_in(extension(m, l.formula, spec), m.actual)) return false;
  return true;
}

bool verify_problem(const FiniteModel& m, const Problem& p) {
  return verify_problem(m, p, theory_for(p.signature));
}

ObMap close_ob(const ObMap& generators, int n) {
  if (n > 12) throw EvalError("ob closure infeasible beyond 12 worlds");
  const WorldSet full = full_set(n);
  ObMap ob = generators;
  bool changed = true;
  auto add = [&](WorldSet ctx, WorldSet core) {
    if (core == 0) return;
    if (ob[ctx].insert(core).second) changed = true;
  };
  while (changed) {
    changed = false;
    // snapshot to keep iteration stable while inserting
    std::vector<std::pair<WorldSet, std::vector<WorldSet>>> snap;
    snap.reserve(ob.size());
    for (const auto& [ctx, cores] : ob)
      snap.emplace_back(ctx, std::vector<WorldSet>(cores.begin(), cores.end()));
    for (const auto& [x, cores] : snap) {
      for (WorldSet c1 : cores)
        for (WorldSet c2 : cores)
          if ((c1 & c2) != 0) add(x, c1 & c2);
      WorldSet comp = full & ~x;
      for (WorldSet s = comp;; s = (s - 1) & comp) {
        WorldSet z = x | s;
        if (z != x)
          for (WorldSet c : cores) add(z, s | c);
        if (s == 0) break;
      }
      for (WorldSet y = x;; y = (y - 1) & x) {
        if (y != x)
          for (WorldSet c : cores)
            if ((y & c) != 0) add(y, y & c);
        if (y == 0) break;
      }
    }
  }
  // drop contexts that ended up with no cores
  for (auto it = ob.begin(); it != ob.end();)
    it = it->second.empty() ? ob.erase(it) : std::next(it);
  return ob;
}

}  // namespace deon
