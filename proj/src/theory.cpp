#include "deon/theory.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "deon/errors.hpp"

namespace deon {

namespace {

using K = Formula::Kind;

std::set<K> boolean_ops() {
  return {K::True, K::False, K::Prop, K::Not, K::And, K::Or, K::Implies, K::Iff};
}

void add_cj_conditions(TheorySpec& t, const AgentTag& tag) {
  const std::string s = tag.display();
  t.conditions.push_back({ConditionKind::AvSerial, s});
  t.conditions.push_back({ConditionKind::AvSubPv, s});
  t.conditions.push_back({ConditionKind::PvReflexive, s});
  t.conditions.push_back({ConditionKind::Ob1, s});
  t.conditions.push_back({ConditionKind::Ob2Rep, s});
  t.conditions.push_back({ConditionKind::Ob3Fin, s});
  t.conditions.push_back({ConditionKind::Ob4, s});
  t.conditions.push_back({ConditionKind::Ob5, s});
}

TheorySpec make_sdl() {
  TheorySpec t;
  t.id = TheoryId::Sdl;
  t.operators = boolean_ops();
  t.operators.insert({K::Ob, K::Perm, K::Forb});
  t.relations.push_back({RelId{"R"}, true, ""});
  t.conditions.push_back({ConditionKind::Serial, "R"});
  return t;
}

TheorySpec make_cjddl() {
  TheorySpec t;
  t.id = TheoryId::Cjddl;
  t.operators = boolean_ops();
  t.operators.insert({K::Box, K::Dia, K::CondOb, K::Ob, K::Perm, K::Forb, K::ActualOb,
                      K::PrimaryOb, K::BoxAv, K::BoxPv});
  t.tags = {AgentTag::def()};
  add_cj_conditions(t, AgentTag::def());
  return t;
}

TheorySpec make_xddl(TheoryId id) {
  TheorySpec t = make_cjddl();
  t.id = id;
  t.operators.insert({K::AgentOb, K::Stit});
  t.builtin_agents = {AgentId{"d"}, AgentId{"b"}};
  t.tags = {AgentTag::def(), AgentTag::agent("d"), AgentTag::agent("b")};
  t.conditions.clear();
  for (const auto& tag : t.tags) add_cj_conditions(t, tag);
  t.has_stit = true;
  t.conditions.push_back({ConditionKind::StitSuccess, ""});
  return t;
}

TheorySpec make_tds() {
  TheorySpec t;
  t.id = TheoryId::Tds;
  t.operators = boolean_ops();
  t.operators.insert(K::BoxRel);
  t.builtin_agents = {AgentId{"a1"}, AgentId{"a2"}};
  t.relations.push_back({RelId{"choice_a1"}, true, ""});
  t.relations.push_back({RelId{"choice_a2"}, true, ""});
  t.relations.push_back({RelId{"rg"}, true, ""});
  t.relations.push_back({RelId{"rh"}, false, "rg"});
  for (const auto* rel : {"choice_a1", "choice_a2"}) {
    t.conditions.push_back({ConditionKind::Reflexive, rel});
    t.conditions.push_back({ConditionKind::Symmetric, rel});
    t.conditions.push_back({ConditionKind::Transitive, rel});
  }
  // Strict temporal succession: this set has no finite model (a finite
  // serial transitive relation contains a cycle, and transitivity turns a
  // cycle into a reflexive point).
  t.conditions.push_back({ConditionKind::Serial, "rg"});
  t.conditions.push_back({ConditionKind::Transitive, "rg"});
  t.conditions.push_back({ConditionKind::Irreflexive, "rg"});
  return t;
}

}  // namespace

const TheorySpec& builtin_theory(TheoryId id) {
  static const TheorySpec sdl = make_sdl();
  static const TheorySpec cjddl = make_cjddl();
  static const TheorySpec xddl1 = make_xddl(TheoryId::Xddl1);
  static const TheorySpec xddl2 = make_xddl(TheoryId::Xddl2);
  static const TheorySpec tds = make_tds();
  switch (id) {
    case TheoryId::Sdl: return sdl;
    case TheoryId::Cjddl: return cjddl;
    case TheoryId::Xddl1: return xddl1;
    case TheoryId::Xddl2: return xddl2;
    case TheoryId::Tds: return tds;
  }
  return sdl;
}

TheorySpec theory_for(const Signature& sig) {
  TheorySpec t = builtin_theory(sig.theory);
  if (sig.theory != TheoryId::Xddl1 && sig.theory != TheoryId::Xddl2) return t;
  for (const auto& a : sig.agents) {
    AgentTag tag = AgentTag::agent(a.name);
    if (!t.has_tag(tag)) {
      t.tags.push_back(tag);
      add_cj_conditions(t, tag);
    }
  }
  return t;
}

bool TheorySpec::has_tag(const AgentTag& t) const {
  return std::find(tags.begin(), tags.end(), t) != tags.end();
}

const RelationDecl* TheorySpec::find_relation(const std::string& name) const {
  for (const auto& r : relations)
    if (r.id.name == name) return &r;
  return nullptr;
}

bool theory_allows_operator(TheoryId theory, Formula::Kind kind) {
  return builtin_theory(theory).allows(kind);
}

bool theory_has_relation(TheoryId theory, const std::string& rel) {
  return builtin_theory(theory).find_relation(rel) != nullptr;
}

bool theory_has_builtin_agent(TheoryId theory, const std::string& agent) {
  const auto& agents = builtin_theory(theory).builtin_agents;
  return std::any_of(agents.begin(), agents.end(),
                     [&](const AgentId& a) { return a.name == agent; });
}

std::string FrameCondition::name() const {
  std::string base;
  switch (kind) {
    case ConditionKind::Serial: base = "serial"; break;
    case ConditionKind::Reflexive: base = "reflexive"; break;
    case ConditionKind::Symmetric: base = "symmetric"; break;
    case ConditionKind::Transitive: base = "transitive"; break;
    case ConditionKind::Irreflexive: base = "irreflexive"; break;
    case ConditionKind::AvSerial: base = "av-serial"; break;
    case ConditionKind::AvSubPv: base = "av-sub-pv"; break;
    case ConditionKind::PvReflexive: base = "pv-reflexive"; break;
    case ConditionKind::Ob1: base = "ob1"; break;
    case ConditionKind::Ob2Rep: base = "ob2"; break;
    case ConditionKind::Ob3Fin: base = "ob3"; break;
    case ConditionKind::Ob4: base = "ob4"; break;
    case ConditionKind::Ob5: base = "ob5"; break;
    case ConditionKind::StitSuccess: return "stit-success";
  }
  return base + "(" + scope + ")";
}

namespace {

std::string worlds_str(WorldSet s) {
  std::string out = "{";
  bool first = true;
  for (int w : set_to_worlds(s)) {
    if (!first) out += ",";
    out += std::to_string(w);
    first = false;
  }
  return out + "}";
}

// Checkers assume the structure exists; callers resolve absence.

std::optional<Violation> check_relation(const FrameCondition& c, const std::vector<WorldSet>& rel,
                                        int n) {
  const int nn = n;
  switch (c.kind) {
    case ConditionKind::Serial:
      for (int w = 0; w < nn; ++w)
        if (rel[w] == 0) return Violation{c.name(), "world " + std::to_string(w) + " has no successor"};
      break;
    case ConditionKind::Reflexive:
      for (int w = 0; w < nn; ++w)
        if (!world_in(rel[w], w))
          return Violation{c.name(), "missing (" + std::to_string(w) + "," + std::to_string(w) + ")"};
      break;
    case ConditionKind::Irreflexive:
      for (int w = 0; w < nn; ++w)
        if (world_in(rel[w], w))
          return Violation{c.name(), "has (" + std::to_string(w) + "," + std::to_string(w) + ")"};
      break;
    case ConditionKind::Symmetric:
      for (int w = 0; w < nn; ++w)
        for (int v : set_to_worlds(rel[w]))
          if (!world_in(rel[v], w))
            return Violation{c.name(),
                             "has (" + std::to_string(w) + "," + std::to_string(v) + ") but not the converse"};
      break;
    case ConditionKind::Transitive:
      for (int w = 0; w < nn; ++w)
        for (int v : set_to_worlds(rel[w]))
          if ((rel[v] & ~rel[w]) != 0)
            return Violation{c.name(), "missing (" + std::to_string(w) + "," +
                                           std::to_string(*set_to_worlds(rel[v] & ~rel[w]).begin()) + ")"};
      break;
    default:
      break;
  }
  return std::nullopt;
}

std::optional<Violation> check_av_pv(const FrameCondition& c, const FiniteModel& m,
                                     const AgentTag& tag) {
  const auto& av = m.av.at(tag);
  switch (c.kind) {
    case ConditionKind::AvSerial:
      for (int w = 0; w < m.n; ++w)
        if (av[w] == 0) return Violation{c.name(), "av empty at world " + std::to_string(w)};
      break;
    case ConditionKind::AvSubPv: {
      const auto& pv = m.pv.at(tag);
      for (int w = 0; w < m.n; ++w)
        if ((av[w] & ~pv[w]) != 0)
          return Violation{c.name(), "av ⊄ pv at world " + std::to_string(w)};
      break;
    }
    case ConditionKind::PvReflexive: {
      const auto& pv = m.pv.at(tag);
      for (int w = 0; w < m.n; ++w)
        if (!world_in(pv[w], w))
          return Violation{c.name(), "world " + std::to_string(w) + " not in its pv set"};
      break;
    }
    default:
      break;
  }
  return std::nullopt;
}

std::optional<Violation> check_ob(const FrameCondition& c, const ObMap& ob, int n) {
  if (n > 20) throw EvalError("ob frame check infeasible beyond 20 worlds");
  const WorldSet full = full_set(n);
  switch (c.kind) {
    case ConditionKind::Ob1:
      for (const auto& [ctx, cores] : ob)
        if (cores.count(0)) return Violation{c.name(), "empty core in context " + worlds_str(ctx)};
      break;
    case ConditionKind::Ob2Rep:
      for (const auto& [ctx, cores] : ob)
        for (WorldSet core : cores)
          if ((core & ~ctx) != 0)
            return Violation{c.name(), "core " + worlds_str(core) + " exceeds context " + worlds_str(ctx)};
      break;
    case ConditionKind::Ob3Fin:
      for (const auto& [ctx, cores] : ob)
        for (WorldSet c1 : cores)
          for (WorldSet c2 : cores) {
            WorldSet meet = c1 & c2;
            if (meet != 0 && !cores.count(meet))
              return Violation{c.name(), "context " + worlds_str(ctx) + " lacks core " + worlds_str(meet)};
          }
      break;
    case ConditionKind::Ob4:
      for (const auto& [ctx, cores] : ob) {
        if (cores.empty()) continue;
        // supersets of ctx: union ctx with every subset of its complement
        WorldSet comp = full & ~ctx;
        WorldSet s = comp;
        while (true) {
          WorldSet z = ctx | s;
          for (WorldSet core : cores) {
            WorldSet lifted = (z & ~ctx) | core;
            auto it = ob.find(z);
            if (it == ob.end() || !it->second.count(lifted))
              return Violation{c.name(), "context " + worlds_str(z) + " lacks lifted core " +
                                             worlds_str(lifted) + " from " + worlds_str(ctx)};
          }
          if (s == 0) break;
          s = (s - 1) & comp;
        }
      }
      break;
    case ConditionKind::Ob5:
      for (const auto& [ctx, cores] : ob) {
        if (cores.empty()) continue;
        WorldSet y = ctx;
        while (true) {
          for (WorldSet core : cores) {
            WorldSet cut = y & core;
            if (cut != 0) {
              auto it = ob.find(y);
              if (it == ob.end() || !it->second.count(cut))
                return Violation{c.name(), "context " + worlds_str(y) + " lacks restricted core " +
                                               worlds_str(cut) + " from " + worlds_str(ctx)};
            }
          }
          if (y == 0) break;
          y = (y - 1) & ctx;
        }
      }
      break;
    default:
      break;
  }
  return std::nullopt;
}

std::optional<Violation> check_stit(const FrameCondition& c, const FiniteModel& m) {
  for (const auto& [key, choice] : m.stit)
    if ((choice & ~key.second) != 0)
      return Violation{c.name(), "choice " + worlds_str(choice) + " for agent " + key.first +
                                     " exceeds proposition " + worlds_str(key.second)};
  return std::nullopt;
}

// Returns condition scope's tag for av/pv/ob conditions.
AgentTag scope_tag(const FrameCondition& c) {
  return c.scope == "default" ? AgentTag::def() : AgentTag::agent(c.scope);
}

std::optional<Violation> check_condition(const FiniteModel& m, const FrameCondition& c,
                                         bool* missing) {
  *missing = false;
  switch (c.kind) {
    case ConditionKind::Serial:
    case ConditionKind::Reflexive:
    case ConditionKind::Symmetric:
    case ConditionKind::Transitive:
    case ConditionKind::Irreflexive: {
      auto it = m.relations.find(c.scope);
      if (it == m.relations.end() || static_cast<int>(it->second.size()) < m.n) {
        *missing = true;
        return Violation{c.name(), "relation " + c.scope + " missing"};
      }
      return check_relation(c, it->second, m.n);
    }
    case ConditionKind::AvSerial:
    case ConditionKind::AvSubPv:
    case ConditionKind::PvReflexive: {
      AgentTag tag = scope_tag(c);
      bool need_pv = c.kind != ConditionKind::AvSerial;
      if (!m.av.count(tag) || (need_pv && !m.pv.count(tag))) {
        *missing = true;
        return Violation{c.name(), "av/pv structure for tag " + c.scope + " missing"};
      }
      return check_av_pv(c, m, tag);
    }
    case ConditionKind::Ob1:
    case ConditionKind::Ob2Rep:
    case ConditionKind::Ob3Fin:
    case ConditionKind::Ob4:
    case ConditionKind::Ob5: {
      AgentTag tag = scope_tag(c);
      auto it = m.ob.find(tag);
      // absent ob map = no cores anywhere; all ob conditions hold vacuously
      static const ObMap empty;
      return check_ob(c, it == m.ob.end() ? empty : it->second, m.n);
    }
    case ConditionKind::StitSuccess:
      return check_stit(c, m);
  }
  return std::nullopt;
}

}  // namespace

bool condition_holds(const FiniteModel& m, const FrameCondition& c) {
  bool missing = false;
  auto v = check_condition(m, c, &missing);
  if (missing) throw EvalError("missing structure for condition " + c.name());
  return !v.has_value();
}

std::vector<Violation> check_frame(const FiniteModel& m, const TheorySpec& t) {
  std::vector<Violation> out;
  bool missing = false;
  for (const auto& c : t.conditions) {
    auto v = check_condition(m, c, &missing);
    if (v) out.push_back(*v);
  }
  return out;
}

std::optional<std::vector<WorldSet>> default_relation(const TheorySpec& t, const std::string& rel,
                                                      int n) {
  std::vector<std::vector<WorldSet>> candidates;
  std::vector<WorldSet> identity(n), empty(n, 0), to_zero(n, world_bit(0));
  for (int w = 0; w < n; ++w) identity[w] = world_bit(w);
  candidates.push_back(identity);
  candidates.push_back(empty);
  candidates.push_back(to_zero);
  for (const auto& cand : candidates) {
    bool ok = true;
    for (const auto& c : t.conditions) {
      if (c.scope != rel) continue;
      if (check_relation(c, cand, n)) {
        ok = false;
        break;
      }
    }
    if (ok) return cand;
  }
  return std::nullopt;
}

std::vector<int> set_to_worlds(WorldSet s) {
  std::vector<int> out;
  while (s) {
    int w = std::countr_zero(s);
    out.push_back(w);
    s &= s - 1;
  }
  return out;
}

}  // namespace deon
