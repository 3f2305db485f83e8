#include "deon/finder.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace deon {

namespace {

using K = Formula::Kind;

constexpr std::size_t kMiniSatMaxVars = 14;
constexpr int kMaxSearchAtoms = 20;
constexpr std::size_t kMaxObCandidates = 22;

// Requirement formulas compiled into closure order (children first) with
// structural sharing, so partial evaluation is one linear pass.
struct CNode {
  K kind;
  std::string sym;
  int c0 = -1, c1 = -1;
};

struct Compiled {
  std::vector<Formula> forms;
  std::unordered_map<Formula, int, FormulaHash> index;
  std::vector<CNode> nodes;
  std::vector<int> global_roots, local_roots;
  std::vector<int> stit_forms;  // closure order

  int add(const Formula& f) {
    auto it = index.find(f);
    if (it != index.end()) return it->second;
    CNode nd{f.kind(), f.sym(), -1, -1};
    if (f.arity() > 0) nd.c0 = add(f.child(0));
    if (f.arity() > 1) nd.c1 = add(f.child(1));
    int id = static_cast<int>(forms.size());
    forms.push_back(f);
    nodes.push_back(std::move(nd));
    index.emplace(f, id);
    if (f.kind() == K::Stit) stit_forms.push_back(id);
    return id;
  }
};

Compiled compile(const Problem& p, const std::vector<Formula>& extra_locals) {
  Compiled cp;
  for (const auto& g : p.globals) cp.global_roots.push_back(cp.add(g.formula));
  for (const auto& l : p.locals) cp.local_roots.push_back(cp.add(l.formula));
  for (const auto& f : extra_locals) cp.local_roots.push_back(cp.add(f));
  return cp;
}

// Structures the requirement formulas actually read. Anything else can be
// pinned to its canonical least valid assignment: no frame condition couples
// distinct structures, and eval never touches the pinned ones.
struct Refs {
  std::set<std::string> rels;
  std::set<AgentTag> tags;
  bool uses_actual = false, uses_primary = false;
};

Refs collect_refs(const Compiled& cp, const TheorySpec& spec) {
  Refs r;
  for (const auto& nd : cp.nodes) {
    switch (nd.kind) {
      case K::Ob:
      case K::Perm:
      case K::Forb:
        if (spec.id == TheoryId::Sdl)
          r.rels.insert("R");
        else
          r.tags.insert(AgentTag::def());
        break;
      case K::CondOb:
        r.tags.insert(nd.sym.empty() ? AgentTag::def() : AgentTag::agent(nd.sym));
        break;
      case K::ActualOb:
        r.tags.insert(AgentTag::def());
        r.uses_actual = true;
        break;
      case K::PrimaryOb:
        r.tags.insert(AgentTag::def());
        r.uses_primary = true;
        break;
      case K::BoxAv:
      case K::BoxPv:
        r.tags.insert(AgentTag::def());
        break;
      case K::AgentOb:
        r.tags.insert(AgentTag::agent(nd.sym));
        break;
      case K::BoxRel: {
        const RelationDecl* d = spec.find_relation(nd.sym);
        if (d) r.rels.insert(d->stored ? d->id.name : d->converse_of);
        break;
      }
      default:
        break;
    }
  }
  return r;
}

// --- three-valued partial evaluation ---

struct TV {
  WorldSet t = 0, f = 0;  // known-true / known-false world masks
};

struct Progress {
  int worlds = 0;  // valuation rows assigned for worlds 0..worlds-1
  std::set<std::string> rels;
  std::set<AgentTag> avpv;
  std::set<AgentTag> ob;
};

bool ob_member(const FiniteModel& m, const AgentTag& tag, WorldSet y, WorldSet x) {
  auto it = m.ob.find(tag);
  if (it == m.ob.end()) return false;
  auto ctx = it->second.find(x);
  if (ctx == it->second.end()) return false;
  return ctx->second.count(y & x) != 0;
}

void tv_eval(const Compiled& cp, const FiniteModel& m, const TheorySpec& spec,
             const Progress& pr, int n, std::vector<TV>& out) {
  const WorldSet all = full_set(n);
  const WorldSet assigned = pr.worlds >= n ? all : full_set(pr.worlds);
  out.assign(cp.nodes.size(), TV{});

  auto box_rows = [&](const std::vector<WorldSet>& rows, const TV& a) {
    TV r;
    for (int w = 0; w < n; ++w) {
      if ((rows[w] & ~a.t) == 0) r.t |= world_bit(w);
      if ((rows[w] & a.f) != 0) r.f |= world_bit(w);
    }
    return r;
  };
  auto exact = [&](const TV& a) { return (a.t | a.f) == all; };
  auto rigid = [&](bool v) { return v ? TV{all, 0} : TV{0, all}; };

  for (std::size_t i = 0; i < cp.nodes.size(); ++i) {
    const CNode& nd = cp.nodes[i];
    const TV a = nd.c0 >= 0 ? out[nd.c0] : TV{};
    const TV b = nd.c1 >= 0 ? out[nd.c1] : TV{};
    TV r;
    switch (nd.kind) {
      case K::True: r = {all, 0}; break;
      case K::False: r = {0, all}; break;
      case K::Prop: {
        WorldSet v = m.atom_ext(nd.sym);
        r = {v & assigned, assigned & ~v};
        break;
      }
      case K::Not: r = {a.f, a.t}; break;
      case K::And: r = {a.t & b.t, a.f | b.f}; break;
      case K::Or: r = {a.t | b.t, a.f & b.f}; break;
      case K::Implies: r = {a.f | b.t, a.t & b.f}; break;
      case K::Iff: r = {(a.t & b.t) | (a.f & b.f), (a.t & b.f) | (a.f & b.t)}; break;
      case K::Box:
        if (a.f) r = {0, all};
        else if (a.t == all) r = {all, 0};
        break;
      case K::Dia:
        if (a.t) r = {all, 0};
        else if (a.f == all) r = {0, all};
        break;
      case K::BoxRel: {
        const RelationDecl* d = spec.find_relation(nd.sym);
        if (!d) break;
        const std::string& base = d->stored ? d->id.name : d->converse_of;
        if (!pr.rels.count(base)) break;
        const auto& rows = m.relations.at(base);
        if (d->stored) {
          r = box_rows(rows, a);
        } else {
          std::vector<WorldSet> conv(n, 0);
          for (int v = 0; v < n; ++v)
            for (int w : set_to_worlds(rows[v])) conv[w] |= world_bit(v);
          r = box_rows(conv, a);
        }
        break;
      }
      case K::BoxAv:
      case K::BoxPv: {
        const auto& map = nd.kind == K::BoxAv ? m.av : m.pv;
        if (!pr.avpv.count(AgentTag::def())) break;
        r = box_rows(map.at(AgentTag::def()), a);
        break;
      }
      case K::Ob:
      case K::Perm:
      case K::Forb: {
        if (spec.id == TheoryId::Sdl) {
          if (!pr.rels.count("R")) break;
          const auto& rows = m.relations.at("R");
          if (nd.kind == K::Ob) {
            r = box_rows(rows, a);
          } else if (nd.kind == K::Forb) {
            r = box_rows(rows, TV{a.f, a.t});
          } else {  // Perm
            TV boxed = box_rows(rows, TV{a.f, a.t});
            r = {boxed.f, boxed.t};
          }
          break;
        }
        if (!pr.ob.count(AgentTag::def()) || !exact(a)) break;
        bool member = nd.kind == K::Ob ? ob_member(m, AgentTag::def(), a.t, all)
                                       : ob_member(m, AgentTag::def(), a.f, all);
        r = rigid(nd.kind == K::Perm ? !member : member);
        break;
      }
      case K::CondOb: {
        AgentTag tag = nd.sym.empty() ? AgentTag::def() : AgentTag::agent(nd.sym);
        if (!pr.ob.count(tag) || !exact(a) || !exact(b)) break;
        r = rigid(ob_member(m, tag, a.t, b.t));
        break;
      }
      case K::ActualOb:
      case K::PrimaryOb: {
        AgentTag def = AgentTag::def();
        if (!pr.avpv.count(def) || !pr.ob.count(def) || !exact(a)) break;
        const auto& view =
            nd.kind == K::ActualOb ? m.av.at(def) : m.pv.at(def);
        for (int w = 0; w < n; ++w) {
          bool val = ob_member(m, def, a.t, view[w]);
          if (val && spec.actual_ob_requires_violation && (view[w] & ~a.t) == 0) val = false;
          (val ? r.t : r.f) |= world_bit(w);
        }
        break;
      }
      case K::AgentOb: {
        AgentTag tag = AgentTag::agent(nd.sym);
        if (!pr.ob.count(tag) || !exact(a)) break;
        r = rigid(ob_member(m, tag, a.t, all));
        break;
      }
      case K::Stit: {
        auto it = exact(a) ? m.stit.find({nd.sym, a.t}) : m.stit.end();
        if (it != m.stit.end()) {
          r = {it->second, all & ~it->second};
        } else {
          // success refinement: where the body is false, so is stit
          r = {0, a.f};
        }
        break;
      }
    }
    out[i] = r;
  }
}

// --- single-world propositional satisfiability ---

bool minisat_leaf(K k) {
  switch (k) {
    case K::True:
    case K::False:
    case K::Not:
    case K::And:
    case K::Or:
    case K::Implies:
    case K::Iff:
      return false;
    default:
      return true;
  }
}

// Brute-force check that the requirement set has a single-world propositional
// model when modal subformulas are free booleans, with sound pointwise
// implications for Box, BoxPv (pv is reflexive), Stit (success) and Dia.
// "Unsatisfiable" here soundly rules out every cardinality.
bool propositionally_satisfiable(const Compiled& cp, const TheorySpec& spec,
                                 const std::vector<int>& roots) {
  std::vector<int> vars;
  for (std::size_t i = 0; i < cp.nodes.size(); ++i)
    if (minisat_leaf(cp.nodes[i].kind)) vars.push_back(static_cast<int>(i));
  if (vars.size() > kMiniSatMaxVars) return true;
  std::vector<int> var_of(cp.nodes.size(), -1);
  for (std::size_t i = 0; i < vars.size(); ++i) var_of[vars[i]] = static_cast<int>(i);

  bool pv_reflexive = false;
  for (const auto& c : spec.conditions)
    if (c.kind == ConditionKind::PvReflexive && c.scope == "default") pv_reflexive = true;

  std::vector<char> val(cp.nodes.size());
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << vars.size()); ++a) {
    for (std::size_t i = 0; i < cp.nodes.size(); ++i) {
      const CNode& nd = cp.nodes[i];
      if (var_of[i] >= 0) {
        val[i] = (a >> var_of[i]) & 1;
        continue;
      }
      switch (nd.kind) {
        case K::True: val[i] = 1; break;
        case K::False: val[i] = 0; break;
        case K::Not: val[i] = !val[nd.c0]; break;
        case K::And: val[i] = val[nd.c0] && val[nd.c1]; break;
        case K::Or: val[i] = val[nd.c0] || val[nd.c1]; break;
        case K::Implies: val[i] = !val[nd.c0] || val[nd.c1]; break;
        case K::Iff: val[i] = val[nd.c0] == val[nd.c1]; break;
        default: val[i] = 0; break;
      }
    }
    bool ok = true;
    for (int v : vars) {
      const CNode& nd = cp.nodes[v];
      switch (nd.kind) {
        case K::Box:
          if (val[v] && !val[nd.c0]) ok = false;
          break;
        case K::BoxPv:
          if (pv_reflexive && val[v] && !val[nd.c0]) ok = false;
          break;
        case K::Stit:
          if (val[v] && !val[nd.c0]) ok = false;
          break;
        case K::Dia:
          if (val[nd.c0] && !val[v]) ok = false;
          break;
        default:
          break;
      }
      if (!ok) break;
    }
    if (!ok) continue;
    bool sat = true;
    for (int r : roots)
      if (!val[r]) {
        sat = false;
        break;
      }
    if (sat) return true;
  }
  return false;
}

// --- the staged backtracking search ---

struct Search {
  Search(const TheorySpec& spec, const Compiled& cp, const Signature& sig, bool enumerate_all,
         int n, std::optional<std::uint64_t> node_limit, std::uint64_t* nodes)
      : spec(spec),
        cp(cp),
        sig(sig),
        enumerate_all(enumerate_all),
        n(n),
        all(full_set(n)),
        filter_mode(enumerate_all || n <= 2),
        node_limit(node_limit),
        nodes(nodes) {}

  const TheorySpec& spec;
  const Compiled& cp;
  const Signature& sig;
  bool enumerate_all;
  int n;
  WorldSet all;
  bool filter_mode;  // full 2^n ob contexts, conditions checked in place
  std::optional<std::uint64_t> node_limit;
  std::uint64_t* nodes;
  std::function<bool(const FiniteModel&)> emit;

  bool budget_hit = false;
  bool stop = false;
  FiniteModel m;
  Progress pr;
  std::vector<std::uint32_t> vrows;
  std::uint32_t used_mask = 0;
  std::vector<std::string> search_rels;
  std::vector<AgentTag> search_tags;
  std::vector<TV> tvbuf;

  bool tick() {
    ++*nodes;
    if (node_limit && *nodes > *node_limit) {
      budget_hit = true;
      stop = true;
    }
    return !stop;
  }

  bool pruned() {
    tv_eval(cp, m, spec, pr, n, tvbuf);
    for (int g : cp.global_roots)
      if (tvbuf[g].f) return true;
    for (int l : cp.local_roots)
      if (world_in(tvbuf[l].f, m.actual)) return true;
    return false;
  }

  void run() {
    if (static_cast<int>(sig.atoms.size()) > kMaxSearchAtoms)
      throw EvalError("finder supports at most 20 atoms");
    m = FiniteModel{};
    m.theory = sig.theory;
    m.n = n;
    m.actual = 0;
    pr = Progress{};
    vrows.assign(n, 0);

    Refs refs = collect_refs(cp, spec);
    used_mask = 0;
    for (std::size_t i = 0; i < sig.atoms.size(); ++i) {
      bool used = enumerate_all;
      if (!used)
        for (const auto& nd : cp.nodes)
          if (nd.kind == K::Prop && nd.sym == sig.atoms[i].name) {
            used = true;
            break;
          }
      if (used) used_mask |= 1u << i;
    }

    search_rels.clear();
    for (const auto& rd : spec.relations) {
      if (!rd.stored) continue;
      if (enumerate_all || refs.rels.count(rd.id.name)) {
        search_rels.push_back(rd.id.name);
        continue;
      }
      if (auto def = default_relation(spec, rd.id.name, n)) {
        m.relations[rd.id.name] = *def;
        pr.rels.insert(rd.id.name);
      } else {
        search_rels.push_back(rd.id.name);  // no valid default; must search
      }
    }
    search_tags.clear();
    for (const auto& tag : spec.tags) {
      if (enumerate_all || refs.tags.count(tag)) {
        search_tags.push_back(tag);
        continue;
      }
      std::vector<WorldSet> av(n, world_bit(0)), pv(n);
      for (int w = 0; w < n; ++w) pv[w] = av[w] | world_bit(w);
      m.av[tag] = std::move(av);
      m.pv[tag] = std::move(pv);
      pr.avpv.insert(tag);
      pr.ob.insert(tag);  // empty core family
    }

    val_stage(0);
  }

  void val_stage(int w) {
    if (stop) return;
    if (w == n) {
      rel_stage(0);
      return;
    }
    const std::uint32_t limit = sig.atoms.empty() ? 1 : (1u << sig.atoms.size());
    const std::uint32_t lo = w >= 2 ? vrows[w - 1] : 0;
    for (std::uint32_t x = lo; x < limit; ++x) {
      if (x & ~used_mask) continue;
      if (!tick()) return;
      vrows[w] = x;
      for (std::size_t i = 0; i < sig.atoms.size(); ++i) {
        WorldSet& v = m.valuation[sig.atoms[i].name];
        if ((x >> i) & 1)
          v |= world_bit(w);
        else
          v &= ~world_bit(w);
      }
      pr.worlds = w + 1;
      if (!pruned()) val_stage(w + 1);
      if (stop) return;
    }
    for (std::size_t i = 0; i < sig.atoms.size(); ++i)
      m.valuation[sig.atoms[i].name] &= ~world_bit(w);
    pr.worlds = w;
  }

  struct RelFlags {
    bool serial = false, reflexive = false, irreflexive = false, symmetric = false,
         transitive = false;
  };
  RelFlags rel_flags(const std::string& name) const {
    RelFlags fl;
    for (const auto& c : spec.conditions) {
      if (c.scope != name) continue;
      switch (c.kind) {
        case ConditionKind::Serial: fl.serial = true; break;
        case ConditionKind::Reflexive: fl.reflexive = true; break;
        case ConditionKind::Irreflexive: fl.irreflexive = true; break;
        case ConditionKind::Symmetric: fl.symmetric = true; break;
        case ConditionKind::Transitive: fl.transitive = true; break;
        default: break;
      }
    }
    return fl;
  }

  void rel_stage(std::size_t ri) {
    if (stop) return;
    if (ri == search_rels.size()) {
      avpv_stage(0);
      return;
    }
    std::vector<WorldSet> rows(n, 0);
    rel_rows(ri, 0, rows, rel_flags(search_rels[ri]));
  }

  void rel_rows(std::size_t ri, int w, std::vector<WorldSet>& rows, const RelFlags& fl) {
    if (stop) return;
    const std::string& name = search_rels[ri];
    if (w == n) {
      if (fl.transitive) {
        for (int u = 0; u < n; ++u)
          for (int v : set_to_worlds(rows[u]))
            if ((rows[v] & ~rows[u]) != 0) return;
      }
      m.relations[name] = rows;
      pr.rels.insert(name);
      if (!pruned()) rel_stage(ri + 1);
      pr.rels.erase(name);
      m.relations.erase(name);
      return;
    }
    for (WorldSet row = 0; row <= all; ++row) {
      if (fl.serial && row == 0) continue;
      if (fl.reflexive && !world_in(row, w)) continue;
      if (fl.irreflexive && world_in(row, w)) continue;
      if (fl.symmetric) {
        bool bad = false;
        for (int v = 0; v < w; ++v)
          if (world_in(row, v) != world_in(rows[v], w)) {
            bad = true;
            break;
          }
        if (bad) continue;
      }
      if (!tick()) return;
      rows[w] = row;
      rel_rows(ri, w + 1, rows, fl);
      if (stop) return;
    }
    rows[w] = 0;
  }

  void avpv_stage(std::size_t ti) {
    if (stop) return;
    if (ti == search_tags.size()) {
      ob_stage(0);
      return;
    }
    m.av[search_tags[ti]] = std::vector<WorldSet>(n, 0);
    m.pv[search_tags[ti]] = std::vector<WorldSet>(n, 0);
    av_rows(ti, 0);
    m.av.erase(search_tags[ti]);
    m.pv.erase(search_tags[ti]);
  }

  void av_rows(std::size_t ti, int w) {
    if (stop) return;
    const AgentTag& tag = search_tags[ti];
    if (w == n) {
      pv_rows(ti, 0);
      return;
    }
    auto& rows = m.av[tag];
    for (WorldSet row = 1; row <= all; ++row) {
      if (!tick()) return;
      rows[w] = row;
      av_rows(ti, w + 1);
      if (stop) return;
    }
    rows[w] = 0;
  }

  void pv_rows(std::size_t ti, int w) {
    if (stop) return;
    const AgentTag& tag = search_tags[ti];
    if (w == n) {
      pr.avpv.insert(tag);
      if (!pruned()) avpv_stage(ti + 1);
      pr.avpv.erase(tag);
      return;
    }
    auto& rows = m.pv[tag];
    const WorldSet base = m.av[tag][w] | world_bit(w);
    for (WorldSet row = base; row <= all; ++row) {
      if ((row & base) != base) continue;
      if (!tick()) return;
      rows[w] = row;
      pv_rows(ti, w + 1);
      if (stop) return;
    }
    rows[w] = 0;
  }

  // ob context domain for one tag. In filter mode all 2^n subsets; otherwise
  // the contexts evaluation can query: conditional-obligation context
  // extensions (when already exact), av/pv images, ∅ and the full set.
  std::vector<WorldSet> ob_domain(const AgentTag& tag) {
    std::vector<WorldSet> out;
    if (filter_mode) {
      for (WorldSet x = 0; x <= all; ++x) out.push_back(x);
      return out;
    }
    std::set<WorldSet> dom = {0, all};
    bool fallback = false;
    tv_eval(cp, m, spec, pr, n, tvbuf);
    for (std::size_t i = 0; i < cp.nodes.size() && !fallback; ++i) {
      const CNode& nd = cp.nodes[i];
      if (nd.kind != K::CondOb) continue;
      AgentTag t = nd.sym.empty() ? AgentTag::def() : AgentTag::agent(nd.sym);
      if (!(t == tag)) continue;
      const TV& ctx = tvbuf[nd.c1];
      if ((ctx.t | ctx.f) == all)
        dom.insert(ctx.t);
      else
        fallback = true;  // context depends on structure assigned later
    }
    if (tag.is_default()) {
      Refs refs = collect_refs(cp, spec);
      if (refs.uses_actual)
        for (int w = 0; w < n; ++w) dom.insert(m.av.at(tag)[w]);
      if (refs.uses_primary)
        for (int w = 0; w < n; ++w) dom.insert(m.pv.at(tag)[w]);
    }
    if (fallback) {
      out.clear();
      for (WorldSet x = 0; x <= all; ++x) out.push_back(x);
      return out;
    }
    out.assign(dom.begin(), dom.end());
    return out;
  }

  void ob_stage(std::size_t ti) {
    if (stop) return;
    if (ti == search_tags.size()) {
      stit_stage(0);
      return;
    }
    std::vector<WorldSet> domain = ob_domain(search_tags[ti]);
    ObMap gen;
    ob_ctx(ti, domain, 0, gen);
  }

  void ob_ctx(std::size_t ti, const std::vector<WorldSet>& domain, std::size_t di, ObMap& gen) {
    if (stop) return;
    const AgentTag& tag = search_tags[ti];
    if (di == domain.size()) {
      m.ob[tag] = filter_mode ? gen : close_ob(gen, n);
      pr.ob.insert(tag);
      if (!pruned()) ob_stage(ti + 1);
      pr.ob.erase(tag);
      m.ob.erase(tag);
      return;
    }
    const WorldSet x = domain[di];
    std::vector<WorldSet> candidates;
    for (WorldSet c = 1; c <= x; ++c)
      if ((c & ~x) == 0) candidates.push_back(c);
    if (candidates.size() > kMaxObCandidates) throw EvalError("ob context too large to search");
    const std::uint64_t fams = std::uint64_t{1} << candidates.size();
    for (std::uint64_t fam = 0; fam < fams; ++fam) {
      if (!tick()) return;
      std::set<WorldSet> cores;
      for (std::size_t j = 0; j < candidates.size(); ++j)
        if ((fam >> j) & 1) cores.insert(candidates[j]);
      if (filter_mode && !ob_increment_ok(gen, domain, di, x, cores)) continue;
      if (!cores.empty()) gen[x] = cores;
      ob_ctx(ti, domain, di + 1, gen);
      gen.erase(x);
      if (stop) return;
    }
  }

  // Pairwise CJ conditions against contexts assigned earlier. Domains are in
  // ascending mask order, so every earlier context is either a subset of x
  // or ⊆-incomparable.
  static bool ob_increment_ok(const ObMap& gen, const std::vector<WorldSet>& domain,
                              std::size_t di, WorldSet x, const std::set<WorldSet>& cores) {
    for (WorldSet c1 : cores)
      for (WorldSet c2 : cores) {
        WorldSet meet = c1 & c2;
        if (meet != 0 && !cores.count(meet)) return false;  // ob3
      }
    static const std::set<WorldSet> empty;
    for (std::size_t j = 0; j < di; ++j) {
      WorldSet prior = domain[j];
      if ((prior & ~x) != 0) continue;  // not a subset of x
      auto it = gen.find(prior);
      const std::set<WorldSet>& prior_cores = it == gen.end() ? empty : it->second;
      for (WorldSet c : prior_cores)  // ob4: lift into x
        if (!cores.count((x & ~prior) | c)) return false;
      for (WorldSet c : cores) {  // ob5: restrict to prior
        WorldSet cut = c & prior;
        if (cut != 0 && !prior_cores.count(cut)) return false;
      }
    }
    return true;
  }

  void stit_stage(std::size_t si) {
    if (stop) return;
    if (si == cp.stit_forms.size()) {
      finish();
      return;
    }
    const int fid = cp.stit_forms[si];
    const CNode& nd = cp.nodes[fid];
    tv_eval(cp, m, spec, pr, n, tvbuf);
    const TV& body = tvbuf[nd.c0];
    if ((body.t | body.f) != all) return;  // cannot happen; inner slots precede
    const std::pair<std::string, WorldSet> key{nd.sym, body.t};
    if (m.stit.count(key)) {
      stit_stage(si + 1);
      return;
    }
    const WorldSet prop = body.t;
    for (WorldSet choice = 0; choice <= prop; ++choice) {
      if ((choice & ~prop) != 0) continue;
      if (!tick()) return;
      m.stit[key] = choice;
      if (!pruned()) stit_stage(si + 1);
      m.stit.erase(key);
      if (stop) return;
    }
  }

  void finish() {
    if (stop) return;
    if (!check_frame(m, spec).empty()) return;  // incremental checks missed: reject
    for (int g : cp.global_roots)
      if (extension(m, cp.forms[g], spec) != all) return;
    for (int l : cp.local_roots)
      if (!world_in(extension(m, cp.forms[l], spec), m.actual)) return;
    FiniteModel out = m;
    // drop empty valuation rows for a canonical carried model
    for (auto it = out.valuation.begin(); it != out.valuation.end();)
      it = it->second == 0 ? out.valuation.erase(it) : std::next(it);
    if (emit(out)) stop = true;
  }
};

struct RunOutcome {
  std::optional<FiniteModel> model;
  bool exhaustive = true;
};

RunOutcome run_search(const Problem& p, const std::vector<Formula>& extras,
                      const SearchBudget& b) {
  TheorySpec spec = theory_for(p.signature);
  Compiled cp = compile(p, extras);
  std::vector<int> roots = cp.global_roots;
  roots.insert(roots.end(), cp.local_roots.begin(), cp.local_roots.end());
  if (!propositionally_satisfiable(cp, spec, roots)) return {std::nullopt, true};

  std::uint64_t nodes = 0;
  for (int n = 1; n <= b.max_worlds; ++n) {
    Search s(spec, cp, p.signature, /*enumerate_all=*/false, n, b.node_limit, &nodes);
    std::optional<FiniteModel> found;
    s.emit = [&](const FiniteModel& m) {
      found = m;
      return true;
    };
    s.run();
    if (found) return {found, true};
    if (s.budget_hit) return {std::nullopt, false};
  }
  return {std::nullopt, true};
}

}  // namespace

const char* Verdict::kind_tag() const {
  switch (kind) {
    case Kind::ModelFound: return "model";
    case Kind::NoModelUpTo: return "no_model";
    case Kind::Countermodel: return "countermodel";
    case Kind::BoundedValid: return "valid";
  }
  return "?";
}

Verdict find_model(const Problem& p, const SearchBudget& b) {
  RunOutcome r = run_search(p, {}, b);
  Verdict v;
  if (r.model) {
    v.kind = Verdict::Kind::ModelFound;
    v.bound = r.model->n;
    v.model = std::move(r.model);
  } else {
    v.kind = Verdict::Kind::NoModelUpTo;
    v.bound = b.max_worlds;
    v.exhaustive = r.exhaustive;
  }
  return v;
}

Verdict check_entailment(const Problem& p, const Formula& goal, const SearchBudget& b) {
  RunOutcome r = run_search(p, {Formula::neg(goal)}, b);
  Verdict v;
  if (r.model) {
    v.kind = Verdict::Kind::Countermodel;
    v.bound = r.model->n;
    v.model = std::move(r.model);
    v.refuted_goal = goal;
  } else {
    v.kind = Verdict::Kind::BoundedValid;
    v.bound = b.max_worlds;
    v.exhaustive = r.exhaustive;
  }
  return v;
}

std::vector<FiniteModel> enumerate_models(const Problem& p, int n, std::size_t limit) {
  TheorySpec spec = theory_for(p.signature);
  Compiled cp = compile(p, {});
  std::vector<FiniteModel> out;
  if (limit == 0) return out;
  std::uint64_t nodes = 0;
  Search s(spec, cp, p.signature, /*enumerate_all=*/true, n, std::nullopt, &nodes);
  s.emit = [&](const FiniteModel& m) {
    out.push_back(m);
    return out.size() >= limit;
  };
  s.run();
  return out;
}

bool verify(const Verdict& v, const Problem& p) {
  if (!v.model) return true;
  const FiniteModel& m = *v.model;
  TheorySpec spec = theory_for(p.signature);
  if (!check_frame(m, spec).empty()) return false;
  if (!verify_problem(m, p, spec)) return false;
  if (v.kind == Verdict::Kind::Countermodel) {
    if (!v.refuted_goal) return false;
    if (eval(m, m.actual, *v.refuted_goal, spec)) return false;
  }
  return true;
}

}  // namespace deon
