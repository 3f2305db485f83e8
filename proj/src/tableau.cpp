#include "deon/tableau.hpp"

#include <deque>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "deon/errors.hpp"
#include "deon/syntax.hpp"

namespace deon {

namespace {

using K = Formula::Kind;

// Perm/Forb reduce to Ob and negation; the tableau works with the five
// boolean connectives, constants, atoms and Ob.
Formula desugar(const Formula& f) {
  std::vector<Formula> kids;
  for (std::size_t i = 0; i < f.arity(); ++i) kids.push_back(desugar(f.child(i)));
  switch (f.kind()) {
    case K::Perm: return Formula::neg(Formula::ob(Formula::neg(kids[0])));
    case K::Forb: return Formula::ob(Formula::neg(kids[0]));
    case K::True:
    case K::False:
    case K::Prop:
      return f;
    case K::Not: return Formula::neg(kids[0]);
    case K::And: return Formula::conj(kids[0], kids[1]);
    case K::Or: return Formula::disj(kids[0], kids[1]);
    case K::Implies: return Formula::implies(kids[0], kids[1]);
    case K::Iff: return Formula::iff(kids[0], kids[1]);
    case K::Ob: return Formula::ob(kids[0]);
    default:
      throw EvalError("operator outside SDL in tableau input");
  }
}

struct SignedF {
  bool sign;  // true = T
  Formula f;
  auto operator<=>(const SignedF&) const = default;
  bool operator==(const SignedF&) const = default;
};

std::string show(const SignedF& sf) {
  return (sf.sign ? "T " : "F ") + print_formula(sf.f);
}

struct Item {
  int label;
  SignedF sf;
};

struct LabelState {
  std::set<SignedF> asserted;
  std::vector<Formula> t_obs;  // bodies of asserted T Ob formulas
  std::vector<int> succs;
};

struct Branch {
  std::vector<LabelState> labels;
  std::deque<Item> queue;
  bool closed = false;
  ProofStep clash;
};

struct Tableau {
  std::vector<Formula> globals;
  std::uint64_t nodes = 0;
  std::uint64_t node_limit;
  bool out_of_budget = false;
  std::optional<FiniteModel> open_model;

  bool tick() {
    if (++nodes > node_limit) out_of_budget = true;
    return !out_of_budget;
  }

  // Asserts sf at label; detects clashes; T-Ob bodies propagate to current
  // successors immediately.
  void add(Branch& br, int label, SignedF sf, ProofStep* clash_out = nullptr) {
    if (br.closed) return;
    auto& st = br.labels[label];
    if (st.asserted.count(sf)) return;
    SignedF comp{!sf.sign, sf.f};
    bool clash = st.asserted.count(comp) || (sf.sign && sf.f.kind() == K::False) ||
                 (!sf.sign && sf.f.kind() == K::True);
    st.asserted.insert(sf);
    br.queue.push_back({label, sf});
    if (clash) {
      br.closed = true;
      br.clash = {"close", label, show(sf)};
      if (clash_out) *clash_out = br.clash;
      return;
    }
    if (sf.sign && sf.f.kind() == K::Ob) {
      st.t_obs.push_back(sf.f.child(0));
      for (int succ : st.succs) add(br, succ, {true, sf.f.child(0)});
    }
  }

  // Creates (or reuses via subset-blocking) a successor of label carrying
  // `required`. Reuse adds no assertions to the blocker, so it cannot close
  // a branch a fresh world would keep open.
  void need_successor(Branch& br, int label, const std::set<SignedF>& required,
                      ProofNode& trace, const char* rule, const std::string& principal) {
    if (br.closed) return;
    for (std::size_t tau = 0; tau < br.labels.size(); ++tau) {
      bool covered = true;
      for (const auto& sf : required)
        if (!br.labels[tau].asserted.count(sf)) {
          covered = false;
          break;
        }
      if (covered) {
        br.labels[label].succs.push_back(static_cast<int>(tau));
        trace.steps.push_back({std::string(rule) + "-blocked", label,
                               principal + " ~> " + std::to_string(tau)});
        return;
      }
    }
    int tau = static_cast<int>(br.labels.size());
    br.labels.emplace_back();
    br.labels[label].succs.push_back(tau);
    trace.steps.push_back({rule, label, principal + " ~> " + std::to_string(tau)});
    for (const auto& sf : required) add(br, tau, sf);
  }

  std::set<SignedF> successor_requirements(const Branch& br, int label) {
    std::set<SignedF> req;
    for (const auto& b : br.labels[label].t_obs) req.insert({true, b});
    for (const auto& g : globals) req.insert({true, g});
    return req;
  }

  // Runs the branch to saturation or closure. Returns true iff closed.
  bool explore(Branch& br, ProofNode& out) {
    while (true) {
      if (br.closed) {
        out.closure = br.clash;
        return true;
      }
      if (!tick()) return true;  // budget; value is ignored
      if (br.queue.empty()) {
        // D-rule: every world with obligations needs a successor.
        bool added = false;
        for (std::size_t l = 0; l < br.labels.size(); ++l) {
          if (br.labels[l].succs.empty() && !br.labels[l].t_obs.empty()) {
            need_successor(br, static_cast<int>(l), successor_requirements(br, static_cast<int>(l)),
                           out, "seriality", "D");
            added = true;
            break;  // re-enter the main loop; labels may have grown
          }
        }
        if (added) continue;
        out.open = true;
        if (!open_model) open_model = extract(br);
        return false;
      }
      Item it = br.queue.front();
      br.queue.pop_front();
      const SignedF& sf = it.sf;
      const Formula& f = sf.f;
      switch (f.kind()) {
        case K::True:
        case K::False:
        case K::Prop:
          break;  // literals; clashes were detected on assertion
        case K::Not:
          out.steps.push_back({sf.sign ? "not-T" : "not-F", it.label, show(sf)});
          add(br, it.label, {!sf.sign, f.child(0)});
          break;
        case K::And:
          if (sf.sign) {
            out.steps.push_back({"and-T", it.label, show(sf)});
            add(br, it.label, {true, f.child(0)});
            add(br, it.label, {true, f.child(1)});
          } else {
            return branch2(br, out, it, "and-F", {{false, f.child(0)}}, {{false, f.child(1)}});
          }
          break;
        case K::Or:
          if (sf.sign) {
            return branch2(br, out, it, "or-T", {{true, f.child(0)}}, {{true, f.child(1)}});
          } else {
            out.steps.push_back({"or-F", it.label, show(sf)});
            add(br, it.label, {false, f.child(0)});
            add(br, it.label, {false, f.child(1)});
          }
          break;
        case K::Implies:
          if (sf.sign) {
            return branch2(br, out, it, "implies-T", {{false, f.child(0)}}, {{true, f.child(1)}});
          } else {
            out.steps.push_back({"implies-F", it.label, show(sf)});
            add(br, it.label, {true, f.child(0)});
            add(br, it.label, {false, f.child(1)});
          }
          break;
        case K::Iff:
          if (sf.sign)
            return branch2(br, out, it, "iff-T", {{true, f.child(0)}, {true, f.child(1)}},
                           {{false, f.child(0)}, {false, f.child(1)}});
          return branch2(br, out, it, "iff-F", {{true, f.child(0)}, {false, f.child(1)}},
                         {{false, f.child(0)}, {true, f.child(1)}});
        case K::Ob:
          if (sf.sign) {
            // propagation happened on assertion
          } else {
            std::set<SignedF> req = successor_requirements(br, it.label);
            req.insert({false, f.child(0)});
            need_successor(br, it.label, req, out, "ob-F", show(sf));
          }
          break;
        default:
          throw EvalError("operator outside SDL in tableau");
      }
    }
  }

  bool branch2(Branch& br, ProofNode& out, const Item& it, const char* rule,
               std::vector<SignedF> left, std::vector<SignedF> right) {
    out.branch = ProofStep{rule, it.label, show(it.sf)};
    bool all_closed = true;
    for (const auto& adds : {left, right}) {
      Branch copy = br;
      for (const auto& sf : adds) add(copy, it.label, sf);
      ProofNode kid;
      bool closed = explore(copy, kid);
      out.children.push_back(std::move(kid));
      if (out_of_budget) return true;
      if (!closed) {
        all_closed = false;
        break;  // canonical first open branch wins
      }
    }
    return all_closed;
  }

  FiniteModel extract(const Branch& br) {
    FiniteModel m;
    m.theory = TheoryId::Sdl;
    m.n = static_cast<int>(br.labels.size());
    if (m.n > kMaxWorlds) {
      out_of_budget = true;
      return m;
    }
    m.actual = 0;
    std::vector<WorldSet> rel(m.n, 0);
    for (int l = 0; l < m.n; ++l) {
      for (int s : br.labels[l].succs) rel[l] |= world_bit(s);
      if (rel[l] == 0) rel[l] = world_bit(l);  // seriality for idle worlds
      for (const auto& sf : br.labels[l].asserted)
        if (sf.sign && sf.f.kind() == K::Prop) m.valuation[sf.f.sym()] |= world_bit(l);
    }
    m.relations["R"] = std::move(rel);
    return m;
  }
};

nlohmann::ordered_json node_json(const ProofNode& n) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& s : n.steps)
    steps.push_back({{"rule", s.rule}, {"label", s.label}, {"formula", s.formula}});
  j["steps"] = steps;
  if (n.branch) {
    j["branch"] = {{"rule", n.branch->rule},
                   {"label", n.branch->label},
                   {"formula", n.branch->formula}};
    nlohmann::ordered_json kids = nlohmann::ordered_json::array();
    for (const auto& k : n.children) kids.push_back(node_json(k));
    j["children"] = kids;
  }
  if (n.closure)
    j["closed"] = {{"rule", n.closure->rule},
                   {"label", n.closure->label},
                   {"formula", n.closure->formula}};
  if (n.open) j["open"] = true;
  return j;
}

std::uint64_t count_steps(const ProofNode& n) {
  std::uint64_t c = n.steps.size() + (n.branch ? 1 : 0) + (n.closure ? 1 : 0);
  for (const auto& k : n.children) c += count_steps(k);
  return c;
}

}  // namespace

std::string ProofObject::to_json() const { return node_json(root).dump(); }

TableauResult prove_sdl(const Problem& p, const Formula& goal, std::uint64_t node_limit) {
  if (p.signature.theory != TheoryId::Sdl)
    throw EvalError("prove_sdl requires an sdl problem");
  Tableau tb;
  tb.node_limit = node_limit;
  for (const auto& g : p.globals) tb.globals.push_back(desugar(g.formula));

  Branch root;
  root.labels.emplace_back();
  ProofNode trace;
  for (const auto& g : tb.globals) tb.add(root, 0, {true, g});
  for (const auto& l : p.locals) tb.add(root, 0, {true, desugar(l.formula)});
  tb.add(root, 0, {false, desugar(goal)});

  bool closed = tb.explore(root, trace);
  TableauResult out;
  out.nodes = tb.nodes;
  if (tb.out_of_budget) {
    out.kind = TableauResult::Kind::ResourceLimit;
    return out;
  }
  if (closed) {
    out.kind = TableauResult::Kind::Proof;
    ProofObject po;
    po.steps = count_steps(trace);
    po.root = std::move(trace);
    out.proof = std::move(po);
  } else {
    out.kind = TableauResult::Kind::Refuted;
    out.model = tb.open_model;
  }
  return out;
}

}  // namespace deon
