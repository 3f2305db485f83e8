#include "deon/formula.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

namespace deon {

std::string to_string(TheoryId id) {
  switch (id) {
    case TheoryId::Sdl: return "sdl";
    case TheoryId::Cjddl: return "cjddl";
    case TheoryId::Xddl1: return "xddl1";
    case TheoryId::Xddl2: return "xddl2";
    case TheoryId::Tds: return "tds";
  }
  return "?";
}

std::optional<TheoryId> theory_from_string(std::string_view s) {
  if (s == "sdl") return TheoryId::Sdl;
  if (s == "cjddl") return TheoryId::Cjddl;
  if (s == "xddl1") return TheoryId::Xddl1;
  if (s == "xddl2") return TheoryId::Xddl2;
  if (s == "tds") return TheoryId::Tds;
  return std::nullopt;
}

namespace {
std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}
}  // namespace

Formula Formula::make(Kind k, std::string sym, std::vector<Formula> kids) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->sym = std::move(sym);
  n->kids = std::move(kids);
  std::size_t h = static_cast<std::size_t>(k) * 0x100000001b3ull;
  h = mix(h, std::hash<std::string>{}(n->sym));
  for (const auto& c : n->kids) h = mix(h, c.hash());
  n->hash = h;
  return Formula(std::move(n));
}

Formula Formula::truth() {
  static const Formula f = make(Kind::True, "", {});
  return f;
}
Formula Formula::falsity() {
  static const Formula f = make(Kind::False, "", {});
  return f;
}
Formula Formula::prop(std::string atom) { return make(Kind::Prop, std::move(atom), {}); }
Formula Formula::neg(Formula f) { return make(Kind::Not, "", {std::move(f)}); }
Formula Formula::conj(Formula a, Formula b) { return make(Kind::And, "", {std::move(a), std::move(b)}); }
Formula Formula::disj(Formula a, Formula b) { return make(Kind::Or, "", {std::move(a), std::move(b)}); }
Formula Formula::implies(Formula a, Formula b) { return make(Kind::Implies, "", {std::move(a), std::move(b)}); }
Formula Formula::iff(Formula a, Formula b) { return make(Kind::Iff, "", {std::move(a), std::move(b)}); }
Formula Formula::box(Formula f) { return make(Kind::Box, "", {std::move(f)}); }
Formula Formula::dia(Formula f) { return make(Kind::Dia, "", {std::move(f)}); }
Formula Formula::box_rel(std::string rel, Formula f) { return make(Kind::BoxRel, std::move(rel), {std::move(f)}); }
Formula Formula::box_av(Formula f) { return make(Kind::BoxAv, "", {std::move(f)}); }
Formula Formula::box_pv(Formula f) { return make(Kind::BoxPv, "", {std::move(f)}); }
Formula Formula::ob(Formula f) { return make(Kind::Ob, "", {std::move(f)}); }
Formula Formula::perm(Formula f) { return make(Kind::Perm, "", {std::move(f)}); }
Formula Formula::forb(Formula f) { return make(Kind::Forb, "", {std::move(f)}); }
Formula Formula::cond_ob(Formula body, Formula context) {
  return make(Kind::CondOb, "", {std::move(body), std::move(context)});
}
Formula Formula::cond_ob(std::string agent, Formula body, Formula context) {
  return make(Kind::CondOb, std::move(agent), {std::move(body), std::move(context)});
}
Formula Formula::actual_ob(Formula f) { return make(Kind::ActualOb, "", {std::move(f)}); }
Formula Formula::primary_ob(Formula f) { return make(Kind::PrimaryOb, "", {std::move(f)}); }
Formula Formula::agent_ob(std::string agent, Formula f) {
  return make(Kind::AgentOb, std::move(agent), {std::move(f)});
}
Formula Formula::stit(std::string agent, Formula f) {
  return make(Kind::Stit, std::move(agent), {std::move(f)});
}

std::size_t Formula::node_count() const {
  std::size_t n = 1;
  for (const auto& c : node_->kids) n += c.node_count();
  return n;
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (node_->hash != o.node_->hash || node_->kind != o.node_->kind ||
      node_->sym != o.node_->sym || node_->kids.size() != o.node_->kids.size())
    return false;
  for (std::size_t i = 0; i < node_->kids.size(); ++i)
    if (!(node_->kids[i] == o.node_->kids[i])) return false;
  return true;
}

std::strong_ordering Formula::operator<=>(const Formula& o) const {
  if (node_ == o.node_) return std::strong_ordering::equal;
  if (auto c = node_->kind <=> o.node_->kind; c != 0) return c;
  if (auto c = node_->sym <=> o.node_->sym; c != 0) return c;
  if (auto c = node_->kids.size() <=> o.node_->kids.size(); c != 0) return c;
  for (std::size_t i = 0; i < node_->kids.size(); ++i)
    if (auto c = node_->kids[i] <=> o.node_->kids[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

bool Signature::has_atom(std::string_view name) const {
  return std::any_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return a.name == name; });
}
bool Signature::has_agent(std::string_view name) const {
  return std::any_of(agents.begin(), agents.end(), [&](const AgentId& a) { return a.name == name; });
}
int Signature::atom_index(std::string_view name) const {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i].name == name) return static_cast<int>(i);
  return -1;
}

// Implemented in theory.cpp; declared locally to keep formula.hpp free of
// the theory header.
bool theory_allows_operator(TheoryId theory, Formula::Kind kind);
bool theory_has_relation(TheoryId theory, const std::string& rel);
bool theory_has_builtin_agent(TheoryId theory, const std::string& agent);

namespace {

void check_wf(const Formula& f, const Signature& sig, std::vector<int>& path,
              std::vector<WfError>& out) {
  using K = Formula::Kind;
  if (!theory_allows_operator(sig.theory, f.kind())) {
    out.push_back({WfErrorKind::OperatorNotInTheory, path,
                   "operator not in theory " + to_string(sig.theory)});
  }
  int sym_slots = 0;
  switch (f.kind()) {
    case K::Prop:
      sym_slots = 1;
      if (!sig.has_atom(f.sym())) {
        path.push_back(0);
        out.push_back({WfErrorKind::UndeclaredSymbol, path, "undeclared atom '" + f.sym() + "'"});
        path.pop_back();
      }
      break;
    case K::BoxRel:
      sym_slots = 1;
      if (!theory_has_relation(sig.theory, f.sym())) {
        path.push_back(0);
        out.push_back(
            {WfErrorKind::UndeclaredSymbol, path, "undeclared relation '" + f.sym() + "'"});
        path.pop_back();
      }
      break;
    case K::AgentOb:
    case K::Stit:
      sym_slots = 1;
      if (!sig.has_agent(f.sym()) && !theory_has_builtin_agent(sig.theory, f.sym())) {
        path.push_back(0);
        out.push_back({WfErrorKind::UndeclaredSymbol, path, "undeclared agent '" + f.sym() + "'"});
        path.pop_back();
      }
      break;
    case K::CondOb:
      if (!f.sym().empty()) {
        sym_slots = 1;
        if (sig.theory != TheoryId::Xddl1 && sig.theory != TheoryId::Xddl2)
          out.push_back({WfErrorKind::OperatorNotInTheory, path,
                         "agent-tagged conditional obligation is not in theory " +
                             to_string(sig.theory)});
        if (!sig.has_agent(f.sym()) && !theory_has_builtin_agent(sig.theory, f.sym())) {
          path.push_back(0);
          out.push_back(
              {WfErrorKind::UndeclaredSymbol, path, "undeclared agent '" + f.sym() + "'"});
          path.pop_back();
        }
      }
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) {
    path.push_back(sym_slots + static_cast<int>(i));
    check_wf(f.child(i), sig, path, out);
    path.pop_back();
  }
}

}  // namespace

std::vector<WfError> well_formed(const Formula& f, const Signature& sig) {
  std::vector<WfError> out;
  std::vector<int> path;
  check_wf(f, sig, path, out);
  return out;
}

bool is_well_formed(const Formula& f, const Signature& sig) {
  return well_formed(f, sig).empty();
}

std::set<Atom> free_atoms(const Formula& f) {
  std::set<Atom> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Prop) out.insert(Atom{g.sym()});
    for (std::size_t i = 0; i < g.arity(); ++i) go(g.child(i));
  };
  go(f);
  return out;
}

std::vector<Formula> subformula_closure(const Formula& f) {
  std::vector<Formula> out;
  std::unordered_set<Formula, FormulaHash> seen;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (seen.count(g)) return;
    for (std::size_t i = 0; i < g.arity(); ++i) go(g.child(i));
    if (seen.insert(g).second) out.push_back(g);
  };
  go(f);
  return out;
}

const Query* Problem::find_query(std::string_view label) const {
  for (const auto& q : queries)
    if (q.label == label) return &q;
  return nullptr;
}

}  // namespace deon
