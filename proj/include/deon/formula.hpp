#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace deon {

// Identifier wrappers. Atom names match [a-z][a-z0-9_]* and are disjoint
// from agent names within a signature.
struct Atom {
  std::string name;
  auto operator<=>(const Atom&) const = default;
};

struct AgentId {
  std::string name;
  auto operator<=>(const AgentId&) const = default;
};

struct RelId {
  std::string name;
  auto operator<=>(const RelId&) const = default;
};

enum class TheoryId { Sdl, Cjddl, Xddl1, Xddl2, Tds };

std::string to_string(TheoryId id);
std::optional<TheoryId> theory_from_string(std::string_view s);

// Immutable multi-modal propositional formula. Shared subtrees are fine;
// equality and ordering are structural.
class Formula {
 public:
  enum class Kind : std::uint8_t {
    True,
    False,
    Prop,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Box,      // global modality: f at every world
    Dia,
    BoxRel,   // sym = relation name
    BoxAv,
    BoxPv,
    Ob,
    Perm,
    Forb,
    CondOb,   // child0 = body, child1 = context; sym = agent tag ("" = default)
    ActualOb,
    PrimaryOb,
    AgentOb,  // sym = agent
    Stit,     // sym = agent
  };

  Formula() : Formula(truth()) {}

  static Formula truth();
  static Formula falsity();
  static Formula prop(std::string atom);
  static Formula neg(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula box(Formula f);
  static Formula dia(Formula f);
  static Formula box_rel(std::string rel, Formula f);
  static Formula box_av(Formula f);
  static Formula box_pv(Formula f);
  static Formula ob(Formula f);
  static Formula perm(Formula f);
  static Formula forb(Formula f);
  static Formula cond_ob(Formula body, Formula context);
  static Formula cond_ob(std::string agent, Formula body, Formula context);
  static Formula actual_ob(Formula f);
  static Formula primary_ob(Formula f);
  static Formula agent_ob(std::string agent, Formula f);
  static Formula stit(std::string agent, Formula f);

  Kind kind() const { return node_->kind; }
  // Prop: atom name; BoxRel: relation; AgentOb/Stit: agent;
  // CondOb: agent tag, empty for the default tag. Empty otherwise.
  const std::string& sym() const { return node_->sym; }
  std::size_t arity() const { return node_->kids.size(); }
  const Formula& child(std::size_t i) const { return node_->kids[i]; }
  std::size_t hash() const { return node_->hash; }
  std::size_t node_count() const;

  bool operator==(const Formula& o) const;
  std::strong_ordering operator<=>(const Formula& o) const;

 private:
  struct Node {
    Kind kind;
    std::string sym;
    std::vector<Formula> kids;
    std::size_t hash;
  };
  static Formula make(Kind k, std::string sym, std::vector<Formula> kids);
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Atoms, agents and theory for one problem. Atoms and agents are kept in
// declaration order (the finder depends on it).
struct Signature {
  TheoryId theory = TheoryId::Sdl;
  std::vector<Atom> atoms;
  std::vector<AgentId> agents;

  bool has_atom(std::string_view name) const;
  bool has_agent(std::string_view name) const;
  int atom_index(std::string_view name) const;  // -1 if absent
};

enum class WfErrorKind { UndeclaredSymbol, OperatorNotInTheory };

// Path addresses components from the root: per node, symbol slots come
// first, then children. E.g. Stit(d, p): agent d is [0], body p is [1].
struct WfError {
  WfErrorKind kind;
  std::vector<int> path;
  std::string message;
};

// Empty result means well formed w.r.t. declarations and the theory's
// operator set.
std::vector<WfError> well_formed(const Formula& f, const Signature& sig);
bool is_well_formed(const Formula& f, const Signature& sig);

std::set<Atom> free_atoms(const Formula& f);

// Every subformula exactly once, children before parents.
std::vector<Formula> subformula_closure(const Formula& f);

enum class QueryKind { Consistent, Entails };

struct Query {
  std::string label;
  QueryKind kind = QueryKind::Consistent;
  std::optional<Formula> goal;          // set iff kind == Entails
  std::optional<std::string> expected;  // expect tag from the corpus file
};

struct LabeledFormula {
  std::string label;
  Formula formula;
};

// Globals hold at every world, locals at the designated actual world.
struct Problem {
  Signature signature;
  std::vector<LabeledFormula> globals;
  std::vector<LabeledFormula> locals;
  std::vector<Query> queries;

  const Query* find_query(std::string_view label) const;
};

}  // namespace deon
