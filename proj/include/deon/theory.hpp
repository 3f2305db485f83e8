#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "deon/formula.hpp"
#include "deon/model.hpp"

namespace deon {

// Relations of a theory. A derived relation is evaluated as the converse of
// its base and is never stored in a model.
struct RelationDecl {
  RelId id;
  bool stored = true;
  std::string converse_of;  // set when !stored
};

enum class ConditionKind {
  Serial,        // scope: relation
  Reflexive,     // scope: relation
  Symmetric,     // scope: relation
  Transitive,    // scope: relation
  Irreflexive,   // scope: relation
  AvSerial,      // scope: tag;  av(w) nonempty
  AvSubPv,       // scope: tag;  av(w) ⊆ pv(w)
  PvReflexive,   // scope: tag;  w ∈ pv(w)
  Ob1,           // scope: tag;  ∅ is never a core
  Ob2Rep,        // scope: tag;  every core is a subset of its context
  Ob3Fin,        // scope: tag;  cores closed under nonempty intersection
  Ob4,           // scope: tag;  cores propagate to supercontexts
  Ob5,           // scope: tag;  cores restrict to subcontexts they meet
  StitSuccess,   // scope: -;    every stored choice is inside its proposition
};

struct FrameCondition {
  ConditionKind kind;
  std::string scope;  // relation name or agent tag display; empty for stit
  std::string name() const;
};

struct Violation {
  std::string condition;
  std::string detail;
};

struct TheorySpec {
  TheoryId id = TheoryId::Sdl;
  std::set<Formula::Kind> operators;
  std::vector<RelationDecl> relations;
  std::vector<AgentTag> tags;            // av/pv/ob families
  std::vector<AgentId> builtin_agents;   // agents the theory itself provides
  std::vector<FrameCondition> conditions;
  bool has_stit = false;
  // Open-question toggle: when true, ActualOb/PrimaryOb additionally require
  // av(w)/pv(w) ⊄ ext(f). Off by default.
  bool actual_ob_requires_violation = false;

  bool allows(Formula::Kind k) const { return operators.count(k) != 0; }
  bool has_tag(const AgentTag& t) const;
  const RelationDecl* find_relation(const std::string& name) const;
};

// Frozen catalog entry; the same id always yields an identical spec.
const TheorySpec& builtin_theory(TheoryId id);

bool theory_allows_operator(TheoryId theory, Formula::Kind kind);
bool theory_has_relation(TheoryId theory, const std::string& rel);
bool theory_has_builtin_agent(TheoryId theory, const std::string& agent);

// builtin_theory extended with the signature's declared agents as extra
// tags (xddl1/xddl2 only; other theories return the builtin spec).
TheorySpec theory_for(const Signature& sig);

// Probe for a single condition. Throws EvalError if the condition's
// structure is missing from the model.
bool condition_holds(const FiniteModel& m, const FrameCondition& c);

// Empty result iff every condition of the theory holds.
std::vector<Violation> check_frame(const FiniteModel& m, const TheorySpec& t);

// Smallest per-structure assignments that satisfy the corresponding
// conditions; used for structures no formula mentions. No default exists
// for the TDS future relation (its condition set has no finite model).
std::optional<std::vector<WorldSet>> default_relation(const TheorySpec& t, const std::string& rel,
                                                      int n);

}  // namespace deon
