#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "deon/eval.hpp"
#include "deon/formula.hpp"
#include "deon/model.hpp"
#include "deon/theory.hpp"

namespace deon {

struct SearchBudget {
  int max_worlds = 2;
  std::optional<std::uint64_t> node_limit;
  // Accepted for the contract's sake; the search is single-threaded and
  // deterministic either way.
  bool deterministic = true;

  static SearchBudget for_theory(TheoryId id) {
    SearchBudget b;
    b.max_worlds = (id == TheoryId::Sdl || id == TheoryId::Tds) ? 3 : 2;
    return b;
  }
};

struct Verdict {
  enum class Kind { ModelFound, NoModelUpTo, Countermodel, BoundedValid };
  Kind kind = Kind::NoModelUpTo;
  std::optional<FiniteModel> model;     // ModelFound / Countermodel
  int bound = 0;                        // model size, or the explored bound
  bool exhaustive = true;               // false iff the node limit was hit
  std::optional<Formula> refuted_goal;  // Countermodel only

  // Expectation tag for suites: model / no_model / valid / countermodel.
  const char* kind_tag() const;
};

// Iterative deepening n = 1..max_worlds over canonical-form models (world 0
// is the actual world, non-actual worlds ordered by valuation bit-vector).
// Returns the first model found, else NoModelUpTo; exhaustive is false only
// when the node limit was hit.
Verdict find_model(const Problem& p, const SearchBudget& b);

// Searches for a model of p with ¬goal at the actual world.
Verdict check_entailment(const Problem& p, const Formula& goal, const SearchBudget& b);

// All canonical-form models at exactly n worlds, up to limit. Unlike
// find_model this enumerates every structure the theory declares, including
// ones the problem never mentions.
std::vector<FiniteModel> enumerate_models(const Problem& p, int n, std::size_t limit);

// Re-checks any carried model: frame conditions, problem satisfaction, and
// goal refutation for countermodels.
bool verify(const Verdict& v, const Problem& p);

}  // namespace deon
