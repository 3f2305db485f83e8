#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deon/formula.hpp"
#include "deon/model.hpp"

namespace deon {

// One rule application: rule name, world label, principal formula (printed,
// signed). Steps inside a ProofNode are sequential; children appear where a
// rule splits the branch.
struct ProofStep {
  std::string rule;
  int label = 0;
  std::string formula;
};

struct ProofNode {
  std::vector<ProofStep> steps;
  std::optional<ProofStep> branch;     // the splitting application, if any
  std::vector<ProofNode> children;     // one per alternative
  std::optional<ProofStep> closure;    // clash that closed this branch
  bool open = false;                   // saturated open branch (refutation)
};

struct ProofObject {
  ProofNode root;
  std::uint64_t steps = 0;

  std::string to_json() const;
};

struct TableauResult {
  enum class Kind { Proof, Refuted, ResourceLimit };
  Kind kind = Kind::ResourceLimit;
  std::optional<ProofObject> proof;   // Proof
  std::optional<FiniteModel> model;   // Refuted; extracted from the first
                                      // saturated open branch
  std::uint64_t nodes = 0;
};

// Labelled KD tableau with global assumptions and anywhere subset-blocking.
// Proof iff the goal holds at the actual world of every serial Kripke model
// where all globals hold everywhere and all locals hold at the actual world.
// Requires p.signature.theory == Sdl.
TableauResult prove_sdl(const Problem& p, const Formula& goal,
                        std::uint64_t node_limit = 200000);

}  // namespace deon
