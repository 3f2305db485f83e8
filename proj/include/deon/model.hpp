#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "deon/formula.hpp"

namespace deon {

// Worlds are 0..n-1, sets of worlds are bitmasks. n is capped at 64.
using WorldSet = std::uint64_t;

constexpr int kMaxWorlds = 64;

inline WorldSet world_bit(int w) { return WorldSet{1} << w; }
inline bool world_in(WorldSet s, int w) { return (s >> w) & 1; }
inline WorldSet full_set(int n) {
  return n >= kMaxWorlds ? ~WorldSet{0} : (WorldSet{1} << n) - 1;
}
std::vector<int> set_to_worlds(WorldSet s);

// Default carries the non-agentive DDL structure; named tags carry the
// per-agent structure of the XDDL theories.
struct AgentTag {
  std::string name;  // "" = default
  static AgentTag def() { return AgentTag{}; }
  static AgentTag agent(std::string a) { return AgentTag{std::move(a)}; }
  bool is_default() const { return name.empty(); }
  std::string display() const { return is_default() ? "default" : name; }
  auto operator<=>(const AgentTag&) const = default;
};

// ob in core form: for context X only cores C with C ⊆ X are stored;
// Y ∈ ob(X) iff Y∩X is a stored core. Contexts with no cores are absent.
using ObMap = std::map<WorldSet, std::set<WorldSet>>;

struct FiniteModel {
  TheoryId theory = TheoryId::Sdl;
  int n = 1;
  int actual = 0;
  std::map<std::string, WorldSet> valuation;               // atom -> worlds (absent = empty)
  std::map<std::string, std::vector<WorldSet>> relations;  // rel -> successors per world
  std::map<AgentTag, std::vector<WorldSet>> av;            // per world, nonempty
  std::map<AgentTag, std::vector<WorldSet>> pv;
  std::map<AgentTag, ObMap> ob;
  // (agent, proposition) -> chosen subset. Pairs not present default to the
  // identity choice (the full proposition), which satisfies success.
  std::map<std::pair<std::string, WorldSet>, WorldSet> stit;

  WorldSet all() const { return full_set(n); }
  WorldSet atom_ext(const std::string& name) const {
    auto it = valuation.find(name);
    return it == valuation.end() ? 0 : it->second;
  }
  WorldSet stit_choice(const std::string& agent, WorldSet prop) const {
    auto it = stit.find({agent, prop});
    return it == stit.end() ? prop : it->second;
  }
};

}  // namespace deon
