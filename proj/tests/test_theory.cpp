#include <doctest.h>

#include <functional>

#include "deon/eval.hpp"
#include "deon/theory.hpp"
#include "gen.hpp"

using namespace deon;

TEST_CASE("sdl catalog entry") {
  const TheorySpec& t = builtin_theory(TheoryId::Sdl);
  REQUIRE(t.relations.size() == 1);
  CHECK(t.relations[0].id.name == "R");
  REQUIRE(t.conditions.size() == 1);
  CHECK(t.conditions[0].kind == ConditionKind::Serial);
  CHECK(t.allows(Formula::Kind::Ob));
  CHECK(t.allows(Formula::Kind::Perm));
  CHECK(t.allows(Formula::Kind::Forb));
  CHECK(!t.allows(Formula::Kind::CondOb));
  CHECK(!t.allows(Formula::Kind::Box));
}

TEST_CASE("xddl1 catalog entry: three tags under full cj conditions plus stit") {
  const TheorySpec& t = builtin_theory(TheoryId::Xddl1);
  CHECK(t.tags == std::vector<AgentTag>{AgentTag::def(), AgentTag::agent("d"),
                                        AgentTag::agent("b")});
  CHECK(t.has_stit);
  int per_tag = 0, stit = 0;
  for (const auto& c : t.conditions) {
    if (c.kind == ConditionKind::StitSuccess) ++stit;
    if (c.scope == "d") ++per_tag;
  }
  CHECK(per_tag == 8);  // av-serial, av-sub-pv, pv-reflexive, ob1..ob5
  CHECK(stit == 1);
  CHECK(t.allows(Formula::Kind::AgentOb));
  CHECK(t.allows(Formula::Kind::Stit));
}

TEST_CASE("tds catalog entry") {
  const TheorySpec& t = builtin_theory(TheoryId::Tds);
  CHECK(t.builtin_agents == std::vector<AgentId>{{"a1"}, {"a2"}});
  CHECK(t.find_relation("rg") != nullptr);
  CHECK(t.find_relation("rh") != nullptr);
  CHECK(!t.find_relation("rh")->stored);
  CHECK(t.find_relation("rh")->converse_of == "rg");
  CHECK(t.allows(Formula::Kind::BoxRel));
  CHECK(!t.allows(Formula::Kind::Ob));
}

TEST_CASE("the same id always returns an identical spec") {
  const TheorySpec& a = builtin_theory(TheoryId::Cjddl);
  const TheorySpec& b = builtin_theory(TheoryId::Cjddl);
  CHECK(&a == &b);
}

TEST_CASE("declared agents extend the xddl tag list") {
  Signature s;
  s.theory = TheoryId::Xddl1;
  s.agents = {{"importer"}};
  TheorySpec t = theory_for(s);
  CHECK(t.has_tag(AgentTag::agent("importer")));
  int importer_conditions = 0;
  for (const auto& c : t.conditions)
    if (c.scope == "importer") ++importer_conditions;
  CHECK(importer_conditions == 8);
}

TEST_CASE("condition_holds examples") {
  FiniteModel m;
  m.theory = TheoryId::Sdl;
  m.n = 1;
  m.relations["R"] = {world_bit(0)};
  CHECK(condition_holds(m, {ConditionKind::Serial, "R"}));

  FiniteModel t;
  t.theory = TheoryId::Tds;
  t.n = 3;
  t.relations["rg"] = {world_bit(1), world_bit(2), 0};
  CHECK(!condition_holds(t, {ConditionKind::Transitive, "rg"}));  // (0,2) missing
  t.relations["rg"] = {world_bit(0), 0, 0};
  CHECK(!condition_holds(t, {ConditionKind::Irreflexive, "rg"}));

  FiniteModel missing;
  missing.theory = TheoryId::Sdl;
  missing.n = 1;
  CHECK_THROWS_AS(condition_holds(missing, {ConditionKind::Serial, "R"}), EvalError);
}

TEST_CASE("check_frame agrees with condition_holds") {
  test::Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    FiniteModel m = test::gen_xddl1_model(rng, test::pick(rng, 1, 3));
    const TheorySpec& t = builtin_theory(TheoryId::Xddl1);
    bool all_hold = true;
    for (const auto& c : t.conditions)
      if (!condition_holds(m, c)) all_hold = false;
    CHECK(all_hold == check_frame(m, t).empty());
  }
}

TEST_CASE("no finite serial transitive irreflexive relation exists") {
  // brute force over every relation at n = 1..3
  for (int n = 1; n <= 3; ++n) {
    const WorldSet all = full_set(n);
    FiniteModel m;
    m.theory = TheoryId::Tds;
    m.n = n;
    bool found = false;
    std::vector<WorldSet> rows(n, 0);
    std::function<void(int)> go = [&](int w) {
      if (found) return;
      if (w == n) {
        m.relations["rg"] = rows;
        if (condition_holds(m, {ConditionKind::Serial, "rg"}) &&
            condition_holds(m, {ConditionKind::Transitive, "rg"}) &&
            condition_holds(m, {ConditionKind::Irreflexive, "rg"}))
          found = true;
        return;
      }
      for (WorldSet r = 0; r <= all; ++r) {
        rows[w] = r;
        go(w + 1);
      }
    };
    go(0);
    CHECK(!found);
  }
}

TEST_CASE("default relations") {
  const TheorySpec& sdl = builtin_theory(TheoryId::Sdl);
  auto def = default_relation(sdl, "R", 2);
  REQUIRE(def.has_value());
  CHECK((*def)[0] != 0);  // serial
  const TheorySpec& tds = builtin_theory(TheoryId::Tds);
  CHECK(default_relation(tds, "choice_a1", 2).has_value());
  CHECK(!default_relation(tds, "rg", 2).has_value());
}
