#include <doctest.h>

#include <nlohmann/json.hpp>

#include "deon/syntax.hpp"
#include "deon/theory.hpp"
#include "gen.hpp"

using namespace deon;

namespace {

Signature cj_sig() {
  Signature s;
  s.theory = TheoryId::Cjddl;
  s.atoms = {{"take_action"}, {"comply"}, {"p"}, {"q"}, {"r"}};
  return s;
}

Signature sdl_sig() {
  Signature s;
  s.theory = TheoryId::Sdl;
  s.atoms = {{"p"}, {"q"}, {"r"}};
  return s;
}

}  // namespace

TEST_CASE("parse conditional obligation") {
  auto fp = parse_formula("O{take_action | ~comply}", cj_sig());
  REQUIRE(fp.ok());
  CHECK(*fp.formula ==
        Formula::cond_ob(Formula::prop("take_action"), Formula::neg(Formula::prop("comply"))));
}

TEST_CASE("precedence: ~ binds tighter than &, & than |, | than ->") {
  auto fp = parse_formula("~p & q -> Fb r", sdl_sig());
  REQUIRE(fp.ok());
  Formula expect = Formula::implies(
      Formula::conj(Formula::neg(Formula::prop("p")), Formula::prop("q")),
      Formula::forb(Formula::prop("r")));
  CHECK(*fp.formula == expect);
}

TEST_CASE("truncated input gives a positioned diagnostic") {
  auto fp = parse_formula("O{p |", cj_sig());
  REQUIRE(!fp.ok());
  CHECK(fp.error->pos.line == 1);
  CHECK(fp.error->pos.col == 6);  // one past the end, where a formula was expected
  bool mentions_formula = false;
  for (const auto& e : fp.error->expected)
    if (e == "formula") mentions_formula = true;
  CHECK(mentions_formula);
}

TEST_CASE("operator misuse is caught at parse time") {
  auto fp = parse_formula("O{p | q}", sdl_sig());
  REQUIRE(!fp.ok());
  CHECK(fp.error->message.find("not in theory") != std::string::npos);
}

TEST_CASE("printing matches the frozen forms") {
  Formula p = Formula::prop("p"), q = Formula::prop("q"), r = Formula::prop("r");
  CHECK(print_formula(Formula::cond_ob(p, q)) == "O{p | q}");
  CHECK(print_formula(Formula::implies(Formula::conj(p, q), r)) == "p & q -> r");
  CHECK(print_formula(Formula::conj(p, Formula::disj(q, r))) == "p & (q | r)");
  CHECK(print_formula(Formula::cond_ob(Formula::disj(p, q), r)) == "O{(p | q) | r}");
  CHECK(print_formula(Formula::stit("d", Formula::implies(p, q))) == "stit(d, p -> q)");
}

TEST_CASE("diamond-av sugar desugars to the boxed form") {
  auto fp = parse_formula("<av> p", cj_sig());
  REQUIRE(fp.ok());
  CHECK(*fp.formula == Formula::neg(Formula::box_av(Formula::neg(Formula::prop("p")))));
}

TEST_CASE("round-trip over random formulas") {
  test::Rng rng(1234);
  const TheoryId theories[] = {TheoryId::Sdl, TheoryId::Cjddl, TheoryId::Xddl1, TheoryId::Xddl2,
                               TheoryId::Tds};
  for (int i = 0; i < 1000; ++i) {
    Signature s = test::sig_for(theories[i % 5], 3);
    Formula f = test::gen_formula(rng, s, 4);
    std::string printed = print_formula(f);
    auto fp = parse_formula(printed, s);
    REQUIRE_MESSAGE(fp.ok(), printed, " -> ", fp.error->render());
    CHECK_MESSAGE(*fp.formula == f, "round-trip mismatch on ", printed);
  }
}

TEST_CASE("parser totality over fuzzed input") {
  test::Rng rng(99);
  Signature s = cj_sig();
  const char alphabet[] = "abpqr O{}()[]<>|&~->v:#\n\t_123,";
  for (int i = 0; i < 2000; ++i) {
    int len = test::pick(rng, 0, 40);
    std::string text;
    for (int j = 0; j < len; ++j) {
      if (test::pick(rng, 0, 8) == 0)
        text += static_cast<char>(test::pick(rng, 1, 255));
      else
        text += alphabet[test::pick(rng, 0, sizeof(alphabet) - 2)];
    }
    auto fp = parse_formula(text, s);
    if (!fp.ok()) {
      // position indexes a character or the end-of-input sentinel
      CHECK(fp.error->pos.line >= 1);
      CHECK(fp.error->pos.col >= 1);
    }
    parse_problem(text);  // must not crash either
  }
}

TEST_CASE("parse_problem on a minimal file") {
  auto pp = parse_problem("theory sdl\natom p\nglobal A1: O p\nquery Q1: consistent\n");
  REQUIRE(pp.ok());
  const Problem& p = *pp.problem;
  CHECK(p.signature.theory == TheoryId::Sdl);
  CHECK(p.globals.size() == 1);
  CHECK(p.locals.empty());
  REQUIRE(p.queries.size() == 1);
  CHECK(p.queries[0].kind == QueryKind::Consistent);
  CHECK(p.globals[0].formula == Formula::ob(Formula::prop("p")));
}

TEST_CASE("parse_problem rejects operators outside the theory") {
  auto pp = parse_problem("theory sdl\natom p\natom q\nglobal A1: O{p | q}\n");
  REQUIRE(!pp.ok());
  REQUIRE(pp.diagnostics.size() == 1);
  CHECK(pp.diagnostics[0].message.find("not in theory") != std::string::npos);
}

TEST_CASE("parse_problem collects several diagnostics") {
  auto pp = parse_problem(
      "theory sdl\natom p\nglobal A1: O p\nglobal A1: O p\nlocal L1: undeclared_atom\n");
  REQUIRE(!pp.ok());
  CHECK(pp.diagnostics.size() == 2);  // duplicate label + undeclared atom
}

TEST_CASE("declarations after sections are rejected") {
  auto pp = parse_problem("theory sdl\nglobal A1: true\natom p\n");
  REQUIRE(!pp.ok());
  CHECK(pp.diagnostics[0].message.find("precede") != std::string::npos);
}

TEST_CASE("expect tags must fit the query kind") {
  auto pp = parse_problem("theory sdl\natom p\nquery Q1: consistent expect valid\n");
  REQUIRE(!pp.ok());
}

TEST_CASE("print_problem round-trips") {
  auto pp = parse_problem(
      "theory cjddl\natom p\natom q\nglobal D1: O{p | true}\nlocal F1: ~p\n"
      "query C1: consistent expect model\nquery E1: entails Oa p expect valid\n");
  REQUIRE(pp.ok());
  auto pp2 = parse_problem(print_problem(*pp.problem));
  REQUIRE(pp2.ok());
  CHECK(print_problem(*pp2.problem) == print_problem(*pp.problem));
}

TEST_CASE("model json: one world, nothing true") {
  FiniteModel m;
  m.theory = TheoryId::Sdl;
  m.n = 1;
  m.relations["R"] = {world_bit(0)};
  auto j = nlohmann::json::parse(print_model(m, ModelFormat::Json));
  CHECK(j["worlds"] == 1);
  CHECK(j["actual"] == 0);
  CHECK(j["valuation"].empty());
  CHECK(j["relations"]["R"].size() == 1);
}

TEST_CASE("model json: relation pair serialization") {
  FiniteModel m;
  m.theory = TheoryId::Sdl;
  m.n = 2;
  m.relations["R"] = {world_bit(1), world_bit(1)};
  m.valuation["p"] = world_bit(1);
  auto j = nlohmann::json::parse(print_model(m, ModelFormat::Json));
  CHECK(j["relations"]["R"] == nlohmann::json::parse("[[0,1],[1,1]]"));
  CHECK(j["valuation"]["p"] == nlohmann::json::parse("[1]"));
}

TEST_CASE("model json parses back") {
  FiniteModel m;
  m.theory = TheoryId::Cjddl;
  m.n = 2;
  m.valuation["p"] = world_bit(0);
  m.av[AgentTag::def()] = {world_bit(0), full_set(2)};
  m.pv[AgentTag::def()] = {world_bit(0), full_set(2)};
  m.ob[AgentTag::def()] = {{full_set(2), {world_bit(0), full_set(2)}}};
  m.stit[{"d", full_set(2)}] = world_bit(1);
  std::string js = print_model(m, ModelFormat::Json);
  FiniteModel back = parse_model_json(js, TheoryId::Cjddl);
  CHECK(print_model(back, ModelFormat::Json) == js);
}
