#include <doctest.h>

#include "deon/eval.hpp"
#include "deon/finder.hpp"
#include "deon/syntax.hpp"
#include "deon/tableau.hpp"
#include "gen.hpp"

using namespace deon;

namespace {

Problem sdl_problem(const std::string& text) {
  auto pp = parse_problem(text);
  REQUIRE(pp.ok());
  return *pp.problem;
}

bool refuted_model_ok(const Problem& p, const Formula& goal, const TableauResult& tr) {
  if (!tr.model) return false;
  const FiniteModel& m = *tr.model;
  if (!check_frame(m, builtin_theory(TheoryId::Sdl)).empty()) return false;
  if (!verify_problem(m, p)) return false;
  return !eval(m, m.actual, goal);
}

}  // namespace

TEST_CASE("immediate clash proves a local fact") {
  Problem p = sdl_problem("theory sdl\natom p\nlocal F1: p\n");
  TableauResult tr = prove_sdl(p, Formula::prop("p"));
  CHECK(tr.kind == TableauResult::Kind::Proof);
}

TEST_CASE("the D axiom is provable") {
  Problem p = sdl_problem("theory sdl\natom p\n");
  auto goal = parse_formula("O p -> P p", p.signature);
  REQUIRE(goal.ok());
  TableauResult tr = prove_sdl(p, *goal.formula);
  CHECK(tr.kind == TableauResult::Kind::Proof);
  CHECK(tr.proof.has_value());
  CHECK(tr.proof->steps > 0);
}

TEST_CASE("an unforced obligation is refuted with a verified countermodel") {
  Problem p = sdl_problem("theory sdl\natom p\n");
  Formula goal = Formula::ob(Formula::prop("p"));
  TableauResult tr = prove_sdl(p, goal);
  REQUIRE(tr.kind == TableauResult::Kind::Refuted);
  CHECK(refuted_model_ok(p, goal, tr));
}

TEST_CASE("global obligations terminate through blocking") {
  Problem p = sdl_problem("theory sdl\natom p\nglobal A1: O p\n");
  TableauResult tr = prove_sdl(p, Formula::falsity());
  REQUIRE(tr.kind == TableauResult::Kind::Refuted);
  CHECK(refuted_model_ok(p, Formula::falsity(), tr));
}

TEST_CASE("nested obligations") {
  Problem p = sdl_problem("theory sdl\natom p\nglobal A1: O O p\nlocal F1: ~p\n");
  // globals give O O p at the actual world; O p is not forced there
  Formula goal = Formula::ob(Formula::prop("p"));
  TableauResult tr = prove_sdl(p, goal);
  if (tr.kind == TableauResult::Kind::Refuted) CHECK(refuted_model_ok(p, goal, tr));
  // the finder must agree on whichever verdict came out
  SearchBudget b;
  b.max_worlds = 3;
  Verdict v = check_entailment(p, goal, b);
  CHECK(!(tr.kind == TableauResult::Kind::Proof && v.kind == Verdict::Kind::Countermodel));
}

TEST_CASE("proof objects serialize to json") {
  Problem p = sdl_problem("theory sdl\natom p\natom q\nlocal F1: p & q\n");
  TableauResult tr = prove_sdl(p, Formula::conj(Formula::prop("q"), Formula::prop("p")));
  REQUIRE(tr.kind == TableauResult::Kind::Proof);
  std::string js = tr.proof->to_json();
  CHECK(js.find("\"rule\"") != std::string::npos);
  CHECK(js.find("and-T") != std::string::npos);
}

TEST_CASE("tableau and finder never contradict on random sdl problems") {
  test::Rng rng(41);
  SearchBudget b;
  b.max_worlds = 3;
  int proofs = 0, refutations = 0;
  for (int i = 0; i < 100; ++i) {
    Problem p = test::gen_sdl_problem(rng, 3, test::pick(rng, 0, 3), 2);
    Formula goal = test::gen_formula(rng, p.signature, 2);
    TableauResult tr = prove_sdl(p, goal);
    REQUIRE(tr.kind != TableauResult::Kind::ResourceLimit);
    Verdict v = check_entailment(p, goal, b);
    if (tr.kind == TableauResult::Kind::Proof) {
      ++proofs;
      CHECK(v.kind == Verdict::Kind::BoundedValid);
    } else {
      ++refutations;
      CHECK(refuted_model_ok(p, goal, tr));
    }
  }
  CHECK(proofs > 0);
  CHECK(refutations > 0);
}
