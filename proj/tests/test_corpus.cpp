#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "deon/corpus.hpp"
#include "deon/eval.hpp"
#include "deon/finder.hpp"
#include "deon/syntax.hpp"
#include "deon/theory.hpp"

using namespace deon;

TEST_CASE("all fixtures are present") {
  auto names = list_problems();
  for (const char* expected :
       {"art5_sdl", "art5_ddl", "ctd_art16_20", "ctd_art16_24", "ctd_art31_36", "ddl_lemmas",
        "xddl1_base", "xddl2_base", "tds_base", "xddl1_agentive"}) {
    CAPTURE(expected);
    CHECK(std::find(names.begin(), names.end(), expected) != names.end());
  }
}

TEST_CASE("every fixture parses and is well formed") {
  for (const auto& name : list_problems()) {
    CAPTURE(name);
    Problem p = load_problem(name);
    for (const auto& g : p.globals) CHECK(well_formed(g.formula, p.signature).empty());
    for (const auto& l : p.locals) CHECK(well_formed(l.formula, p.signature).empty());
    for (const auto& q : p.queries)
      if (q.goal) CHECK(well_formed(*q.goal, p.signature).empty());
  }
}

TEST_CASE("art5_sdl matches its documented shape") {
  Problem p = load_problem("art5_sdl");
  CHECK(p.signature.theory == TheoryId::Sdl);
  CHECK(p.signature.atoms.size() == 10);
  CHECK(p.globals.size() == 3);
  CHECK(p.locals.size() == 2);
  CHECK(p.queries.size() == 2);
  for (const auto& q : p.queries) CHECK(q.kind == QueryKind::Entails);
}

TEST_CASE("ctd_art16_20 has the chisholm structure") {
  Problem p = load_problem("ctd_art16_20");
  CHECK(p.signature.theory == TheoryId::Cjddl);
  CHECK(p.signature.atoms.size() == 2);
  CHECK(p.globals.size() == 3);
  CHECK(p.locals.size() == 3);
  CHECK(p.queries.size() == 3);
  CHECK(p.find_query("C1")->kind == QueryKind::Consistent);
}

TEST_CASE("unknown problems raise") {
  CHECK_THROWS_AS(load_problem("nonexistent_problem"), UnknownProblem);
}

TEST_CASE("provenance mapping covers every axiom of every fixture") {
  std::ifstream in(corpus_dir() / "provenance.tsv");
  REQUIRE(in.good());
  std::set<std::pair<std::string, std::string>> cited;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string problem, label;
    std::getline(ls, problem, '\t');
    std::getline(ls, label, '\t');
    cited.insert({problem, label});
  }
  for (const auto& name : list_problems()) {
    Problem p = load_problem(name);
    for (const auto& g : p.globals) {
      CAPTURE(name); CAPTURE(g.label);
      CHECK(cited.count({name, g.label}) == 1);
    }
    for (const auto& l : p.locals) {
      CAPTURE(name); CAPTURE(l.label);
      CHECK(cited.count({name, l.label}) == 1);
    }
  }
}

TEST_CASE("suite manifests agree with the expect tags in the fixtures") {
  for (const auto& suite : {"sdl", "ctd", "frontiers", "lemmas"}) {
    for (const auto& entry : suite_manifest(suite)) {
      CAPTURE(entry.problem); CAPTURE(entry.query);
      Problem p = load_problem(entry.problem);
      const Query* q = p.find_query(entry.query);
      REQUIRE(q != nullptr);
      REQUIRE(q->expected.has_value());
      CHECK(*q->expected == entry.expected);
    }
  }
}

TEST_CASE("the shipped two-world xddl1 model fixture is frame-valid and canonical") {
  std::ifstream in(corpus_dir() / "xddl1_n2.model.json");
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  FiniteModel m = parse_model_json(text, TheoryId::Xddl1);
  CHECK(m.n == 2);
  CHECK(check_frame(m, builtin_theory(TheoryId::Xddl1)).empty());
  // regression: it is the canonical first model at exactly two worlds
  auto models = enumerate_models(load_problem("xddl1_base"), 2, 1);
  REQUIRE(models.size() == 1);
  CHECK(print_model(models[0], ModelFormat::Json) == text);
}

TEST_CASE("finder models validate against the json schema shape") {
  for (const char* name : {"ctd_art16_20", "xddl1_agentive"}) {
    Problem p = load_problem(name);
    Verdict v = find_model(p, SearchBudget::for_theory(p.signature.theory));
    REQUIRE(v.model.has_value());
    std::string js = print_model(*v.model, ModelFormat::Json);
    FiniteModel back = parse_model_json(js, p.signature.theory);
    CHECK(print_model(back, ModelFormat::Json) == js);
    CHECK(check_frame(back, theory_for(p.signature)).empty());
  }
}

TEST_CASE("ctd suite passes") {
  SuiteReport r = run_suite("ctd");
  for (const auto& row : r.rows) {
    CAPTURE(row.problem); CAPTURE(row.label); CAPTURE(row.expected); CAPTURE(row.actual);
    CHECK(row.pass);
  }
  CHECK(r.pass);
}

TEST_CASE("lemma suite passes") {
  SuiteReport r = run_suite("lemmas");
  CHECK(r.pass);
}
