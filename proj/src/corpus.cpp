#include "deon/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "deon/errors.hpp"
#include "deon/syntax.hpp"
#include "deon/tableau.hpp"

namespace deon {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::pair<std::string, std::vector<SuiteEntry>>>& suites() {
  // (problem, query, expected kind, bound); bounds follow the per-theory
  // defaults (3 for sdl/tds, 2 for the conditional-obligation theories).
  static const std::vector<std::pair<std::string, std::vector<SuiteEntry>>> table = {
      {"sdl",
       {
           {"art5_sdl", "G1", "valid", 3},
           {"art5_sdl", "G2", "countermodel", 3},
           {"art5_ddl", "G1", "valid", 2},
           {"art5_ddl", "G2", "countermodel", 2},
       }},
      {"ctd",
       {
           {"ctd_art16_20", "C1", "model", 2},
           {"ctd_art16_20", "E1", "valid", 2},
           {"ctd_art16_20", "E2", "countermodel", 2},
           {"ctd_art16_24", "C1", "model", 2},
           {"ctd_art16_24", "E1", "valid", 2},
           {"ctd_art16_24", "E2", "countermodel", 2},
           {"ctd_art31_36", "C1", "model", 2},
           {"ctd_art31_36", "E1", "valid", 2},
           {"ctd_art31_36", "E2", "countermodel", 2},
       }},
      {"frontiers",
       {
           {"xddl1_base", "C1", "model", 2},
           {"xddl2_base", "C1", "model", 2},
           {"tds_base", "C1", "no_model", 3},
           {"xddl1_agentive", "C1", "model", 2},
           {"xddl1_agentive", "S1", "valid", 2},
       }},
      {"lemmas",
       {
           {"ddl_lemmas", "L1", "valid", 2},
           {"ddl_lemmas", "L2", "valid", 2},
           {"ddl_lemmas", "L3", "countermodel", 2},
       }},
  };
  return table;
}

}  // namespace

std::filesystem::path corpus_dir() {
  if (const char* env = std::getenv("DEON_CORPUS_DIR")) return env;
#ifdef DEON_DEFAULT_CORPUS_DIR
  return DEON_DEFAULT_CORPUS_DIR;
#else
  return "corpus";
#endif
}

std::vector<std::string> list_problems() {
  std::vector<std::string> names;
  const auto dir = corpus_dir();
  if (!std::filesystem::is_directory(dir))
    throw std::runtime_error("corpus directory not found: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".deon")
      names.push_back(entry.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

Problem load_problem(const std::string& name) {
  const auto path = corpus_dir() / (name + ".deon");
  if (!std::filesystem::is_regular_file(path)) throw UnknownProblem(name);
  ProblemParse pp = parse_problem(read_file(path));
  if (!pp.ok()) {
    std::string msg = "corpus problem '" + name + "' does not parse:";
    for (const auto& d : pp.diagnostics) msg += "\n  " + d.render();
    throw std::runtime_error(msg);
  }
  return *pp.problem;
}

std::vector<std::string> list_suites() {
  std::vector<std::string> out;
  for (const auto& [name, entries] : suites()) out.push_back(name);
  out.push_back("all");
  return out;
}

std::vector<SuiteEntry> suite_manifest(const std::string& name) {
  std::vector<SuiteEntry> out;
  for (const auto& [sname, entries] : suites()) {
    if (sname == name || name == "all")
      out.insert(out.end(), entries.begin(), entries.end());
  }
  if (out.empty()) throw std::runtime_error("unknown suite '" + name + "'");
  return out;
}

SuiteReport run_suite(const std::string& name, std::optional<int> bound,
                      std::optional<std::uint64_t> node_limit) {
  SuiteReport report;
  report.name = name;
  report.pass = true;
  for (const SuiteEntry& entry : suite_manifest(name)) {
    Problem p = load_problem(entry.problem);
    const Query* q = p.find_query(entry.query);
    QueryOutcome row;
    row.problem = entry.problem;
    row.label = entry.query;
    row.expected = entry.expected;
    if (!q) {
      row.actual = "missing-query";
      report.rows.push_back(row);
      report.pass = false;
      continue;
    }
    SearchBudget budget;
    budget.max_worlds = bound.value_or(entry.bound);
    budget.node_limit = node_limit;
    auto start = std::chrono::steady_clock::now();
    Verdict v = q->kind == QueryKind::Consistent ? find_model(p, budget)
                                                 : check_entailment(p, *q->goal, budget);
    row.actual = v.kind_tag();
    row.inconclusive = !v.exhaustive && !v.model;
    bool sound = verify(v, p);
    row.pass = !row.inconclusive && sound && row.actual == row.expected;
    // cross-check sdl entailments with the tableau
    if (row.pass && p.signature.theory == TheoryId::Sdl && q->kind == QueryKind::Entails) {
      TableauResult tr = prove_sdl(p, *q->goal);
      bool agree = (tr.kind == TableauResult::Kind::Proof &&
                    v.kind == Verdict::Kind::BoundedValid) ||
                   (tr.kind == TableauResult::Kind::Refuted &&
                    v.kind == Verdict::Kind::Countermodel);
      if (!agree) row.pass = false;
    }
    row.millis = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
    if (!row.pass) report.pass = false;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace deon
