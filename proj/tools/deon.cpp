#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "deon/corpus.hpp"
#include "deon/errors.hpp"
#include "deon/finder.hpp"
#include "deon/syntax.hpp"
#include "deon/tableau.hpp"
#include "deon/theory.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitNegative = 2;     // no model / countermodel
constexpr int kExitInconclusive = 3;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;

struct Options {
  std::string file;
  std::string query;
  std::string suite;
  std::optional<int> bound;
  std::optional<std::uint64_t> node_limit;
  std::string format = "text";
};

bool json_mode(const Options& o) { return o.format == "json"; }

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses the problem file or exits with 65 and diagnostics on stderr.
deon::Problem load_or_exit(const std::string& path) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(kExitParse);
  }
  deon::ProblemParse pp = deon::parse_problem(*text);
  if (!pp.ok()) {
    for (const auto& d : pp.diagnostics) std::cerr << path << ":" << d.render() << "\n";
    std::exit(kExitParse);
  }
  return *pp.problem;
}

deon::SearchBudget budget_for(const deon::Problem& p, const Options& o) {
  deon::SearchBudget b = deon::SearchBudget::for_theory(p.signature.theory);
  if (o.bound) b.max_worlds = *o.bound;
  b.node_limit = o.node_limit;
  return b;
}

nlohmann::ordered_json model_payload(const deon::FiniteModel& m) {
  return nlohmann::ordered_json::parse(deon::print_model(m, deon::ModelFormat::Json));
}

int cmd_check(const Options& o) {
  auto text = read_file(o.file);
  if (!text) {
    std::cerr << "error: cannot open " << o.file << "\n";
    return kExitFail;
  }
  deon::ProblemParse pp = deon::parse_problem(*text);
  if (!pp.ok()) {
    for (const auto& d : pp.diagnostics) std::cerr << o.file << ":" << d.render() << "\n";
    return kExitFail;
  }
  // the parser is theory-aware; re-run well_formed as a final guard
  const deon::Problem& p = *pp.problem;
  bool ok = true;
  auto check = [&](const deon::LabeledFormula& lf) {
    for (const auto& e : deon::well_formed(lf.formula, p.signature)) {
      std::cerr << o.file << ": " << lf.label << ": " << e.message << "\n";
      ok = false;
    }
  };
  for (const auto& g : p.globals) check(g);
  for (const auto& l : p.locals) check(l);
  if (!ok) return kExitFail;
  std::cout << "ok: " << p.signature.atoms.size() << " atoms, " << p.globals.size()
            << " globals, " << p.locals.size() << " locals, " << p.queries.size()
            << " queries (theory " << deon::to_string(p.signature.theory) << ")\n";
  return kExitOk;
}

int cmd_print(const Options& o) {
  deon::Problem p = load_or_exit(o.file);
  std::cout << deon::print_problem(p);
  return kExitOk;
}

int cmd_solve(const Options& o) {
  deon::Problem p = load_or_exit(o.file);
  deon::SearchBudget b = budget_for(p, o);
  deon::Verdict v = deon::find_model(p, b);
  if (json_mode(o)) {
    nlohmann::ordered_json j;
    j["verdict"] = v.kind_tag();
    j["bound"] = v.bound;
    j["exhaustive"] = v.exhaustive;
    if (v.model) j["model"] = model_payload(*v.model);
    std::cout << j.dump() << "\n";
  } else if (v.model) {
    std::cout << "model found: n=" << v.model->n << "\n"
              << deon::print_model(*v.model, deon::ModelFormat::Text);
  } else {
    std::cout << "no-model-up-to: " << v.bound << (v.exhaustive ? " (exhaustive)" : " (budget)")
              << "\n";
  }
  if (v.model) return kExitOk;
  return v.exhaustive ? kExitNegative : kExitInconclusive;
}

int cmd_entail(const Options& o) {
  deon::Problem p = load_or_exit(o.file);
  const deon::Query* q = p.find_query(o.query);
  if (!q) {
    std::cerr << "error: no query labelled '" << o.query << "' in " << o.file << "\n";
    return kExitUsage;
  }
  if (q->kind != deon::QueryKind::Entails) {
    std::cerr << "error: query '" << o.query << "' is a consistency query; use solve\n";
    return kExitUsage;
  }
  deon::SearchBudget b = budget_for(p, o);
  deon::Verdict v = deon::check_entailment(p, *q->goal, b);
  std::optional<deon::TableauResult> tr;
  if (p.signature.theory == deon::TheoryId::Sdl) tr = deon::prove_sdl(p, *q->goal);
  if (json_mode(o)) {
    nlohmann::ordered_json j;
    j["verdict"] = v.kind_tag();
    j["bound"] = v.bound;
    j["exhaustive"] = v.exhaustive;
    if (v.model) j["model"] = model_payload(*v.model);
    if (tr && tr->kind == deon::TableauResult::Kind::Proof)
      j["proof"] = nlohmann::ordered_json::parse(tr->proof->to_json());
    std::cout << j.dump() << "\n";
  } else if (v.model) {
    std::cout << "countermodel found: n=" << v.model->n << "\n"
              << deon::print_model(*v.model, deon::ModelFormat::Text);
  } else {
    std::cout << "bounded-valid: " << v.bound << (v.exhaustive ? " (exhaustive)" : " (budget)")
              << "\n";
    if (tr && tr->kind == deon::TableauResult::Kind::Proof)
      std::cout << "tableau: proof closed in " << tr->proof->steps << " steps\n";
  }
  if (tr) {
    bool agree = (tr->kind == deon::TableauResult::Kind::Proof &&
                  v.kind == deon::Verdict::Kind::BoundedValid) ||
                 (tr->kind == deon::TableauResult::Kind::Refuted &&
                  v.kind == deon::Verdict::Kind::Countermodel) ||
                 tr->kind == deon::TableauResult::Kind::ResourceLimit;
    if (!agree) {
      std::cerr << "internal error: tableau and finder disagree\n";
      return kExitFail;
    }
  }
  if (v.kind == deon::Verdict::Kind::Countermodel) return kExitNegative;
  return v.exhaustive ? kExitOk : kExitInconclusive;
}

int cmd_suite(const Options& o) {
  deon::SuiteReport report = deon::run_suite(o.suite, o.bound, o.node_limit);
  if (json_mode(o)) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows)
      rows.push_back({{"problem", r.problem},
                      {"query", r.label},
                      {"expected", r.expected},
                      {"actual", r.actual},
                      {"inconclusive", r.inconclusive},
                      {"pass", r.pass}});
    nlohmann::ordered_json j;
    j["suite"] = report.name;
    j["pass"] = report.pass;
    j["rows"] = rows;
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& r : report.rows) {
      std::printf("[%s] %s/%s expected=%s actual=%s (%.1f ms)\n", r.pass ? "PASS" : "FAIL",
                  r.problem.c_str(), r.label.c_str(), r.expected.c_str(), r.actual.c_str(),
                  r.millis);
    }
    std::printf("suite %s: %s\n", report.name.c_str(), report.pass ? "PASS" : "FAIL");
  }
  return report.pass ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deon — a workbench for deontic logics over finite models"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd, bool with_bound) {
    if (with_bound) {
      cmd->add_option("--bound", o.bound, "maximum world count (default per theory: 3 sdl/tds, 2 otherwise)");
      cmd->add_option("--node-limit", o.node_limit, "search node cap; hitting it makes the result inconclusive");
    }
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* check = app.add_subcommand("check", "parse a .deon file and report diagnostics");
  check->add_option("file", o.file, "problem file")->required();
  add_common(check, false);

  CLI::App* print = app.add_subcommand("print", "parse and pretty-print a .deon file");
  print->add_option("file", o.file, "problem file")->required();
  add_common(print, false);

  CLI::App* solve = app.add_subcommand("solve", "search for a model of the assumptions");
  solve->add_option("file", o.file, "problem file")->required();
  add_common(solve, true);

  CLI::App* entail = app.add_subcommand("entail", "check one entailment query");
  entail->add_option("file", o.file, "problem file")->required();
  entail->add_option("--query", o.query, "query label")->required();
  add_common(entail, true);

  CLI::App* suite = app.add_subcommand("suite", "run a corpus suite");
  suite->add_option("name", o.suite, "suite name (sdl, ctd, frontiers, lemmas, all)")->required();
  add_common(suite, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*check) return cmd_check(o);
    if (*print) return cmd_print(o);
    if (*solve) return cmd_solve(o);
    if (*entail) return cmd_entail(o);
    if (*suite) return cmd_suite(o);
  } catch (const deon::UnknownProblem& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
