#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "deon/finder.hpp"
#include "deon/formula.hpp"

namespace deon {

// Fixture directory: $DEON_CORPUS_DIR when set, else the directory baked in
// at build time, else ./corpus.
std::filesystem::path corpus_dir();

// Names of the .deon fixtures in the corpus directory, sorted.
std::vector<std::string> list_problems();

// Parses corpus_dir()/<name>.deon. Throws UnknownProblem for a missing
// fixture and std::runtime_error when the fixture fails to parse.
Problem load_problem(const std::string& name);

struct SuiteEntry {
  std::string problem;
  std::string query;
  std::string expected;  // model / no_model / valid / countermodel
  int bound;
};

struct QueryOutcome {
  std::string problem;
  std::string label;
  std::string expected;
  std::string actual;
  double millis = 0;
  bool inconclusive = false;  // budget ran out before a verdict
  bool pass = false;
};

struct SuiteReport {
  std::string name;
  std::vector<QueryOutcome> rows;
  bool pass = false;
};

std::vector<std::string> list_suites();
std::vector<SuiteEntry> suite_manifest(const std::string& name);

// Runs every query of the suite with the finder (and, on sdl problems, the
// tableau as a cross-check); compares verdict kinds against the manifest.
// bound/node_limit override the per-entry defaults when set.
SuiteReport run_suite(const std::string& name, std::optional<int> bound = std::nullopt,
                      std::optional<std::uint64_t> node_limit = std::nullopt);

}  // namespace deon
