#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deon/formula.hpp"
#include "deon/model.hpp"

namespace deon {

struct SourcePos {
  int line = 1;
  int col = 1;
  auto operator<=>(const SourcePos&) const = default;
};

struct Diagnostic {
  SourcePos pos;
  std::string message;
  std::vector<std::string> expected;  // token names, when known

  std::string render() const;
};

struct FormulaParse {
  std::optional<Formula> formula;
  std::optional<Diagnostic> error;
  bool ok() const { return formula.has_value(); }
};

// Theory-aware formula parser; the result is well formed against sig.
FormulaParse parse_formula(std::string_view text, const Signature& sig);

struct ProblemParse {
  std::optional<Problem> problem;  // present iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return problem.has_value(); }
};

// Parses a .deon problem file. Collects all diagnostics rather than
// stopping at the first.
ProblemParse parse_problem(std::string_view text);

// Minimal-parenthesis printer; parse_formula(print_formula(f)) == f.
std::string print_formula(const Formula& f);

std::string print_problem(const Problem& p);

enum class ModelFormat { Text, Json };

std::string print_model(const FiniteModel& m, ModelFormat fmt);

// Inverse of the JSON form of print_model. The schema carries no theory,
// so the caller supplies it. Throws std::runtime_error on schema errors.
FiniteModel parse_model_json(const std::string& text, TheoryId theory);

// Verdict expectation tags used by `expect` clauses and suite manifests.
inline constexpr const char* kExpectModel = "model";
inline constexpr const char* kExpectNoModel = "no_model";
inline constexpr const char* kExpectValid = "valid";
inline constexpr const char* kExpectCountermodel = "countermodel";

}  // namespace deon
