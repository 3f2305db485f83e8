#pragma once

#include <stdexcept>
#include <string>

namespace deon {

// Contract violations in the semantic layer: unsupported operator for the
// model's theory, world index out of range, missing structure.
class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

class UnknownProblem : public std::runtime_error {
 public:
  explicit UnknownProblem(const std::string& name)
      : std::runtime_error("unknown corpus problem '" + name + "'") {}
};

}  // namespace deon
