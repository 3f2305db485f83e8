#pragma once

#include "deon/errors.hpp"
#include "deon/formula.hpp"
#include "deon/model.hpp"
#include "deon/theory.hpp"

namespace deon {

// Set of worlds where f holds. Pure; throws EvalError for operators outside
// the model's theory or structure the model lacks. The TheorySpec overloads
// evaluate against a configured spec (extended tags, ActualOb toggle).
WorldSet extension(const FiniteModel& m, const Formula& f);
WorldSet extension(const FiniteModel& m, const Formula& f, const TheorySpec& spec);

// Truth at one world: eval(m, w, f) == world_in(extension(m, f), w).
bool eval(const FiniteModel& m, int world, const Formula& f);
bool eval(const FiniteModel& m, int world, const Formula& f, const TheorySpec& spec);

// True iff every global holds at every world and every local at m.actual.
// Assumes m passes check_frame for the problem's theory.
bool verify_problem(const FiniteModel& m, const Problem& p);
bool verify_problem(const FiniteModel& m, const Problem& p, const TheorySpec& spec);

// ob3/ob4/ob5 closure of a core family over all 2^n contexts. Adds cores
// only; never introduces an empty core. The result satisfies ob1-ob5
// whenever the input cores are subsets of their contexts.
ObMap close_ob(const ObMap& generators, int n);

}  // namespace deon
