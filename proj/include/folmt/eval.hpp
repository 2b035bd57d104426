#pragma once

#include <memory>

#include "folmt/formula.hpp"
#include "folmt/model.hpp"

namespace folmt {

// Tuning knobs for the evaluator. Tri-state: -1 auto, 0 off, 1 on. Both
// features are behavior-preserving; they exist because satisfaction checks
// on membership-encoded formulas touch large domains.
//   memo   caches quantifier subformula results keyed on their free
//          variable values (sound: the model is fixed per evaluator).
//   guard  iterates guarded quantifiers (ex x. R(x,y) /\ ...,
//          all x. R(x,y) -> ...) over the rows of a precomputed index of R
//          instead of the whole domain.
struct EvalOptions {
  int memo = -1;
  int guard = -1;
};

// Evaluates formulas against one fixed model. Reusable across assignments
// and formulas; caches persist between check() calls.
class Evaluator {
 public:
  explicit Evaluator(const FiniteModel& m, EvalOptions opts = {});
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  bool check(const Assignment& env, const Formula& f);
  unsigned term(const Assignment& env, const Term& t);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot helpers.
bool satisfies(const FiniteModel& m, const Assignment& env, const Formula& f,
               EvalOptions opts = {});
unsigned eval_term(const FiniteModel& m, const Assignment& env, const Term& t);

}  // namespace folmt
