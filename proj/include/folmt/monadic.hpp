#pragma once

#include "folmt/formula.hpp"
#include "folmt/search.hpp"
#include "folmt/signature.hpp"

namespace folmt {

// rel_cap bounds the relation count the subset enumeration will take on
// (the candidate space is doubly exponential in it).
struct MonadicOptions {
  unsigned rel_cap = 4;
};

// Decides satisfiability of a purely relational monadic formula exactly:
// a model collapses to the set of predicate vectors its elements realize,
// so trying every nonempty set of vectors is complete. Sat verdicts carry
// the witness; Unsat here is absolute, with the tried domain bound 2^n.
Verdict monadic_rel_decide(const Signature& sig, const Formula& f,
                           const MonadicOptions& opts = {});

// Full monadic decision: lifts 0-ary symbols, drops unused ones,
// eliminates unary functions, then decides relationally. Sat witnesses
// are transported back to the original signature. Throws CapExceededError
// when function elimination leaves more than rel_cap relations.
Verdict monadic_decide(const Signature& sig, const Formula& f,
                       const MonadicOptions& opts = {});

}  // namespace folmt
