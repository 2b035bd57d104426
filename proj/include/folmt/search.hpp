#pragma once

#include <cstdint>
#include <optional>

#include "folmt/eval.hpp"
#include "folmt/formula.hpp"
#include "folmt/model.hpp"

namespace folmt {

struct SearchOptions {
  unsigned jobs = 1;  // worker threads for the enumeration path
  // Candidate-model counts up to this bound are searched by direct
  // enumeration (lexicographically least witness); above it the search
  // switches to demand-driven backtracking over partial tables. Both are
  // exhaustive for the given domain size.
  std::uint64_t enumeration_limit = 1ull << 20;
  EvalOptions eval;
  // When set, that binary relation's table is pinned to the identity
  // instead of being searched: the search decides satisfiability with the
  // relation read as genuine equality.
  std::optional<unsigned> identity_rel;
};

// Outcome of a satisfiability search. Sat carries a witness; Unsat means
// the searched space is exhausted (all models up to the stated bound);
// Unknown means the bound was reached without a verdict either way.
struct Verdict {
  enum class Kind { Sat, Unsat, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<ModelEnv> witness;
  unsigned bound = 0;

  static Verdict sat(ModelEnv w);
  static Verdict unsat(unsigned bound);
  static Verdict unknown(unsigned bound);
};

// Least satisfying (model, assignment) over domain {0..k-1}, if any. Free
// variables of the formula are searched over along with the tables; all
// other variables are pinned to 0.
std::optional<ModelEnv> fsat_on_domain(const Signature& sig, const Formula& f,
                                       unsigned k, const SearchOptions& opts = {});

// Decides satisfiability over domains of size exactly k: Sat or Unsat.
Verdict fsat_fixed(const Signature& sig, const Formula& f, unsigned k,
                   const SearchOptions& opts = {});

// Tries domain sizes 1..max_size in order: Sat at the least size that
// works, otherwise Unknown.
Verdict fsat(const Signature& sig, const Formula& f, unsigned max_size,
             const SearchOptions& opts = {});

namespace detail {

// The two search paths, exposed for cross-checking. Both return the
// same satisfiability answer; witnesses may differ.
std::optional<ModelEnv> fsat_enumerate(const Signature& sig, const Formula& f,
                                       unsigned k, const SearchOptions& opts);
std::optional<ModelEnv> fsat_lazy(const Signature& sig, const Formula& f,
                                  unsigned k, const SearchOptions& opts);

// Counts candidate models over domain size k, leaving out a pinned
// identity relation if given. Returns false (leaving *count untouched)
// once the count exceeds limit.
bool model_space_within(const Signature& sig, unsigned k, std::uint64_t limit,
                        std::uint64_t* count,
                        std::optional<unsigned> identity_rel = std::nullopt);

}  // namespace detail

}  // namespace folmt
