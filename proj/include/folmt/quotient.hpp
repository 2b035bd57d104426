#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "folmt/errors.hpp"
#include "folmt/formula.hpp"
#include "folmt/model.hpp"

namespace folmt {

// A finite pigeonhole collision: positions i < j in the long list that
// relate to the same member of the short list.
struct PhpWitness {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t y = 0;  // position in the short list
};

// Requires |m| < |l| and rel total from l into m; walks l in order,
// pairing each element with its first related partner, and reports the
// first collision. Deterministic; throws PreconditionError when totality
// fails on inspection.
template <typename T, typename U, typename Rel>
PhpWitness php_witness(const std::vector<T>& l, const std::vector<U>& m,
                       Rel&& rel) {
  if (m.size() >= l.size())
    throw PreconditionError("php_witness: short list must be shorter");
  std::vector<std::optional<std::size_t>> owner(m.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    std::optional<std::size_t> yi;
    for (std::size_t y = 0; y < m.size(); ++y)
      if (rel(l[i], m[y])) {
        yi = y;
        break;
      }
    if (!yi)
      throw PreconditionError("php_witness: relation not total from l to m");
    if (owner[*yi]) return {*owner[*yi], i, *yi};
    owner[*yi] = i;
  }
  throw PreconditionError("php_witness: no collision found");
}

// A partition of {0..k-1}: c maps elements to class indices, r maps each
// class to its least member; c(r(p)) = p.
struct EquivClasses {
  unsigned class_count = 0;
  std::vector<unsigned> c;
  std::vector<unsigned> r;
};

// Greatest relation under which related elements are interchangeable in
// every listed relation table and whose listed functions map related
// arguments to related results. Computed by refinement from the all-true
// relation; stabilizes within k^2 + 1 rounds.
EquivClasses indist_fixpoint(const FiniteModel& m, std::span<const unsigned> fs,
                             std::span<const unsigned> ps);

// Minimizes m by indistinguishability with respect to the symbols
// occurring in f. Satisfaction of f transports along c/r both ways.
std::pair<FiniteModel, EquivClasses> quotient_model(const FiniteModel& m,
                                                    const Formula& f);

namespace detail {
// Every iterate of the refinement, first to stabilized, each a flat k*k
// boolean matrix. Exposed so tests can locate the separating round.
std::vector<std::vector<std::uint8_t>> indist_iterates(
    const FiniteModel& m, std::span<const unsigned> fs,
    std::span<const unsigned> ps);
}  // namespace detail

}  // namespace folmt
