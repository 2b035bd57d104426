#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "folmt/formula.hpp"
#include "folmt/model.hpp"

namespace folmt {

// Binary Post correspondence: a finite list of cards, each a pair of bit
// strings over {0,1}. A solution is a nonempty way to stack cards so the
// concatenated top and bottom strings coincide.
struct BpcpInstance {
  std::vector<std::pair<std::string, std::string>> cards;
};

// One card per line: "top bottom", with '-' standing for the empty
// string; ';' starts a comment.
BpcpInstance parse_instance(const std::string& text);
std::string print_instance(const BpcpInstance& inst);

// funcs: star/0, e/0, f1/1, f0/1; rels: P/2, prec/2, eq/2.
const Signature& bpcp_signature();

namespace bpcp_sym {
inline constexpr unsigned star = 0, e = 1, f1 = 2, f0 = 3;
inline constexpr unsigned P = 0, prec = 1, eq = 2;
}  // namespace bpcp_sym

// Derivability: (s,t) is a card, or some card prefixes a derivable pair
// componentwise.
bool derives(const BpcpInstance& inst, const std::string& s,
             const std::string& t);

// Least s by length then lexicographic order with |s| <= maxlen and
// derives(inst, s, s).
std::optional<std::string> bpcp_solve(const BpcpInstance& inst,
                                      unsigned maxlen);

// Closed formula over bpcp_signature(), finitely satisfiable with eq read
// as identity iff the instance has a solution.
Formula bpcp_encode(const BpcpInstance& inst);

// Canonical witness model: domain = overflow point + all bit strings of
// length <= n, size 2^(n+1). Index 0 is the overflow; string s sits at
// 2^|s| + value(s) with the first character most significant.
FiniteModel bpcp_model(const BpcpInstance& inst, unsigned n);

unsigned bpcp_index_of(const std::string& s);
std::optional<std::string> bpcp_string_at(unsigned idx, unsigned n);

// Reads a solution back out of a model of bpcp_encode(inst) whose eq
// table is the identity. Follows prec-descending chains through P for at
// most |D|^2 + 1 steps; a model that does not decode throws
// MalformedModelError.
std::string extract_solution(const BpcpInstance& inst, const FiniteModel& m);

}  // namespace folmt
