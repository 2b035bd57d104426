#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "folmt/model.hpp"

namespace folmt {

// Hereditarily finite sets in canonical form: the member list is
// recursively canonical, strictly sorted under the canonical order, and
// duplicate-free, so structural equality coincides with extensional
// equality. Values are immutable and share structure freely.
class HfSet {
 public:
  HfSet() = default;  // the empty set

  static HfSet from_list(std::vector<HfSet> xs);

  const std::vector<HfSet>& elems() const;
  unsigned rank() const { return node_ ? node_->rank : 0; }

  bool operator==(const HfSet& o) const;
  bool operator!=(const HfSet& o) const { return !(*this == o); }
  // Canonical total order: rank first, then lexicographic on members.
  bool operator<(const HfSet& o) const;

  std::string to_string() const;  // braces notation, e.g. {{},{{}}}

 private:
  struct Node {
    std::vector<HfSet> elems;
    unsigned rank = 1;
  };
  std::shared_ptr<const Node> node_;
};

bool hf_mem(const HfSet& a, const HfSet& b);          // a in b
HfSet hf_pair(const HfSet& a, const HfSet& b);        // {{a},{a,b}}
HfSet hf_tuple(const std::vector<HfSet>& xs);         // right-nested pairs; a
                                                      // singleton is itself
HfSet hf_powerset(const HfSet& a);
// a itself followed by every hereditary member, preorder, duplicate-free.
std::vector<HfSet> hf_transitive_closure(const HfSet& a);

// A finite slice of the membership universe representing an n-ary
// relation over a source domain {0..source_size-1}: d's members are the
// source elements (via embed/project), r collects the tuple encodings of
// the relation's rows, and the domain is transitively closed under
// membership.
struct MembershipModel {
  std::vector<HfSet> domain;      // canonically sorted
  std::vector<std::uint8_t> mem;  // flat k*k, [a*k+b] = domain[a] in domain[b]
  unsigned d_index = 0;
  unsigned r_index = 0;
  std::vector<unsigned> embed;    // source element -> domain index
  std::vector<unsigned> project;  // domain index -> source element (0 outside d)
  unsigned source_size = 0;
  unsigned arity = 0;

  unsigned size() const { return static_cast<unsigned>(domain.size()); }
  bool mem_at(unsigned a, unsigned b) const {
    return mem[static_cast<std::size_t>(a) * domain.size() + b] != 0;
  }
};

// No functions, one binary relation "mem".
const Signature& membership_signature();

// table is the flat row-major table of an n-ary relation over {0..m-1}.
MembershipModel relation_to_membership_model(unsigned m, unsigned n,
                                             const std::vector<std::uint8_t>& table);

FiniteModel membership_to_finite_model(const MembershipModel& mm);

}  // namespace folmt
