#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "folmt/formula.hpp"
#include "folmt/signature.hpp"

namespace folmt {

// A variable assignment: explicit values for the first prefix.size()
// de Bruijn indices, a constant fallback beyond them. Suitable for closed
// formulas (empty prefix) and for pinning finitely many free variables.
struct Assignment {
  std::vector<unsigned> prefix;
  unsigned fallback = 0;

  unsigned operator()(unsigned i) const { return i < prefix.size() ? prefix[i] : fallback; }

  // The extended assignment value . this, as used under a binder.
  Assignment pushed(unsigned value) const {
    Assignment out;
    out.prefix.reserve(prefix.size() + 1);
    out.prefix.push_back(value);
    out.prefix.insert(out.prefix.end(), prefix.begin(), prefix.end());
    out.fallback = fallback;
    return out;
  }
};

// A finite structure over an explicit domain {0, ..., size-1} with total
// tables for every symbol of the signature. Function tables map flattened
// argument tuples to elements; relation tables hold one byte per tuple.
// Tuples flatten in row-major order: the first argument varies slowest.
class FiniteModel {
 public:
  FiniteModel(Signature sig, unsigned size);

  const Signature& sig() const { return sig_; }
  unsigned size() const { return size_; }

  unsigned fun(unsigned f, std::span<const unsigned> args) const {
    return fun_tables_[f][flat_index(args)];
  }
  bool rel(unsigned r, std::span<const unsigned> args) const {
    return rel_tables_[r][flat_index(args)] != 0;
  }
  void set_fun(unsigned f, std::span<const unsigned> args, unsigned value);
  void set_rel(unsigned r, std::span<const unsigned> args, bool value);

  std::vector<unsigned>& fun_table(unsigned f) { return fun_tables_[f]; }
  const std::vector<unsigned>& fun_table(unsigned f) const { return fun_tables_[f]; }
  std::vector<std::uint8_t>& rel_table(unsigned r) { return rel_tables_[r]; }
  const std::vector<std::uint8_t>& rel_table(unsigned r) const { return rel_tables_[r]; }

  std::size_t flat_index(std::span<const unsigned> args) const;

  // k^arity, guarded against overflow.
  static std::size_t grid_size(unsigned k, unsigned arity);

 private:
  Signature sig_;
  unsigned size_;
  std::vector<std::vector<unsigned>> fun_tables_;
  std::vector<std::vector<std::uint8_t>> rel_tables_;
};

// A model together with an assignment for the free variables. Search
// witnesses and reduction transports move these around as one unit.
struct ModelEnv {
  FiniteModel model;
  Assignment env;
};

// Advances a tuple over {0..k-1}^n in lexicographic order; returns false
// after the last tuple.
bool next_tuple(std::vector<unsigned>& tuple, unsigned k);

// Extensional agreement of two models on the listed symbols. Both models
// must have the same domain size and signature.
bool models_ext_equal(const FiniteModel& a, const FiniteModel& b,
                      std::span<const unsigned> funcs, std::span<const unsigned> rels);

}  // namespace folmt
