#include "folmt/model.hpp"

#include "folmt/errors.hpp"

namespace folmt {

FiniteModel::FiniteModel(Signature sig, unsigned size) : sig_(std::move(sig)), size_(size) {
  if (size == 0) throw PreconditionError("domain must be nonempty");
  fun_tables_.reserve(sig_.func_count());
  for (unsigned f = 0; f < sig_.func_count(); ++f)
    fun_tables_.emplace_back(grid_size(size_, sig_.func(f).arity), 0u);
  rel_tables_.reserve(sig_.rel_count());
  for (unsigned r = 0; r < sig_.rel_count(); ++r)
    rel_tables_.emplace_back(grid_size(size_, sig_.rel(r).arity), std::uint8_t{0});
}

void FiniteModel::set_fun(unsigned f, std::span<const unsigned> args, unsigned value) {
  if (value >= size_) throw PreconditionError("function value outside domain");
  fun_tables_[f][flat_index(args)] = value;
}

void FiniteModel::set_rel(unsigned r, std::span<const unsigned> args, bool value) {
  rel_tables_[r][flat_index(args)] = value ? 1 : 0;
}

std::size_t FiniteModel::flat_index(std::span<const unsigned> args) const {
  std::size_t idx = 0;
  for (unsigned a : args) {
    if (a >= size_) throw PreconditionError("argument outside domain");
    idx = idx * size_ + a;
  }
  return idx;
}

std::size_t FiniteModel::grid_size(unsigned k, unsigned arity) {
  std::size_t n = 1;
  for (unsigned i = 0; i < arity; ++i) {
    if (n > (std::size_t{1} << 60) / k) throw CapExceededError("table too large");
    n *= k;
  }
  return n;
}

bool next_tuple(std::vector<unsigned>& tuple, unsigned k) {
  for (std::size_t i = tuple.size(); i-- > 0;) {
    if (++tuple[i] < k) return true;
    tuple[i] = 0;
  }
  return false;
}

bool models_ext_equal(const FiniteModel& a, const FiniteModel& b,
                      std::span<const unsigned> funcs, std::span<const unsigned> rels) {
  if (a.size() != b.size()) throw PreconditionError("domain size mismatch");
  if (!(a.sig() == b.sig())) throw PreconditionError("signature mismatch");
  for (unsigned f : funcs)
    if (a.fun_table(f) != b.fun_table(f)) return false;
  for (unsigned r : rels)
    if (a.rel_table(r) != b.rel_table(r)) return false;
  return true;
}

}  // namespace folmt
