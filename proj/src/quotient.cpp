#include "folmt/quotient.hpp"

namespace folmt {
namespace {

// Applies fn to every argument tuple that places value v at position pos,
// varying the remaining positions over the full grid. fn returns false to
// stop early.
template <typename Fn>
bool for_each_context(unsigned arity, unsigned pos, unsigned v, unsigned k,
                      Fn&& fn) {
  std::vector<unsigned> args(arity, 0);
  args[pos] = v;
  std::vector<unsigned> rest(arity - 1, 0);
  while (true) {
    for (unsigned i = 0, j = 0; i < arity; ++i)
      if (i != pos) args[i] = rest[j++];
    if (!fn(args)) return false;
    if (!next_tuple(rest, k)) return true;
  }
}

}  // namespace

namespace detail {

std::vector<std::vector<std::uint8_t>> indist_iterates(
    const FiniteModel& m, std::span<const unsigned> fs,
    std::span<const unsigned> ps) {
  const unsigned k = m.size();
  const std::size_t cells = static_cast<std::size_t>(k) * k;
  auto at = [k](std::vector<std::uint8_t>& mat, unsigned x, unsigned y) -> std::uint8_t& {
    return mat[static_cast<std::size_t>(x) * k + y];
  };

  // Pairs the listed relation tables cannot tell apart; computed once.
  std::vector<std::uint8_t> base(cells, 1);
  for (unsigned x = 0; x < k; ++x)
    for (unsigned y = 0; y < k; ++y) {
      if (x == y) continue;
      bool same = true;
      for (unsigned pi = 0; pi < ps.size() && same; ++pi) {
        unsigned p = ps[pi];
        unsigned arity = m.sig().rel(p).arity;
        for (unsigned pos = 0; pos < arity && same; ++pos)
          same = for_each_context(arity, pos, x, k, [&](std::vector<unsigned>& args) {
            bool with_x = m.rel(p, args);
            args[pos] = y;
            bool with_y = m.rel(p, args);
            args[pos] = x;
            return with_x == with_y;
          });
      }
      at(base, x, y) = same;
    }

  std::vector<std::vector<std::uint8_t>> iterates;
  iterates.push_back(std::vector<std::uint8_t>(cells, 1));
  const std::size_t hard_bound = cells + 1;
  for (std::size_t round = 0; round < hard_bound; ++round) {
    const std::vector<std::uint8_t>& cur = iterates.back();
    std::vector<std::uint8_t> next(cells, 0);
    for (unsigned x = 0; x < k; ++x)
      for (unsigned y = 0; y < k; ++y) {
        std::size_t cell = static_cast<std::size_t>(x) * k + y;
        if (!cur[cell] || !base[cell]) continue;
        bool ok = true;
        for (unsigned fi = 0; fi < fs.size() && ok; ++fi) {
          unsigned f = fs[fi];
          unsigned arity = m.sig().func(f).arity;
          for (unsigned pos = 0; pos < arity && ok; ++pos)
            ok = for_each_context(arity, pos, x, k, [&](std::vector<unsigned>& args) {
              unsigned fx = m.fun(f, args);
              args[pos] = y;
              unsigned fy = m.fun(f, args);
              args[pos] = x;
              return cur[static_cast<std::size_t>(fx) * k + fy] != 0;
            });
        }
        next[cell] = ok;
      }
    bool stable = next == cur;
    iterates.push_back(std::move(next));
    if (stable) break;
  }
  return iterates;
}

}  // namespace detail

EquivClasses indist_fixpoint(const FiniteModel& m, std::span<const unsigned> fs,
                             std::span<const unsigned> ps) {
  const unsigned k = m.size();
  std::vector<std::uint8_t> rel = detail::indist_iterates(m, fs, ps).back();

  EquivClasses q;
  q.c.assign(k, 0);
  std::vector<bool> assigned(k, false);
  for (unsigned x = 0; x < k; ++x) {
    if (assigned[x]) continue;
    unsigned cls = q.class_count++;
    q.r.push_back(x);
    q.c[x] = cls;
    assigned[x] = true;
    for (unsigned y = x + 1; y < k; ++y)
      if (!assigned[y] && rel[static_cast<std::size_t>(x) * k + y]) {
        q.c[y] = cls;
        assigned[y] = true;
      }
  }
  return q;
}

std::pair<FiniteModel, EquivClasses> quotient_model(const FiniteModel& m,
                                                    const Formula& f) {
  validate(m.sig(), f);
  OccurringSymbols occ = syms(f);
  EquivClasses q = indist_fixpoint(m, occ.funcs, occ.rels);

  FiniteModel out(m.sig(), q.class_count);
  std::vector<unsigned> lifted;
  for (unsigned fi = 0; fi < m.sig().func_count(); ++fi) {
    unsigned arity = m.sig().func(fi).arity;
    std::vector<unsigned> args(arity, 0);
    do {
      lifted.assign(args.begin(), args.end());
      for (unsigned& v : lifted) v = q.r[v];
      out.set_fun(fi, args, q.c[m.fun(fi, lifted)]);
    } while (next_tuple(args, q.class_count));
  }
  for (unsigned ri = 0; ri < m.sig().rel_count(); ++ri) {
    unsigned arity = m.sig().rel(ri).arity;
    std::vector<unsigned> args(arity, 0);
    do {
      lifted.assign(args.begin(), args.end());
      for (unsigned& v : lifted) v = q.r[v];
      out.set_rel(ri, args, m.rel(ri, lifted));
    } while (next_tuple(args, q.class_count));
  }
  return {std::move(out), std::move(q)};
}

}  // namespace folmt
