#include "folmt/search.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#include "folmt/errors.hpp"

namespace folmt {
namespace {

using Kind = Formula::Kind;

// Values for the free variables of the target formula, walked in
// lexicographic order of the resulting assignment prefix.
struct EnvGrid {
  std::vector<unsigned> fv;
  unsigned width = 0;

  EnvGrid(const Formula& f, unsigned) {
    fv = free_vars(f);
    if (!fv.empty()) width = fv.back() + 1;
  }

  Assignment assignment(const std::vector<unsigned>& vals) const {
    Assignment env;
    env.prefix.assign(width, 0);
    for (std::size_t i = 0; i < fv.size(); ++i) env.prefix[fv[i]] = vals[i];
    return env;
  }
};

// First assignment from the grid satisfying f in m, if any.
std::optional<Assignment> try_envs(Evaluator& ev, const Formula& f, unsigned k,
                                   const EnvGrid& grid) {
  std::vector<unsigned> vals(grid.fv.size(), 0);
  while (true) {
    Assignment env = grid.assignment(vals);
    if (ev.check(env, f)) return env;
    if (!next_tuple(vals, k)) return std::nullopt;
  }
}

FiniteModel decode_model(const Signature& sig, unsigned k, std::uint64_t idx,
                         std::optional<unsigned> identity_rel) {
  FiniteModel m(sig, k);
  for (unsigned r = sig.rel_count(); r-- > 0;) {
    auto& t = m.rel_table(r);
    if (identity_rel && *identity_rel == r) {
      for (unsigned x = 0; x < k; ++x) t[static_cast<std::size_t>(x) * k + x] = 1;
      continue;
    }
    for (std::size_t c = t.size(); c-- > 0;) {
      t[c] = static_cast<std::uint8_t>(idx % 2);
      idx /= 2;
    }
  }
  for (unsigned f = sig.func_count(); f-- > 0;) {
    auto& t = m.fun_table(f);
    for (std::size_t c = t.size(); c-- > 0;) {
      t[c] = static_cast<unsigned>(idx % k);
      idx /= k;
    }
  }
  return m;
}

// ---- demand-driven path ----------------------------------------------

struct Cell {
  bool is_fun = false;
  unsigned sym = 0;
  std::size_t flat = 0;
};

struct PartialModel {
  std::vector<std::vector<int>> funs;     // -1 = undetermined
  std::vector<std::vector<int8_t>> rels;  // -1 = undetermined

  PartialModel(const Signature& sig, unsigned k) {
    funs.reserve(sig.func_count());
    for (unsigned f = 0; f < sig.func_count(); ++f)
      funs.emplace_back(FiniteModel::grid_size(k, sig.func(f).arity), -1);
    rels.reserve(sig.rel_count());
    for (unsigned r = 0; r < sig.rel_count(); ++r)
      rels.emplace_back(FiniteModel::grid_size(k, sig.rel(r).arity), -1);
  }

  void reset() {
    for (auto& t : funs) std::fill(t.begin(), t.end(), -1);
    for (auto& t : rels) std::fill(t.begin(), t.end(), -1);
  }
};

// Three-valued evaluation over a partial model. F and T are final for
// every completion of the tables; U reports the first table cell whose
// value was demanded but undetermined.
class Lazy {
 public:
  Lazy(unsigned k, PartialModel& pm) : k_(k), pm_(pm) {}

  enum { F = 0, T = 1, U = 2 };

  int eval(const Assignment& outer, const Formula& f) {
    outer_ = &outer;
    locals_.clear();
    return eval_f(f);
  }

  Cell stuck;

 private:
  unsigned k_;
  PartialModel& pm_;
  const Assignment* outer_ = nullptr;
  std::vector<unsigned> locals_;

  unsigned lookup(unsigned i) const {
    if (i < locals_.size()) return locals_[locals_.size() - 1 - i];
    return (*outer_)(i - static_cast<unsigned>(locals_.size()));
  }

  std::size_t flat(const std::vector<unsigned>& vals) const {
    std::size_t idx = 0;
    for (unsigned v : vals) idx = idx * k_ + v;
    return idx;
  }

  // false = stuck (this->stuck set), true = *out is the value.
  bool eval_t(const Term& t, unsigned* out) {
    if (t.is_var()) {
      *out = lookup(t.index());
      return true;
    }
    std::vector<unsigned> vals(t.args().size());
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (!eval_t(t.args()[i], &vals[i])) return false;
    std::size_t cell = flat(vals);
    int v = pm_.funs[t.func()][cell];
    if (v < 0) {
      stuck = {true, t.func(), cell};
      return false;
    }
    *out = static_cast<unsigned>(v);
    return true;
  }

  int eval_f(const Formula& f) {
    switch (f.kind()) {
      case Kind::Bot:
        return F;
      case Kind::Atom: {
        std::vector<unsigned> vals(f.args().size());
        for (std::size_t i = 0; i < vals.size(); ++i)
          if (!eval_t(f.args()[i], &vals[i])) return U;
        std::size_t cell = flat(vals);
        int v = pm_.rels[f.rel()][cell];
        if (v < 0) {
          stuck = {false, f.rel(), cell};
          return U;
        }
        return v ? T : F;
      }
      case Kind::Impl: {
        int l = eval_f(f.left());
        if (l == F) return T;
        if (l == T) return eval_f(f.right());
        Cell first = stuck;
        int r = eval_f(f.right());
        if (r == T) return T;
        stuck = first;
        return U;
      }
      case Kind::And: {
        int l = eval_f(f.left());
        if (l == F) return F;
        if (l == T) return eval_f(f.right());
        Cell first = stuck;
        int r = eval_f(f.right());
        if (r == F) return F;
        stuck = first;
        return U;
      }
      case Kind::Or: {
        int l = eval_f(f.left());
        if (l == T) return T;
        if (l == F) return eval_f(f.right());
        Cell first = stuck;
        int r = eval_f(f.right());
        if (r == T) return T;
        stuck = first;
        return U;
      }
      case Kind::All:
      case Kind::Ex: {
        const bool universal = f.kind() == Kind::All;
        bool have_stuck = false;
        Cell first{};
        for (unsigned a = 0; a < k_; ++a) {
          locals_.push_back(a);
          int v = eval_f(f.body());
          locals_.pop_back();
          if (v == (universal ? F : T)) return v;
          if (v == U && !have_stuck) {
            have_stuck = true;
            first = stuck;
          }
        }
        if (have_stuck) {
          stuck = first;
          return U;
        }
        return universal ? T : F;
      }
    }
    return F;
  }
};

FiniteModel complete_defaults(const Signature& sig, unsigned k,
                              const PartialModel& pm) {
  FiniteModel m(sig, k);
  for (unsigned f = 0; f < pm.funs.size(); ++f) {
    auto& t = m.fun_table(f);
    for (std::size_t c = 0; c < t.size(); ++c)
      t[c] = pm.funs[f][c] < 0 ? 0 : static_cast<unsigned>(pm.funs[f][c]);
  }
  for (unsigned r = 0; r < pm.rels.size(); ++r) {
    auto& t = m.rel_table(r);
    for (std::size_t c = 0; c < t.size(); ++c)
      t[c] = pm.rels[r][c] < 0 ? 0 : static_cast<std::uint8_t>(pm.rels[r][c]);
  }
  return m;
}

}  // namespace

namespace detail {

bool model_space_within(const Signature& sig, unsigned k, std::uint64_t limit,
                        std::uint64_t* count, std::optional<unsigned> identity_rel) {
  if (limit == 0) return false;
  std::uint64_t n = 1;
  try {
    for (unsigned f = 0; f < sig.func_count(); ++f) {
      std::size_t cells = FiniteModel::grid_size(k, sig.func(f).arity);
      if (k == 1) continue;
      for (std::size_t c = 0; c < cells; ++c) {
        if (n > limit / k) return false;
        n *= k;
      }
    }
    for (unsigned r = 0; r < sig.rel_count(); ++r) {
      if (identity_rel && *identity_rel == r) continue;
      std::size_t cells = FiniteModel::grid_size(k, sig.rel(r).arity);
      for (std::size_t c = 0; c < cells; ++c) {
        if (n > limit / 2) return false;
        n *= 2;
      }
    }
  } catch (const CapExceededError&) {
    return false;
  }
  if (count) *count = n;
  return true;
}

std::optional<ModelEnv> fsat_enumerate(const Signature& sig, const Formula& f,
                                       unsigned k, const SearchOptions& opts) {
  std::uint64_t n = 0;
  if (!model_space_within(sig, k, 1ull << 32, &n, opts.identity_rel))
    throw CapExceededError("model space too large to enumerate");
  EnvGrid grid(f, k);

  unsigned jobs = opts.jobs;
  if (jobs <= 1 || n < 1024) {
    for (std::uint64_t i = 0; i < n; ++i) {
      FiniteModel m = decode_model(sig, k, i, opts.identity_rel);
      Evaluator ev(m, opts.eval);
      if (auto env = try_envs(ev, f, k, grid))
        return ModelEnv{std::move(m), *env};
    }
    return std::nullopt;
  }

  if (static_cast<std::uint64_t>(jobs) > n) jobs = static_cast<unsigned>(n);
  std::atomic<std::uint64_t> best{n};
  struct Hit {
    std::uint64_t index;
    Assignment env;
  };
  std::vector<std::optional<Hit>> hits(jobs);
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) {
    workers.emplace_back([&, t] {
      std::uint64_t lo = n * t / jobs, hi = n * (t + 1) / jobs;
      for (std::uint64_t i = lo; i < hi; ++i) {
        if (i >= best.load(std::memory_order_relaxed)) break;
        FiniteModel m = decode_model(sig, k, i, opts.identity_rel);
        Evaluator ev(m, opts.eval);
        if (auto env = try_envs(ev, f, k, grid)) {
          hits[t] = Hit{i, *env};
          std::uint64_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
          break;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  const Hit* winner = nullptr;
  for (const auto& h : hits)
    if (h && (!winner || h->index < winner->index)) winner = &*h;
  if (!winner) return std::nullopt;
  return ModelEnv{decode_model(sig, k, winner->index, opts.identity_rel), winner->env};
}

std::optional<ModelEnv> fsat_lazy(const Signature& sig, const Formula& f,
                                  unsigned k, const SearchOptions& opts) {
  EnvGrid grid(f, k);
  PartialModel pm(sig, k);
  Lazy lazy(k, pm);
  auto pin_identity = [&] {
    if (!opts.identity_rel) return;
    auto& t = pm.rels[*opts.identity_rel];
    for (unsigned x = 0; x < k; ++x)
      for (unsigned y = 0; y < k; ++y)
        t[static_cast<std::size_t>(x) * k + y] = x == y ? 1 : 0;
  };

  struct Choice {
    Cell cell;
    unsigned next;
  };
  std::vector<unsigned> vals(grid.fv.size(), 0);
  while (true) {
    Assignment env = grid.assignment(vals);
    pm.reset();
    pin_identity();
    std::vector<Choice> trail;
    while (true) {
      int v = lazy.eval(env, f);
      if (v == Lazy::T) return ModelEnv{complete_defaults(sig, k, pm), env};
      if (v == Lazy::U) {
        Cell c = lazy.stuck;
        if (c.is_fun)
          pm.funs[c.sym][c.flat] = 0;
        else
          pm.rels[c.sym][c.flat] = 0;
        trail.push_back({c, 0});
        continue;
      }
      bool advanced = false;
      while (!trail.empty()) {
        Choice& top = trail.back();
        unsigned radix = top.cell.is_fun ? k : 2;
        if (++top.next < radix) {
          if (top.cell.is_fun)
            pm.funs[top.cell.sym][top.cell.flat] = static_cast<int>(top.next);
          else
            pm.rels[top.cell.sym][top.cell.flat] = static_cast<int8_t>(top.next);
          advanced = true;
          break;
        }
        if (top.cell.is_fun)
          pm.funs[top.cell.sym][top.cell.flat] = -1;
        else
          pm.rels[top.cell.sym][top.cell.flat] = -1;
        trail.pop_back();
      }
      if (!advanced) break;
    }
    if (!next_tuple(vals, k)) return std::nullopt;
  }
}

}  // namespace detail

Verdict Verdict::sat(ModelEnv w) {
  Verdict v;
  v.kind = Kind::Sat;
  v.bound = w.model.size();
  v.witness = std::move(w);
  return v;
}

Verdict Verdict::unsat(unsigned bound) {
  Verdict v;
  v.kind = Kind::Unsat;
  v.bound = bound;
  return v;
}

Verdict Verdict::unknown(unsigned bound) {
  Verdict v;
  v.kind = Kind::Unknown;
  v.bound = bound;
  return v;
}

std::optional<ModelEnv> fsat_on_domain(const Signature& sig, const Formula& f,
                                       unsigned k, const SearchOptions& opts) {
  if (k == 0) throw PreconditionError("domain size must be positive");
  if (opts.identity_rel) {
    if (*opts.identity_rel >= sig.rel_count())
      throw PreconditionError("identity relation index out of range");
    if (sig.rel(*opts.identity_rel).arity != 2)
      throw ArityError(sig.rel(*opts.identity_rel).name, 2,
                       sig.rel(*opts.identity_rel).arity);
  }
  if (detail::model_space_within(sig, k, opts.enumeration_limit, nullptr, opts.identity_rel))
    return detail::fsat_enumerate(sig, f, k, opts);
  return detail::fsat_lazy(sig, f, k, opts);
}

Verdict fsat_fixed(const Signature& sig, const Formula& f, unsigned k,
                   const SearchOptions& opts) {
  if (auto w = fsat_on_domain(sig, f, k, opts)) return Verdict::sat(std::move(*w));
  return Verdict::unsat(k);
}

Verdict fsat(const Signature& sig, const Formula& f, unsigned max_size,
             const SearchOptions& opts) {
  for (unsigned k = 1; k <= max_size; ++k)
    if (auto w = fsat_on_domain(sig, f, k, opts)) return Verdict::sat(std::move(*w));
  return Verdict::unknown(max_size);
}

}  // namespace folmt
