#include "folmt/monadic.hpp"

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "folmt/errors.hpp"
#include "folmt/eval.hpp"
#include "folmt/model.hpp"
#include "folmt/reductions.hpp"

namespace folmt {

Verdict monadic_rel_decide(const Signature& sig, const Formula& f,
                           const MonadicOptions& opts) {
  validate(sig, f);
  if (sig.func_count() != 0)
    throw PreconditionError("monadic_rel_decide: signature has functions");
  for (const auto& d : sig.rels())
    if (d.arity != 1)
      throw PreconditionError("monadic_rel_decide: relation '" + d.name + "' is not unary");
  unsigned n = sig.rel_count();
  if (n > opts.rel_cap)
    throw CapExceededError("monadic_rel_decide: " + std::to_string(n) +
                           " relations, cap is " + std::to_string(opts.rel_cap));

  unsigned vecs = 1u << n;
  std::uint64_t masks = std::uint64_t{1} << vecs;
  auto fv = free_vars(f);
  unsigned width = fv.empty() ? 0 : fv.back() + 1;

  for (std::uint64_t mask = 1; mask < masks; ++mask) {
    std::vector<unsigned> domain;
    for (unsigned v = 0; v < vecs; ++v)
      if (mask >> v & 1) domain.push_back(v);
    unsigned k = static_cast<unsigned>(domain.size());
    FiniteModel m(sig, k);
    for (unsigned e = 0; e < k; ++e)
      for (unsigned i = 0; i < n; ++i)
        m.set_rel(i, std::vector<unsigned>{e}, domain[e] >> i & 1);

    Evaluator ev(m);
    std::vector<unsigned> vals(fv.size(), 0);
    do {
      Assignment env;
      env.prefix.assign(width, 0);
      for (std::size_t j = 0; j < fv.size(); ++j) env.prefix[fv[j]] = vals[j];
      if (ev.check(env, f)) return Verdict::sat(ModelEnv{std::move(m), std::move(env)});
    } while (next_tuple(vals, k));
  }
  return Verdict::unsat(vecs);
}

Verdict monadic_decide(const Signature& sig, const Formula& f,
                       const MonadicOptions& opts) {
  ReductionResult acc = zero_arity_lift(sig, f);
  auto step = [&acc](ReductionResult next) { acc = compose(std::move(acc), std::move(next)); };
  step(sig_gc(acc.out_sig, acc.out_formula));
  step(monadic_fun_elim(acc.out_sig, acc.out_formula));
  if (acc.out_sig.rel_count() > opts.rel_cap)
    throw CapExceededError("monadic_decide: function elimination needs " +
                           std::to_string(acc.out_sig.rel_count()) +
                           " relations, cap is " + std::to_string(opts.rel_cap));
  Verdict v = monadic_rel_decide(acc.out_sig, acc.out_formula, opts);
  if (v.kind == Verdict::Kind::Sat) return Verdict::sat(acc.backward(*v.witness));
  return v;
}

}  // namespace folmt
