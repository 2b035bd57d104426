#include "folmt/reductions.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "folmt/errors.hpp"
#include "folmt/eval.hpp"
#include "folmt/hfs.hpp"

namespace folmt {

namespace {

StageInfo stage(std::string name, const Signature& in, const Signature& out) {
  return {std::move(name), in.func_count(), in.rel_count(), out.func_count(), out.rel_count()};
}

// First de Bruijn index above every free variable; fresh variables of a
// stage live at base, base+1, ... (shifted by the binder depth at the
// point of use).
unsigned fresh_base(const Formula& f) {
  auto fv = free_vars(f);
  return fv.empty() ? 0u : fv.back() + 1u;
}

unsigned clamped(unsigned v, unsigned k) { return v < k ? v : 0; }

template <class Fn>
Assignment remap_env(const Assignment& e, const Fn& g) {
  Assignment out;
  out.prefix.reserve(e.prefix.size());
  for (unsigned v : e.prefix) out.prefix.push_back(g(v));
  out.fallback = g(e.fallback);
  return out;
}

// Reads the first `width` positions of e, then appends the extras.
Assignment extend_env(const Assignment& e, unsigned width, const std::vector<unsigned>& extra) {
  Assignment out;
  out.prefix.reserve(width + extra.size());
  for (unsigned i = 0; i < width; ++i) out.prefix.push_back(e(i));
  out.prefix.insert(out.prefix.end(), extra.begin(), extra.end());
  out.fallback = e.fallback;
  return out;
}

template <class Fn>
void for_tuples(unsigned k, unsigned arity, const Fn& fn) {
  std::vector<unsigned> t(arity, 0);
  do {
    fn(t);
  } while (next_tuple(t, k));
}

// Rebuilds f bottom-up, replacing atoms via atom_fn(atom, depth) and
// keeping everything else; depth counts enclosing binders.
template <class AtomFn>
Formula map_atoms(const Formula& f, unsigned depth, const AtomFn& atom_fn) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Atom:
      return atom_fn(f, depth);
    case Formula::Kind::Impl:
      return Formula::impl(map_atoms(f.left(), depth, atom_fn), map_atoms(f.right(), depth, atom_fn));
    case Formula::Kind::And:
      return Formula::conj(map_atoms(f.left(), depth, atom_fn), map_atoms(f.right(), depth, atom_fn));
    case Formula::Kind::Or:
      return Formula::disj(map_atoms(f.left(), depth, atom_fn), map_atoms(f.right(), depth, atom_fn));
    case Formula::Kind::All:
      return Formula::all(map_atoms(f.body(), depth + 1, atom_fn));
    case Formula::Kind::Ex:
      return Formula::ex(map_atoms(f.body(), depth + 1, atom_fn));
  }
  return f;
}

ModelEnv identity_transport(const ModelEnv& me) { return me; }

}  // namespace

// ---------------------------------------------------------------------------
// eq_elim

ReductionResult eq_elim(const Signature& sig, const Formula& f, unsigned eqsym) {
  validate(sig, f);
  if (eqsym >= sig.rel_count()) throw PreconditionError("eq_elim: relation index out of range");
  if (sig.rel(eqsym).arity != 2) throw ArityError(sig.rel(eqsym).name, 2, sig.rel(eqsym).arity);

  auto eq = [eqsym](unsigned a, unsigned b) {
    return Formula::atom(eqsym, {Term::var(a), Term::var(b)});
  };

  Formula refl = Formula::all(eq(0, 0));
  Formula sym = Formula::all(Formula::all(Formula::impl(eq(1, 0), eq(0, 1))));
  Formula trans = Formula::all(Formula::all(
      Formula::all(Formula::impl(eq(2, 1), Formula::impl(eq(1, 0), eq(2, 0))))));

  std::vector<Formula> axioms{refl, sym, trans};

  // Congruence under 2a binders: x_j at 2a-1-j, y_j at a-1-j.
  OccurringSymbols occ = syms(f);
  auto close = [](Formula g, unsigned binders) {
    for (unsigned i = 0; i < binders; ++i) g = Formula::all(std::move(g));
    return g;
  };
  for (unsigned fi : occ.funcs) {
    unsigned a = sig.func(fi).arity;
    std::vector<Term> xs, ys;
    for (unsigned j = 0; j < a; ++j) {
      xs.push_back(Term::var(2 * a - 1 - j));
      ys.push_back(Term::var(a - 1 - j));
    }
    Formula ax = Formula::atom(eqsym, {Term::app(fi, xs), Term::app(fi, ys)});
    for (unsigned j = a; j-- > 0;)
      ax = Formula::impl(eq(2 * a - 1 - j, a - 1 - j), std::move(ax));
    axioms.push_back(close(std::move(ax), 2 * a));
  }
  for (unsigned ri : occ.rels) {
    unsigned a = sig.rel(ri).arity;
    std::vector<Term> xs, ys;
    for (unsigned j = 0; j < a; ++j) {
      xs.push_back(Term::var(2 * a - 1 - j));
      ys.push_back(Term::var(a - 1 - j));
    }
    Formula ax = Formula::impl(Formula::atom(ri, xs), Formula::atom(ri, ys));
    for (unsigned j = a; j-- > 0;)
      ax = Formula::impl(eq(2 * a - 1 - j, a - 1 - j), std::move(ax));
    axioms.push_back(close(std::move(ax), 2 * a));
  }

  ReductionResult r;
  r.out_sig = sig;
  r.out_formula = Formula::conj(f, big_and(axioms));
  r.forward = identity_transport;
  r.backward = [sig, eqsym](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    const auto& t = m.rel_table(eqsym);
    // Components of the (symmetrized) eq table; honest inputs make it an
    // equivalence already, the closure just keeps malformed ones total.
    constexpr unsigned kNone = ~0u;
    std::vector<unsigned> cls(k, kNone);
    std::vector<unsigned> reps;
    for (unsigned x = 0; x < k; ++x) {
      if (cls[x] != kNone) continue;
      unsigned c = static_cast<unsigned>(reps.size());
      reps.push_back(x);
      std::vector<unsigned> work{x};
      cls[x] = c;
      while (!work.empty()) {
        unsigned u = work.back();
        work.pop_back();
        for (unsigned v = 0; v < k; ++v) {
          if (cls[v] == kNone &&
              (t[static_cast<std::size_t>(u) * k + v] || t[static_cast<std::size_t>(v) * k + u])) {
            cls[v] = c;
            work.push_back(v);
          }
        }
      }
    }
    unsigned kq = static_cast<unsigned>(reps.size());
    FiniteModel out(sig, kq);
    std::vector<unsigned> args;
    for (unsigned fi = 0; fi < sig.func_count(); ++fi) {
      unsigned a = sig.func(fi).arity;
      args.assign(a, 0);
      for_tuples(kq, a, [&](const std::vector<unsigned>& p) {
        for (unsigned j = 0; j < a; ++j) args[j] = reps[p[j]];
        out.set_fun(fi, p, cls[m.fun(fi, args)]);
      });
    }
    for (unsigned ri = 0; ri < sig.rel_count(); ++ri) {
      unsigned a = sig.rel(ri).arity;
      args.assign(a, 0);
      for_tuples(kq, a, [&](const std::vector<unsigned>& p) {
        for (unsigned j = 0; j < a; ++j) args[j] = reps[p[j]];
        out.set_rel(ri, p, m.rel(ri, args));
      });
    }
    Assignment env = remap_env(me.env, [&](unsigned v) { return cls[clamped(v, k)]; });
    return ModelEnv{std::move(out), std::move(env)};
  };
  r.trace = {stage("eq-elim", sig, sig)};
  return r;
}

// ---------------------------------------------------------------------------
// sig_gc

ReductionResult sig_gc(const Signature& sig, const Formula& f) {
  validate(sig, f);
  OccurringSymbols occ = syms(f);
  std::vector<SymbolDecl> nf, nr;
  std::vector<unsigned> fmap(sig.func_count(), 0), rmap(sig.rel_count(), 0);
  for (unsigned fi : occ.funcs) {
    fmap[fi] = static_cast<unsigned>(nf.size());
    nf.push_back(sig.func(fi));
  }
  for (unsigned ri : occ.rels) {
    rmap[ri] = static_cast<unsigned>(nr.size());
    nr.push_back(sig.rel(ri));
  }
  Signature out(nf, nr);

  ReductionResult r;
  r.out_sig = out;
  r.out_formula = map_symbols(f, sig, out, fmap, rmap);
  r.forward = [out, occ](const ModelEnv& me) {
    FiniteModel m2(out, me.model.size());
    for (unsigned i = 0; i < occ.funcs.size(); ++i) m2.fun_table(i) = me.model.fun_table(occ.funcs[i]);
    for (unsigned i = 0; i < occ.rels.size(); ++i) m2.rel_table(i) = me.model.rel_table(occ.rels[i]);
    return ModelEnv{std::move(m2), me.env};
  };
  r.backward = [sig, occ](const ModelEnv& me) {
    FiniteModel m2(sig, me.model.size());
    for (unsigned i = 0; i < occ.funcs.size(); ++i) m2.fun_table(occ.funcs[i]) = me.model.fun_table(i);
    for (unsigned i = 0; i < occ.rels.size(); ++i) m2.rel_table(occ.rels[i]) = me.model.rel_table(i);
    return ModelEnv{std::move(m2), me.env};
  };
  r.trace = {stage("sig-gc", sig, out)};
  return r;
}

// ---------------------------------------------------------------------------
// fun_elim

namespace {

// Formula stating Var(x) equals the value of t, over the fun_elim output
// signature: eq at relation 0, function fi graphed at relation 1+fi.
// Non-variable subterms get a fresh existential each; variables are used
// in place.
Formula term_graph(unsigned x, const Term& t) {
  if (t.is_var()) return Formula::atom(0, {Term::var(x), Term::var(t.index())});
  const auto& us = t.args();
  std::vector<unsigned> nonvar;
  for (unsigned i = 0; i < us.size(); ++i)
    if (!us[i].is_var()) nonvar.push_back(i);
  unsigned m = static_cast<unsigned>(nonvar.size());

  std::vector<Term> args;
  args.reserve(us.size() + 1);
  unsigned slot = 0;
  for (unsigned i = 0; i < us.size(); ++i) {
    if (us[i].is_var())
      args.push_back(Term::var(us[i].index() + m));
    else
      args.push_back(Term::var(m - 1 - slot++));
  }
  args.push_back(Term::var(x + m));

  std::vector<Formula> parts;
  for (unsigned j = 0; j < m; ++j)
    parts.push_back(term_graph(m - 1 - j, lift(us[nonvar[j]], m)));
  parts.push_back(Formula::atom(1 + t.func(), std::move(args)));
  Formula g = big_and(parts);
  for (unsigned j = 0; j < m; ++j) g = Formula::ex(std::move(g));
  return g;
}

}  // namespace

ReductionResult fun_elim(const Signature& sig, const Formula& f) {
  validate(sig, f);
  unsigned nf = sig.func_count();

  // Output relations: fresh equality, one graph per function, then the
  // original relations. Original names win collisions.
  std::vector<std::string> taken;
  for (const auto& d : sig.rels()) taken.push_back(d.name);
  std::vector<SymbolDecl> rels;
  std::vector<std::string> graph_names;
  for (const auto& d : sig.funcs()) {
    std::string n = unique_name(d.name, taken);
    taken.push_back(n);
    graph_names.push_back(n);
  }
  std::string eq_name = unique_name("eq", taken);
  rels.push_back({eq_name, 2});
  for (unsigned i = 0; i < nf; ++i) rels.push_back({graph_names[i], sig.func(i).arity + 1});
  for (const auto& d : sig.rels()) rels.push_back(d);
  Signature out({}, rels);

  Formula body = map_atoms(f, 0, [&](const Formula& at, unsigned) {
    const auto& ts = at.args();
    unsigned rel_out = 1 + nf + at.rel();
    std::vector<unsigned> nonvar;
    for (unsigned i = 0; i < ts.size(); ++i)
      if (!ts[i].is_var()) nonvar.push_back(i);
    if (nonvar.empty()) return Formula::atom(rel_out, ts);
    unsigned m = static_cast<unsigned>(nonvar.size());
    std::vector<Term> args;
    unsigned slot = 0;
    for (unsigned i = 0; i < ts.size(); ++i) {
      if (ts[i].is_var())
        args.push_back(Term::var(ts[i].index() + m));
      else
        args.push_back(Term::var(m - 1 - slot++));
    }
    std::vector<Formula> parts;
    for (unsigned j = 0; j < m; ++j)
      parts.push_back(term_graph(m - 1 - j, lift(ts[nonvar[j]], m)));
    parts.push_back(Formula::atom(rel_out, std::move(args)));
    Formula g = big_and(parts);
    for (unsigned j = 0; j < m; ++j) g = Formula::ex(std::move(g));
    return g;
  });

  // Per function: the graph is total and functional.
  std::vector<Formula> parts{body};
  for (unsigned fi = 0; fi < nf; ++fi) {
    unsigned a = sig.func(fi).arity;
    std::vector<Term> xs;
    for (unsigned j = 0; j < a; ++j) xs.push_back(Term::var(a - j));
    std::vector<Term> tot_args = xs;
    tot_args.push_back(Term::var(0));
    Formula tot = Formula::ex(Formula::atom(1 + fi, std::move(tot_args)));
    for (unsigned j = 0; j < a; ++j) tot = Formula::all(std::move(tot));
    parts.push_back(std::move(tot));

    std::vector<Term> ys;
    for (unsigned j = 0; j < a; ++j) ys.push_back(Term::var(a + 1 - j));
    std::vector<Term> with_y = ys, with_z = ys;
    with_y.push_back(Term::var(1));
    with_z.push_back(Term::var(0));
    Formula fun = Formula::impl(
        Formula::atom(1 + fi, std::move(with_y)),
        Formula::impl(Formula::atom(1 + fi, std::move(with_z)),
                      Formula::atom(0, {Term::var(1), Term::var(0)})));
    for (unsigned j = 0; j < a + 2; ++j) fun = Formula::all(std::move(fun));
    parts.push_back(std::move(fun));
  }

  ReductionResult r;
  r.out_sig = out;
  r.out_formula = big_and(parts);
  r.eq_rel = 0;
  r.forward = [sig, out, nf](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    FiniteModel m2(out, k);
    for (unsigned x = 0; x < k; ++x) m2.set_rel(0, std::vector<unsigned>{x, x}, true);
    std::vector<unsigned> ext;
    for (unsigned fi = 0; fi < nf; ++fi) {
      unsigned a = sig.func(fi).arity;
      for_tuples(k, a, [&](const std::vector<unsigned>& v) {
        ext = v;
        ext.push_back(m.fun(fi, v));
        m2.set_rel(1 + fi, ext, true);
      });
    }
    for (unsigned ri = 0; ri < sig.rel_count(); ++ri) m2.rel_table(1 + nf + ri) = m.rel_table(ri);
    return ModelEnv{std::move(m2), me.env};
  };
  r.backward = [sig, nf](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    FiniteModel m2(sig, k);
    std::vector<unsigned> ext;
    for (unsigned fi = 0; fi < nf; ++fi) {
      unsigned a = sig.func(fi).arity;
      for_tuples(k, a, [&](const std::vector<unsigned>& v) {
        ext = v;
        ext.push_back(0);
        unsigned y = k;
        for (unsigned c = 0; c < k; ++c) {
          ext.back() = c;
          if (m.rel(1 + fi, ext)) {
            y = c;
            break;
          }
        }
        if (y == k) throw MalformedModelError("function graph has no value");
        m2.set_fun(fi, v, y);
      });
    }
    for (unsigned ri = 0; ri < sig.rel_count(); ++ri) m2.rel_table(ri) = m.rel_table(1 + nf + ri);
    return ModelEnv{std::move(m2), me.env};
  };
  r.trace = {stage("fun-elim", sig, out)};
  return r;
}

// ---------------------------------------------------------------------------
// arity_pad

ReductionResult arity_pad(const Signature& sig, const Formula& f, unsigned n) {
  validate(sig, f);
  for (const auto& d : sig.rels())
    if (d.arity > n)
      throw PreconditionError("arity_pad: relation '" + d.name + "' has arity above " +
                              std::to_string(n));

  unsigned base = fresh_base(f);
  std::vector<SymbolDecl> rels;
  for (const auto& d : sig.rels()) rels.push_back({d.name, n});
  Signature out(sig.funcs(), rels);

  Formula body = map_atoms(f, 0, [&](const Formula& at, unsigned depth) {
    std::vector<Term> args = at.args();
    while (args.size() < n) args.push_back(Term::var(base + depth));
    return Formula::atom(at.rel(), std::move(args));
  });

  ReductionResult r;
  r.out_sig = out;
  r.out_formula = body;
  r.forward = [sig, out, base, n](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    FiniteModel m2(out, k);
    for (unsigned fi = 0; fi < sig.func_count(); ++fi) m2.fun_table(fi) = m.fun_table(fi);
    for (unsigned ri = 0; ri < sig.rel_count(); ++ri) {
      unsigned a = sig.rel(ri).arity;
      for_tuples(k, n, [&](const std::vector<unsigned>& t) {
        m2.set_rel(ri, t, m.rel(ri, std::span<const unsigned>(t.data(), a)));
      });
    }
    return ModelEnv{std::move(m2), extend_env(me.env, base, {0})};
  };
  r.backward = [sig, base, n](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    unsigned pad = clamped(me.env(base), k);
    FiniteModel m2(sig, k);
    for (unsigned fi = 0; fi < sig.func_count(); ++fi) m2.fun_table(fi) = m.fun_table(fi);
    std::vector<unsigned> ext;
    for (unsigned ri = 0; ri < sig.rel_count(); ++ri) {
      unsigned a = sig.rel(ri).arity;
      for_tuples(k, a, [&](const std::vector<unsigned>& t) {
        ext = t;
        ext.resize(n, pad);
        m2.set_rel(ri, t, m.rel(ri, ext));
      });
    }
    return ModelEnv{std::move(m2), me.env};
  };
  r.trace = {stage("arity-pad:" + std::to_string(n), sig, out)};
  return r;
}

// ---------------------------------------------------------------------------
// rel_merge

ReductionResult rel_merge(const Signature& sig, const Formula& f) {
  validate(sig, f);
  if (sig.func_count() != 0) throw PreconditionError("rel_merge: signature still has functions");
  if (sig.rel_count() == 0) throw PreconditionError("rel_merge: no relations");
  unsigned n = sig.rel(0).arity;
  for (const auto& d : sig.rels())
    if (d.arity != n) throw PreconditionError("rel_merge: relation arities are not uniform");
  unsigned nr = sig.rel_count();

  std::vector<SymbolDecl> consts;
  for (const auto& d : sig.rels()) consts.push_back({d.name, 0});
  Signature out(consts, {{"Q", n + 1}});

  Formula body = map_atoms(f, 0, [&](const Formula& at, unsigned) {
    std::vector<Term> args{Term::app(at.rel(), {})};
    for (const Term& t : at.args()) args.push_back(t);
    return Formula::atom(0, std::move(args));
  });

  ReductionResult r;
  r.out_sig = out;
  r.out_formula = body;
  r.forward = [sig, out, n, nr](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    unsigned k2 = k + nr;
    FiniteModel m2(out, k2);
    for (unsigned i = 0; i < nr; ++i) m2.set_fun(i, {}, k + i);
    // Cells whose tag slot holds a non-constant element never feed an
    // atom; extra elements in argument slots act like element 0.
    std::vector<unsigned> mapped(n, 0);
    for_tuples(k2, n + 1, [&](const std::vector<unsigned>& t) {
      if (t[0] < k) return;
      unsigned i = t[0] - k;
      for (unsigned j = 0; j < n; ++j) mapped[j] = clamped(t[j + 1], k);
      if (m.rel(i, mapped)) m2.set_rel(0, t, true);
    });
    return ModelEnv{std::move(m2), me.env};
  };
  r.backward = [sig, n, nr](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    FiniteModel m2(sig, k);
    std::vector<unsigned> ext(n + 1, 0);
    for (unsigned i = 0; i < nr; ++i) {
      ext[0] = m.fun(i, {});
      for_tuples(k, n, [&](const std::vector<unsigned>& t) {
        std::copy(t.begin(), t.end(), ext.begin() + 1);
        m2.set_rel(i, t, m.rel(0, ext));
      });
    }
    return ModelEnv{std::move(m2), me.env};
  };
  r.trace = {stage("rel-merge", sig, out)};
  return r;
}

// ---------------------------------------------------------------------------
// const_elim

ReductionResult const_elim(const Signature& sig, const Formula& f) {
  validate(sig, f);
  for (const auto& d : sig.funcs())
    if (d.arity != 0)
      throw PreconditionError("const_elim: function '" + d.name + "' is not a constant");
  unsigned nc = sig.func_count();
  unsigned base = fresh_base(f);
  Signature out({}, sig.rels());

  Formula body = map_atoms(f, 0, [&](const Formula& at, unsigned depth) {
    std::vector<Term> args;
    for (const Term& t : at.args())
      args.push_back(t.is_var() ? t : Term::var(base + t.func() + depth));
    return Formula::atom(at.rel(), std::move(args));
  });

  ReductionResult r;
  r.out_sig = out;
  r.out_formula = body;
  r.forward = [out, base, nc](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    FiniteModel m2(out, m.size());
    for (unsigned ri = 0; ri < out.rel_count(); ++ri) m2.rel_table(ri) = m.rel_table(ri);
    std::vector<unsigned> extra;
    for (unsigned i = 0; i < nc; ++i) extra.push_back(m.fun(i, {}));
    return ModelEnv{std::move(m2), extend_env(me.env, base, extra)};
  };
  r.backward = [sig, base, nc](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    FiniteModel m2(sig, k);
    for (unsigned i = 0; i < nc; ++i) m2.set_fun(i, {}, clamped(me.env(base + i), k));
    for (unsigned ri = 0; ri < sig.rel_count(); ++ri) m2.rel_table(ri) = m.rel_table(ri);
    return ModelEnv{std::move(m2), me.env};
  };
  r.trace = {stage("const-elim", sig, out)};
  return r;
}

// ---------------------------------------------------------------------------
// nary_to_membership

namespace {

// Builders over the membership signature; arguments are de Bruijn indices
// valid at the point of splicing. Every quantifier is guarded by a
// membership atom on its bound variable, which the evaluator turns into
// iteration over actual members.
Formula mem_at(unsigned a, unsigned b) {
  return Formula::atom(0, {Term::var(a), Term::var(b)});
}

// Extensional equality of x and y.
Formula mem_eqe(unsigned x, unsigned y) {
  return Formula::conj(
      Formula::all(Formula::impl(mem_at(0, x + 1), mem_at(0, y + 1))),
      Formula::all(Formula::impl(mem_at(0, y + 1), mem_at(0, x + 1))));
}

// x = {p}, up to extensionality.
Formula mem_singleton(unsigned x, unsigned p) {
  return Formula::conj(
      mem_at(p, x),
      Formula::all(Formula::impl(mem_at(0, x + 1), mem_eqe(0, p + 1))));
}

// x = {p, q}.
Formula mem_upair(unsigned x, unsigned p, unsigned q) {
  return big_and({mem_at(p, x), mem_at(q, x),
                  Formula::all(Formula::impl(
                      mem_at(0, x + 1),
                      Formula::disj(mem_eqe(0, p + 1), mem_eqe(0, q + 1))))});
}

// x = {{p},{p,q}}.
Formula mem_ispair(unsigned x, unsigned p, unsigned q) {
  return big_and(
      {Formula::ex(Formula::conj(mem_at(0, x + 1), mem_singleton(0, p + 1))),
       Formula::ex(Formula::conj(mem_at(0, x + 1), mem_upair(0, p + 1, q + 1))),
       Formula::all(Formula::impl(
           mem_at(0, x + 1),
           Formula::disj(mem_singleton(0, p + 1), mem_upair(0, p + 1, q + 1))))});
}

// t is the right-nested tuple of vs (vs.size() >= 2).
Formula mem_istuple(unsigned t, std::vector<unsigned> vs) {
  if (vs.size() == 2) return mem_ispair(t, vs[0], vs[1]);
  std::vector<unsigned> rest(vs.begin() + 1, vs.end());
  for (auto& v : rest) v += 2;
  Formula inner = Formula::conj(mem_ispair(t + 2, vs[0] + 2, 0), mem_istuple(0, std::move(rest)));
  return Formula::ex(Formula::conj(
      mem_at(0, t + 1),
      Formula::ex(Formula::conj(mem_at(0, 1), std::move(inner)))));
}

// The tuple of args is a member of r.
Formula mem_expand_atom(std::vector<unsigned> args, unsigned r) {
  if (args.size() == 1) return mem_at(args[0], r);
  for (auto& v : args) v += 1;
  return Formula::ex(Formula::conj(mem_at(0, r + 1), mem_istuple(0, std::move(args))));
}

Formula mem_relativize(const Formula& f, unsigned q, unsigned base) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Atom: {
      std::vector<unsigned> args;
      for (const Term& t : f.args()) args.push_back(t.index());
      return mem_expand_atom(std::move(args), base + q + 1);
    }
    case Formula::Kind::Impl:
      return Formula::impl(mem_relativize(f.left(), q, base), mem_relativize(f.right(), q, base));
    case Formula::Kind::And:
      return Formula::conj(mem_relativize(f.left(), q, base), mem_relativize(f.right(), q, base));
    case Formula::Kind::Or:
      return Formula::disj(mem_relativize(f.left(), q, base), mem_relativize(f.right(), q, base));
    case Formula::Kind::All:
      return Formula::all(Formula::impl(mem_at(0, base + q + 1),
                                        mem_relativize(f.body(), q + 1, base)));
    case Formula::Kind::Ex:
      return Formula::ex(Formula::conj(mem_at(0, base + q + 1),
                                       mem_relativize(f.body(), q + 1, base)));
  }
  return f;
}

}  // namespace

ReductionResult nary_to_membership(const Signature& sig, const Formula& f) {
  validate(sig, f);
  if (sig.func_count() != 0)
    throw PreconditionError("nary_to_membership: signature still has functions");
  if (sig.rel_count() != 1)
    throw PreconditionError("nary_to_membership: expected exactly one relation");
  unsigned n = sig.rel(0).arity;
  if (n == 0) throw PreconditionError("nary_to_membership: relation must have positive arity");

  unsigned base = fresh_base(f);  // d at base, r at base+1
  Signature out = membership_signature();

  // Membership respects extensional equality.
  Formula ext = Formula::all(Formula::all(Formula::impl(
      mem_eqe(1, 0),
      Formula::all(Formula::impl(mem_at(2, 0), mem_at(1, 0))))));
  Formula nonempty = Formula::ex(mem_at(0, base + 1));
  std::vector<Formula> fv_parts;
  for (unsigned x : free_vars(f)) fv_parts.push_back(mem_at(x, base));

  ReductionResult r;
  r.out_sig = out;
  r.out_formula = big_and({ext, nonempty, big_and(fv_parts), mem_relativize(f, 0, base)});
  r.forward = [n, base](const ModelEnv& me) {
    MembershipModel mm = relation_to_membership_model(me.model.size(), n, me.model.rel_table(0));
    FiniteModel m2 = membership_to_finite_model(mm);
    unsigned k = me.model.size();
    Assignment env;
    for (unsigned i = 0; i < base; ++i) env.prefix.push_back(mm.embed[clamped(me.env(i), k)]);
    env.prefix.push_back(mm.d_index);
    env.prefix.push_back(mm.r_index);
    env.fallback = mm.embed[clamped(me.env.fallback, k)];
    return ModelEnv{std::move(m2), std::move(env)};
  };
  r.backward = [sig, n, base](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    unsigned dv = clamped(me.env(base), k);
    unsigned rv = clamped(me.env(base + 1), k);
    std::vector<unsigned> dom;
    for (unsigned a = 0; a < k; ++a)
      if (m.rel(0, std::vector<unsigned>{a, dv})) dom.push_back(a);
    if (dom.empty()) throw MalformedModelError("membership model has an empty domain set");
    unsigned k2 = static_cast<unsigned>(dom.size());

    std::vector<unsigned> idx;
    for (unsigned j = 0; j < n; ++j) idx.push_back(j);
    Formula probe = mem_expand_atom(std::move(idx), n);
    EvalOptions opts;
    opts.memo = 1;
    opts.guard = 1;
    Evaluator ev(m, opts);

    FiniteModel m2(sig, k2);
    Assignment probe_env;
    probe_env.prefix.assign(n + 1, 0);
    probe_env.prefix[n] = rv;
    for_tuples(k2, n, [&](const std::vector<unsigned>& t) {
      for (unsigned j = 0; j < n; ++j) probe_env.prefix[j] = dom[t[j]];
      if (ev.check(probe_env, probe)) m2.set_rel(0, t, true);
    });

    auto back = [&](unsigned v) {
      auto it = std::lower_bound(dom.begin(), dom.end(), v);
      return (it != dom.end() && *it == v) ? static_cast<unsigned>(it - dom.begin()) : 0u;
    };
    Assignment env = remap_env(me.env, [&](unsigned v) { return back(clamped(v, k)); });
    return ModelEnv{std::move(m2), std::move(env)};
  };
  r.trace = {stage("to-membership", sig, out)};
  return r;
}

// ---------------------------------------------------------------------------
// membership_to_fun

namespace {

// Q(f(a, b, a, ..., a)) with n function slots.
Formula fun_coded_atom(unsigned a, unsigned b, unsigned n) {
  std::vector<Term> args{Term::var(a), Term::var(b)};
  for (unsigned i = 2; i < n; ++i) args.push_back(Term::var(a));
  return Formula::atom(0, {Term::app(0, std::move(args))});
}

Formula fun_relativize(const Formula& f, unsigned q, unsigned base, unsigned n) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Atom:
      return fun_coded_atom(f.args()[0].index(), f.args()[1].index(), n);
    case Formula::Kind::Impl:
      return Formula::impl(fun_relativize(f.left(), q, base, n),
                           fun_relativize(f.right(), q, base, n));
    case Formula::Kind::And:
      return Formula::conj(fun_relativize(f.left(), q, base, n),
                           fun_relativize(f.right(), q, base, n));
    case Formula::Kind::Or:
      return Formula::disj(fun_relativize(f.left(), q, base, n),
                           fun_relativize(f.right(), q, base, n));
    case Formula::Kind::All:
      return Formula::all(Formula::impl(fun_coded_atom(base + q + 1, 0, n),
                                        fun_relativize(f.body(), q + 1, base, n)));
    case Formula::Kind::Ex:
      return Formula::ex(Formula::conj(fun_coded_atom(base + q + 1, 0, n),
                                       fun_relativize(f.body(), q + 1, base, n)));
  }
  return f;
}

}  // namespace

ReductionResult membership_to_fun(const Signature& sig, const Formula& f, unsigned n) {
  validate(sig, f);
  if (n < 2) throw PreconditionError("membership_to_fun: function arity must be at least 2");
  if (sig.func_count() != 0)
    throw PreconditionError("membership_to_fun: signature still has functions");
  if (sig.rel_count() != 1 || sig.rel(0).arity != 2)
    throw PreconditionError("membership_to_fun: expected exactly one binary relation");

  unsigned base = fresh_base(f);  // the domain marker d lives at base
  Signature out({{"f", n}}, {{"Q", 1}});

  Formula nonempty = Formula::ex(fun_coded_atom(base + 1, 0, n));
  std::vector<Formula> fv_parts;
  for (unsigned x : free_vars(f)) fv_parts.push_back(fun_coded_atom(base, x, n));

  ReductionResult r;
  r.out_sig = out;
  r.out_formula = big_and({nonempty, big_and(fv_parts), fun_relativize(f, 0, base, n)});
  r.forward = [out, base, n](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    // Pairs over {0..k}: source element x sits at x*(k+2) on the
    // diagonal, the marker d at (k+1)^2-1; everything else collapses to
    // the junk code k.
    unsigned kk = k + 1;
    std::size_t k2s = static_cast<std::size_t>(kk) * kk;
    if (k2s > (1u << 16)) throw CapExceededError("membership_to_fun: domain too large");
    unsigned k2 = static_cast<unsigned>(k2s);
    auto code = [&](unsigned v) {
      return (v % (k + 2) == 0 && v / (k + 2) < k) ? v / (k + 2) : k;
    };
    FiniteModel m2(out, k2);
    auto& ft = m2.fun_table(0);
    std::vector<unsigned> t(n, 0);
    std::size_t pos = 0;
    do {
      ft[pos++] = code(t[0]) * kk + code(t[1]);
    } while (next_tuple(t, k2));
    for (unsigned w = 0; w < k2; ++w) {
      unsigned a = w / kk, b = w % kk;
      bool val = (a == k && b < k) ||
                 (a < k && b < k && m.rel(0, std::vector<unsigned>{a, b}));
      m2.set_rel(0, std::vector<unsigned>{w}, val);
    }
    Assignment env;
    for (unsigned i = 0; i < base; ++i) env.prefix.push_back(clamped(me.env(i), k) * (k + 2));
    env.prefix.push_back(k2 - 1);
    env.fallback = clamped(me.env.fallback, k) * (k + 2);
    return ModelEnv{std::move(m2), std::move(env)};
  };
  r.backward = [sig, base, n](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    unsigned dv = clamped(me.env(base), k);
    auto holds = [&](unsigned a, unsigned b) {
      std::vector<unsigned> args{a, b};
      for (unsigned i = 2; i < n; ++i) args.push_back(a);
      return m.rel(0, std::vector<unsigned>{m.fun(0, args)});
    };
    std::vector<unsigned> dom;
    for (unsigned z = 0; z < k; ++z)
      if (holds(dv, z)) dom.push_back(z);
    if (dom.empty()) throw MalformedModelError("coded model has an empty domain predicate");
    unsigned k2 = static_cast<unsigned>(dom.size());
    FiniteModel m2(sig, k2);
    for (unsigned i = 0; i < k2; ++i)
      for (unsigned j = 0; j < k2; ++j)
        m2.set_rel(0, std::vector<unsigned>{i, j}, holds(dom[i], dom[j]));
    auto back = [&](unsigned v) {
      auto it = std::lower_bound(dom.begin(), dom.end(), v);
      return (it != dom.end() && *it == v) ? static_cast<unsigned>(it - dom.begin()) : 0u;
    };
    Assignment env = remap_env(me.env, [&](unsigned v) { return back(clamped(v, k)); });
    return ModelEnv{std::move(m2), std::move(env)};
  };
  r.trace = {stage("to-fun:" + std::to_string(n), sig, out)};
  return r;
}

// ---------------------------------------------------------------------------
// embed

namespace {

Term map_term_funcs(const Term& t, const std::vector<unsigned>& fmap) {
  if (t.is_var()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& u : t.args()) args.push_back(map_term_funcs(u, fmap));
  return Term::app(fmap[t.func()], std::move(args));
}

}  // namespace

ReductionResult embed(const Signature& sig, const Formula& f, const Signature& target) {
  validate(sig, f);
  std::vector<unsigned> fmap(sig.func_count(), 0), rmap(sig.rel_count(), 0);
  std::vector<char> fused(target.func_count(), 0), rused(target.rel_count(), 0);
  for (unsigned i = 0; i < sig.func_count(); ++i) {
    unsigned a = sig.func(i).arity;
    bool found = false;
    for (unsigned j = 0; j < target.func_count() && !found; ++j) {
      if (!fused[j] && target.func(j).arity == a) {
        fmap[i] = j;
        fused[j] = 1;
        found = true;
      }
    }
    if (!found)
      throw PreconditionError("embed: target has no spare function of arity " + std::to_string(a));
  }
  bool padded = false;
  for (unsigned i = 0; i < sig.rel_count(); ++i) {
    unsigned a = sig.rel(i).arity;
    unsigned best = target.rel_count();
    for (unsigned j = 0; j < target.rel_count(); ++j) {
      if (rused[j] || target.rel(j).arity < a) continue;
      if (best == target.rel_count() || target.rel(j).arity < target.rel(best).arity) best = j;
    }
    if (best == target.rel_count())
      throw PreconditionError("embed: target has no spare relation of arity at least " +
                              std::to_string(a));
    rmap[i] = best;
    rused[best] = 1;
    if (target.rel(best).arity > a) padded = true;
  }

  unsigned base = fresh_base(f);
  Formula body = map_atoms(f, 0, [&](const Formula& at, unsigned depth) {
    unsigned j = rmap[at.rel()];
    std::vector<Term> args;
    args.reserve(target.rel(j).arity);
    for (const Term& t : at.args()) args.push_back(map_term_funcs(t, fmap));
    while (args.size() < target.rel(j).arity) args.push_back(Term::var(base + depth));
    return Formula::atom(j, std::move(args));
  });

  ReductionResult r;
  r.out_sig = target;
  r.out_formula = body;
  r.forward = [sig, target, fmap, rmap, base, padded](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    FiniteModel m2(target, k);
    for (unsigned i = 0; i < sig.func_count(); ++i) m2.fun_table(fmap[i]) = m.fun_table(i);
    for (unsigned i = 0; i < sig.rel_count(); ++i) {
      unsigned a = sig.rel(i).arity;
      unsigned ta = target.rel(rmap[i]).arity;
      if (ta == a) {
        m2.rel_table(rmap[i]) = m.rel_table(i);
      } else {
        for_tuples(k, ta, [&](const std::vector<unsigned>& t) {
          m2.set_rel(rmap[i], t, m.rel(i, std::span<const unsigned>(t.data(), a)));
        });
      }
    }
    Assignment env = padded ? extend_env(me.env, base, {0}) : me.env;
    return ModelEnv{std::move(m2), std::move(env)};
  };
  r.backward = [sig, target, fmap, rmap, base, padded](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    unsigned pad = padded ? clamped(me.env(base), k) : 0;
    FiniteModel m2(sig, k);
    for (unsigned i = 0; i < sig.func_count(); ++i) m2.fun_table(i) = m.fun_table(fmap[i]);
    std::vector<unsigned> ext;
    for (unsigned i = 0; i < sig.rel_count(); ++i) {
      unsigned a = sig.rel(i).arity;
      unsigned ta = target.rel(rmap[i]).arity;
      if (ta == a) {
        m2.rel_table(i) = m.rel_table(rmap[i]);
      } else {
        for_tuples(k, a, [&](const std::vector<unsigned>& t) {
          ext = t;
          ext.resize(ta, pad);
          m2.set_rel(i, t, m.rel(rmap[i], ext));
        });
      }
    }
    return ModelEnv{std::move(m2), me.env};
  };
  r.trace = {stage("embed", sig, target)};
  return r;
}

// ---------------------------------------------------------------------------
// monadic_fun_elim

namespace {

// Words are function indices outermost-first: [i1..ik] applied to x reads
// f_i1(f_i2(...f_ik(x)...)).
struct WordRelLess {
  bool operator()(const std::pair<unsigned, std::vector<unsigned>>& a,
                  const std::pair<unsigned, std::vector<unsigned>>& b) const {
    if (a.first != b.first) return a.first < b.first;
    if (a.second.size() != b.second.size()) return a.second.size() < b.second.size();
    return a.second < b.second;
  }
};

std::pair<std::vector<unsigned>, unsigned> term_word(const Term& t) {
  std::vector<unsigned> w;
  const Term* cur = &t;
  while (!cur->is_var()) {
    w.push_back(cur->func());
    cur = &cur->args()[0];
  }
  return {std::move(w), cur->index()};
}

void collect_words(const Formula& f,
                   std::map<std::pair<unsigned, std::vector<unsigned>>, unsigned, WordRelLess>& out) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      return;
    case Formula::Kind::Atom: {
      auto [w, v] = term_word(f.args()[0]);
      (void)v;
      // every prefix, so the witness axioms can chain down to the base
      for (std::size_t len = 0; len <= w.size(); ++len)
        out.emplace(std::make_pair(f.rel(), std::vector<unsigned>(w.begin(), w.begin() + len)), 0u);
      return;
    }
    case Formula::Kind::Impl:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_words(f.left(), out);
      collect_words(f.right(), out);
      return;
    case Formula::Kind::All:
    case Formula::Kind::Ex:
      collect_words(f.body(), out);
      return;
  }
}

}  // namespace

ReductionResult monadic_fun_elim(const Signature& sig, const Formula& f) {
  validate(sig, f);
  for (const auto& d : sig.funcs())
    if (d.arity != 1)
      throw PreconditionError("monadic_fun_elim: function '" + d.name + "' is not unary");
  for (const auto& d : sig.rels())
    if (d.arity != 1)
      throw PreconditionError("monadic_fun_elim: relation '" + d.name + "' is not unary");

  std::map<std::pair<unsigned, std::vector<unsigned>>, unsigned, WordRelLess> pairs;
  collect_words(f, pairs);
  {
    unsigned i = 0;
    for (auto& kv : pairs) kv.second = i++;
  }

  std::vector<SymbolDecl> rels;
  std::vector<std::string> taken;
  for (const auto& kv : pairs) {
    std::string name = sig.rel(kv.first.first).name;
    for (std::size_t i = 0; i < kv.first.second.size(); ++i)
      name += (i == 0 ? "@" : ".") + sig.func(kv.first.second[i]).name;
    name = unique_name(name, taken);
    taken.push_back(name);
    rels.push_back({name, 1});
  }
  Signature out({}, rels);

  Formula body = map_atoms(f, 0, [&](const Formula& at, unsigned) {
    auto [w, v] = term_word(at.args()[0]);
    unsigned idx = pairs.at({at.rel(), w});
    return Formula::atom(idx, {Term::var(v)});
  });

  // Per function j: every x has a y acting as f_j(x), i.e. the level
  // above agrees with the level below on all tracked words ending in j.
  std::vector<Formula> parts{body};
  for (unsigned j = 0; j < sig.func_count(); ++j) {
    std::vector<Formula> conjs;
    for (const auto& kv : pairs) {
      const auto& w = kv.first.second;
      if (w.empty() || w.back() != j) continue;
      std::vector<unsigned> head(w.begin(), w.end() - 1);
      unsigned below = pairs.at({kv.first.first, head});
      conjs.push_back(iff(Formula::atom(kv.second, {Term::var(1)}),
                          Formula::atom(below, {Term::var(0)})));
    }
    if (conjs.empty()) continue;
    parts.push_back(Formula::all(Formula::ex(big_and(conjs))));
  }

  // Flat copies for the transports.
  std::vector<std::pair<unsigned, std::vector<unsigned>>> plist;
  for (const auto& kv : pairs) plist.push_back(kv.first);

  ReductionResult r;
  r.out_sig = out;
  r.out_formula = big_and(parts);
  r.forward = [sig, out, plist](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    FiniteModel m2(out, k);
    for (unsigned i = 0; i < plist.size(); ++i) {
      const auto& [rel, w] = plist[i];
      for (unsigned x = 0; x < k; ++x) {
        unsigned z = x;
        for (std::size_t j = w.size(); j-- > 0;) z = m.fun(w[j], std::vector<unsigned>{z});
        m2.set_rel(i, std::vector<unsigned>{x}, m.rel(rel, std::vector<unsigned>{z}));
      }
    }
    return ModelEnv{std::move(m2), me.env};
  };
  r.backward = [sig, plist](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    auto index_of = [&](unsigned rel, const std::vector<unsigned>& w) {
      for (unsigned i = 0; i < plist.size(); ++i)
        if (plist[i].first == rel && plist[i].second == w) return i;
      return static_cast<unsigned>(plist.size());
    };
    FiniteModel m2(sig, k);
    for (unsigned rel = 0; rel < sig.rel_count(); ++rel) {
      unsigned i = index_of(rel, {});
      if (i < plist.size()) m2.rel_table(rel) = m.rel_table(i);
    }
    for (unsigned j = 0; j < sig.func_count(); ++j) {
      std::vector<std::pair<unsigned, unsigned>> links;  // (word, word minus last)
      for (unsigned i = 0; i < plist.size(); ++i) {
        const auto& w = plist[i].second;
        if (w.empty() || w.back() != j) continue;
        std::vector<unsigned> head(w.begin(), w.end() - 1);
        links.emplace_back(i, index_of(plist[i].first, head));
      }
      for (unsigned x = 0; x < k; ++x) {
        unsigned y = k;
        for (unsigned c = 0; c < k && y == k; ++c) {
          bool ok = true;
          for (const auto& [above, below] : links) {
            if (m.rel(above, std::vector<unsigned>{x}) != m.rel(below, std::vector<unsigned>{c})) {
              ok = false;
              break;
            }
          }
          if (ok) y = c;
        }
        if (y == k) throw MalformedModelError("no witness for a function level");
        m2.set_fun(j, std::vector<unsigned>{x}, y);
      }
    }
    return ModelEnv{std::move(m2), me.env};
  };
  r.trace = {stage("monadic-fun-elim", sig, out)};
  return r;
}

// ---------------------------------------------------------------------------
// zero_arity_lift

ReductionResult zero_arity_lift(const Signature& sig, const Formula& f) {
  validate(sig, f);
  for (const auto& d : sig.funcs())
    if (d.arity > 1) throw PreconditionError("zero_arity_lift: arity above 1");
  for (const auto& d : sig.rels())
    if (d.arity > 1) throw PreconditionError("zero_arity_lift: arity above 1");

  unsigned base = fresh_base(f);
  std::vector<SymbolDecl> nf, nr;
  for (const auto& d : sig.funcs()) nf.push_back({d.name, 1});
  for (const auto& d : sig.rels()) nr.push_back({d.name, 1});
  Signature out(nf, nr);

  auto map_term = [&](const Term& t, unsigned depth, const auto& self) -> Term {
    if (t.is_var()) return t;
    if (t.args().empty()) return Term::app(t.func(), {Term::var(base + depth)});
    return Term::app(t.func(), {self(t.args()[0], depth, self)});
  };
  Formula body = map_atoms(f, 0, [&](const Formula& at, unsigned depth) {
    std::vector<Term> args;
    for (const Term& t : at.args()) args.push_back(map_term(t, depth, map_term));
    if (args.empty()) args.push_back(Term::var(base + depth));
    return Formula::atom(at.rel(), std::move(args));
  });

  ReductionResult r;
  r.out_sig = out;
  r.out_formula = body;
  r.forward = [sig, out, base](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    FiniteModel m2(out, k);
    for (unsigned i = 0; i < sig.func_count(); ++i) {
      if (sig.func(i).arity == 1) {
        m2.fun_table(i) = m.fun_table(i);
      } else {
        std::fill(m2.fun_table(i).begin(), m2.fun_table(i).end(), m.fun(i, {}));
      }
    }
    for (unsigned i = 0; i < sig.rel_count(); ++i) {
      if (sig.rel(i).arity == 1) {
        m2.rel_table(i) = m.rel_table(i);
      } else {
        std::fill(m2.rel_table(i).begin(), m2.rel_table(i).end(),
                  static_cast<std::uint8_t>(m.rel(i, {}) ? 1 : 0));
      }
    }
    return ModelEnv{std::move(m2), extend_env(me.env, base, {0})};
  };
  r.backward = [sig, base](const ModelEnv& me) {
    const FiniteModel& m = me.model;
    unsigned k = m.size();
    unsigned x0 = clamped(me.env(base), k);
    FiniteModel m2(sig, k);
    for (unsigned i = 0; i < sig.func_count(); ++i) {
      if (sig.func(i).arity == 1)
        m2.fun_table(i) = m.fun_table(i);
      else
        m2.set_fun(i, {}, m.fun(i, std::vector<unsigned>{x0}));
    }
    for (unsigned i = 0; i < sig.rel_count(); ++i) {
      if (sig.rel(i).arity == 1)
        m2.rel_table(i) = m.rel_table(i);
      else
        m2.set_rel(i, {}, m.rel(i, std::vector<unsigned>{x0}));
    }
    return ModelEnv{std::move(m2), me.env};
  };
  r.trace = {stage("zero-lift", sig, out)};
  return r;
}

// ---------------------------------------------------------------------------
// composition and pipelines

ReductionResult compose(ReductionResult first, ReductionResult second) {
  ReductionResult r;
  r.out_sig = std::move(second.out_sig);
  r.out_formula = std::move(second.out_formula);
  r.eq_rel = second.eq_rel;
  if (first.forward && second.forward) {
    auto f1 = std::move(first.forward);
    auto f2 = std::move(second.forward);
    r.forward = [f1, f2](const ModelEnv& me) { return f2(f1(me)); };
  }
  if (first.backward && second.backward) {
    auto b1 = std::move(first.backward);
    auto b2 = std::move(second.backward);
    r.backward = [b1, b2](const ModelEnv& me) { return b1(b2(me)); };
  }
  r.trace = std::move(first.trace);
  r.trace.insert(r.trace.end(), second.trace.begin(), second.trace.end());
  return r;
}

ReductionResult discrete_to_binary(const Signature& sig, const Formula& f) {
  ReductionResult acc = sig_gc(sig, f);
  auto step = [&acc](ReductionResult next) { acc = compose(std::move(acc), std::move(next)); };
  step(fun_elim(acc.out_sig, acc.out_formula));
  step(eq_elim(acc.out_sig, acc.out_formula, *acc.eq_rel));
  unsigned n = 0;
  for (const auto& d : acc.out_sig.rels()) n = std::max(n, d.arity);
  step(arity_pad(acc.out_sig, acc.out_formula, n));
  step(rel_merge(acc.out_sig, acc.out_formula));
  step(const_elim(acc.out_sig, acc.out_formula));
  step(nary_to_membership(acc.out_sig, acc.out_formula));
  return acc;
}

ReductionResult full_trakhtenbrot(const BpcpInstance& inst, const Signature& target) {
  const Signature& bsig = bpcp_signature();
  ReductionResult acc = eq_elim(bsig, bpcp_encode(inst), bpcp_sym::eq);
  auto step = [&acc](ReductionResult next) { acc = compose(std::move(acc), std::move(next)); };
  step(discrete_to_binary(acc.out_sig, acc.out_formula));

  bool rel2 = false;
  for (const auto& d : target.rels()) rel2 = rel2 || d.arity >= 2;
  if (rel2) {
    step(embed(acc.out_sig, acc.out_formula, target));
    return acc;
  }
  unsigned far = 0;
  for (const auto& d : target.funcs())
    if (d.arity >= 2 && (far == 0 || d.arity < far)) far = d.arity;
  bool rel1 = false;
  for (const auto& d : target.rels()) rel1 = rel1 || d.arity >= 1;
  if (far == 0 || !rel1)
    throw PreconditionError(
        "full_trakhtenbrot: target needs a relation of arity 2 or a function "
        "of arity 2 plus a relation");
  step(membership_to_fun(acc.out_sig, acc.out_formula, far));
  step(embed(acc.out_sig, acc.out_formula, target));
  return acc;
}

}  // namespace folmt
