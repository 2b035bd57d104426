#include "folmt/formula.hpp"

#include <algorithm>
#include <set>

#include "folmt/errors.hpp"

namespace folmt {

Formula Formula::atom(unsigned rel, std::vector<Term> args) {
  Formula f;
  auto node = std::make_shared<Node>();
  node->kind = Kind::Atom;
  node->rel = rel;
  node->args = std::move(args);
  f.node_ = std::move(node);
  return f;
}

Formula Formula::binary(Kind k, Formula lhs, Formula rhs) {
  Formula f;
  auto node = std::make_shared<Node>();
  node->kind = k;
  node->a = std::move(lhs);
  node->b = std::move(rhs);
  f.node_ = std::move(node);
  return f;
}

Formula Formula::quantifier(Kind k, Formula body) {
  Formula f;
  auto node = std::make_shared<Node>();
  node->kind = k;
  node->a = std::move(body);
  f.node_ = std::move(node);
  return f;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case Formula::Kind::Bot:
      return true;
    case Formula::Kind::Atom:
      return a.node_->rel == b.node_->rel && a.node_->args == b.node_->args;
    case Formula::Kind::Impl:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return a.node_->a == b.node_->a && a.node_->b == b.node_->b;
    case Formula::Kind::All:
    case Formula::Kind::Ex:
      return a.node_->a == b.node_->a;
  }
  return false;
}

Formula big_and(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = Formula::conj(*it, acc);
  return acc;
}

Formula big_or(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::bot();
  Formula acc = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = Formula::disj(*it, acc);
  return acc;
}

namespace {

void collect_term_vars(const Term& t, unsigned depth, std::set<unsigned>& out) {
  if (t.is_var()) {
    if (t.index() >= depth) out.insert(t.index() - depth);
    return;
  }
  for (const Term& a : t.args()) collect_term_vars(a, depth, out);
}

void collect_vars(const Formula& f, unsigned depth, std::set<unsigned>& out) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      return;
    case Formula::Kind::Atom:
      for (const Term& t : f.args()) collect_term_vars(t, depth, out);
      return;
    case Formula::Kind::Impl:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_vars(f.left(), depth, out);
      collect_vars(f.right(), depth, out);
      return;
    case Formula::Kind::All:
    case Formula::Kind::Ex:
      collect_vars(f.body(), depth + 1, out);
      return;
  }
}

void collect_term_syms(const Term& t, std::vector<unsigned>& funcs, std::vector<bool>& seen_f) {
  if (t.is_var()) return;
  if (t.func() >= seen_f.size()) seen_f.resize(t.func() + 1, false);
  if (!seen_f[t.func()]) {
    seen_f[t.func()] = true;
    funcs.push_back(t.func());
  }
  for (const Term& a : t.args()) collect_term_syms(a, funcs, seen_f);
}

void collect_syms(const Formula& f, OccurringSymbols& out, std::vector<bool>& seen_f,
                  std::vector<bool>& seen_r) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      return;
    case Formula::Kind::Atom:
      if (f.rel() >= seen_r.size()) seen_r.resize(f.rel() + 1, false);
      if (!seen_r[f.rel()]) {
        seen_r[f.rel()] = true;
        out.rels.push_back(f.rel());
      }
      for (const Term& t : f.args()) collect_term_syms(t, out.funcs, seen_f);
      return;
    case Formula::Kind::Impl:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_syms(f.left(), out, seen_f, seen_r);
      collect_syms(f.right(), out, seen_f, seen_r);
      return;
    case Formula::Kind::All:
    case Formula::Kind::Ex:
      collect_syms(f.body(), out, seen_f, seen_r);
      return;
  }
}

}  // namespace

std::vector<unsigned> free_vars(const Formula& f) {
  std::set<unsigned> vars;
  collect_vars(f, 0, vars);
  return {vars.begin(), vars.end()};
}

std::vector<unsigned> free_vars(const Term& t) {
  std::set<unsigned> vars;
  collect_term_vars(t, 0, vars);
  return {vars.begin(), vars.end()};
}

OccurringSymbols syms(const Formula& f) {
  OccurringSymbols out;
  std::vector<bool> seen_f, seen_r;
  collect_syms(f, out, seen_f, seen_r);
  return out;
}

Term lift(const Term& t, unsigned amount, unsigned cutoff) {
  if (amount == 0) return t;
  if (t.is_var()) return t.index() >= cutoff ? Term::var(t.index() + amount) : t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(lift(a, amount, cutoff));
  return Term::app(t.func(), std::move(args));
}

Formula lift(const Formula& f, unsigned amount, unsigned cutoff) {
  if (amount == 0) return f;
  switch (f.kind()) {
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const Term& t : f.args()) args.push_back(lift(t, amount, cutoff));
      return Formula::atom(f.rel(), std::move(args));
    }
    case Formula::Kind::Impl:
      return Formula::impl(lift(f.left(), amount, cutoff), lift(f.right(), amount, cutoff));
    case Formula::Kind::And:
      return Formula::conj(lift(f.left(), amount, cutoff), lift(f.right(), amount, cutoff));
    case Formula::Kind::Or:
      return Formula::disj(lift(f.left(), amount, cutoff), lift(f.right(), amount, cutoff));
    case Formula::Kind::All:
      return Formula::all(lift(f.body(), amount, cutoff + 1));
    case Formula::Kind::Ex:
      return Formula::ex(lift(f.body(), amount, cutoff + 1));
  }
  return f;
}

namespace {

Term map_term(const Term& t, const Signature& from, const Signature& to,
              const std::vector<unsigned>& func_map) {
  if (t.is_var()) return t;
  if (t.func() >= func_map.size()) throw PreconditionError("function map does not cover symbol");
  unsigned target = func_map[t.func()];
  if (target >= to.func_count()) throw UnknownSymbolError("function #" + std::to_string(target));
  if (to.func(target).arity != from.func(t.func()).arity)
    throw ArityError(to.func(target).name, from.func(t.func()).arity, to.func(target).arity);
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(map_term(a, from, to, func_map));
  return Term::app(target, std::move(args));
}

}  // namespace

Formula map_symbols(const Formula& f, const Signature& from, const Signature& to,
                    const std::vector<unsigned>& func_map, const std::vector<unsigned>& rel_map) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Atom: {
      if (f.rel() >= rel_map.size()) throw PreconditionError("relation map does not cover symbol");
      unsigned target = rel_map[f.rel()];
      if (target >= to.rel_count()) throw UnknownSymbolError("relation #" + std::to_string(target));
      if (to.rel(target).arity != from.rel(f.rel()).arity)
        throw ArityError(to.rel(target).name, from.rel(f.rel()).arity, to.rel(target).arity);
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const Term& t : f.args()) args.push_back(map_term(t, from, to, func_map));
      return Formula::atom(target, std::move(args));
    }
    case Formula::Kind::Impl:
      return Formula::impl(map_symbols(f.left(), from, to, func_map, rel_map),
                           map_symbols(f.right(), from, to, func_map, rel_map));
    case Formula::Kind::And:
      return Formula::conj(map_symbols(f.left(), from, to, func_map, rel_map),
                           map_symbols(f.right(), from, to, func_map, rel_map));
    case Formula::Kind::Or:
      return Formula::disj(map_symbols(f.left(), from, to, func_map, rel_map),
                           map_symbols(f.right(), from, to, func_map, rel_map));
    case Formula::Kind::All:
      return Formula::all(map_symbols(f.body(), from, to, func_map, rel_map));
    case Formula::Kind::Ex:
      return Formula::ex(map_symbols(f.body(), from, to, func_map, rel_map));
  }
  return f;
}

void validate(const Signature& sig, const Term& t) {
  if (t.is_var()) return;
  if (t.func() >= sig.func_count())
    throw UnknownSymbolError("function #" + std::to_string(t.func()));
  if (t.args().size() != sig.func(t.func()).arity)
    throw ArityError(sig.func(t.func()).name, sig.func(t.func()).arity,
                     static_cast<unsigned>(t.args().size()));
  for (const Term& a : t.args()) validate(sig, a);
}

void validate(const Signature& sig, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      return;
    case Formula::Kind::Atom:
      if (f.rel() >= sig.rel_count())
        throw UnknownSymbolError("relation #" + std::to_string(f.rel()));
      if (f.args().size() != sig.rel(f.rel()).arity)
        throw ArityError(sig.rel(f.rel()).name, sig.rel(f.rel()).arity,
                         static_cast<unsigned>(f.args().size()));
      for (const Term& t : f.args()) validate(sig, t);
      return;
    case Formula::Kind::Impl:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      validate(sig, f.left());
      validate(sig, f.right());
      return;
    case Formula::Kind::All:
    case Formula::Kind::Ex:
      validate(sig, f.body());
      return;
  }
}

}  // namespace folmt
