#pragma once

#include <memory>
#include <vector>

#include "folmt/signature.hpp"
#include "folmt/term.hpp"

namespace folmt {

// First-order formulas over {falsity, atoms, ->, /\, \/, forall, exists}.
// Binders are de Bruijn: quantifiers carry no names, Var 0 is the innermost
// bound variable. Negation is not a constructor; use neg() which builds
// (impl f bot). Formulas are immutable and share structure on copy.
class Formula {
 public:
  enum class Kind : unsigned char { Bot, Atom, Impl, And, Or, All, Ex };

  Formula() = default;  // Bot

  static Formula bot() { return Formula(); }
  static Formula atom(unsigned rel, std::vector<Term> args);
  static Formula impl(Formula lhs, Formula rhs) { return binary(Kind::Impl, std::move(lhs), std::move(rhs)); }
  static Formula conj(Formula lhs, Formula rhs) { return binary(Kind::And, std::move(lhs), std::move(rhs)); }
  static Formula disj(Formula lhs, Formula rhs) { return binary(Kind::Or, std::move(lhs), std::move(rhs)); }
  static Formula all(Formula body) { return quantifier(Kind::All, std::move(body)); }
  static Formula ex(Formula body) { return quantifier(Kind::Ex, std::move(body)); }

  Kind kind() const;
  bool is_bot() const { return node_ == nullptr; }
  bool is_binary() const {
    Kind k = kind();
    return k == Kind::Impl || k == Kind::And || k == Kind::Or;
  }
  bool is_quant() const { return kind() == Kind::All || kind() == Kind::Ex; }

  // Atom accessors.
  unsigned rel() const;
  const std::vector<Term>& args() const;

  // Binary accessors.
  const Formula& left() const;
  const Formula& right() const;

  // Quantifier accessor.
  const Formula& body() const;

  // Stable identity of the underlying node; used for caching. Bot is null.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node;

  static Formula binary(Kind k, Formula lhs, Formula rhs);
  static Formula quantifier(Kind k, Formula body);

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Kind kind;
  unsigned rel = 0;
  std::vector<Term> args;  // Atom
  Formula a;               // Binary lhs / quantifier body
  Formula b;               // Binary rhs
};

inline Formula::Kind Formula::kind() const { return node_ ? node_->kind : Kind::Bot; }
inline unsigned Formula::rel() const { return node_->rel; }
inline const std::vector<Term>& Formula::args() const { return node_->args; }
inline const Formula& Formula::left() const { return node_->a; }
inline const Formula& Formula::right() const { return node_->b; }
inline const Formula& Formula::body() const { return node_->a; }

// Derived connectives and n-ary folds.
inline Formula neg(Formula f) { return Formula::impl(std::move(f), Formula::bot()); }
inline Formula top() { return Formula::impl(Formula::bot(), Formula::bot()); }
inline Formula iff(Formula a, Formula b) {
  Formula fwd = Formula::impl(a, b);
  return Formula::conj(std::move(fwd), Formula::impl(std::move(b), std::move(a)));
}
// Right fold; empty conjunction is top, empty disjunction is bot.
Formula big_and(const std::vector<Formula>& fs);
Formula big_or(const std::vector<Formula>& fs);

// Function and relation symbols of a formula, each list duplicate-free in
// first-occurrence order.
struct OccurringSymbols {
  std::vector<unsigned> funcs;
  std::vector<unsigned> rels;
};

// Free de Bruijn variables, duplicate-free, ascending.
std::vector<unsigned> free_vars(const Formula& f);
std::vector<unsigned> free_vars(const Term& t);

OccurringSymbols syms(const Formula& f);

// Shifts variables >= cutoff up by amount (capture-free weakening under
// binders: the cutoff grows by one per quantifier passed).
Term lift(const Term& t, unsigned amount, unsigned cutoff = 0);
Formula lift(const Formula& f, unsigned amount, unsigned cutoff = 0);

// Renames symbols: every func index i becomes func_map[i] and likewise for
// relations. Maps must cover the occurring symbols of f and be
// arity-preserving from `from` into `to`; unused entries may hold any value.
Formula map_symbols(const Formula& f, const Signature& from, const Signature& to,
                    const std::vector<unsigned>& func_map,
                    const std::vector<unsigned>& rel_map);

// Checks symbol indices and arities against sig; throws on violation.
void validate(const Signature& sig, const Term& t);
void validate(const Signature& sig, const Formula& f);

}  // namespace folmt
