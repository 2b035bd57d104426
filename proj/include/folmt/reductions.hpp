#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "folmt/bpcp.hpp"
#include "folmt/formula.hpp"
#include "folmt/model.hpp"

namespace folmt {

struct StageInfo {
  std::string name;
  unsigned in_funcs = 0;
  unsigned in_rels = 0;
  unsigned out_funcs = 0;
  unsigned out_rels = 0;
};

// One satisfiability-preserving signature transformation. The transports
// move witnesses across the reduction: forward turns a satisfying
// (model, assignment) of the input formula into one of the output
// formula, backward goes the other way. Either may be absent.
// eq_rel designates the output's interpreted-equality relation when the
// output is meant to be read with one (its models must interpret that
// relation as identity).
struct ReductionResult {
  Signature out_sig;
  Formula out_formula;
  std::function<ModelEnv(const ModelEnv&)> forward;
  std::function<ModelEnv(const ModelEnv&)> backward;
  std::optional<unsigned> eq_rel;
  std::vector<StageInfo> trace;
};

// Uninterprets a designated equality: conjoins axioms making eqsym an
// equivalence and a congruence for every symbol occurring in f. Models
// with genuine equality pass through unchanged; backward quotients by
// the eqsym classes.
ReductionResult eq_elim(const Signature& sig, const Formula& f, unsigned eqsym);

// Shrinks the signature to exactly the symbols occurring in f, keeping
// their first-occurrence order.
ReductionResult sig_gc(const Signature& sig, const Formula& f);

// Replaces every function symbol by a relation of arity one higher, with
// totality and functionality axioms. The output designates a fresh
// binary equality relation (eq_rel) that must be read as identity;
// compose with eq_elim to reach plain satisfiability.
ReductionResult fun_elim(const Signature& sig, const Formula& f);

// Pads every relation to arity exactly n by repeating a fresh variable
// at the end of each atom.
ReductionResult arity_pad(const Signature& sig, const Formula& f, unsigned n);

// Merges all relations (uniform arity n, no functions) into one relation
// of arity 1+n, tagging each atom with a constant naming its relation.
ReductionResult rel_merge(const Signature& sig, const Formula& f);

// Replaces constants (the only functions left) by fresh free variables.
ReductionResult const_elim(const Signature& sig, const Formula& f);

// Compresses a single n-ary relation into pure binary membership:
// quantifiers relativize to the members of a fresh domain variable d and
// atoms say the Kuratowski tuple of their arguments is a member of a
// fresh variable r.
ReductionResult nary_to_membership(const Signature& sig, const Formula& f);

// Encodes a single binary relation with one n-ary function and one unary
// relation (n >= 2): P(x,y) becomes Q(f(x,y,x,...,x)), with quantifiers
// relativized to a fresh-variable-indexed domain predicate.
ReductionResult membership_to_fun(const Signature& sig, const Formula& f,
                                  unsigned n);

// Injects the formula's symbols into a larger signature: functions match
// arity exactly, relations may be padded up with a fresh variable;
// unused target symbols are left defaulted.
ReductionResult embed(const Signature& sig, const Formula& f,
                      const Signature& target);

// Removes unary functions from a signature of uniform arity 1: each atom
// P(f_i1(...f_ik(x))) becomes a relation indexed by the word [i1..ik]
// applied to x, with witness axioms tying the levels together.
ReductionResult monadic_fun_elim(const Signature& sig, const Formula& f);

// Lifts 0-ary symbols to arity 1 applied to a fresh variable (arities
// must not exceed 1).
ReductionResult zero_arity_lift(const Signature& sig, const Formula& f);

// Chains two results: second must have been produced from first's
// output. Transports and traces compose.
ReductionResult compose(ReductionResult first, ReductionResult second);

// sig_gc, fun_elim, eq_elim, arity_pad, rel_merge, const_elim,
// nary_to_membership; lands on the pure membership signature.
ReductionResult discrete_to_binary(const Signature& sig, const Formula& f);

// The whole road from a correspondence instance to target: encode,
// eq_elim, discrete_to_binary, then either a relational embedding or the
// function route, depending on what target offers. Errors out when
// target has neither a >=2-ary relation nor a >=2-ary function plus a
// relation.
ReductionResult full_trakhtenbrot(const BpcpInstance& inst,
                                  const Signature& target);

}  // namespace folmt
