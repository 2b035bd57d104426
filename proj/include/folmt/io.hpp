#pragma once

#include <string>
#include <string_view>

#include "folmt/formula.hpp"
#include "folmt/model.hpp"
#include "folmt/signature.hpp"

namespace folmt {

// Text format, s-expressions throughout:
//   term        (var i) | (app f t ...)
//   formula     bot | (rel P t ...) | (impl a b) | (and a b) | (or a b)
//               | (all f) | (ex f)
//   signature   (signature (funcs (name arity) ...) (rels (name arity) ...))
//   model       (model (size k) (fun f (a1 ... an) v) ... (rel P (a1 ... an) ...))
//   env         (env e0 e1 ... (default d))
// A formula file is a signature followed by a formula; a model file is a
// model, optionally preceded by its signature. Whitespace is free-form and
// ';' starts a line comment.

Term parse_term(std::string_view text, const Signature& sig);
Formula parse_formula(std::string_view text, const Signature& sig);
Signature parse_signature(std::string_view text);
Assignment parse_env(std::string_view text);

struct FormulaFile {
  Signature sig;
  Formula formula;
};
FormulaFile parse_formula_file(std::string_view text);

// Reads a model. If the text carries its own signature header it is used,
// otherwise `ambient` must be non-null. Function tables must be total.
FiniteModel parse_model_file(std::string_view text, const Signature* ambient = nullptr);

std::string print_term(const Signature& sig, const Term& t);
std::string print_formula(const Signature& sig, const Formula& f);
std::string print_signature(const Signature& sig);
std::string print_env(const Assignment& env);
std::string print_formula_file(const Signature& sig, const Formula& f);
std::string print_model_file(const FiniteModel& m, bool with_signature = true);

}  // namespace folmt
