#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "folmt/errors.hpp"
#include "folmt/io.hpp"
#include "support/test_support.hpp"

using namespace folmt;

namespace {
const char* kSig = "(signature (funcs (c 0) (g 1)) (rels (P 1) (Q 2)))";
}

TEST_CASE("term round trip") {
  Signature sig = parse_signature(kSig);
  Term t = parse_term("(app g (app c))", sig);
  CHECK(t == Term::app(1, {Term::app(0, {})}));
  CHECK(parse_term(print_term(sig, t), sig) == t);
  Term v = parse_term("(var 3)", sig);
  CHECK(v == Term::var(3));
}

TEST_CASE("formula round trip with comments and whitespace") {
  Signature sig = parse_signature(kSig);
  Formula f = parse_formula(
      "; leading comment\n"
      "(all (impl (rel P (var 0)) ; inline\n"
      "           (ex (rel Q (var 0) (app g (var 1))))))",
      sig);
  Formula want = Formula::all(Formula::impl(
      Formula::atom(0, {Term::var(0)}),
      Formula::ex(Formula::atom(1, {Term::var(0), Term::app(1, {Term::var(1)})}))));
  CHECK(f == want);
  CHECK(parse_formula(print_formula(sig, f), sig) == f);
  CHECK(parse_formula("bot", sig) == Formula::bot());
  CHECK(parse_formula("(and bot (or bot bot))", sig) ==
        Formula::conj(Formula::bot(), Formula::disj(Formula::bot(), Formula::bot())));
}

TEST_CASE("signature round trip") {
  Signature sig = parse_signature(kSig);
  CHECK(sig.func_count() == 2);
  CHECK(sig.rel_count() == 2);
  CHECK(sig.func(0).name == "c");
  CHECK(sig.rel(1).arity == 2);
  CHECK(parse_signature(print_signature(sig)) == sig);
  Signature empty = parse_signature("(signature (funcs) (rels))");
  CHECK(empty.func_count() == 0);
  CHECK(parse_signature(print_signature(empty)) == empty);
}

TEST_CASE("formula file round trip") {
  FormulaFile ff = parse_formula_file("(signature (funcs) (rels (R 2)))\n"
                                      "(ex (rel R (var 0) (var 0)))");
  CHECK(ff.sig.rel_count() == 1);
  FormulaFile again = parse_formula_file(print_formula_file(ff.sig, ff.formula));
  CHECK(again.sig == ff.sig);
  CHECK(again.formula == ff.formula);
}

TEST_CASE("model file round trip, self-describing and ambient") {
  Signature sig = parse_signature(kSig);
  testsup::Rng rng(11);
  for (unsigned k = 1; k <= 3; ++k) {
    FiniteModel m = testsup::random_model(rng, sig, k);
    std::string with = print_model_file(m);
    FiniteModel back = parse_model_file(with);
    CHECK(back.sig() == sig);
    CHECK(testsup::models_equal(m, back));

    std::string without = print_model_file(m, false);
    FiniteModel back2 = parse_model_file(without, &sig);
    CHECK(testsup::models_equal(m, back2));
    CHECK_THROWS_AS(parse_model_file(without), Error);
  }
}

TEST_CASE("env round trip") {
  Assignment a = parse_env("(env 2 0 1 (default 1))");
  CHECK(a.prefix == std::vector<unsigned>{2, 0, 1});
  CHECK(a.fallback == 1);
  CHECK(a(0) == 2);
  CHECK(a(7) == 1);
  Assignment b = parse_env(print_env(a));
  CHECK(b.prefix == a.prefix);
  CHECK(b.fallback == a.fallback);
  Assignment empty = parse_env("(env (default 0))");
  CHECK(empty.prefix.empty());
}

TEST_CASE("parse errors carry positions") {
  Signature sig = parse_signature(kSig);
  try {
    parse_formula("(and bot\n  (rel P (var 0)", sig);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line >= 1);
  }
  CHECK_THROWS_AS(parse_formula("(rel Nope (var 0))", sig), UnknownSymbolError);
  CHECK_THROWS_AS(parse_formula("(rel P (var 0) (var 1))", sig), ArityError);
  CHECK_THROWS_AS(parse_formula("(rel Q (var 0))", sig), ArityError);
  CHECK_THROWS_AS(parse_formula("bot bot", sig), ParseError);
  CHECK_THROWS_AS(parse_formula("(frob bot)", sig), ParseError);
  CHECK_THROWS_AS(parse_signature("(signature (funcs))"), ParseError);
  CHECK_THROWS_AS(parse_env("(env 1 2)"), ParseError);
}

TEST_CASE("model files reject bad shapes") {
  Signature sig = parse_signature(kSig);
  CHECK_THROWS_AS(parse_model_file("(model (size 0))", &sig), ParseError);
  // incomplete function table
  CHECK_THROWS_AS(parse_model_file("(model (size 2) (fun c () 0))", &sig), ParseError);
  // element outside the domain
  CHECK_THROWS_AS(
      parse_model_file("(model (size 1) (fun c () 0) (fun g (0) 2) (rel P) (rel Q))",
                       &sig),
      ParseError);
  CHECK_THROWS_AS(parse_model_file("(model (size 1) (fun nope () 0))", &sig),
                  UnknownSymbolError);
}

TEST_CASE("random print-parse round trips") {
  Signature sig = parse_signature(kSig);
  testsup::Rng rng(2024);
  for (int i = 0; i < 60; ++i) {
    Formula f = testsup::random_formula(rng, sig, 4, 3);
    CHECK(parse_formula(print_formula(sig, f), sig) == f);
  }
}
