#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "folmt/errors.hpp"
#include "folmt/eval.hpp"
#include "folmt/monadic.hpp"
#include "folmt/search.hpp"
#include "support/test_support.hpp"

using namespace folmt;

namespace {

Term V(unsigned i) { return Term::var(i); }

const Signature& rsig() {
  static const Signature s({}, {{"A", 1}, {"B", 1}});
  return s;
}

const Signature& fsig() {
  static const Signature s({{"f", 1}, {"g", 1}}, {{"A", 1}, {"B", 1}});
  return s;
}

}  // namespace

TEST_CASE("relational decision on pinned formulas") {
  // needs one element in A minus B and one in B minus A
  Formula split = Formula::conj(
      Formula::ex(Formula::conj(Formula::atom(0, {V(0)}),
                                neg(Formula::atom(1, {V(0)})))),
      Formula::ex(Formula::conj(Formula::atom(1, {V(0)}),
                                neg(Formula::atom(0, {V(0)})))));
  Verdict v = monadic_rel_decide(rsig(), split);
  REQUIRE(v.kind == Verdict::Kind::Sat);
  REQUIRE(v.witness);
  CHECK(satisfies(v.witness->model, v.witness->env, split));
  CHECK(v.witness->model.size() >= 2);

  Formula contra = Formula::conj(
      Formula::all(Formula::atom(0, {V(0)})),
      Formula::ex(neg(Formula::atom(0, {V(0)}))));
  Verdict u = monadic_rel_decide(rsig(), contra);
  CHECK(u.kind == Verdict::Kind::Unsat);
  CHECK(u.bound == 4);  // 2^2 predicate vectors

  // forces all four predicate vectors to be realized
  Formula four = top();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Formula fa = Formula::atom(0, {V(0)});
      Formula fb = Formula::atom(1, {V(0)});
      four = Formula::conj(
          four, Formula::ex(Formula::conj(a ? fa : neg(fa), b ? fb : neg(fb))));
    }
  Verdict w = monadic_rel_decide(rsig(), four);
  REQUIRE(w.kind == Verdict::Kind::Sat);
  CHECK(w.witness->model.size() == 4);
  CHECK(satisfies(w.witness->model, w.witness->env, four));
}

TEST_CASE("relational decision agrees with exhaustive search") {
  testsup::Rng rng(909);
  int sat = 0, unsat = 0;
  for (int t = 0; t < 80; ++t) {
    // conjoin a pair of shallow formulas; contradictions show up more often
    Formula f = Formula::conj(testsup::random_formula(rng, rsig(), 2, 1),
                              testsup::random_formula(rng, rsig(), 2, 1));
    Verdict v = monadic_rel_decide(rsig(), f);
    Verdict e = fsat(rsig(), f, 4);  // 2^n with n = 2 relations
    if (v.kind == Verdict::Kind::Sat) {
      ++sat;
      CHECK(e.kind == Verdict::Kind::Sat);
      CHECK(satisfies(v.witness->model, v.witness->env, f));
    } else {
      ++unsat;
      CHECK(v.kind == Verdict::Kind::Unsat);
      CHECK(e.kind != Verdict::Kind::Sat);
    }
  }
  CHECK(sat > 5);
  CHECK(unsat > 5);
}

TEST_CASE("free variables are searched") {
  Formula f = Formula::conj(Formula::atom(0, {V(0)}),
                            Formula::ex(neg(Formula::atom(0, {V(0)}))));
  Verdict v = monadic_rel_decide(rsig(), f);
  REQUIRE(v.kind == Verdict::Kind::Sat);
  CHECK(satisfies(v.witness->model, v.witness->env, f));
}

TEST_CASE("full decision handles unary functions") {
  // some x with A(f(x)) but not A(x): f cannot be the identity
  Formula f = Formula::ex(
      Formula::conj(Formula::atom(0, {Term::app(0, {V(0)})}),
                    neg(Formula::atom(0, {V(0)}))));
  Verdict v = monadic_decide(fsig(), f);
  REQUIRE(v.kind == Verdict::Kind::Sat);
  REQUIRE(v.witness);
  // the witness speaks the original signature
  CHECK(v.witness->model.sig().func_count() == 2);
  CHECK(satisfies(v.witness->model, v.witness->env, f));

  // f(g(x)) lands in A, g(x) never does, and A(g-image) is forced: unsat
  Formula contra = Formula::conj(
      Formula::all(Formula::atom(0, {Term::app(1, {V(0)})})),
      Formula::ex(neg(Formula::atom(0, {Term::app(1, {V(0)})}))));
  Verdict u = monadic_decide(fsig(), contra);
  CHECK(u.kind == Verdict::Kind::Unsat);
}

TEST_CASE("full decision verdicts are never contradicted by search") {
  testsup::Rng rng(910);
  // cap 3 keeps the subset enumeration cheap; formulas that need more
  // tracked words are skipped rather than decided
  MonadicOptions opts;
  opts.rel_cap = 3;
  int sat = 0, unsat = 0;
  for (int t = 0; t < 30; ++t) {
    Formula f = testsup::random_formula(rng, fsig(), 3, 1);
    Verdict v;
    try {
      v = monadic_decide(fsig(), f, opts);
    } catch (const CapExceededError&) {
      continue;
    }
    if (v.kind == Verdict::Kind::Sat) {
      ++sat;
      REQUIRE(v.witness);
      CHECK(satisfies(v.witness->model, v.witness->env, f));
    } else {
      ++unsat;
      Verdict e = fsat(fsig(), f, 3);
      CHECK(e.kind != Verdict::Kind::Sat);
    }
  }
  CHECK(sat >= 3);
  CHECK(unsat >= 1);
}

TEST_CASE("nullary symbols are lifted before deciding") {
  Signature zsig({{"c", 0}}, {{"A", 1}, {"B", 0}});
  // B and A(c) and nothing in A except c's class is fine
  Formula f = Formula::conj(Formula::atom(1, {}),
                            Formula::atom(0, {Term::app(0, {})}));
  Verdict v = monadic_decide(zsig, f);
  REQUIRE(v.kind == Verdict::Kind::Sat);
  CHECK(v.witness->model.sig().func_count() == 1);
  CHECK(satisfies(v.witness->model, v.witness->env, f));

  Formula contra = Formula::conj(Formula::atom(1, {}), neg(Formula::atom(1, {})));
  CHECK(monadic_decide(zsig, contra).kind == Verdict::Kind::Unsat);
}

TEST_CASE("relation cap cuts off oversized problems") {
  // each applied predicate tracks the word and its bare prefix, so two
  // predicates over f already need four relations
  Formula f = Formula::ex(Formula::conj(
      Formula::atom(0, {Term::app(0, {V(0)})}),
      Formula::atom(1, {Term::app(0, {V(0)})})));
  MonadicOptions tight;
  tight.rel_cap = 2;
  CHECK_THROWS_AS(monadic_decide(fsig(), f, tight), CapExceededError);
  Verdict ok = monadic_decide(fsig(), f);
  REQUIRE(ok.kind == Verdict::Kind::Sat);
  CHECK(satisfies(ok.witness->model, ok.witness->env, f));

  // three predicates over f track six words, past the default cap
  Signature wide({{"f", 1}}, {{"A", 1}, {"B", 1}, {"C", 1}});
  Formula g = Formula::ex(Formula::conj(
      Formula::atom(0, {Term::app(0, {V(0)})}),
      Formula::conj(Formula::atom(1, {Term::app(0, {V(0)})}),
                    Formula::atom(2, {Term::app(0, {V(0)})}))));
  CHECK_THROWS_AS(monadic_decide(wide, g), CapExceededError);

  MonadicOptions tiny;
  tiny.rel_cap = 1;
  CHECK_THROWS_AS(monadic_rel_decide(rsig(), Formula::bot(), tiny),
                  CapExceededError);
}

TEST_CASE("monadic preconditions reject non-monadic input") {
  Signature bad({}, {{"R", 2}});
  Formula f = Formula::ex(Formula::atom(0, {V(0), V(0)}));
  CHECK_THROWS_AS(monadic_rel_decide(bad, f), PreconditionError);
  CHECK_THROWS_AS(monadic_decide(bad, f), PreconditionError);
}
