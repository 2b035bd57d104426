#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "folmt/eval.hpp"
#include "folmt/io.hpp"
#include "support/test_support.hpp"

using namespace folmt;

namespace {
const Signature& sig2() {
  static const Signature s({{"c", 0}, {"g", 1}, {"h", 2}}, {{"P", 1}, {"Q", 2}});
  return s;
}
}  // namespace

TEST_CASE("term evaluation") {
  FiniteModel m(sig2(), 3);
  m.set_fun(0, {}, 2);
  unsigned a1[1];
  for (unsigned v = 0; v < 3; ++v) {
    a1[0] = v;
    m.set_fun(1, a1, (v + 1) % 3);
  }
  unsigned a2[2];
  for (unsigned x = 0; x < 3; ++x)
    for (unsigned y = 0; y < 3; ++y) {
      a2[0] = x;
      a2[1] = y;
      m.set_fun(2, a2, (x + y) % 3);
    }
  Assignment env;
  env.prefix = {1};
  env.fallback = 0;
  // h(g(c), x0) = h(g(2), 1) = h(0, 1) = 1
  Term t = Term::app(2, {Term::app(1, {Term::app(0, {})}), Term::var(0)});
  CHECK(eval_term(m, env, t) == 1);
  CHECK(eval_term(m, env, Term::var(9)) == 0);  // fallback
}

TEST_CASE("connective and quantifier semantics") {
  FiniteModel m(sig2(), 2);
  // P = {1}, Q = {(0,0),(0,1)}
  unsigned one[1] = {1};
  m.set_rel(0, one, true);
  unsigned q00[2] = {0, 0};
  unsigned q01[2] = {0, 1};
  m.set_rel(1, q00, true);
  m.set_rel(1, q01, true);
  Assignment e;

  Formula p0 = Formula::atom(0, {Term::var(0)});
  CHECK(!satisfies(m, e, Formula::bot()));
  CHECK(satisfies(m, e, top()));
  CHECK(satisfies(m, e, Formula::ex(p0)));
  CHECK(!satisfies(m, e, Formula::all(p0)));

  // quantifier order matters: ex x. all y. Q(x,y) holds at x=0,
  // ex y. all x. Q(x,y) holds nowhere
  Formula ex_all = Formula::ex(Formula::all(Formula::atom(1, {Term::var(1), Term::var(0)})));
  Formula all_flip = Formula::ex(Formula::all(Formula::atom(1, {Term::var(0), Term::var(1)})));
  CHECK(satisfies(m, e, ex_all));
  CHECK(!satisfies(m, e, all_flip));
  // and the naive oracle agrees on both
  CHECK(testsup::naive_eval(m, e, ex_all));
  CHECK(!testsup::naive_eval(m, e, all_flip));
}

TEST_CASE("oracle agreement across option combinations") {
  testsup::Rng rng(90210);
  EvalOptions combos[5] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {-1, -1}};
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    unsigned k = 1 + rng.below(3);
    FiniteModel m = testsup::random_model(rng, sig2(), k);
    Formula f = testsup::random_formula(rng, sig2(), 4, 3);
    Assignment env = testsup::random_env(rng, k, 3);
    bool want = testsup::naive_eval(m, env, f);
    for (const EvalOptions& o : combos) {
      CHECK(satisfies(m, env, f, o) == want);
      ++checked;
    }
  }
  CHECK(checked == 1500);
}

TEST_CASE("guarded quantifier shapes match plain evaluation") {
  testsup::Rng rng(5150);
  for (int t = 0; t < 120; ++t) {
    unsigned k = 1 + rng.below(4);
    FiniteModel m = testsup::random_model(rng, sig2(), k);
    Formula rest = testsup::random_formula(rng, sig2(), 2, 2);
    // both argument orders, both quantifiers, guard relation Q
    Formula g1 = Formula::ex(Formula::conj(
        Formula::atom(1, {Term::var(0), Term::var(1 + rng.below(2))}), rest));
    Formula g2 = Formula::ex(Formula::conj(
        Formula::atom(1, {Term::var(1 + rng.below(2)), Term::var(0)}), rest));
    Formula g3 = Formula::all(Formula::impl(
        Formula::atom(1, {Term::var(0), Term::var(1 + rng.below(2))}), rest));
    Formula g4 = Formula::all(Formula::impl(
        Formula::atom(1, {Term::var(1 + rng.below(2)), Term::var(0)}), rest));
    Assignment env = testsup::random_env(rng, k, 2);
    for (const Formula& g : {g1, g2, g3, g4}) {
      bool want = testsup::naive_eval(m, env, g);
      CHECK(satisfies(m, env, g, {0, 1}) == want);
      CHECK(satisfies(m, env, g, {1, 1}) == want);
    }
  }
}

TEST_CASE("one evaluator reused across assignments and formulas") {
  testsup::Rng rng(31337);
  unsigned k = 3;
  FiniteModel m = testsup::random_model(rng, sig2(), k);
  Evaluator forced(m, {1, 1});
  Evaluator plain(m, {0, 0});
  for (int t = 0; t < 200; ++t) {
    Formula f = testsup::random_formula(rng, sig2(), 3, 2);
    Assignment env = testsup::random_env(rng, k, 2);
    bool want = testsup::naive_eval(m, env, f);
    CHECK(forced.check(env, f) == want);
    CHECK(plain.check(env, f) == want);
  }
}

TEST_CASE("assignment pushed prepends") {
  Assignment e;
  e.prefix = {2, 5};
  e.fallback = 7;
  Assignment p = e.pushed(9);
  CHECK(p(0) == 9);
  CHECK(p(1) == 2);
  CHECK(p(2) == 5);
  CHECK(p(3) == 7);
}

TEST_CASE("next_tuple walks lexicographically") {
  std::vector<unsigned> t{0, 0};
  std::vector<std::vector<unsigned>> seen;
  do {
    seen.push_back(t);
  } while (next_tuple(t, 2));
  CHECK(seen == std::vector<std::vector<unsigned>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  std::vector<unsigned> empty;
  CHECK(!next_tuple(empty, 4));
}
