#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "folmt/errors.hpp"
#include "folmt/eval.hpp"
#include "folmt/quotient.hpp"
#include "support/test_support.hpp"

using namespace folmt;

namespace {

const Signature& qsig() {
  static const Signature s({{"u", 1}}, {{"A", 1}, {"B", 2}});
  return s;
}

// touches every symbol, so quotienting by it considers the whole model
Formula full_touch() {
  return Formula::ex(Formula::conj(
      Formula::atom(0, {Term::app(0, {Term::var(0)})}),
      Formula::ex(Formula::atom(1, {Term::var(1), Term::var(0)}))));
}

// a ~ b must let them substitute for each other everywhere
bool is_congruence(const FiniteModel& m, const std::vector<unsigned>& c) {
  unsigned k = m.size();
  for (unsigned a = 0; a < k; ++a)
    for (unsigned b = 0; b < k; ++b) {
      if (c[a] != c[b]) continue;
      for (unsigned r = 0; r < m.sig().rel_count(); ++r) {
        unsigned ar = m.sig().rel(r).arity;
        std::vector<unsigned> t(ar, 0);
        do {
          for (unsigned i = 0; i < ar; ++i) {
            if (t[i] != a) continue;
            std::vector<unsigned> s = t;
            s[i] = b;
            if (m.rel(r, t) != m.rel(r, s)) return false;
          }
        } while (next_tuple(t, k));
      }
      for (unsigned f = 0; f < m.sig().func_count(); ++f) {
        unsigned ar = m.sig().func(f).arity;
        std::vector<unsigned> t(ar, 0);
        do {
          for (unsigned i = 0; i < ar; ++i) {
            if (t[i] != a) continue;
            std::vector<unsigned> s = t;
            s[i] = b;
            if (c[m.fun(f, t)] != c[m.fun(f, s)]) return false;
          }
        } while (next_tuple(t, k));
      }
    }
  return true;
}

}  // namespace

TEST_CASE("pigeonhole witness on a fixed instance") {
  std::vector<int> l{10, 11, 12};
  std::vector<int> hole{0, 1};
  auto rel = [](int x, int y) { return x % 2 == y; };
  PhpWitness w = php_witness(l, hole, rel);
  CHECK(w.i == 0);
  CHECK(w.j == 2);
  CHECK(w.y == 0);
}

TEST_CASE("pigeonhole witness preconditions") {
  std::vector<int> l{1, 2};
  std::vector<int> same{3, 4};
  CHECK_THROWS_AS(php_witness(l, same, [](int, int) { return true; }),
                  PreconditionError);
  std::vector<int> hole{0};
  CHECK_THROWS_AS(php_witness(l, hole, [](int, int) { return false; }),
                  PreconditionError);
}

TEST_CASE("pigeonhole witness on random total relations") {
  testsup::Rng rng(808);
  for (int t = 0; t < 100; ++t) {
    unsigned nl = 2 + rng.below(6);
    unsigned nm = 1 + rng.below(nl - 1);  // strictly shorter
    std::vector<unsigned> l(nl), holes(nm);
    for (unsigned i = 0; i < nl; ++i) l[i] = 100 + i;
    for (unsigned y = 0; y < nm; ++y) holes[y] = y;
    std::vector<std::vector<bool>> tab(nl, std::vector<bool>(nm, false));
    for (unsigned i = 0; i < nl; ++i) {
      tab[i][rng.below(nm)] = true;  // totality
      for (unsigned y = 0; y < nm; ++y)
        if (rng.coin(0.3)) tab[i][y] = true;
    }
    auto rel = [&](unsigned x, unsigned y) { return tab[x - 100][y]; };
    PhpWitness w = php_witness(l, holes, rel);
    CHECK(w.i < w.j);
    CHECK(w.j < nl);
    CHECK(w.y < nm);
    CHECK(rel(l[w.i], holes[w.y]));
    CHECK(rel(l[w.j], holes[w.y]));
  }
}

TEST_CASE("indistinguishability on a known model") {
  FiniteModel m(qsig(), 4);
  // A = {0,1}; B empty; u identity
  for (unsigned v = 0; v < 4; ++v) {
    unsigned a1[1] = {v};
    m.set_fun(0, a1, v);
    m.set_rel(0, a1, v < 2);
  }
  std::vector<unsigned> fs{0}, ps{0, 1};
  EquivClasses ec = indist_fixpoint(m, fs, ps);
  CHECK(ec.class_count == 2);
  CHECK(ec.c == std::vector<unsigned>{0, 0, 1, 1});
  CHECK(ec.r == std::vector<unsigned>{0, 2});

  // with B = graph of successor the classes split completely
  for (unsigned v = 0; v < 4; ++v) {
    unsigned p[2] = {v, (v + 1) % 4};
    m.set_rel(1, p, true);
  }
  unsigned diag[2] = {0, 0};
  m.set_rel(1, diag, true);  // break the rotation symmetry
  EquivClasses ec2 = indist_fixpoint(m, fs, ps);
  CHECK(ec2.class_count == 4);
}

TEST_CASE("fixpoint yields a congruence and stabilizes in bound") {
  testsup::Rng rng(3090);
  for (int t = 0; t < 50; ++t) {
    unsigned k = 1 + rng.below(3);
    FiniteModel m = testsup::random_model(rng, qsig(), k);
    std::vector<unsigned> fs{0}, ps{0, 1};
    EquivClasses ec = indist_fixpoint(m, fs, ps);

    REQUIRE(ec.c.size() == k);
    for (unsigned p = 0; p < ec.class_count; ++p) {
      CHECK(ec.c[ec.r[p]] == p);
      for (unsigned x = 0; x < ec.r[p]; ++x) CHECK(ec.c[x] != p);  // least member
    }
    CHECK(is_congruence(m, ec.c));

    auto iters = detail::indist_iterates(m, fs, ps);
    CHECK(iters.size() <= static_cast<std::size_t>(k) * k + 1);
    REQUIRE(!iters.empty());
    const auto& last = iters.back();
    for (unsigned a = 0; a < k; ++a)
      for (unsigned b = 0; b < k; ++b)
        CHECK((last[a * k + b] != 0) == (ec.c[a] == ec.c[b]));
    // refinement only ever splits
    for (std::size_t i = 1; i < iters.size(); ++i)
      for (std::size_t cell = 0; cell < iters[i].size(); ++cell)
        if (iters[i][cell]) CHECK(iters[i - 1][cell]);
  }
}

TEST_CASE("quotient preserves satisfaction both ways") {
  testsup::Rng rng(6060);
  int shrunk = 0;
  for (int t = 0; t < 60; ++t) {
    unsigned k = 1 + rng.below(3);
    FiniteModel m = testsup::random_model(rng, qsig(), k);
    if (t % 4 == 0 && k >= 2) {
      // make element 1 behave exactly like element 0 so the pair merges
      unsigned z[1] = {0}, o[1] = {1};
      m.set_rel(0, o, m.rel(0, z));
      m.set_fun(0, o, m.fun(0, z));
      bool diag = m.rel(1, std::vector<unsigned>{0, 0});
      for (unsigned x : {0u, 1u})
        for (unsigned y : {0u, 1u}) m.set_rel(1, std::vector<unsigned>{x, y}, diag);
      for (unsigned x = 2; x < k; ++x) {
        m.set_rel(1, std::vector<unsigned>{1, x}, m.rel(1, std::vector<unsigned>{0, x}));
        m.set_rel(1, std::vector<unsigned>{x, 1}, m.rel(1, std::vector<unsigned>{x, 0}));
      }
    }
    Formula body = testsup::random_formula(rng, qsig(), 3, 2);
    Formula f = Formula::all(Formula::all(body));  // closed
    // full_touch mentions every symbol, so its quotient respects any formula
    auto [q, ec] = quotient_model(m, full_touch());
    CHECK(q.size() == ec.class_count);
    if (q.size() < k) ++shrunk;
    CHECK(satisfies(m, Assignment{}, full_touch()) ==
          satisfies(q, Assignment{}, full_touch()));
    CHECK(satisfies(m, Assignment{}, f) == satisfies(q, Assignment{}, f));

    // quotient tables factor through the class map
    std::vector<unsigned> t2(2, 0);
    do {
      std::vector<unsigned> ct{ec.c[t2[0]], ec.c[t2[1]]};
      CHECK(q.rel(1, ct) == m.rel(1, t2));
    } while (next_tuple(t2, k));
    for (unsigned v = 0; v < k; ++v) {
      unsigned a1[1] = {v};
      unsigned ca[1] = {ec.c[v]};
      CHECK(q.fun(0, ca) == ec.c[m.fun(0, a1)]);
      CHECK(q.rel(0, ca) == m.rel(0, a1));
    }
  }
  CHECK(shrunk > 0);
}

TEST_CASE("quotient only considers symbols of the formula") {
  // by a formula naming just A, everything with equal A-membership merges
  Formula fa = Formula::ex(Formula::atom(0, {Term::var(0)}));
  testsup::Rng rng(515);
  for (int t = 0; t < 20; ++t) {
    unsigned k = 2 + rng.below(3);
    FiniteModel m = testsup::random_model(rng, qsig(), k);
    auto [q, ec] = quotient_model(m, fa);
    CHECK(ec.class_count <= 2);
    CHECK(satisfies(m, Assignment{}, fa) == satisfies(q, Assignment{}, fa));
    for (unsigned a = 0; a < k; ++a)
      for (unsigned b = 0; b < k; ++b) {
        unsigned pa[1] = {a}, pb[1] = {b};
        if (m.rel(0, pa) == m.rel(0, pb)) CHECK(ec.c[a] == ec.c[b]);
      }
  }
}

TEST_CASE("merged elements are first-order indistinguishable") {
  testsup::Rng rng(2718);
  for (int t = 0; t < 20; ++t) {
    unsigned k = 2 + rng.below(2);
    FiniteModel m = testsup::random_model(rng, qsig(), k);
    auto [q, ec] = quotient_model(m, full_touch());
    for (unsigned a = 0; a < k; ++a)
      for (unsigned b = a + 1; b < k; ++b) {
        if (ec.c[a] != ec.c[b]) continue;
        for (int s = 0; s < 50; ++s) {
          Formula probe = testsup::random_formula(rng, qsig(), 3, 1);
          CHECK(testsup::naive_eval(m, {a}, 0, probe) ==
                testsup::naive_eval(m, {b}, 0, probe));
        }
      }
  }
}
