#include "folmt/eval.hpp"

#include <unordered_map>
#include <vector>

namespace folmt {
namespace {

using Kind = Formula::Kind;

struct VecHash {
  size_t operator()(const std::vector<unsigned>& v) const noexcept {
    size_t h = 1469598103934665603ull;
    for (unsigned x : v) h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

// ex x. R(x, y) /\ rest   or   all x. R(x, y) -> rest, with exactly one of
// the atom's arguments the bound variable and the other bound further out.
struct GuardMatch {
  bool ok = false;
  unsigned rel = 0;
  bool bound_first = false;  // bound variable is the atom's first argument
  unsigned outer = 0;        // de Bruijn index of the other variable, >= 1
  Formula rest;
};

GuardMatch match_guard(const Formula& f) {
  GuardMatch g;
  if (!f.is_quant()) return g;
  const Formula& body = f.body();
  if (f.kind() == Kind::All ? body.kind() != Kind::Impl
                            : body.kind() != Kind::And)
    return g;
  const Formula& atom = body.left();
  if (atom.kind() != Kind::Atom || atom.args().size() != 2) return g;
  const Term& a0 = atom.args()[0];
  const Term& a1 = atom.args()[1];
  if (!a0.is_var() || !a1.is_var()) return g;
  if (a0.index() == 0 && a1.index() >= 1) {
    g.bound_first = true;
    g.outer = a1.index();
  } else if (a1.index() == 0 && a0.index() >= 1) {
    g.bound_first = false;
    g.outer = a0.index();
  } else {
    return g;
  }
  g.ok = true;
  g.rel = atom.rel();
  g.rest = body.right();
  return g;
}

unsigned count_nodes(const Formula& f) {
  switch (f.kind()) {
    case Kind::Bot:
    case Kind::Atom:
      return 1;
    case Kind::Impl:
    case Kind::And:
    case Kind::Or:
      return 1 + count_nodes(f.left()) + count_nodes(f.right());
    case Kind::All:
    case Kind::Ex:
      return 1 + count_nodes(f.body());
  }
  return 1;
}

}  // namespace

struct Evaluator::Impl {
  const FiniteModel& m;
  EvalOptions opts;
  unsigned k;

  std::vector<unsigned> locals;
  const Assignment* outer = nullptr;
  bool memo_on = false;
  bool guard_on = false;

  // Entries pin their formula: keys are node addresses, so a cached node
  // must stay alive or a later allocation could reuse its address.
  struct QuantEntry {
    Formula keep;
    std::vector<unsigned> fvs;
    std::unordered_map<std::vector<unsigned>, bool, VecHash> table;
  };
  std::unordered_map<const void*, QuantEntry> memo;
  struct SizeEntry {
    Formula keep;
    unsigned nodes = 0;
  };
  std::unordered_map<const void*, SizeEntry> root_sizes;

  struct RelIndex {
    bool built = false;
    std::vector<std::vector<unsigned>> by_first, by_second;
  };
  std::vector<RelIndex> rindex;

  explicit Impl(const FiniteModel& model, EvalOptions o)
      : m(model), opts(o), k(model.size()), rindex(model.sig().rel_count()) {}

  unsigned lookup(unsigned i) const {
    if (i < locals.size()) return locals[locals.size() - 1 - i];
    return (*outer)(i - static_cast<unsigned>(locals.size()));
  }

  unsigned eval_term(const Term& t) {
    if (t.is_var()) return lookup(t.index());
    std::vector<unsigned> vals;
    vals.reserve(t.args().size());
    for (const Term& a : t.args()) vals.push_back(eval_term(a));
    return m.fun(t.func(), vals);
  }

  const RelIndex& index_of(unsigned r) {
    RelIndex& ix = rindex.at(r);
    if (!ix.built) {
      ix.by_first.assign(k, {});
      ix.by_second.assign(k, {});
      const auto& table = m.rel_table(r);
      for (unsigned a = 0; a < k; ++a)
        for (unsigned b = 0; b < k; ++b)
          if (table[static_cast<size_t>(a) * k + b]) {
            ix.by_first[a].push_back(b);
            ix.by_second[b].push_back(a);
          }
      ix.built = true;
    }
    return ix;
  }

  bool eval(const Formula& f) {
    switch (f.kind()) {
      case Kind::Bot:
        return false;
      case Kind::Atom: {
        std::vector<unsigned> vals;
        vals.reserve(f.args().size());
        for (const Term& a : f.args()) vals.push_back(eval_term(a));
        return m.rel(f.rel(), vals);
      }
      case Kind::Impl:
        return !eval(f.left()) || eval(f.right());
      case Kind::And:
        return eval(f.left()) && eval(f.right());
      case Kind::Or:
        return eval(f.left()) || eval(f.right());
      case Kind::All:
      case Kind::Ex:
        return eval_quant(f);
    }
    return false;
  }

  bool eval_quant(const Formula& f) {
    QuantEntry* entry = nullptr;
    std::vector<unsigned> key;
    if (memo_on) {
      auto [it, fresh] = memo.try_emplace(f.id());
      entry = &it->second;
      if (fresh) {
        entry->keep = f;
        entry->fvs = free_vars(f);
      }
      key.reserve(entry->fvs.size());
      for (unsigned v : entry->fvs) key.push_back(lookup(v));
      auto hit = entry->table.find(key);
      if (hit != entry->table.end()) return hit->second;
    }
    bool result = eval_quant_raw(f);
    if (entry) entry->table.emplace(std::move(key), result);
    return result;
  }

  bool eval_quant_raw(const Formula& f) {
    const bool universal = f.kind() == Kind::All;
    if (guard_on) {
      GuardMatch g = match_guard(f);
      if (g.ok && m.sig().rel(g.rel).arity == 2) {
        const RelIndex& ix = index_of(g.rel);
        unsigned other = lookup(g.outer - 1);
        const std::vector<unsigned>& row =
            g.bound_first ? ix.by_second[other] : ix.by_first[other];
        for (unsigned a : row) {
          locals.push_back(a);
          bool r = eval(g.rest);
          locals.pop_back();
          if (r != universal) return r;
        }
        return universal;
      }
    }
    for (unsigned a = 0; a < k; ++a) {
      locals.push_back(a);
      bool r = eval(f.body());
      locals.pop_back();
      if (r != universal) return r;
    }
    return universal;
  }

  unsigned root_size(const Formula& f) {
    auto [it, fresh] = root_sizes.try_emplace(f.id());
    if (fresh) {
      it->second.keep = f;
      it->second.nodes = count_nodes(f);
    }
    return it->second.nodes;
  }
};

Evaluator::Evaluator(const FiniteModel& m, EvalOptions opts)
    : impl_(std::make_unique<Impl>(m, opts)) {}

Evaluator::~Evaluator() = default;

bool Evaluator::check(const Assignment& env, const Formula& f) {
  Impl& im = *impl_;
  im.outer = &env;
  im.locals.clear();
  im.memo_on = im.opts.memo == 1 ||
               (im.opts.memo == -1 && (im.k >= 64 || im.root_size(f) >= 512));
  im.guard_on = im.opts.guard == 1 || (im.opts.guard == -1 && im.k >= 64);
  return im.eval(f);
}

unsigned Evaluator::term(const Assignment& env, const Term& t) {
  Impl& im = *impl_;
  im.outer = &env;
  im.locals.clear();
  return im.eval_term(t);
}

bool satisfies(const FiniteModel& m, const Assignment& env, const Formula& f,
               EvalOptions opts) {
  Evaluator ev(m, opts);
  return ev.check(env, f);
}

unsigned eval_term(const FiniteModel& m, const Assignment& env, const Term& t) {
  Evaluator ev(m);
  return ev.term(env, t);
}

}  // namespace folmt
