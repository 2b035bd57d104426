#include "folmt/bpcp.hpp"

#include <map>
#include <set>
#include <sstream>

#include "folmt/errors.hpp"

namespace folmt {
namespace {

void check_bits(const std::string& s) {
  for (char c : s)
    if (c != '0' && c != '1')
      throw PreconditionError("bpcp: strings must be over {0,1}");
}

void check_instance(const BpcpInstance& inst) {
  for (const auto& [s, t] : inst.cards) {
    check_bits(s);
    check_bits(t);
  }
}

bool is_prefix(const std::string& p, const std::string& s) {
  return p.size() <= s.size() && s.compare(0, p.size(), p) == 0;
}

bool is_proper_suffix(const std::string& s, const std::string& t) {
  return s.size() < t.size() &&
         t.compare(t.size() - s.size(), s.size(), s) == 0;
}

// Memoized derivability; keys are suffix pairs of the original query, so
// the table stays quadratic.
struct DerivesMemo {
  const BpcpInstance& inst;
  std::map<std::pair<std::string, std::string>, bool> memo;

  bool run(const std::string& s, const std::string& t) {
    auto key = std::make_pair(s, t);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool result = false;
    for (const auto& [a, b] : inst.cards)
      if (a == s && b == t) {
        result = true;
        break;
      }
    if (!result)
      for (const auto& [a, b] : inst.cards) {
        if (a.empty() && b.empty()) continue;
        if (is_prefix(a, s) && is_prefix(b, t) &&
            run(s.substr(a.size()), t.substr(b.size()))) {
          result = true;
          break;
        }
      }
    memo[key] = result;
    return result;
  }
};

using namespace bpcp_sym;

Term t_star() { return Term::app(star, {}); }
Term t_e() { return Term::app(e, {}); }

// s-bar +++ tail: the string spelled over f1/f0 ending in tail, first
// character outermost.
Term enc_term(const std::string& s, Term tail) {
  Term t = std::move(tail);
  for (auto it = s.rbegin(); it != s.rend(); ++it)
    t = Term::app(*it == '1' ? f1 : f0, {t});
  return t;
}

Formula f_eq(Term a, Term b) { return Formula::atom(eq, {std::move(a), std::move(b)}); }
Formula f_prec(Term a, Term b) { return Formula::atom(prec, {std::move(a), std::move(b)}); }
Formula f_P(Term a, Term b) { return Formula::atom(P, {std::move(a), std::move(b)}); }

}  // namespace

BpcpInstance parse_instance(const std::string& text) {
  BpcpInstance inst;
  std::istringstream in(text);
  std::string line;
  unsigned lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find(';'); pos != std::string::npos) line.resize(pos);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks.size() != 2)
      throw ParseError("bpcp instance: expected two strings per line", lineno, 1);
    for (std::string& t : toks) {
      if (t == "-") {
        t.clear();
        continue;
      }
      for (char c : t)
        if (c != '0' && c != '1')
          throw ParseError("bpcp instance: invalid string '" + t + "'", lineno, 1);
    }
    inst.cards.emplace_back(toks[0], toks[1]);
  }
  return inst;
}

std::string print_instance(const BpcpInstance& inst) {
  std::string out;
  for (const auto& [s, t] : inst.cards) {
    out += s.empty() ? "-" : s;
    out += ' ';
    out += t.empty() ? "-" : t;
    out += '\n';
  }
  return out;
}

const Signature& bpcp_signature() {
  static const Signature sig(
      {{"star", 0}, {"e", 0}, {"f1", 1}, {"f0", 1}},
      {{"P", 2}, {"prec", 2}, {"eq", 2}});
  return sig;
}

bool derives(const BpcpInstance& inst, const std::string& s,
             const std::string& t) {
  DerivesMemo dm{inst, {}};
  return dm.run(s, t);
}

std::optional<std::string> bpcp_solve(const BpcpInstance& inst,
                                      unsigned maxlen) {
  if (maxlen > 24) throw CapExceededError("bpcp solve: maxlen above 24");
  check_instance(inst);
  DerivesMemo dm{inst, {}};
  for (unsigned len = 0; len <= maxlen; ++len) {
    std::string s(len, '0');
    for (std::uint64_t v = 0; v < (1ull << len); ++v) {
      for (unsigned i = 0; i < len; ++i)
        s[i] = (v >> (len - 1 - i)) & 1 ? '1' : '0';
      if (dm.run(s, s)) return s;
    }
  }
  return std::nullopt;
}

Formula bpcp_encode(const BpcpInstance& inst) {
  check_instance(inst);

  // P proper: all x y. P x y -> x != star /\ y != star
  Formula phi_P = Formula::all(Formula::all(Formula::impl(
      f_P(Term::var(1), Term::var(0)),
      Formula::conj(neg(f_eq(Term::var(1), t_star())),
                    neg(f_eq(Term::var(0), t_star()))))));

  // prec is a strict order: irreflexive and transitive.
  Formula irrefl = Formula::all(neg(f_prec(Term::var(0), Term::var(0))));
  Formula trans = Formula::all(Formula::all(Formula::all(Formula::impl(
      f_prec(Term::var(2), Term::var(1)),
      Formula::impl(f_prec(Term::var(1), Term::var(0)),
                    f_prec(Term::var(2), Term::var(0)))))));
  Formula phi_prec = Formula::conj(irrefl, trans);

  // f1/f0 fix star, avoid e, and are injective and mutually disjoint
  // below star.
  auto fb = [](unsigned fsym, Term t) { return Term::app(fsym, {std::move(t)}); };
  Formula fixes = Formula::conj(f_eq(fb(f1, t_star()), t_star()),
                                f_eq(fb(f0, t_star()), t_star()));
  Formula avoid1 = Formula::all(neg(f_eq(fb(f1, Term::var(0)), t_e())));
  Formula avoid0 = Formula::all(neg(f_eq(fb(f0, Term::var(0)), t_e())));
  auto inj = [&](unsigned fsym) {
    return Formula::all(Formula::all(Formula::impl(
        neg(f_eq(fb(fsym, Term::var(1)), t_star())),
        Formula::impl(f_eq(fb(fsym, Term::var(1)), fb(fsym, Term::var(0))),
                      f_eq(Term::var(1), Term::var(0))))));
  };
  Formula disjoint = Formula::all(Formula::all(Formula::impl(
      f_eq(fb(f1, Term::var(1)), fb(f0, Term::var(0))),
      Formula::conj(f_eq(fb(f1, Term::var(1)), t_star()),
                    f_eq(fb(f0, Term::var(0)), t_star())))));
  Formula phi_f = Formula::conj(big_and({fixes, avoid1, avoid0}),
                                big_and({inj(f1), inj(f0), disjoint}));

  // P only holds of pairs derivable in one of the two ways.
  std::vector<Formula> branches;
  branches.reserve(inst.cards.size());
  for (const auto& [s, t] : inst.cards) {
    // under all x y: x = 1, y = 0
    Formula base = Formula::conj(f_eq(Term::var(1), enc_term(s, t_e())),
                                 f_eq(Term::var(0), enc_term(t, t_e())));
    // under ex u v: u = 1, v = 0, x = 3, y = 2
    Formula pair_desc = big_or(
        {Formula::conj(f_prec(Term::var(1), Term::var(3)),
                       f_eq(Term::var(0), Term::var(2))),
         Formula::conj(f_prec(Term::var(0), Term::var(2)),
                       f_eq(Term::var(1), Term::var(3))),
         Formula::conj(f_prec(Term::var(1), Term::var(3)),
                       f_prec(Term::var(0), Term::var(2)))});
    Formula step = Formula::ex(Formula::ex(
        big_and({f_P(Term::var(1), Term::var(0)),
                 f_eq(Term::var(3), enc_term(s, Term::var(1))),
                 f_eq(Term::var(2), enc_term(t, Term::var(0))),
                 pair_desc})));
    branches.push_back(Formula::disj(std::move(base), std::move(step)));
  }
  Formula phi_inv = Formula::all(Formula::all(
      Formula::impl(f_P(Term::var(1), Term::var(0)), big_or(branches))));

  Formula solution = Formula::ex(f_P(Term::var(0), Term::var(0)));

  return big_and({phi_P, phi_prec, phi_f, phi_inv, solution});
}

unsigned bpcp_index_of(const std::string& s) {
  if (s.size() >= 31) throw CapExceededError("bpcp: string too long to index");
  unsigned v = 0;
  for (char c : s) v = v * 2 + (c == '1' ? 1 : 0);
  return (1u << s.size()) + v;
}

std::optional<std::string> bpcp_string_at(unsigned idx, unsigned n) {
  if (idx == 0) return std::nullopt;
  unsigned len = 0;
  while ((2u << len) <= idx) ++len;
  if (len > n) return std::nullopt;
  unsigned v = idx - (1u << len);
  std::string s(len, '0');
  for (unsigned i = 0; i < len; ++i)
    if ((v >> (len - 1 - i)) & 1) s[i] = '1';
  return s;
}

FiniteModel bpcp_model(const BpcpInstance& inst, unsigned n) {
  if (n > 12) throw CapExceededError("bpcp model: n above 12");
  check_instance(inst);
  unsigned k = 1u << (n + 1);
  FiniteModel m(bpcp_signature(), k);

  std::vector<std::string> str(k);
  for (unsigned i = 1; i < k; ++i) str[i] = *bpcp_string_at(i, n);

  m.set_fun(star, {}, 0);
  m.set_fun(e, {}, bpcp_index_of(""));
  for (unsigned b = 0; b < 2; ++b) {
    unsigned fsym = b ? f1 : f0;
    char bit = b ? '1' : '0';
    for (unsigned a = 0; a < k; ++a) {
      unsigned args[1] = {a};
      unsigned out = 0;
      if (a != 0 && str[a].size() < n) out = bpcp_index_of(bit + str[a]);
      m.set_fun(fsym, args, out);
    }
  }

  DerivesMemo dm{inst, {}};
  for (unsigned x = 0; x < k; ++x)
    for (unsigned y = 0; y < k; ++y) {
      unsigned args[2] = {x, y};
      m.set_rel(P, args, x != 0 && y != 0 && dm.run(str[x], str[y]));
      m.set_rel(prec, args,
                x != 0 && y != 0 && is_proper_suffix(str[x], str[y]));
      m.set_rel(eq, args, x == y);
    }
  return m;
}

std::string extract_solution(const BpcpInstance& inst, const FiniteModel& m) {
  if (!(m.sig() == bpcp_signature()))
    throw PreconditionError("extract_solution: model has the wrong signature");
  const unsigned k = m.size();
  auto rel2 = [&](unsigned r, unsigned a, unsigned b) {
    unsigned args[2] = {a, b};
    return m.rel(r, args);
  };
  for (unsigned x = 0; x < k; ++x)
    for (unsigned y = 0; y < k; ++y)
      if (rel2(eq, x, y) != (x == y))
        throw MalformedModelError("extract_solution: eq is not the identity");

  auto enc_val = [&](const std::string& s, unsigned tail) {
    unsigned v = tail;
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
      unsigned args[1] = {v};
      v = m.fun(*it == '1' ? f1 : f0, args);
    }
    return v;
  };
  unsigned e_val = m.fun(e, {});

  std::optional<std::pair<unsigned, unsigned>> cur;
  for (unsigned x = 0; x < k && !cur; ++x)
    if (rel2(P, x, x)) cur = {x, x};
  if (!cur) throw MalformedModelError("extract_solution: P has no diagonal entry");

  auto pair_desc = [&](unsigned u, unsigned v, unsigned x, unsigned y) {
    return (rel2(prec, u, x) && v == y) || (rel2(prec, v, y) && u == x) ||
           (rel2(prec, u, x) && rel2(prec, v, y));
  };

  std::string s_full, t_full;
  std::set<std::pair<unsigned, unsigned>> visited;
  std::uint64_t steps = 0;
  const std::uint64_t bound = static_cast<std::uint64_t>(k) * k + 1;
  while (true) {
    if (++steps > bound)
      throw MalformedModelError("extract_solution: decoding exceeded the step bound");
    if (!visited.insert(*cur).second)
      throw MalformedModelError("extract_solution: decoding revisited a pair");
    auto [x, y] = *cur;
    bool matched = false;
    for (const auto& [s, t] : inst.cards) {
      if (x == enc_val(s, e_val) && y == enc_val(t, e_val)) {
        s_full += s;
        t_full += t;
        matched = true;
        cur.reset();
        break;
      }
      for (unsigned u = 0; u < k && !matched; ++u)
        for (unsigned v = 0; v < k && !matched; ++v)
          if (rel2(P, u, v) && x == enc_val(s, u) && y == enc_val(t, v) &&
              pair_desc(u, v, x, y)) {
            s_full += s;
            t_full += t;
            matched = true;
            cur = {u, v};
          }
      if (matched) break;
    }
    if (!matched)
      throw MalformedModelError("extract_solution: no branch matches a P entry");
    if (!cur) break;
  }
  if (s_full != t_full)
    throw MalformedModelError("extract_solution: decoded strings disagree");
  if (!derives(inst, s_full, s_full))
    throw MalformedModelError("extract_solution: decoded string is not derivable");
  return s_full;
}

}  // namespace folmt
