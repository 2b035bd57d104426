#include "folmt/hfs.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "folmt/errors.hpp"

namespace folmt {

namespace {
const std::vector<HfSet>& empty_elems() {
  static const std::vector<HfSet> none;
  return none;
}
}  // namespace

const std::vector<HfSet>& HfSet::elems() const {
  return node_ ? node_->elems : empty_elems();
}

HfSet HfSet::from_list(std::vector<HfSet> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](const HfSet& a, const HfSet& b) { return a == b; }),
           xs.end());
  if (xs.empty()) return HfSet();
  auto node = std::make_shared<Node>();
  unsigned rank = 0;
  for (const HfSet& x : xs) rank = std::max(rank, x.rank());
  node->rank = rank + 1;
  node->elems = std::move(xs);
  HfSet out;
  out.node_ = std::move(node);
  return out;
}

bool HfSet::operator==(const HfSet& o) const {
  if (node_ == o.node_) return true;
  const auto& a = elems();
  const auto& b = o.elems();
  if (rank() != o.rank() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

bool HfSet::operator<(const HfSet& o) const {
  if (node_ == o.node_) return false;
  if (rank() != o.rank()) return rank() < o.rank();
  const auto& a = elems();
  const auto& b = o.elems();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string HfSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const HfSet& x : elems()) {
    if (!first) out += ',';
    first = false;
    out += x.to_string();
  }
  out += '}';
  return out;
}

bool hf_mem(const HfSet& a, const HfSet& b) {
  const auto& xs = b.elems();
  auto it = std::lower_bound(xs.begin(), xs.end(), a);
  return it != xs.end() && *it == a;
}

HfSet hf_pair(const HfSet& a, const HfSet& b) {
  return HfSet::from_list({HfSet::from_list({a}), HfSet::from_list({a, b})});
}

HfSet hf_tuple(const std::vector<HfSet>& xs) {
  if (xs.empty()) throw PreconditionError("hf_tuple: empty tuple");
  HfSet out = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) out = hf_pair(xs[i], out);
  return out;
}

HfSet hf_powerset(const HfSet& a) {
  const auto& xs = a.elems();
  if (xs.size() > 20) throw CapExceededError("hf_powerset: set too large");
  std::vector<HfSet> subsets;
  subsets.reserve(1u << xs.size());
  for (unsigned mask = 0; mask < (1u << xs.size()); ++mask) {
    std::vector<HfSet> sub;
    for (unsigned i = 0; i < xs.size(); ++i)
      if (mask & (1u << i)) sub.push_back(xs[i]);
    subsets.push_back(HfSet::from_list(std::move(sub)));
  }
  return HfSet::from_list(std::move(subsets));
}

std::vector<HfSet> hf_transitive_closure(const HfSet& a) {
  std::vector<HfSet> out;
  std::set<HfSet> seen;
  // explicit preorder walk
  std::vector<HfSet> stack{a};
  while (!stack.empty()) {
    HfSet x = stack.back();
    stack.pop_back();
    if (!seen.insert(x).second) continue;
    out.push_back(x);
    const auto& xs = x.elems();
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

const Signature& membership_signature() {
  static const Signature sig({}, {{"mem", 2}});
  return sig;
}

MembershipModel relation_to_membership_model(unsigned m, unsigned n,
                                             const std::vector<std::uint8_t>& table) {
  if (m == 0) throw PreconditionError("membership model: source must be nonempty");
  if (n == 0) throw PreconditionError("membership model: arity must be positive");
  if (table.size() != FiniteModel::grid_size(m, n))
    throw PreconditionError("membership model: table size mismatch");

  // von Neumann-style transitive set: element x is {0, ..., x-1}
  std::vector<HfSet> vn(m);
  for (unsigned i = 0; i < m; ++i)
    vn[i] = HfSet::from_list({vn.begin(), vn.begin() + i});
  HfSet d = HfSet::from_list(vn);

  std::vector<HfSet> tuples;
  std::vector<HfSet> true_rows;
  tuples.reserve(table.size());
  std::vector<unsigned> idx(n, 0);
  std::vector<HfSet> parts(n);
  std::size_t flat = 0;
  do {
    for (unsigned j = 0; j < n; ++j) parts[j] = vn[idx[j]];
    HfSet t = hf_tuple(parts);
    if (table[flat]) true_rows.push_back(t);
    tuples.push_back(std::move(t));
    ++flat;
  } while (next_tuple(idx, m));
  HfSet r = HfSet::from_list(std::move(true_rows));

  std::set<HfSet> dom;
  std::vector<HfSet> stack{d, r};
  stack.insert(stack.end(), tuples.begin(), tuples.end());
  while (!stack.empty()) {
    HfSet x = stack.back();
    stack.pop_back();
    if (!dom.insert(x).second) continue;
    for (const HfSet& y : x.elems()) stack.push_back(y);
  }

  MembershipModel mm;
  mm.domain.assign(dom.begin(), dom.end());
  mm.source_size = m;
  mm.arity = n;
  const unsigned k = mm.size();
  if (static_cast<std::uint64_t>(k) * k > (1ull << 32))
    throw CapExceededError("membership model: domain too large");

  auto position = [&](const HfSet& x) {
    auto it = std::lower_bound(mm.domain.begin(), mm.domain.end(), x);
    return static_cast<unsigned>(it - mm.domain.begin());
  };
  mm.d_index = position(d);
  mm.r_index = position(r);
  mm.embed.resize(m);
  mm.project.assign(k, 0);
  for (unsigned x = 0; x < m; ++x) {
    mm.embed[x] = position(vn[x]);
    mm.project[mm.embed[x]] = x;
  }

  mm.mem.assign(static_cast<std::size_t>(k) * k, 0);
  for (unsigned b = 0; b < k; ++b)
    for (const HfSet& x : mm.domain[b].elems()) {
      // members of a domain set are in the domain (transitive closure)
      mm.mem[static_cast<std::size_t>(position(x)) * k + b] = 1;
    }
  return mm;
}

FiniteModel membership_to_finite_model(const MembershipModel& mm) {
  FiniteModel m(membership_signature(), mm.size());
  m.rel_table(0) = mm.mem;
  return m;
}

}  // namespace folmt
