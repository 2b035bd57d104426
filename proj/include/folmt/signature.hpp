#pragma once

#include <optional>
#include <string>
#include <vector>

namespace folmt {

struct SymbolDecl {
  std::string name;
  unsigned arity = 0;

  friend bool operator==(const SymbolDecl& a, const SymbolDecl& b) {
    return a.name == b.name && a.arity == b.arity;
  }
};

// A first-order signature: function symbols and relation symbols with fixed
// arities. Formulas refer to symbols by index into these tables, so a
// signature value is the single source of truth for names and arities.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<SymbolDecl> funcs, std::vector<SymbolDecl> rels);

  unsigned func_count() const { return static_cast<unsigned>(funcs_.size()); }
  unsigned rel_count() const { return static_cast<unsigned>(rels_.size()); }

  const SymbolDecl& func(unsigned i) const { return funcs_.at(i); }
  const SymbolDecl& rel(unsigned i) const { return rels_.at(i); }
  const std::vector<SymbolDecl>& funcs() const { return funcs_; }
  const std::vector<SymbolDecl>& rels() const { return rels_; }

  std::optional<unsigned> find_func(const std::string& name) const;
  std::optional<unsigned> find_rel(const std::string& name) const;

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.funcs_ == b.funcs_ && a.rels_ == b.rels_;
  }

 private:
  std::vector<SymbolDecl> funcs_;
  std::vector<SymbolDecl> rels_;
};

// Picks a name not present in `used`, starting from `base` and appending a
// numeric suffix if needed.
std::string unique_name(const std::string& base, const std::vector<std::string>& used);

}  // namespace folmt
