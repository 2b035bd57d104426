#include "folmt/signature.hpp"

#include <unordered_set>

#include "folmt/errors.hpp"

namespace folmt {

namespace {

void check_names(const std::vector<SymbolDecl>& decls, const char* sort) {
  std::unordered_set<std::string> seen;
  for (const auto& d : decls) {
    if (d.name.empty()) throw PreconditionError(std::string(sort) + " symbol with empty name");
    for (char c : d.name) {
      if (c == '(' || c == ')' || c == ';' || static_cast<unsigned char>(c) <= ' ')
        throw PreconditionError("symbol name '" + d.name + "' contains reserved characters");
    }
    if (!seen.insert(d.name).second)
      throw PreconditionError(std::string("duplicate ") + sort + " symbol '" + d.name + "'");
  }
}

}  // namespace

Signature::Signature(std::vector<SymbolDecl> funcs, std::vector<SymbolDecl> rels)
    : funcs_(std::move(funcs)), rels_(std::move(rels)) {
  check_names(funcs_, "function");
  check_names(rels_, "relation");
}

std::optional<unsigned> Signature::find_func(const std::string& name) const {
  for (unsigned i = 0; i < funcs_.size(); ++i)
    if (funcs_[i].name == name) return i;
  return std::nullopt;
}

std::optional<unsigned> Signature::find_rel(const std::string& name) const {
  for (unsigned i = 0; i < rels_.size(); ++i)
    if (rels_[i].name == name) return i;
  return std::nullopt;
}

std::string unique_name(const std::string& base, const std::vector<std::string>& used) {
  auto taken = [&](const std::string& candidate) {
    for (const auto& u : used)
      if (u == candidate) return true;
    return false;
  };
  if (!taken(base)) return base;
  for (unsigned n = 2;; ++n) {
    std::string candidate = base + "_" + std::to_string(n);
    if (!taken(candidate)) return candidate;
  }
}

}  // namespace folmt
