#pragma once

#include <memory>
#include <vector>

namespace folmt {

// A first-order term: either a de Bruijn variable or a function application.
// Terms are immutable; copies share structure.
class Term {
 public:
  Term() = default;  // Var 0

  static Term var(unsigned index) {
    Term t;
    t.var_ = index;
    return t;
  }

  static Term app(unsigned func, std::vector<Term> args) {
    Term t;
    t.app_ = std::make_shared<const AppNode>(AppNode{func, std::move(args)});
    return t;
  }

  bool is_var() const { return app_ == nullptr; }
  bool is_app() const { return app_ != nullptr; }

  // Var accessor.
  unsigned index() const { return var_; }

  // App accessors.
  unsigned func() const { return app_->func; }
  const std::vector<Term>& args() const { return app_->args; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.app_ == b.app_) return a.app_ != nullptr || a.var_ == b.var_;
    if (!a.app_ || !b.app_) return false;
    return a.app_->func == b.app_->func && a.app_->args == b.app_->args;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct AppNode {
    unsigned func;
    std::vector<Term> args;
  };

  unsigned var_ = 0;
  std::shared_ptr<const AppNode> app_;
};

}  // namespace folmt
