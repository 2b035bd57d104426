#include "folmt/io.hpp"

#include <charconv>
#include <sstream>

#include "folmt/errors.hpp"

namespace folmt {

namespace {

struct Sexp {
  bool is_atom = false;
  std::string atom;
  std::vector<Sexp> items;
  int line = 0;
  int col = 0;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Sexp read() {
    Sexp e = next();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("trailing input", line_, col_);
    return e;
  }

  // Reads every top-level form.
  std::vector<Sexp> read_all() {
    std::vector<Sexp> out;
    skip_space();
    while (pos_ != text_.size()) {
      out.push_back(next());
      skip_space();
    }
    return out;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Sexp next() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("unexpected end of input", line_, col_);
    Sexp e;
    e.line = line_;
    e.col = col_;
    if (text_[pos_] == '(') {
      advance();
      skip_space();
      while (pos_ < text_.size() && text_[pos_] != ')') {
        e.items.push_back(next());
        skip_space();
      }
      if (pos_ == text_.size()) throw ParseError("unclosed '('", e.line, e.col);
      advance();  // ')'
      return e;
    }
    if (text_[pos_] == ')') throw ParseError("unexpected ')'", line_, col_);
    e.is_atom = true;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' || c == '\r' || c == '\n')
        break;
      e.atom.push_back(c);
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

unsigned to_number(const Sexp& e) {
  if (!e.is_atom) throw ParseError("expected a number", e.line, e.col);
  unsigned value = 0;
  auto [p, ec] = std::from_chars(e.atom.data(), e.atom.data() + e.atom.size(), value);
  if (ec != std::errc{} || p != e.atom.data() + e.atom.size())
    throw ParseError("expected a number, got '" + e.atom + "'", e.line, e.col);
  return value;
}

const std::string& head(const Sexp& e) {
  static const std::string empty;
  if (e.is_atom || e.items.empty() || !e.items[0].is_atom) return empty;
  return e.items[0].atom;
}

void expect_size(const Sexp& e, std::size_t n, const char* what) {
  if (e.items.size() != n) throw ParseError(std::string("malformed ") + what, e.line, e.col);
}

Term term_of(const Sexp& e, const Signature& sig) {
  if (e.is_atom) throw ParseError("expected a term", e.line, e.col);
  const std::string& h = head(e);
  if (h == "var") {
    expect_size(e, 2, "(var i)");
    return Term::var(to_number(e.items[1]));
  }
  if (h == "app") {
    if (e.items.size() < 2 || !e.items[1].is_atom)
      throw ParseError("malformed (app f ...)", e.line, e.col);
    auto f = sig.find_func(e.items[1].atom);
    if (!f) throw UnknownSymbolError(e.items[1].atom);
    std::vector<Term> args;
    for (std::size_t i = 2; i < e.items.size(); ++i) args.push_back(term_of(e.items[i], sig));
    if (args.size() != sig.func(*f).arity)
      throw ArityError(e.items[1].atom, sig.func(*f).arity, static_cast<unsigned>(args.size()));
    return Term::app(*f, std::move(args));
  }
  throw ParseError("expected (var ...) or (app ...)", e.line, e.col);
}

Formula formula_of(const Sexp& e, const Signature& sig) {
  if (e.is_atom) {
    if (e.atom == "bot") return Formula::bot();
    throw ParseError("expected a formula, got '" + e.atom + "'", e.line, e.col);
  }
  const std::string& h = head(e);
  if (h == "rel") {
    if (e.items.size() < 2 || !e.items[1].is_atom)
      throw ParseError("malformed (rel P ...)", e.line, e.col);
    auto r = sig.find_rel(e.items[1].atom);
    if (!r) throw UnknownSymbolError(e.items[1].atom);
    std::vector<Term> args;
    for (std::size_t i = 2; i < e.items.size(); ++i) args.push_back(term_of(e.items[i], sig));
    if (args.size() != sig.rel(*r).arity)
      throw ArityError(e.items[1].atom, sig.rel(*r).arity, static_cast<unsigned>(args.size()));
    return Formula::atom(*r, std::move(args));
  }
  if (h == "impl" || h == "and" || h == "or") {
    expect_size(e, 3, "binary connective");
    Formula a = formula_of(e.items[1], sig);
    Formula b = formula_of(e.items[2], sig);
    if (h == "impl") return Formula::impl(std::move(a), std::move(b));
    if (h == "and") return Formula::conj(std::move(a), std::move(b));
    return Formula::disj(std::move(a), std::move(b));
  }
  if (h == "all" || h == "ex") {
    expect_size(e, 2, "quantifier");
    Formula body = formula_of(e.items[1], sig);
    return h == "all" ? Formula::all(std::move(body)) : Formula::ex(std::move(body));
  }
  throw ParseError("unknown formula form", e.line, e.col);
}

std::vector<SymbolDecl> decls_of(const Sexp& e, const char* section) {
  if (e.is_atom || head(e) != section)
    throw ParseError(std::string("expected (") + section + " ...)", e.line, e.col);
  std::vector<SymbolDecl> out;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const Sexp& d = e.items[i];
    if (d.is_atom || d.items.size() != 2 || !d.items[0].is_atom)
      throw ParseError("expected (name arity)", d.line, d.col);
    out.push_back({d.items[0].atom, to_number(d.items[1])});
  }
  return out;
}

Signature signature_of(const Sexp& e) {
  if (e.is_atom || head(e) != "signature" || e.items.size() != 3)
    throw ParseError("expected (signature (funcs ...) (rels ...))", e.line, e.col);
  try {
    return Signature(decls_of(e.items[1], "funcs"), decls_of(e.items[2], "rels"));
  } catch (const PreconditionError& err) {
    throw ParseError(err.what(), e.line, e.col);
  }
}

std::vector<unsigned> tuple_of(const Sexp& e, unsigned arity, unsigned size) {
  if (e.is_atom) throw ParseError("expected an argument tuple", e.line, e.col);
  if (e.items.size() != arity) throw ParseError("tuple has wrong length", e.line, e.col);
  std::vector<unsigned> out;
  for (const Sexp& a : e.items) {
    unsigned v = to_number(a);
    if (v >= size) throw ParseError("element outside domain", a.line, a.col);
    out.push_back(v);
  }
  return out;
}

FiniteModel model_of(const Sexp& e, const Signature& sig) {
  if (e.is_atom || head(e) != "model" || e.items.size() < 2)
    throw ParseError("expected (model (size k) ...)", e.line, e.col);
  const Sexp& sz = e.items[1];
  if (sz.is_atom || head(sz) != "size" || sz.items.size() != 2)
    throw ParseError("expected (size k)", sz.line, sz.col);
  unsigned k = to_number(sz.items[1]);
  if (k == 0) throw ParseError("domain must be nonempty", sz.line, sz.col);
  FiniteModel m(sig, k);

  std::vector<std::vector<bool>> fun_seen(sig.func_count());
  for (unsigned f = 0; f < sig.func_count(); ++f)
    fun_seen[f].assign(m.fun_table(f).size(), false);
  std::vector<bool> rel_seen(sig.rel_count(), false);

  for (std::size_t i = 2; i < e.items.size(); ++i) {
    const Sexp& entry = e.items[i];
    const std::string& h = head(entry);
    if (h == "fun") {
      if (entry.items.size() != 4 || !entry.items[1].is_atom)
        throw ParseError("expected (fun f (args) v)", entry.line, entry.col);
      auto f = sig.find_func(entry.items[1].atom);
      if (!f) throw UnknownSymbolError(entry.items[1].atom);
      auto args = tuple_of(entry.items[2], sig.func(*f).arity, k);
      unsigned v = to_number(entry.items[3]);
      if (v >= k) throw ParseError("value outside domain", entry.items[3].line, entry.items[3].col);
      std::size_t idx = m.flat_index(args);
      if (fun_seen[*f][idx])
        throw ParseError("duplicate cell for '" + entry.items[1].atom + "'", entry.line, entry.col);
      fun_seen[*f][idx] = true;
      m.set_fun(*f, args, v);
    } else if (h == "rel") {
      if (entry.items.size() < 2 || !entry.items[1].is_atom)
        throw ParseError("expected (rel P tuples...)", entry.line, entry.col);
      auto r = sig.find_rel(entry.items[1].atom);
      if (!r) throw UnknownSymbolError(entry.items[1].atom);
      if (rel_seen[*r])
        throw ParseError("duplicate entry for '" + entry.items[1].atom + "'", entry.line, entry.col);
      rel_seen[*r] = true;
      for (std::size_t j = 2; j < entry.items.size(); ++j)
        m.set_rel(*r, tuple_of(entry.items[j], sig.rel(*r).arity, k), true);
    } else {
      throw ParseError("expected (fun ...) or (rel ...)", entry.line, entry.col);
    }
  }

  for (unsigned f = 0; f < sig.func_count(); ++f)
    for (bool seen : fun_seen[f])
      if (!seen)
        throw ParseError("incomplete table for function '" + sig.func(f).name + "'", e.line, e.col);
  return m;
}

void print_term_into(std::ostringstream& out, const Signature& sig, const Term& t) {
  if (t.is_var()) {
    out << "(var " << t.index() << ")";
    return;
  }
  out << "(app " << sig.func(t.func()).name;
  for (const Term& a : t.args()) {
    out << " ";
    print_term_into(out, sig, a);
  }
  out << ")";
}

void print_formula_into(std::ostringstream& out, const Signature& sig, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      out << "bot";
      return;
    case Formula::Kind::Atom:
      out << "(rel " << sig.rel(f.rel()).name;
      for (const Term& t : f.args()) {
        out << " ";
        print_term_into(out, sig, t);
      }
      out << ")";
      return;
    case Formula::Kind::Impl:
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      const char* name = f.kind() == Formula::Kind::Impl ? "impl"
                         : f.kind() == Formula::Kind::And ? "and"
                                                          : "or";
      out << "(" << name << " ";
      print_formula_into(out, sig, f.left());
      out << " ";
      print_formula_into(out, sig, f.right());
      out << ")";
      return;
    }
    case Formula::Kind::All:
    case Formula::Kind::Ex:
      out << "(" << (f.kind() == Formula::Kind::All ? "all" : "ex") << " ";
      print_formula_into(out, sig, f.body());
      out << ")";
      return;
  }
}

}  // namespace

Term parse_term(std::string_view text, const Signature& sig) {
  return term_of(Reader(text).read(), sig);
}

Formula parse_formula(std::string_view text, const Signature& sig) {
  Formula f = formula_of(Reader(text).read(), sig);
  validate(sig, f);
  return f;
}

Signature parse_signature(std::string_view text) { return signature_of(Reader(text).read()); }

Assignment parse_env(std::string_view text) {
  Sexp e = Reader(text).read();
  if (e.is_atom || head(e) != "env" || e.items.empty())
    throw ParseError("expected (env ... (default d))", e.line, e.col);
  const Sexp& last = e.items.back();
  if (last.is_atom || head(last) != "default" || last.items.size() != 2)
    throw ParseError("expected trailing (default d)", e.line, e.col);
  Assignment env;
  env.fallback = to_number(last.items[1]);
  for (std::size_t i = 1; i + 1 < e.items.size(); ++i)
    env.prefix.push_back(to_number(e.items[i]));
  return env;
}

FormulaFile parse_formula_file(std::string_view text) {
  auto forms = Reader(text).read_all();
  if (forms.size() != 2)
    throw ParseError("expected a signature followed by a formula", 1, 1);
  FormulaFile out{signature_of(forms[0]), Formula::bot()};
  out.formula = formula_of(forms[1], out.sig);
  validate(out.sig, out.formula);
  return out;
}

FiniteModel parse_model_file(std::string_view text, const Signature* ambient) {
  auto forms = Reader(text).read_all();
  if (forms.size() == 2) return model_of(forms[1], signature_of(forms[0]));
  if (forms.size() != 1) throw ParseError("expected an optional signature and a model", 1, 1);
  if (head(forms[0]) == "signature")
    throw ParseError("signature header without a model", forms[0].line, forms[0].col);
  if (!ambient) throw ParseError("model text lacks a signature", forms[0].line, forms[0].col);
  return model_of(forms[0], *ambient);
}

std::string print_term(const Signature& sig, const Term& t) {
  std::ostringstream out;
  print_term_into(out, sig, t);
  return out.str();
}

std::string print_formula(const Signature& sig, const Formula& f) {
  std::ostringstream out;
  print_formula_into(out, sig, f);
  return out.str();
}

std::string print_signature(const Signature& sig) {
  std::ostringstream out;
  out << "(signature (funcs";
  for (const auto& d : sig.funcs()) out << " (" << d.name << " " << d.arity << ")";
  out << ") (rels";
  for (const auto& d : sig.rels()) out << " (" << d.name << " " << d.arity << ")";
  out << "))";
  return out.str();
}

std::string print_env(const Assignment& env) {
  std::ostringstream out;
  out << "(env";
  for (unsigned v : env.prefix) out << " " << v;
  out << " (default " << env.fallback << "))";
  return out.str();
}

std::string print_formula_file(const Signature& sig, const Formula& f) {
  return print_signature(sig) + "\n" + print_formula(sig, f) + "\n";
}

std::string print_model_file(const FiniteModel& m, bool with_signature) {
  std::ostringstream out;
  if (with_signature) out << print_signature(m.sig()) << "\n";
  out << "(model (size " << m.size() << ")";
  const Signature& sig = m.sig();
  for (unsigned f = 0; f < sig.func_count(); ++f) {
    std::vector<unsigned> tuple(sig.func(f).arity, 0);
    std::size_t idx = 0;
    do {
      out << "\n  (fun " << sig.func(f).name << " (";
      for (std::size_t i = 0; i < tuple.size(); ++i) out << (i ? " " : "") << tuple[i];
      out << ") " << m.fun_table(f)[idx] << ")";
      ++idx;
    } while (next_tuple(tuple, m.size()));
  }
  for (unsigned r = 0; r < sig.rel_count(); ++r) {
    out << "\n  (rel " << sig.rel(r).name;
    std::vector<unsigned> tuple(sig.rel(r).arity, 0);
    std::size_t idx = 0;
    do {
      if (m.rel_table(r)[idx]) {
        out << " (";
        for (std::size_t i = 0; i < tuple.size(); ++i) out << (i ? " " : "") << tuple[i];
        out << ")";
      }
      ++idx;
    } while (next_tuple(tuple, m.size()));
    out << ")";
  }
  out << ")\n";
  return out.str();
}

}  // namespace folmt
