#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "folmt/bpcp.hpp"
#include "folmt/errors.hpp"
#include "folmt/eval.hpp"
#include "folmt/hfs.hpp"
#include "folmt/io.hpp"
#include "folmt/monadic.hpp"
#include "folmt/quotient.hpp"
#include "folmt/reductions.hpp"
#include "folmt/search.hpp"

namespace py = pybind11;
using namespace folmt;

namespace {

ModelEnv run_transport(const ReductionResult& r, bool forward, const ModelEnv& me) {
  const auto& fn = forward ? r.forward : r.backward;
  if (!fn) throw Error(forward ? "no forward transport" : "no backward transport");
  return fn(me);
}

}  // namespace

PYBIND11_MODULE(_folmt, m) {
  m.doc() = "finite-model satisfiability toolkit";

  py::register_exception<Error>(m, "Error");

  // terms and formulas
  py::class_<Term>(m, "Term")
      .def_static("var", &Term::var, py::arg("index"))
      .def_static("app", &Term::app, py::arg("func"), py::arg("args"))
      .def_property_readonly("is_var", &Term::is_var)
      .def_property_readonly("is_app", &Term::is_app)
      .def_property_readonly("index", &Term::index)
      .def_property_readonly("func", [](const Term& t) {
        if (!t.is_app()) throw Error("not an application");
        return t.func();
      })
      .def_property_readonly("args", [](const Term& t) {
        if (!t.is_app()) throw Error("not an application");
        return t.args();
      })
      .def(py::self == py::self)
      .def(py::self != py::self);

  py::enum_<Formula::Kind>(m, "FormulaKind")
      .value("Bot", Formula::Kind::Bot)
      .value("Atom", Formula::Kind::Atom)
      .value("Impl", Formula::Kind::Impl)
      .value("And", Formula::Kind::And)
      .value("Or", Formula::Kind::Or)
      .value("All", Formula::Kind::All)
      .value("Ex", Formula::Kind::Ex);

  py::class_<Formula>(m, "Formula")
      .def_static("bot", &Formula::bot)
      .def_static("atom", &Formula::atom, py::arg("rel"), py::arg("args"))
      .def_static("impl", &Formula::impl)
      .def_static("conj", &Formula::conj)
      .def_static("disj", &Formula::disj)
      .def_static("all", &Formula::all)
      .def_static("ex", &Formula::ex)
      .def_property_readonly("kind", &Formula::kind)
      .def_property_readonly("rel", [](const Formula& f) {
        if (f.kind() != Formula::Kind::Atom) throw Error("not an atom");
        return f.rel();
      })
      .def_property_readonly("args", [](const Formula& f) {
        if (f.kind() != Formula::Kind::Atom) throw Error("not an atom");
        return f.args();
      })
      .def_property_readonly("left", [](const Formula& f) {
        if (!f.is_binary()) throw Error("not a binary connective");
        return f.left();
      })
      .def_property_readonly("right", [](const Formula& f) {
        if (!f.is_binary()) throw Error("not a binary connective");
        return f.right();
      })
      .def_property_readonly("body", [](const Formula& f) {
        if (!f.is_quant()) throw Error("not a quantifier");
        return f.body();
      })
      .def(py::self == py::self)
      .def(py::self != py::self);

  m.def("neg", [](Formula f) { return neg(std::move(f)); });
  m.def("top", &top);
  m.def("iff", [](Formula a, Formula b) { return iff(std::move(a), std::move(b)); });
  m.def("big_and", &big_and);
  m.def("big_or", &big_or);
  m.def("free_vars", py::overload_cast<const Formula&>(&free_vars));
  m.def("lift", py::overload_cast<const Formula&, unsigned, unsigned>(&lift),
        py::arg("f"), py::arg("amount"), py::arg("cutoff") = 0);

  // signatures
  py::class_<SymbolDecl>(m, "SymbolDecl")
      .def(py::init([](std::string name, unsigned arity) {
             return SymbolDecl{std::move(name), arity};
           }),
           py::arg("name"), py::arg("arity"))
      .def_readwrite("name", &SymbolDecl::name)
      .def_readwrite("arity", &SymbolDecl::arity)
      .def(py::self == py::self);

  py::class_<Signature>(m, "Signature")
      .def(py::init<>())
      .def(py::init<std::vector<SymbolDecl>, std::vector<SymbolDecl>>(),
           py::arg("funcs"), py::arg("rels"))
      .def(py::init([](const std::vector<std::pair<std::string, unsigned>>& fs,
                       const std::vector<std::pair<std::string, unsigned>>& rs) {
             std::vector<SymbolDecl> f, r;
             for (const auto& p : fs) f.push_back({p.first, p.second});
             for (const auto& p : rs) r.push_back({p.first, p.second});
             return Signature(std::move(f), std::move(r));
           }),
           py::arg("funcs"), py::arg("rels"))
      .def_property_readonly("func_count", &Signature::func_count)
      .def_property_readonly("rel_count", &Signature::rel_count)
      .def_property_readonly("funcs", &Signature::funcs)
      .def_property_readonly("rels", &Signature::rels)
      .def("find_func", &Signature::find_func)
      .def("find_rel", &Signature::find_rel)
      .def(py::self == py::self);

  m.def("validate", py::overload_cast<const Signature&, const Formula&>(&validate));

  // models
  py::class_<Assignment>(m, "Assignment")
      .def(py::init([](std::vector<unsigned> prefix, unsigned fallback) {
             Assignment a;
             a.prefix = std::move(prefix);
             a.fallback = fallback;
             return a;
           }),
           py::arg("prefix") = std::vector<unsigned>{}, py::arg("fallback") = 0)
      .def_readwrite("prefix", &Assignment::prefix)
      .def_readwrite("fallback", &Assignment::fallback)
      .def("__call__", &Assignment::operator());

  py::class_<FiniteModel>(m, "FiniteModel")
      .def(py::init<Signature, unsigned>(), py::arg("sig"), py::arg("size"))
      .def_property_readonly("sig", &FiniteModel::sig)
      .def_property_readonly("size", &FiniteModel::size)
      .def("fun",
           [](const FiniteModel& m_, unsigned f, const std::vector<unsigned>& args) {
             return m_.fun(f, args);
           })
      .def("rel",
           [](const FiniteModel& m_, unsigned r, const std::vector<unsigned>& args) {
             return m_.rel(r, args);
           })
      .def("set_fun",
           [](FiniteModel& m_, unsigned f, const std::vector<unsigned>& args, unsigned v) {
             m_.set_fun(f, args, v);
           })
      .def("set_rel",
           [](FiniteModel& m_, unsigned r, const std::vector<unsigned>& args, bool v) {
             m_.set_rel(r, args, v);
           })
      .def("fun_table",
           [](const FiniteModel& m_, unsigned f) { return m_.fun_table(f); })
      .def("rel_table",
           [](const FiniteModel& m_, unsigned r) { return m_.rel_table(r); });

  py::class_<ModelEnv>(m, "ModelEnv")
      .def(py::init([](FiniteModel model, Assignment env) {
             return ModelEnv{std::move(model), std::move(env)};
           }),
           py::arg("model"), py::arg("env") = Assignment{})
      .def_readwrite("model", &ModelEnv::model)
      .def_readwrite("env", &ModelEnv::env);

  // evaluation
  py::class_<EvalOptions>(m, "EvalOptions")
      .def(py::init<>())
      .def_readwrite("memo", &EvalOptions::memo)
      .def_readwrite("guard", &EvalOptions::guard);

  m.def("satisfies", &satisfies, py::arg("model"), py::arg("env"), py::arg("formula"),
        py::arg("opts") = EvalOptions{});
  m.def("eval_term", &eval_term);

  // search
  py::class_<SearchOptions>(m, "SearchOptions")
      .def(py::init<>())
      .def_readwrite("jobs", &SearchOptions::jobs)
      .def_readwrite("enumeration_limit", &SearchOptions::enumeration_limit)
      .def_readwrite("eval", &SearchOptions::eval)
      .def_readwrite("identity_rel", &SearchOptions::identity_rel);

  py::enum_<Verdict::Kind>(m, "VerdictKind")
      .value("Sat", Verdict::Kind::Sat)
      .value("Unsat", Verdict::Kind::Unsat)
      .value("Unknown", Verdict::Kind::Unknown);

  py::class_<Verdict>(m, "Verdict")
      .def_readonly("kind", &Verdict::kind)
      .def_readonly("witness", &Verdict::witness)
      .def_readonly("bound", &Verdict::bound);

  m.def("fsat_on_domain", &fsat_on_domain, py::arg("sig"), py::arg("formula"),
        py::arg("k"), py::arg("opts") = SearchOptions{});
  m.def("fsat_fixed", &fsat_fixed, py::arg("sig"), py::arg("formula"), py::arg("k"),
        py::arg("opts") = SearchOptions{});
  m.def("fsat", &fsat, py::arg("sig"), py::arg("formula"), py::arg("max_size"),
        py::arg("opts") = SearchOptions{});

  // monadic decision
  py::class_<MonadicOptions>(m, "MonadicOptions")
      .def(py::init<>())
      .def_readwrite("rel_cap", &MonadicOptions::rel_cap);

  m.def("monadic_rel_decide", &monadic_rel_decide, py::arg("sig"), py::arg("formula"),
        py::arg("opts") = MonadicOptions{});
  m.def("monadic_decide", &monadic_decide, py::arg("sig"), py::arg("formula"),
        py::arg("opts") = MonadicOptions{});

  // correspondence problems
  py::class_<BpcpInstance>(m, "BpcpInstance")
      .def(py::init([](std::vector<std::pair<std::string, std::string>> cards) {
             return BpcpInstance{std::move(cards)};
           }),
           py::arg("cards"))
      .def_readwrite("cards", &BpcpInstance::cards);

  m.def("bpcp_signature", &bpcp_signature, py::return_value_policy::reference);
  m.def("derives", &derives);
  m.def("bpcp_solve", &bpcp_solve, py::arg("instance"), py::arg("maxlen"));
  m.def("bpcp_encode", &bpcp_encode);
  m.def("bpcp_model", &bpcp_model, py::arg("instance"), py::arg("n"));
  m.def("bpcp_index_of", &bpcp_index_of);
  m.def("bpcp_string_at", &bpcp_string_at);
  m.def("extract_solution", &extract_solution);

  // membership encodings
  py::class_<HfSet>(m, "HfSet")
      .def(py::init<>())
      .def_static("from_list", &HfSet::from_list)
      .def_property_readonly("elems", &HfSet::elems)
      .def_property_readonly("rank", &HfSet::rank)
      .def("__eq__", [](const HfSet& a, const HfSet& b) { return a == b; })
      .def("__lt__", [](const HfSet& a, const HfSet& b) { return a < b; })
      .def("__str__", &HfSet::to_string)
      .def("__repr__", &HfSet::to_string);

  m.def("hf_mem", &hf_mem);
  m.def("hf_pair", &hf_pair);
  m.def("hf_tuple", &hf_tuple);
  m.def("hf_powerset", &hf_powerset);
  m.def("hf_transitive_closure", &hf_transitive_closure);

  py::class_<MembershipModel>(m, "MembershipModel")
      .def_readonly("domain", &MembershipModel::domain)
      .def_readonly("mem", &MembershipModel::mem)
      .def_readonly("d_index", &MembershipModel::d_index)
      .def_readonly("r_index", &MembershipModel::r_index)
      .def_readonly("embed", &MembershipModel::embed)
      .def_readonly("project", &MembershipModel::project)
      .def_readonly("source_size", &MembershipModel::source_size)
      .def_readonly("arity", &MembershipModel::arity)
      .def("mem_at", &MembershipModel::mem_at)
      .def_property_readonly("size", &MembershipModel::size);

  m.def("membership_signature", &membership_signature, py::return_value_policy::reference);
  m.def("relation_to_membership_model", &relation_to_membership_model, py::arg("m"),
        py::arg("n"), py::arg("table"));
  m.def("membership_to_finite_model", &membership_to_finite_model);

  // quotients
  py::class_<EquivClasses>(m, "EquivClasses")
      .def_readonly("class_count", &EquivClasses::class_count)
      .def_readonly("c", &EquivClasses::c)
      .def_readonly("r", &EquivClasses::r);

  m.def(
      "indist_fixpoint",
      [](const FiniteModel& m_, const std::vector<unsigned>& fs,
         const std::vector<unsigned>& ps) { return indist_fixpoint(m_, fs, ps); },
      py::arg("model"), py::arg("funcs"), py::arg("rels"));
  m.def("quotient_model", &quotient_model, py::arg("model"), py::arg("formula"));

  // reductions
  py::class_<StageInfo>(m, "StageInfo")
      .def_readonly("name", &StageInfo::name)
      .def_readonly("in_funcs", &StageInfo::in_funcs)
      .def_readonly("in_rels", &StageInfo::in_rels)
      .def_readonly("out_funcs", &StageInfo::out_funcs)
      .def_readonly("out_rels", &StageInfo::out_rels);

  py::class_<ReductionResult>(m, "ReductionResult")
      .def_readonly("out_sig", &ReductionResult::out_sig)
      .def_readonly("out_formula", &ReductionResult::out_formula)
      .def_readonly("eq_rel", &ReductionResult::eq_rel)
      .def_readonly("trace", &ReductionResult::trace)
      .def_property_readonly("has_forward",
                             [](const ReductionResult& r) { return bool(r.forward); })
      .def_property_readonly("has_backward",
                             [](const ReductionResult& r) { return bool(r.backward); })
      .def("forward",
           [](const ReductionResult& r, const ModelEnv& me) {
             return run_transport(r, true, me);
           })
      .def("backward", [](const ReductionResult& r, const ModelEnv& me) {
        return run_transport(r, false, me);
      });

  m.def("eq_elim", &eq_elim, py::arg("sig"), py::arg("formula"), py::arg("eqsym"));
  m.def("sig_gc", &sig_gc);
  m.def("fun_elim", &fun_elim);
  m.def("arity_pad", &arity_pad, py::arg("sig"), py::arg("formula"), py::arg("n"));
  m.def("rel_merge", &rel_merge);
  m.def("const_elim", &const_elim);
  m.def("nary_to_membership", &nary_to_membership);
  m.def("membership_to_fun", &membership_to_fun, py::arg("sig"), py::arg("formula"),
        py::arg("n"));
  m.def("embed", &embed, py::arg("sig"), py::arg("formula"), py::arg("target"));
  m.def("monadic_fun_elim", &monadic_fun_elim);
  m.def("zero_arity_lift", &zero_arity_lift);
  m.def("compose", &compose);
  m.def("discrete_to_binary", &discrete_to_binary);
  m.def("full_trakhtenbrot", &full_trakhtenbrot, py::arg("instance"), py::arg("target"));

  // text formats
  m.def("parse_term", &parse_term);
  m.def("parse_formula", &parse_formula);
  m.def("parse_signature", &parse_signature);
  m.def("parse_env", &parse_env);

  py::class_<FormulaFile>(m, "FormulaFile")
      .def_readonly("sig", &FormulaFile::sig)
      .def_readonly("formula", &FormulaFile::formula);

  m.def("parse_formula_file", &parse_formula_file);
  m.def(
      "parse_model_file",
      [](const std::string& text, const std::optional<Signature>& ambient) {
        return parse_model_file(text, ambient ? &*ambient : nullptr);
      },
      py::arg("text"), py::arg("ambient") = std::nullopt);

  m.def("parse_instance", &parse_instance);
  m.def("print_instance", &print_instance);
  m.def("print_term", &print_term);
  m.def("print_formula", &print_formula);
  m.def("print_signature", &print_signature);
  m.def("print_env", &print_env);
  m.def("print_formula_file", &print_formula_file);
  m.def("print_model_file", &print_model_file, py::arg("model"),
        py::arg("with_signature") = true);
}
