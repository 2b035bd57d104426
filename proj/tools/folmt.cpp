#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "folmt/bpcp.hpp"
#include "folmt/errors.hpp"
#include "folmt/eval.hpp"
#include "folmt/io.hpp"
#include "folmt/monadic.hpp"
#include "folmt/quotient.hpp"
#include "folmt/reductions.hpp"
#include "folmt/search.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw folmt::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw folmt::Error("cannot write '" + path + "'");
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

void put(const std::string& text) {
  std::cout << text;
  if (text.empty() || text.back() != '\n') std::cout << '\n';
}

std::string show_solution(const std::string& s) { return s.empty() ? "-" : s; }

folmt::FiniteModel load_model(const std::string& path, const folmt::Signature& sig) {
  folmt::FiniteModel m = folmt::parse_model_file(slurp(path), &sig);
  if (!(m.sig() == sig))
    throw folmt::PreconditionError("model signature does not match the formula's");
  return m;
}

void emit_witness(const folmt::ModelEnv& w, const std::string& model_path,
                  const std::string& env_path) {
  if (!model_path.empty()) spit(model_path, folmt::print_model_file(w.model));
  if (!env_path.empty()) spit(env_path, folmt::print_env(w.env));
}

folmt::ReductionResult apply_stage(const std::string& name, const folmt::Signature& sig,
                                   const folmt::Formula& f,
                                   const std::optional<folmt::Signature>& target) {
  auto num_suffix = [&](const std::string& prefix) -> std::optional<unsigned> {
    if (name.rfind(prefix, 0) != 0) return std::nullopt;
    std::string tail = name.substr(prefix.size());
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
      throw folmt::PreconditionError("stage '" + name + "' needs a numeric argument");
    return static_cast<unsigned>(std::stoul(tail));
  };
  if (name == "eq-elim") {
    auto eq = sig.find_rel("eq");
    if (!eq) throw folmt::PreconditionError("eq-elim: no relation named 'eq' in scope");
    return folmt::eq_elim(sig, f, *eq);
  }
  if (name == "sig-gc") return folmt::sig_gc(sig, f);
  if (name == "fun-elim") return folmt::fun_elim(sig, f);
  if (auto n = num_suffix("arity-pad:")) return folmt::arity_pad(sig, f, *n);
  if (name == "rel-merge") return folmt::rel_merge(sig, f);
  if (name == "const-elim") return folmt::const_elim(sig, f);
  if (name == "to-membership") return folmt::nary_to_membership(sig, f);
  if (auto n = num_suffix("to-fun:")) return folmt::membership_to_fun(sig, f, *n);
  if (name == "embed") {
    if (!target) throw folmt::PreconditionError("embed needs --target");
    return folmt::embed(sig, f, *target);
  }
  if (name == "monadic-fun-elim") return folmt::monadic_fun_elim(sig, f);
  if (name == "zero-lift") return folmt::zero_arity_lift(sig, f);
  if (name == "discrete-to-binary") return folmt::discrete_to_binary(sig, f);
  throw folmt::PreconditionError("unknown stage '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-model satisfiability toolkit"};
  app.require_subcommand(1);

  // parse
  auto* cmd_parse = app.add_subcommand("parse", "validate a file and reprint it canonically");
  std::string parse_in, parse_kind = "formula";
  cmd_parse->add_option("--in", parse_in, "input file")->required();
  cmd_parse->add_option("--kind", parse_kind, "formula|model|instance|env")
      ->check(CLI::IsMember({"formula", "model", "instance", "env"}));
  cmd_parse->callback([&] {
    std::string text = slurp(parse_in);
    if (parse_kind == "formula") {
      folmt::FormulaFile ff = folmt::parse_formula_file(text);
      put(folmt::print_formula_file(ff.sig, ff.formula));
    } else if (parse_kind == "model") {
      put(folmt::print_model_file(folmt::parse_model_file(text)));
    } else if (parse_kind == "instance") {
      put(folmt::print_instance(folmt::parse_instance(text)));
    } else {
      put(folmt::print_env(folmt::parse_env(text)));
    }
  });

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "check whether a model satisfies a formula");
  std::string eval_model, eval_formula, eval_env;
  cmd_eval->add_option("--model", eval_model, "model file")->required();
  cmd_eval->add_option("--formula", eval_formula, "formula file")->required();
  cmd_eval->add_option("--env", eval_env, "assignment file");
  cmd_eval->callback([&] {
    folmt::FormulaFile ff = folmt::parse_formula_file(slurp(eval_formula));
    folmt::FiniteModel m = load_model(eval_model, ff.sig);
    folmt::Assignment env;
    if (!eval_env.empty()) env = folmt::parse_env(slurp(eval_env));
    for (unsigned v : env.prefix)
      if (v >= m.size()) throw folmt::PreconditionError("assignment value outside the domain");
    if (env.fallback >= m.size())
      throw folmt::PreconditionError("assignment default outside the domain");
    std::cout << (folmt::satisfies(m, env, ff.formula) ? "true" : "false") << "\n";
  });

  // fsat
  auto* cmd_fsat = app.add_subcommand("fsat", "search for a model up to a domain bound");
  std::string fsat_formula, fsat_emit, fsat_emit_env;
  unsigned fsat_max = 0, fsat_jobs = 1;
  cmd_fsat->add_option("--formula", fsat_formula, "formula file")->required();
  cmd_fsat->add_option("--max-domain", fsat_max, "largest domain size to try")->required();
  cmd_fsat->add_option("--emit-model", fsat_emit, "write the witness model here");
  cmd_fsat->add_option("--emit-env", fsat_emit_env, "write the witness assignment here");
  cmd_fsat->add_option("--jobs", fsat_jobs, "worker threads")->envname("FOLMT_JOBS");
  cmd_fsat->callback([&] {
    folmt::FormulaFile ff = folmt::parse_formula_file(slurp(fsat_formula));
    folmt::SearchOptions opts;
    opts.jobs = fsat_jobs;
    folmt::Verdict v = folmt::fsat(ff.sig, ff.formula, fsat_max, opts);
    if (v.kind == folmt::Verdict::Kind::Sat) {
      emit_witness(*v.witness, fsat_emit, fsat_emit_env);
      std::cout << "SAT k=" << v.witness->model.size() << "\n";
    } else {
      std::cout << "UNKNOWN bound=" << v.bound << "\n";
    }
  });

  // fsat-fixed
  auto* cmd_fixed = app.add_subcommand("fsat-fixed", "decide satisfiability at one domain size");
  std::string fixed_formula, fixed_emit, fixed_emit_env;
  unsigned fixed_k = 0, fixed_jobs = 1;
  cmd_fixed->add_option("--formula", fixed_formula, "formula file")->required();
  cmd_fixed->add_option("--domain-size", fixed_k, "exact domain size")->required();
  cmd_fixed->add_option("--emit-model", fixed_emit, "write the witness model here");
  cmd_fixed->add_option("--emit-env", fixed_emit_env, "write the witness assignment here");
  cmd_fixed->add_option("--jobs", fixed_jobs, "worker threads")->envname("FOLMT_JOBS");
  cmd_fixed->callback([&] {
    folmt::FormulaFile ff = folmt::parse_formula_file(slurp(fixed_formula));
    folmt::SearchOptions opts;
    opts.jobs = fixed_jobs;
    folmt::Verdict v = folmt::fsat_fixed(ff.sig, ff.formula, fixed_k, opts);
    if (v.kind == folmt::Verdict::Kind::Sat) {
      emit_witness(*v.witness, fixed_emit, fixed_emit_env);
      std::cout << "SAT k=" << v.witness->model.size() << "\n";
    } else {
      std::cout << "UNSAT\n";
    }
  });

  // monadic
  auto* cmd_mon = app.add_subcommand("monadic", "decide a monadic formula exactly");
  std::string mon_formula, mon_emit, mon_emit_env;
  unsigned mon_cap = 4;
  cmd_mon->add_option("--formula", mon_formula, "formula file")->required();
  cmd_mon->add_option("--emit-model", mon_emit, "write the witness model here");
  cmd_mon->add_option("--emit-env", mon_emit_env, "write the witness assignment here");
  cmd_mon->add_option("--rel-cap", mon_cap, "relation count cap for the subset search");
  cmd_mon->callback([&] {
    folmt::FormulaFile ff = folmt::parse_formula_file(slurp(mon_formula));
    folmt::MonadicOptions opts;
    opts.rel_cap = mon_cap;
    folmt::Verdict v = folmt::monadic_decide(ff.sig, ff.formula, opts);
    if (v.kind == folmt::Verdict::Kind::Sat) {
      emit_witness(*v.witness, mon_emit, mon_emit_env);
      std::cout << "SAT k=" << v.witness->model.size() << "\n";
    } else {
      std::cout << "UNSAT\n";
    }
  });

  // reduce
  auto* cmd_red = app.add_subcommand("reduce", "apply a chain of signature reductions");
  std::string red_chain, red_in, red_out, red_target;
  bool red_trace = false;
  cmd_red->add_option("--chain", red_chain, "comma-separated stage names")->required();
  cmd_red->add_option("--in", red_in, "input formula file")->required();
  cmd_red->add_option("--out", red_out, "output formula file")->required();
  cmd_red->add_option("--target", red_target, "signature file for embed stages");
  cmd_red->add_flag("--trace", red_trace, "also print each intermediate formula file");
  cmd_red->callback([&] {
    folmt::FormulaFile ff = folmt::parse_formula_file(slurp(red_in));
    std::optional<folmt::Signature> target;
    if (!red_target.empty()) target = folmt::parse_signature(slurp(red_target));

    std::vector<std::string> names;
    std::stringstream ss(red_chain);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) names.push_back(item);
    }
    if (names.empty()) throw folmt::PreconditionError("empty stage chain");

    folmt::Signature sig = ff.sig;
    folmt::Formula f = ff.formula;
    for (const std::string& name : names) {
      folmt::ReductionResult r = apply_stage(name, sig, f, target);
      for (const folmt::StageInfo& si : r.trace) {
        std::cout << si.name << ": funcs " << si.in_funcs << " -> " << si.out_funcs
                  << ", rels " << si.in_rels << " -> " << si.out_rels << "\n";
      }
      sig = r.out_sig;
      f = r.out_formula;
      if (red_trace) put(folmt::print_formula_file(sig, f));
    }
    spit(red_out, folmt::print_formula_file(sig, f));
  });

  // bpcp
  auto* cmd_bpcp = app.add_subcommand("bpcp", "binary Post correspondence tools");
  cmd_bpcp->require_subcommand(1);

  auto* cmd_solve = cmd_bpcp->add_subcommand("solve", "search for a solution by length");
  std::string solve_instance;
  unsigned solve_maxlen = 0;
  cmd_solve->add_option("--instance", solve_instance, "instance file")->required();
  cmd_solve->add_option("--max-len", solve_maxlen, "largest solution length to try")->required();
  cmd_solve->callback([&] {
    folmt::BpcpInstance inst = folmt::parse_instance(slurp(solve_instance));
    auto s = folmt::bpcp_solve(inst, solve_maxlen);
    if (s)
      std::cout << "SOLVED " << show_solution(*s) << "\n";
    else
      std::cout << "NOSOLUTION bound=" << solve_maxlen << "\n";
  });

  auto* cmd_encode = cmd_bpcp->add_subcommand("encode", "emit the satisfiability encoding");
  std::string enc_instance, enc_out;
  cmd_encode->add_option("--instance", enc_instance, "instance file")->required();
  cmd_encode->add_option("--out", enc_out, "write the formula file here");
  cmd_encode->callback([&] {
    folmt::BpcpInstance inst = folmt::parse_instance(slurp(enc_instance));
    std::string text = folmt::print_formula_file(folmt::bpcp_signature(), folmt::bpcp_encode(inst));
    if (enc_out.empty())
      put(text);
    else
      spit(enc_out, text);
  });

  auto* cmd_model = cmd_bpcp->add_subcommand("model", "emit the canonical string model");
  std::string bm_instance, bm_out;
  unsigned bm_len = 0;
  cmd_model->add_option("--instance", bm_instance, "instance file")->required();
  cmd_model->add_option("--length", bm_len, "longest string the domain carries")->required();
  cmd_model->add_option("--out", bm_out, "write the model file here");
  cmd_model->callback([&] {
    folmt::BpcpInstance inst = folmt::parse_instance(slurp(bm_instance));
    std::string text = folmt::print_model_file(folmt::bpcp_model(inst, bm_len));
    if (bm_out.empty())
      put(text);
    else
      spit(bm_out, text);
  });

  auto* cmd_extract = cmd_bpcp->add_subcommand("extract", "read a solution out of a model");
  std::string ex_instance, ex_model;
  cmd_extract->add_option("--instance", ex_instance, "instance file")->required();
  cmd_extract->add_option("--model", ex_model, "model file")->required();
  cmd_extract->callback([&] {
    folmt::BpcpInstance inst = folmt::parse_instance(slurp(ex_instance));
    folmt::FiniteModel m = folmt::parse_model_file(slurp(ex_model), &folmt::bpcp_signature());
    std::cout << "SOLVED " << show_solution(folmt::extract_solution(inst, m)) << "\n";
  });

  // quotient
  auto* cmd_quot = app.add_subcommand("quotient", "minimize a model by indistinguishability");
  std::string quot_model, quot_formula, quot_out;
  cmd_quot->add_option("--model", quot_model, "model file")->required();
  cmd_quot->add_option("--formula", quot_formula, "formula file")->required();
  cmd_quot->add_option("--out", quot_out, "write the minimized model here (default: stdout)");
  cmd_quot->callback([&] {
    folmt::FormulaFile ff = folmt::parse_formula_file(slurp(quot_formula));
    folmt::FiniteModel m = load_model(quot_model, ff.sig);
    auto [q, classes] = folmt::quotient_model(m, ff.formula);
    std::cout << "classes " << classes.class_count << "\n";
    for (unsigned i = 0; i < m.size(); ++i) std::cout << i << " -> " << classes.c[i] << "\n";
    std::string text = folmt::print_model_file(q);
    if (quot_out.empty())
      put(text);
    else
      spit(quot_out, text);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
