#include "invlab/harness.h"
#include "invlab/learning.h"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace invlab;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

void print_clause_list(const Cnf& cnf, const Vocabulary& vocab) {
  std::cout << write_dimacs(cnf, vocab);
}

int cmd_generate(const std::string& family, int k, int n, uint64_t seed, const std::string& phi,
                 const std::string& out_base) {
  FamilyInstance fi;
  if (family == "qbf2" && !phi.empty()) {
    Vocabulary vocab = qbf2_vocab(k);
    fi = gen_qbf2_system(Qbf2Instance{k, parse_formula(phi, vocab, false)});
    fi.seed = seed;
  } else {
    int param = (family == "add-even" || family == "add-even-max") ? n : k;
    fi = make_instance(family, param, seed);
  }
  std::string ts_text = print_ts(fi.ts);
  std::string gt_text = print_ground_truth(fi);
  if (out_base.empty()) {
    std::cout << ts_text;
    std::cerr << gt_text;
  } else {
    write_file(out_base + ".ts", ts_text);
    write_file(out_base + ".gt", gt_text);
    std::cout << out_base << ".ts " << out_base << ".gt\n";
  }
  return 0;
}

int cmd_infer(const std::string& alg, const std::string& sys_path, uint64_t budget,
              const std::string& strategy_name, uint64_t seed, const std::string& cls,
              int itp_k, int ice_width, int ice_clauses) {
  TransitionSystem ts = parse_ts(read_file(sys_path));
  DeltaHandle handle(ts);
  Budget bud;

  if (!cls.empty()) {
    // Decision mode: bounded PDR-1 plus a final inductiveness check.
    auto colon = cls.find(':');
    std::string kind = cls.substr(0, colon);
    ClassBound bound;
    if (kind == "cnf")
      bound.kind = ClassBound::Kind::Cnf;
    else if (kind == "moncnf")
      bound.kind = ClassBound::Kind::MonCnf;
    else
      throw InputError("--class kind must be cnf or moncnf");
    if (colon != std::string::npos) {
      bound.coeffs.clear();
      std::istringstream in(cls.substr(colon + 1));
      std::string tok;
      while (std::getline(in, tok, ',')) bound.coeffs.push_back(std::stoll(tok));
    }
    bool yes = decide_poly_inference(ts.init, ts.bad, handle, bound);
    std::cout << (yes ? "yes\n" : "no\n");
    return yes ? 0 : 1;
  }

  InferenceOutcome out;
  if (alg == "naive") {
    bud.hoare = budget;
    out = naive_backward(ts.init, ts.bad, handle, bud);
  } else if (alg == "pdr1") {
    bud.hoare = budget;
    out = pdr1(ts.init, ts.bad, handle, bud);
  } else if (alg == "houdini") {
    bud.hoare = budget;
    out = houdini(ts.init, ts.bad, handle, negative_literal_predicates(ts.vocab), bud);
  } else if (alg == "ice-enum") {
    bud.inductiveness = budget;
    TeacherStrategy strategy = strategy_by_name(strategy_name, seed);
    IceProposer proposer =
        ice_width > 0
            ? enumerative_proposer(moncnf_hypothesis_class(ts.vocab, ice_width, ice_clauses),
                                   ts.init, ts.bad, ts.vocab)
            : cube_blocking_proposer(ts.init, ts.bad, ts.vocab);
    out = ice_enum_learner(ts.init, ts.bad, handle, proposer, strategy, bud);
  } else if (alg == "itp") {
    bud.interpolation = budget;
    out = itp_inference(ts.init, ts.bad, handle, itp_k, bud);
  } else {
    throw InputError("unknown algorithm: " + alg);
  }

  switch (out.status) {
    case InferenceStatus::Invariant:
      std::cerr << "invariant found; hoare_total=" << out.ledger.hoare_total
                << " hoare_in_block=" << out.ledger.hoare_in_block
                << " inductiveness_total=" << out.ledger.inductiveness_total
                << " iterations=" << out.iterations << "\n";
      print_clause_list(*out.invariant, ts.vocab);
      return 0;
    case InferenceStatus::NoInvariant:
      std::cout << "no invariant\n";
      return 1;
    case InferenceStatus::BudgetExhausted:
      std::cout << "budget exhausted\n";
      return 1;
  }
  return 1;
}

int cmd_check(const std::string& sys_path, const std::string& inv_path,
              const std::string& inv_sexpr) {
  TransitionSystem ts = parse_ts(read_file(sys_path));
  Formula inv;
  if (!inv_sexpr.empty()) {
    inv = parse_formula(inv_sexpr, ts.vocab, false);
  } else {
    std::string text = read_file(inv_path);
    if (text.rfind("safe", 0) == 0 || text.rfind("unsafe", 0) == 0) {
      auto gt = parse_ground_truth(text);
      if (!gt) throw InputError("ground-truth file says unsafe; nothing to check");
      inv = to_formula(*gt);
    } else {
      inv = to_formula(parse_dimacs(text));
    }
  }
  CheckResult res = check_invariant(ts, inv);
  switch (res.status) {
    case CheckStatus::Ok:
      std::cout << "ok\n";
      return 0;
    case CheckStatus::FailsInitiation:
      std::cout << "fails-initiation: " << to_string(*res.witness, ts.vocab) << "\n";
      return 1;
    case CheckStatus::FailsConsecution:
      std::cout << "fails-consecution: " << to_string(res.witness_pair->first, ts.vocab)
                << " -> " << to_string(res.witness_pair->second, ts.vocab) << "\n";
      return 1;
    case CheckStatus::FailsSafety:
      std::cout << "fails-safety: " << to_string(*res.witness, ts.vocab) << "\n";
      return 1;
  }
  return 1;
}

int cmd_dualize(const std::string& sys_path, const std::string& out_path) {
  TransitionSystem dual = dualize(parse_ts(read_file(sys_path)));
  std::string text = print_ts(dual);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return 0;
}

int cmd_learn_delta(int k, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const uint32_t vals = 1u << (2 * k);
  uint32_t table = static_cast<uint32_t>(rng() & ((uint64_t{1} << vals) - 1));

  auto phi = [&](uint32_t v) { return (table >> v) & 1u; };
  Vocabulary vocab = qbf2_vocab(k);
  // Hidden formula: straight truth-table expansion over (y, x).
  std::vector<Formula> cubes;
  for (uint32_t v = 0; v < vals; ++v)
    if (phi(v)) cubes.push_back(cube_formula(State{v, 2 * k}));
  Qbf2Instance q{k, cubes.empty() ? f_false() : f_or(std::move(cubes))};
  FamilyInstance fi = gen_qbf2_system(q);
  DeltaHandle handle(fi.ts);

  HalvingResult res = halving_identify_delta(handle, k);
  std::cout << "hidden:    ";
  for (uint32_t v = 0; v < vals; ++v) std::cout << phi(v);
  std::cout << "\nrecovered: ";
  for (bool bit : res.truth_table) std::cout << (bit ? '1' : '0');
  std::cout << "\nrounds: " << res.counterexample_rounds
            << " hoare_total: " << res.ledger.hoare_total << "\n";
  bool exact = true;
  for (uint32_t v = 0; v < vals; ++v)
    if (res.truth_table[v] != (bool)phi(v)) exact = false;
  return exact ? 0 : 1;
}

int cmd_bench(const std::string& config_path, const std::string& families,
              const std::string& algorithms, int seeds, uint64_t budget,
              const std::string& strategy, int workers, const std::string& out_path) {
  BenchConfig cfg;
  if (!config_path.empty()) {
    cfg = parse_bench_config(read_file(config_path));
  } else {
    std::istringstream fam_in(families);
    std::string tok;
    while (std::getline(fam_in, tok, ',')) {
      if (tok.empty()) continue;
      // name:min-max
      auto colon = tok.find(':');
      if (colon == std::string::npos) throw InputError("family spec needs name:min-max");
      FamilySpec spec;
      spec.name = tok.substr(0, colon);
      std::string range = tok.substr(colon + 1);
      auto dash = range.find('-');
      spec.param_min = std::stoi(range.substr(0, dash));
      spec.param_max = dash == std::string::npos ? spec.param_min : std::stoi(range.substr(dash + 1));
      cfg.families.push_back(spec);
    }
    std::istringstream alg_in(algorithms);
    while (std::getline(alg_in, tok, ','))
      if (!tok.empty()) cfg.algorithms.push_back(tok);
    cfg.seeds.clear();
    for (int s = 0; s < std::max(1, seeds); ++s) cfg.seeds.push_back(s);
    cfg.budget = budget;
    cfg.strategy = strategy;
    cfg.workers = workers;
  }

  BenchResult result = run_bench(cfg);
  VerifyReport report = verify_ground_truth(result);
  std::string csv = to_csv(result.records);
  if (out_path.empty())
    std::cout << csv;
  else
    write_file(out_path, csv);
  for (const std::string& m : report.mismatches) std::cerr << "mismatch: " << m << "\n";
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query-oracle laboratory for propositional invariant inference"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Emit a transition system and its ground truth");
  std::string g_family = "monmax", g_phi, g_out;
  int g_k = 2, g_n = 3;
  uint64_t g_seed = 0;
  gen->add_option("--family", g_family, "qbf2|monmax|badts|add-even|add-even-max");
  gen->add_option("--k", g_k, "family parameter k");
  gen->add_option("--n", g_n, "adder width n");
  gen->add_option("--seed", g_seed, "random seed");
  gen->add_option("--phi", g_phi, "qbf2 only: phi as an s-expression over y1..yk x1..xk");
  gen->add_option("--out", g_out, "output base path (writes BASE.ts and BASE.gt)");

  // infer
  auto* inf = app.add_subcommand("infer", "Run an inference algorithm on a system file");
  std::string i_alg = "pdr1", i_sys, i_strategy = "first", i_class;
  uint64_t i_budget = 1000000, i_seed = 0;
  int i_itp_k = 1, i_ice_width = 0, i_ice_clauses = 3;
  inf->add_option("--alg", i_alg, "naive|pdr1|houdini|ice-enum|itp");
  inf->add_option("--sys", i_sys, "transition system file")->required();
  inf->add_option("--budget", i_budget, "query budget");
  inf->add_option("--strategy", i_strategy, "first|random|max-ambiguity");
  inf->add_option("--seed", i_seed, "strategy seed");
  inf->add_option("--class", i_class,
                  "decision mode: {cnf|moncnf}:{p coefficients, ascending, comma-separated}");
  inf->add_option("--itp-k", i_itp_k, "itp: starting unrolling depth");
  inf->add_option("--ice-width", i_ice_width,
                  "ice-enum: enumerate monotone clauses up to this width (0 = cube blocking)");
  inf->add_option("--ice-clauses", i_ice_clauses, "ice-enum: max clauses per hypothesis");

  // check
  auto* chk = app.add_subcommand("check", "Check an invariant against a system");
  std::string c_sys, c_inv, c_sexpr;
  chk->add_option("--sys", c_sys, "transition system file")->required();
  chk->add_option("--inv", c_inv, "invariant file (DIMACS or ground-truth sidecar)");
  chk->add_option("--inv-sexpr", c_sexpr, "invariant as an s-expression");

  // dualize
  auto* dual = app.add_subcommand("dualize", "Print the dual system");
  std::string d_sys, d_out;
  dual->add_option("--sys", d_sys, "transition system file")->required();
  dual->add_option("--out", d_out, "output file (default stdout)");

  // learn-delta
  auto* learn = app.add_subcommand("learn-delta", "Identify a hidden phi by halving");
  int l_k = 1;
  uint64_t l_seed = 0;
  learn->add_option("--k", l_k, "1 or 2");
  learn->add_option("--seed", l_seed, "seed for the hidden truth table");

  // bench
  auto* bench = app.add_subcommand("bench", "Run an experiment matrix and emit CSV");
  std::string b_config, b_families = "monmax:2-4", b_algs = "pdr1", b_strategy = "first", b_out;
  int b_seeds = 3, b_workers = 1;
  uint64_t b_budget = 1000000;
  bench->add_option("--config", b_config, "JSON config file (overrides the flags)");
  bench->add_option("--families", b_families, "comma list of name:min-max");
  bench->add_option("--algs", b_algs, "comma list of algorithms");
  bench->add_option("--seeds", b_seeds, "number of seeds (0..N-1)");
  bench->add_option("--budget", b_budget, "query budget per run");
  bench->add_option("--strategy", b_strategy, "teacher strategy");
  bench->add_option("--workers", b_workers, "worker threads");
  bench->add_option("--out", b_out, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(g_family, g_k, g_n, g_seed, g_phi, g_out);
    if (inf->parsed())
      return cmd_infer(i_alg, i_sys, i_budget, i_strategy, i_seed, i_class, i_itp_k,
                       i_ice_width, i_ice_clauses);
    if (chk->parsed()) return cmd_check(c_sys, c_inv, c_sexpr);
    if (dual->parsed()) return cmd_dualize(d_sys, d_out);
    if (learn->parsed()) return cmd_learn_delta(l_k, l_seed);
    if (bench->parsed())
      return cmd_bench(b_config, b_families, b_algs, b_seeds, b_budget, b_strategy, b_workers,
                       b_out);
  } catch (const InputError& ex) {
    std::cerr << "input error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
