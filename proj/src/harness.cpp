#include "invlab/harness.h"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

namespace invlab {

FamilyInstance make_instance(const std::string& family, int param, uint64_t seed) {
  if (family == "monmax") return gen_monmax_family(param, seed);
  if (family == "badts") return gen_badts(param);
  if (family == "add-even") return gen_add_even(param);
  if (family == "add-even-max") return gen_add_even_maximal(param);
  if (family == "qbf2") {
    std::mt19937_64 rng(seed);
    Qbf2Instance q{param, random_formula(rng, 2 * param, 3)};
    FamilyInstance fi = gen_qbf2_system(q);
    fi.seed = seed;
    return fi;
  }
  throw InputError("unknown family: " + family);
}

TeacherStrategy strategy_by_name(const std::string& name, uint64_t seed) {
  if (name == "first") return TeacherStrategy::first_model();
  if (name == "random") return TeacherStrategy::seeded_random(seed);
  if (name == "max-ambiguity") {
    TeacherStrategy s;
    s.kind = TeacherStrategy::Kind::MaxAmbiguity;
    s.seed = seed;
    return s;
  }
  throw InputError("unknown strategy: " + name);
}

namespace {

struct Job {
  std::string family;
  int param = 0;
  uint64_t seed = 0;
  std::string algorithm;
};

const char* status_name(InferenceStatus s) {
  switch (s) {
    case InferenceStatus::Invariant:
      return "invariant";
    case InferenceStatus::NoInvariant:
      return "no_invariant";
    case InferenceStatus::BudgetExhausted:
      return "budget_exhausted";
  }
  return "?";
}

InferenceOutcome run_algorithm(const std::string& alg, const FamilyInstance& fi,
                               const DeltaHandle& handle, const BenchConfig& cfg,
                               uint64_t seed) {
  Budget budget;
  const Formula& init = fi.ts.init;
  const Formula& bad = fi.ts.bad;
  if (alg == "naive") {
    budget.hoare = cfg.budget;
    return naive_backward(init, bad, handle, budget);
  }
  if (alg == "pdr1") {
    budget.hoare = cfg.budget;
    return pdr1(init, bad, handle, budget);
  }
  if (alg == "houdini") {
    budget.hoare = cfg.budget;
    return houdini(init, bad, handle, negative_literal_predicates(fi.ts.vocab), budget);
  }
  if (alg == "ice-enum") {
    budget.inductiveness = cfg.budget;
    TeacherStrategy strategy = strategy_by_name(cfg.strategy, seed);
    return ice_enum_learner(init, bad, handle,
                            cube_blocking_proposer(init, bad, fi.ts.vocab), strategy, budget);
  }
  if (alg == "itp") {
    budget.interpolation = cfg.budget;
    return itp_inference(init, bad, handle, 1, budget);
  }
  throw InputError("unknown algorithm: " + alg);
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
  // Build the job list already in emission order so run ids are stable no
  // matter how workers interleave.
  std::vector<Job> jobs;
  for (const FamilySpec& fam : cfg.families) {
    for (int p = fam.param_min; p <= fam.param_max; ++p) {
      for (uint64_t seed : cfg.seeds) {
        for (const std::string& alg : cfg.algorithms) {
          jobs.push_back({fam.name, p, seed, alg});
        }
      }
    }
  }

  BenchResult result;
  result.records.resize(jobs.size());
  result.invariants.resize(jobs.size());
  result.instances.resize(jobs.size());

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      ExperimentRecord rec;
      rec.run_id = i;
      rec.family = job.family;
      rec.algorithm = job.algorithm;
      rec.strategy = cfg.strategy;
      rec.seed = job.seed;
      auto start = std::chrono::steady_clock::now();
      try {
        FamilyInstance fi = make_instance(job.family, job.param, job.seed);
        rec.n = fi.n;
        rec.m = fi.m;
        rec.k = fi.k;
        DeltaHandle handle(fi.ts);
        InferenceOutcome out = run_algorithm(job.algorithm, fi, handle, cfg, job.seed);
        rec.result = status_name(out.status);
        rec.hoare_total = out.ledger.hoare_total;
        rec.hoare_in_block = out.ledger.hoare_in_block;
        rec.inductiveness_total = out.ledger.inductiveness_total;
        rec.iterations = out.iterations;
        result.invariants[i] = out.invariant;
        result.instances[i] = std::move(fi);
      } catch (const std::exception& ex) {
        rec.result = std::string("error:") + ex.what();
      }
      rec.wall_clock_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
              .count();
      result.records[i] = std::move(rec);
    }
  };

  int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return result;
}

std::string to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << "run_id,family,n,m,k,algorithm,strategy,seed,result,hoare_total,hoare_in_block,"
         "inductiveness_total,iterations,wall_clock_ms\n";
  for (const ExperimentRecord& r : records) {
    out << r.run_id << ',' << r.family << ',' << r.n << ',' << r.m << ',' << r.k << ','
        << r.algorithm << ',' << r.strategy << ',' << r.seed << ',' << r.result << ','
        << r.hoare_total << ',' << r.hoare_in_block << ',' << r.inductiveness_total << ','
        << r.iterations << ',' << r.wall_clock_ms << '\n';
  }
  return out.str();
}

VerifyReport verify_ground_truth(const BenchResult& result) {
  VerifyReport report;
  for (size_t i = 0; i < result.records.size(); ++i) {
    const ExperimentRecord& rec = result.records[i];
    if (rec.result != "invariant") continue;
    std::ostringstream tag;
    tag << "run " << rec.run_id << " (" << rec.family << " n=" << rec.n << " seed=" << rec.seed
        << " alg=" << rec.algorithm << "): ";
    if (!result.invariants[i]) {
      report.mismatches.push_back(tag.str() + "result says invariant but none was recorded");
      continue;
    }
    const FamilyInstance& fi = result.instances[i];
    if (!fi.safe()) {
      report.mismatches.push_back(tag.str() + "unsafe family produced an invariant");
      continue;
    }
    if (!check_invariant(fi.ts, *result.invariants[i]).ok())
      report.mismatches.push_back(tag.str() + "reported invariant fails the checker");
  }
  return report;
}

BenchConfig parse_bench_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("bench config: ") + ex.what());
  }
  BenchConfig cfg;
  try {
    for (const auto& fam : j.at("families")) {
      FamilySpec spec;
      spec.name = fam.at("name").get<std::string>();
      spec.param_min = fam.at("min").get<int>();
      spec.param_max = fam.at("max").get<int>();
      cfg.families.push_back(spec);
    }
    cfg.algorithms = j.at("algorithms").get<std::vector<std::string>>();
    if (j.contains("seeds")) cfg.seeds = j["seeds"].get<std::vector<uint64_t>>();
    if (j.contains("strategy")) cfg.strategy = j["strategy"].get<std::string>();
    if (j.contains("budget")) cfg.budget = j["budget"].get<uint64_t>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("bench config: ") + ex.what());
  }
  return cfg;
}

}  // namespace invlab
