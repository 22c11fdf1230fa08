// Command-line entry point: gen | solve | exact | certify | bench.
//
// Exit codes: 0 success, 1 validation error, 2 infeasible (capacity, oracle
// budget), 3 certification failure.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ckm/bench.hpp"
#include "ckm/certifier.hpp"
#include "ckm/exact_oracle.hpp"
#include "ckm/generators.hpp"
#include "ckm/io.hpp"
#include "ckm/local_search.hpp"

namespace {

using ckm::io::json;

int exit_code_for(ckm::ErrorKind kind) {
  switch (kind) {
    case ckm::ErrorKind::kValidation:
    case ckm::ErrorKind::kInconsistent: return 1;
    case ckm::ErrorKind::kInfeasible: return 2;
    case ckm::ErrorKind::kCertification: return 3;
  }
  return 1;
}

void require_valid(const ckm::Instance& inst) {
  const auto report = ckm::validate_instance(inst);
  if (!report.ok()) throw ckm::Error(ckm::ErrorKind::kValidation, report.violations.front());
}

struct GenArgs {
  std::string out, family = "euclidean";
  int facilities = 8, clients = 12, capacity = 3, k = 2;
  std::int64_t coord_range = 100;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> penalty_min, penalty_max;
};

int cmd_gen(const GenArgs& a) {
  ckm::GenSpec spec;
  spec.family = ckm::parse_family(a.family);
  spec.num_facilities = a.facilities;
  spec.num_clients = a.clients;
  spec.capacity = a.capacity;
  spec.k = a.k;
  spec.coord_range = a.coord_range;
  spec.seed = a.seed;
  if (a.penalty_min || a.penalty_max) {
    if (!a.penalty_min || !a.penalty_max)
      throw ckm::Error(ckm::ErrorKind::kValidation, "--penalty-min and --penalty-max go together");
    spec.penalty_range = std::pair<ckm::Cost, ckm::Cost>{*a.penalty_min, *a.penalty_max};
  }
  ckm::io::write_json_file(a.out, ckm::io::instance_to_json(ckm::generate(spec)));
  return 0;
}

struct SolveArgs {
  std::string instance, out, epsilon = "0.01", init = "random";
  int p = 2;
  std::uint64_t seed = 0;
  bool penalties = false;
  std::optional<std::int64_t> max_iterations;
};

int cmd_solve(const SolveArgs& a) {
  ckm::SearchConfig cfg;
  cfg.p = a.p;
  cfg.epsilon = ckm::parse_rational(a.epsilon);
  cfg.seed = a.seed;
  cfg.penalty_mode = a.penalties;
  cfg.max_iterations = a.max_iterations;
  if (a.init == "greedy") cfg.init = ckm::InitKind::kGreedy;
  else if (a.init != "random") throw ckm::Error(ckm::ErrorKind::kValidation, "--init must be random or greedy");
  ckm::validate_config(cfg);

  const ckm::Instance inst = ckm::io::read_instance(a.instance);
  require_valid(inst);
  if (cfg.penalty_mode && !inst.has_penalties())
    throw ckm::Error(ckm::ErrorKind::kValidation, "--penalties given but the instance has none");
  if (ckm::open_count_clamped(inst))
    std::cerr << "note: open count clamped to |F| = " << inst.num_facilities << "\n";

  const ckm::SearchResult res = ckm::run(inst, cfg);
  json j = ckm::io::solution_to_json(res.solution);
  j["search"] = {{"p", cfg.p}, {"epsilon", cfg.epsilon.str()}, {"seed", cfg.seed},
                 {"penalty_mode", cfg.penalty_mode}, {"init", a.init}};
  j["trace"] = ckm::io::trace_to_json(res.trace);
  ckm::io::write_json_file(a.out, j);
  if (res.trace.capped) std::cerr << "note: iteration cap reached\n";
  return 0;
}

struct ExactArgs {
  std::string instance, out;
  std::optional<int> k;
  bool penalties = false;
  std::int64_t max_subsets = 2'000'000;
  double time_cap = 600.0;
};

int cmd_exact(const ExactArgs& a) {
  const ckm::Instance inst = ckm::io::read_instance(a.instance);
  require_valid(inst);
  if (a.penalties && !inst.has_penalties())
    throw ckm::Error(ckm::ErrorKind::kValidation, "--penalties given but the instance has none");
  const ckm::OracleBudget budget{a.max_subsets, a.time_cap};
  const auto opt = ckm::exact_optimal(inst, a.k.value_or(inst.k), a.penalties, budget);
  json j = ckm::io::solution_to_json(opt.solution);
  j["k"] = opt.k;
  ckm::io::write_json_file(a.out, j);
  return 0;
}

struct CertifyArgs {
  std::string instance, solution, optimal, report;
  std::optional<std::string> epsilon;
};

int cmd_certify(const CertifyArgs& a) {
  const ckm::Instance inst = ckm::io::read_instance(a.instance);
  require_valid(inst);
  const json sol_json = ckm::io::read_json_file(a.solution);
  const ckm::Solution S = ckm::io::solution_from_json(sol_json);
  const ckm::Solution O = ckm::io::read_solution(a.optimal);

  std::string eps = "0.01";
  if (sol_json.contains("search") && sol_json["search"].contains("epsilon"))
    eps = sol_json["search"]["epsilon"].get<std::string>();
  if (a.epsilon) eps = *a.epsilon;
  const ckm::Rational delta = ckm::improvement_threshold(inst, ckm::parse_rational(eps));

  const auto report = ckm::cert::certify(inst, S, O, delta);
  ckm::io::write_json_file(a.report, ckm::io::certificate_to_json(report));
  std::cout << "certified: " << (report.certified ? "true" : "false") << "\n";
  if (!report.certified) {
    for (const auto& f : report.failures) std::cerr << "  " << f << "\n";
    return 3;
  }
  return 0;
}

struct BenchArgs {
  std::string suite = "small", csv, epsilon = "0.01";
  std::vector<int> p{2};
};

int cmd_bench(const BenchArgs& a) {
  std::vector<ckm::SearchConfig> configs;
  for (int p : a.p) {
    ckm::SearchConfig cfg;
    cfg.p = p;
    cfg.epsilon = ckm::parse_rational(a.epsilon);
    ckm::validate_config(cfg);
    configs.push_back(cfg);
  }
  const auto rows = ckm::bench_suite(ckm::named_suite(a.suite), configs);
  std::ofstream out(a.csv);
  if (!out) throw ckm::Error(ckm::ErrorKind::kValidation, "cannot write " + a.csv);
  ckm::write_bench_csv(out, rows);
  double worst = 0;
  for (const auto& r : rows)
    if (r.ratio) worst = std::max(worst, *r.ratio);
  std::cout << rows.size() << " rows, max ratio " << worst << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacitated k-median local search"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a seeded instance");
  g->add_option("--out", gen.out)->required();
  g->add_option("--family", gen.family)->check(CLI::IsMember({"euclidean", "clustered", "uniform-random-matrix"}));
  g->add_option("--facilities", gen.facilities);
  g->add_option("--clients", gen.clients);
  g->add_option("--capacity", gen.capacity);
  g->add_option("--k", gen.k);
  g->add_option("--coord-range", gen.coord_range);
  g->add_option("--seed", gen.seed);
  g->add_option("--penalty-min", gen.penalty_min);
  g->add_option("--penalty-max", gen.penalty_max);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run the local search");
  s->add_option("--instance", solve.instance)->required();
  s->add_option("--out", solve.out)->required();
  s->add_option("--p", solve.p);
  s->add_option("--epsilon", solve.epsilon);
  s->add_option("--seed", solve.seed);
  s->add_flag("--penalties", solve.penalties);
  s->add_option("--max-iterations", solve.max_iterations);
  s->add_option("--init", solve.init);

  ExactArgs exact;
  auto* e = app.add_subcommand("exact", "Brute-force optimum over k-subsets");
  e->add_option("--instance", exact.instance)->required();
  e->add_option("--out", exact.out)->required();
  e->add_option("--k", exact.k);
  e->add_flag("--penalties", exact.penalties);
  e->add_option("--max-subsets", exact.max_subsets);
  e->add_option("--time-cap", exact.time_cap);

  CertifyArgs certify;
  auto* c = app.add_subcommand("certify", "Check the locality-gap certificate for (S, O)");
  c->add_option("--instance", certify.instance)->required();
  c->add_option("--solution", certify.solution)->required();
  c->add_option("--optimal", certify.optimal)->required();
  c->add_option("--report", certify.report)->required();
  c->add_option("--epsilon", certify.epsilon);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Benchmark against the exact oracle");
  b->add_option("--suite", bench.suite)->check(CLI::IsMember({"small", "medium"}));
  b->add_option("--csv", bench.csv)->required();
  b->add_option("--p", bench.p);
  b->add_option("--epsilon", bench.epsilon);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(solve);
    if (*e) return cmd_exact(exact);
    if (*c) return cmd_certify(certify);
    if (*b) return cmd_bench(bench);
  } catch (const ckm::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code_for(err.kind());
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
