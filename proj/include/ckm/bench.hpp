#ifndef CKM_BENCH_HPP
#define CKM_BENCH_HPP

// Ratio/iteration/runtime measurements of the local search against the exact
// oracle over seeded instance suites.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ckm/certifier.hpp"
#include "ckm/exact_oracle.hpp"
#include "ckm/generators.hpp"
#include "ckm/local_search.hpp"

namespace ckm {

struct BenchRow {
  std::string instance_id;
  std::uint64_t seed = 0;
  int p = 0;
  Rational epsilon;
  Cost local_cost = 0;
  std::optional<Cost> exact_cost;
  std::optional<double> ratio;
  int open_count = 0;
  std::int64_t iterations = 0;
  double wall_seconds = 0.0;
  bool certified = false;
  std::string note;  // "clamped", oracle errors, ...
};

struct BenchCase {
  std::string id;
  GenSpec spec;
};

/// Random small euclidean instances with k*U >= |C| and |F| >= ceil(8k/3):
/// the regime where the 8/3 cardinality analysis applies.
inline std::vector<BenchCase> ratio_suite(int count, std::uint64_t base_seed,
                                          bool with_penalties = false) {
  std::vector<BenchCase> out;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
    detail::SeededDraws draw(seed ^ 0x9e3779b97f4a7c15ULL);
    GenSpec spec;
    spec.family = Family::kEuclidean;
    spec.k = static_cast<int>(draw.integer(1, 3));
    spec.capacity = static_cast<int>(draw.integer(2, 4));
    const int m = (8 * spec.k + 2) / 3;
    spec.num_facilities = static_cast<int>(draw.integer(m, 8));
    const int max_clients = std::min(12, spec.k * spec.capacity);
    spec.num_clients = static_cast<int>(draw.integer(std::max(2, max_clients / 2), max_clients));
    spec.coord_range = 100;
    spec.seed = seed;
    if (with_penalties) spec.penalty_range = std::pair<Cost, Cost>{0, 120};
    out.push_back({"ratio-" + std::to_string(i), spec});
  }
  return out;
}

inline std::vector<BenchCase> named_suite(const std::string& name) {
  if (name == "small") return ratio_suite(24, 1000);
  if (name == "medium") {
    std::vector<BenchCase> out;
    int idx = 0;
    for (Family fam : {Family::kEuclidean, Family::kClustered, Family::kUniformMatrix}) {
      for (int t = 0; t < 8; ++t, ++idx) {
        GenSpec spec;
        spec.family = fam;
        spec.k = 2 + t % 2;
        spec.num_facilities = 14;
        spec.num_clients = 30;
        spec.capacity = (spec.num_clients + spec.k - 1) / spec.k;
        spec.coord_range = 1000;
        spec.seed = 5000 + static_cast<std::uint64_t>(idx);
        out.push_back({"medium-" + family_name(fam) + "-" + std::to_string(t), spec});
      }
    }
    return out;
  }
  throw Error(ErrorKind::kValidation, "unknown suite '" + name + "'");
}

/// Worker count: CKM_THREADS if set, else hardware concurrency.
inline unsigned bench_threads() {
  if (const char* env = std::getenv("CKM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline BenchRow bench_one(const BenchCase& bc, const SearchConfig& base,
                          const OracleBudget& budget) {
  BenchRow row;
  row.instance_id = bc.id;
  row.seed = bc.spec.seed;
  row.p = base.p;
  row.epsilon = base.epsilon;
  try {
    const Instance inst = generate(bc.spec);
    SearchConfig cfg = base;
    cfg.seed = bc.spec.seed;
    cfg.penalty_mode = inst.has_penalties();
    const auto started = std::chrono::steady_clock::now();
    const SearchResult res = run(inst, cfg);
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    row.local_cost = res.solution.total_cost;
    row.open_count = static_cast<int>(res.solution.open.size());
    row.iterations = static_cast<std::int64_t>(res.trace.iterations.size());
    if (open_count_clamped(inst)) row.note = "clamped";

    const OptimumRecord opt = exact_optimal(inst, inst.k, cfg.penalty_mode, budget);
    row.exact_cost = opt.solution.total_cost;
    if (opt.solution.total_cost > 0)
      row.ratio = static_cast<double>(row.local_cost) / static_cast<double>(opt.solution.total_cost);
    else if (row.local_cost == 0)
      row.ratio = 1.0;

    const bool certifiable = !cfg.penalty_mode && !open_count_clamped(inst) &&
                             static_cast<std::int64_t>(inst.k) * inst.capacity >= inst.num_clients;
    if (certifiable) {
      const auto report = cert::certify(inst, res.solution, opt.solution,
                                        improvement_threshold(inst, cfg.epsilon));
      row.certified = report.certified;
    }
  } catch (const Error& e) {
    row.note = e.what();
  }
  return row;
}

/// Every (case, config) pair; output order follows input order regardless of
/// which worker finishes first.
inline std::vector<BenchRow> bench_suite(const std::vector<BenchCase>& cases,
                                         const std::vector<SearchConfig>& configs,
                                         const OracleBudget& budget = {},
                                         unsigned threads = bench_threads()) {
  const std::size_t total = cases.size() * configs.size();
  std::vector<BenchRow> rows(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < total; t = next++)
      rows[t] = bench_one(cases[t / configs.size()], configs[t % configs.size()], budget);
  };
  std::vector<std::thread> pool;
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), total));
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return rows;
}

inline const char* kBenchCsvHeader =
    "instance_id,seed,p,epsilon,local_cost,exact_cost,ratio,open_count,iterations,"
    "wall_time,certified,note";

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace detail

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    std::ostringstream ratio, wall;
    if (r.ratio) ratio.precision(6), ratio << std::fixed << *r.ratio;
    wall.precision(6);
    wall << std::fixed << r.wall_seconds;
    out << detail::csv_field(r.instance_id) << ',' << r.seed << ',' << r.p << ','
        << r.epsilon.str() << ',' << r.local_cost << ','
        << (r.exact_cost ? std::to_string(*r.exact_cost) : "") << ',' << ratio.str() << ','
        << r.open_count << ',' << r.iterations << ',' << wall.str() << ','
        << (r.certified ? "true" : "false") << ',' << detail::csv_field(r.note) << '\n';
  }
}

}  // namespace ckm

#endif  // CKM_BENCH_HPP
