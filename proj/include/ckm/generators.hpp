#ifndef CKM_GENERATORS_HPP
#define CKM_GENERATORS_HPP

// Seeded instance families. Generation is a pure function of the GenSpec;
// all draws go through mt19937_64 with hand-rolled uniform/normal transforms
// so the output does not depend on the standard library's distributions.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "ckm/instance.hpp"

namespace ckm {

enum class Family { kEuclidean, kClustered, kUniformMatrix };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::kEuclidean: return "euclidean";
    case Family::kClustered: return "clustered";
    case Family::kUniformMatrix: return "uniform-random-matrix";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "euclidean") return Family::kEuclidean;
  if (s == "clustered") return Family::kClustered;
  if (s == "uniform-random-matrix" || s == "uniform") return Family::kUniformMatrix;
  throw Error(ErrorKind::kValidation, "unknown family '" + s + "'");
}

struct GenSpec {
  Family family = Family::kEuclidean;
  int num_facilities = 8;
  int num_clients = 12;
  int capacity = 3;
  int k = 2;
  std::optional<std::pair<Cost, Cost>> penalty_range;
  std::uint64_t seed = 0;
  std::int64_t coord_range = 100;
};

inline constexpr int kMetricRetries = 100;

namespace detail {

class SeededDraws {
 public:
  explicit SeededDraws(std::uint64_t seed) : rng_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(rng_());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do x = rng_(); while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  /// Uniform in (0, 1).
  double unit() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (one value per call).
  double normal() {
    const double u1 = unit(), u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 rng_;
};

inline Instance draw_instance(const GenSpec& spec, SeededDraws& draw) {
  Instance inst;
  inst.num_facilities = spec.num_facilities;
  inst.num_clients = spec.num_clients;
  inst.capacity = spec.capacity;
  inst.k = spec.k;
  const std::int64_t R = spec.coord_range;

  if (spec.family == Family::kUniformMatrix) {
    inst.metric = false;
    inst.cost.assign(spec.num_facilities, std::vector<Cost>(spec.num_clients));
    for (auto& row : inst.cost)
      for (auto& c : row) c = draw.integer(0, R);
  } else {
    inst.metric = true;
    PointSet pts;
    for (int i = 0; i < spec.num_facilities; ++i)
      pts.facilities.push_back({draw.integer(0, R), draw.integer(0, R)});
    if (spec.family == Family::kEuclidean) {
      for (int j = 0; j < spec.num_clients; ++j)
        pts.clients.push_back({draw.integer(0, R), draw.integer(0, R)});
    } else {
      std::vector<Point> centers;
      for (int c = 0; c < spec.k; ++c) centers.push_back({draw.integer(0, R), draw.integer(0, R)});
      const double sd = static_cast<double>(R) / 20.0;
      auto clamp = [&](double v) {
        return std::clamp<std::int64_t>(std::llround(v), 0, R);
      };
      for (int j = 0; j < spec.num_clients; ++j) {
        const Point& c = centers[static_cast<std::size_t>(draw.integer(0, spec.k - 1))];
        const double x = static_cast<double>(c.x) + sd * draw.normal();
        const double y = static_cast<double>(c.y) + sd * draw.normal();
        pts.clients.push_back({clamp(x), clamp(y)});
      }
    }
    inst.cost = costs_from_points(pts);
    inst.points = std::move(pts);
  }
  if (spec.penalty_range) {
    std::vector<Cost> pen;
    for (int j = 0; j < spec.num_clients; ++j)
      pen.push_back(draw.integer(spec.penalty_range->first, spec.penalty_range->second));
    inst.penalties = std::move(pen);
  }
  return inst;
}

}  // namespace detail

inline Instance generate(const GenSpec& spec) {
  if (spec.num_facilities <= 0 || spec.num_clients <= 0 || spec.capacity <= 0 || spec.k <= 0 ||
      spec.coord_range <= 0)
    throw Error(ErrorKind::kValidation, "generator sizes must be positive");
  if (spec.penalty_range &&
      (spec.penalty_range->first < 0 || spec.penalty_range->first > spec.penalty_range->second))
    throw Error(ErrorKind::kValidation, "invalid penalty range");
  if (!spec.penalty_range) {
    const std::int64_t m = std::min(spec.num_facilities, (8 * spec.k + 2) / 3);
    if (m * spec.capacity < spec.num_clients)
      throw Error(ErrorKind::kInfeasible, "insufficient capacity: ceil(8k/3)*U < |C|");
  }
  detail::SeededDraws draw(spec.seed);
  for (int attempt = 0; attempt <= kMetricRetries; ++attempt) {
    Instance inst = detail::draw_instance(spec, draw);
    // Rounding can break the metric; redraw from the same stream if so.
    if (!inst.metric || !find_metric_violation(inst.cost)) return inst;
  }
  throw Error(ErrorKind::kInfeasible, "could not draw a metric instance after retries");
}

}  // namespace ckm

#endif  // CKM_GENERATORS_HPP
