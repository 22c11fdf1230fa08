#ifndef CKM_IO_HPP
#define CKM_IO_HPP

// JSON instance / solution / certificate files.
//
// Instance: {version:1, facilities, clients, k, capacity, metric,
//            costs | points{facility_xy, client_xy}, penalties?, cost_scale?}
// Solution: {version:1, open:[ids], assign:[id or -1], cost}

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ckm/certifier.hpp"
#include "ckm/instance.hpp"
#include "ckm/local_search.hpp"

namespace ckm::io {

using nlohmann::json;

namespace detail {

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorKind::kValidation, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::int64_t as_int(const json& v, const std::string& what) {
  if (!v.is_number_integer())
    throw Error(ErrorKind::kValidation, what + " must be an integer");
  return v.get<std::int64_t>();
}

// Integer, or a decimal that becomes integral after multiplying by scale.
inline Cost scaled_cost(const json& v, std::int64_t scale, const std::string& what) {
  if (v.is_number_integer()) return v.get<std::int64_t>() * scale;
  if (v.is_number_float() && scale > 1) {
    const long double x = v.get<long double>() * scale;
    const long double r = std::llround(x);
    if (std::fabs(x - r) > 1e-6L)
      throw Error(ErrorKind::kValidation, what + " is not a multiple of 1/" + std::to_string(scale));
    return static_cast<Cost>(r);
  }
  throw Error(ErrorKind::kValidation, what + " must be an integer");
}

// Inverse of scaled_cost: integral values stay integers.
inline json unscaled_cost(Cost c, std::int64_t scale) {
  if (scale == 1 || c % scale == 0) return json(c / scale);
  return json(static_cast<double>(c) / static_cast<double>(scale));
}

inline json unscaled_row(const std::vector<Cost>& row, std::int64_t scale) {
  json out = json::array();
  for (Cost c : row) out.push_back(unscaled_cost(c, scale));
  return out;
}

inline std::vector<Point> read_points(const json& arr, const std::string& what) {
  if (!arr.is_array()) throw Error(ErrorKind::kValidation, what + " must be an array");
  std::vector<Point> pts;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2)
      throw Error(ErrorKind::kValidation, what + " entries must be [x,y] pairs");
    pts.push_back({as_int(p[0], what), as_int(p[1], what)});
  }
  return pts;
}

}  // namespace detail

inline Instance instance_from_json(const json& j) {
  using detail::as_int;
  using detail::require;
  if (as_int(require(j, "version"), "version") != 1)
    throw Error(ErrorKind::kValidation, "unsupported instance version");
  Instance inst;
  inst.num_facilities = static_cast<int>(as_int(require(j, "facilities"), "facilities"));
  inst.num_clients = static_cast<int>(as_int(require(j, "clients"), "clients"));
  inst.k = static_cast<int>(as_int(require(j, "k"), "k"));
  inst.capacity = static_cast<int>(as_int(require(j, "capacity"), "capacity"));
  const json& metric = require(j, "metric");
  if (!metric.is_boolean()) throw Error(ErrorKind::kValidation, "metric must be a boolean");
  inst.metric = metric.get<bool>();
  if (j.contains("cost_scale")) {
    inst.cost_scale = as_int(j.at("cost_scale"), "cost_scale");
    std::int64_t s = inst.cost_scale;
    while (s > 1 && s % 10 == 0) s /= 10;
    if (inst.cost_scale < 1 || s != 1)
      throw Error(ErrorKind::kValidation, "cost_scale must be a power of 10");
  }

  const bool has_costs = j.contains("costs"), has_points = j.contains("points");
  if (has_costs == has_points)
    throw Error(ErrorKind::kValidation, "exactly one of 'costs' or 'points' is required");
  if (has_costs) {
    const json& rows = j.at("costs");
    if (!rows.is_array()) throw Error(ErrorKind::kValidation, "costs must be a matrix");
    for (const auto& row : rows) {
      if (!row.is_array()) throw Error(ErrorKind::kValidation, "costs must be a matrix");
      std::vector<Cost> r;
      for (const auto& v : row) r.push_back(detail::scaled_cost(v, inst.cost_scale, "cost"));
      inst.cost.push_back(std::move(r));
    }
  } else {
    PointSet pts;
    pts.facilities = detail::read_points(require(j.at("points"), "facility_xy"), "facility_xy");
    pts.clients = detail::read_points(require(j.at("points"), "client_xy"), "client_xy");
    if (static_cast<int>(pts.facilities.size()) != inst.num_facilities ||
        static_cast<int>(pts.clients.size()) != inst.num_clients)
      throw Error(ErrorKind::kValidation, "point counts do not match facilities/clients");
    inst.cost = costs_from_points(pts);
    inst.points = std::move(pts);
  }
  if (j.contains("penalties")) {
    std::vector<Cost> pen;
    for (const auto& v : j.at("penalties"))
      pen.push_back(detail::scaled_cost(v, inst.cost_scale, "penalty"));
    inst.penalties = std::move(pen);
  }
  return inst;
}

inline json instance_to_json(const Instance& inst) {
  json j;
  j["version"] = 1;
  j["facilities"] = inst.num_facilities;
  j["clients"] = inst.num_clients;
  j["k"] = inst.k;
  j["capacity"] = inst.capacity;
  j["metric"] = inst.metric;
  if (inst.cost_scale != 1) j["cost_scale"] = inst.cost_scale;
  if (inst.points) {
    json fx = json::array(), cx = json::array();
    for (const auto& p : inst.points->facilities) fx.push_back({p.x, p.y});
    for (const auto& p : inst.points->clients) cx.push_back({p.x, p.y});
    j["points"] = {{"facility_xy", fx}, {"client_xy", cx}};
  } else {
    json rows = json::array();
    for (const auto& row : inst.cost) rows.push_back(detail::unscaled_row(row, inst.cost_scale));
    j["costs"] = std::move(rows);
  }
  if (inst.penalties) j["penalties"] = detail::unscaled_row(*inst.penalties, inst.cost_scale);
  return j;
}

inline Solution solution_from_json(const json& j) {
  using detail::as_int;
  using detail::require;
  if (as_int(require(j, "version"), "version") != 1)
    throw Error(ErrorKind::kValidation, "unsupported solution version");
  Solution sol;
  for (const auto& v : require(j, "open")) sol.open.push_back(static_cast<int>(as_int(v, "open id")));
  for (const auto& v : require(j, "assign")) sol.assign.push_back(static_cast<int>(as_int(v, "assign id")));
  sol.total_cost = as_int(require(j, "cost"), "cost");
  std::sort(sol.open.begin(), sol.open.end());
  return sol;
}

inline json solution_to_json(const Solution& sol) {
  json j;
  j["version"] = 1;
  j["open"] = sol.open;
  j["assign"] = sol.assign;
  j["cost"] = sol.total_cost;
  return j;
}

inline json trace_to_json(const SearchTrace& trace) {
  json steps = json::array();
  for (const auto& st : trace.iterations)
    steps.push_back({{"close", st.move.close}, {"open", st.move.open},
                     {"old_cost", st.old_cost}, {"new_cost", st.new_cost}});
  return {{"initial_cost", trace.initial_cost},
          {"iterations", steps},
          {"evaluations", trace.evaluations},
          {"capped", trace.capped}};
}

inline json claims_to_json(const cert::ClaimReport& claims) {
  json out = json::object();
  for (const auto& c : claims.claims) {
    json entry = {{"passed", c.passed}};
    if (!c.passed) entry["witness"] = c.witness;
    out[c.name] = entry;
  }
  return out;
}

inline json certificate_to_json(const cert::CertificateReport& r) {
  json swaps = json::array();
  for (const auto& sw : r.plan.swaps) {
    json e = {{"out", sw.out}, {"in", sw.in}, {"origin", sw.origin},
              {"inequality_value", sw.inequality_value}};
    e["realized_delta"] = sw.realized_delta ? json(*sw.realized_delta) : json(nullptr);
    swaps.push_back(e);
  }
  auto histogram = [](const std::map<int, int>& counts, const std::vector<int>& universe) {
    std::map<int, int> h;
    for (int f : universe) {
      auto it = counts.find(f);
      ++h[it == counts.end() ? 0 : it->second];
    }
    json out = json::object();
    for (const auto& [n, c] : h) out[std::to_string(n)] = c;
    return out;
  };
  std::vector<int> s_side, o_side;
  for (const auto& [s, n] : r.plan.participation_S) s_side.push_back(s);
  for (const auto& [o, n] : r.plan.participation_O) o_side.push_back(o);

  json j;
  j["version"] = 1;
  j["certified"] = r.certified;
  j["claims"] = claims_to_json(r.claims);
  j["swaps"] = swaps;
  j["participation_histogram"] = {{"solution", histogram(r.plan.participation_S, s_side)},
                                  {"optimum", histogram(r.plan.participation_O, o_side)}};
  j["cost_solution"] = r.cost_S;
  j["cost_optimum"] = r.cost_O;
  j["delta_imp"] = r.delta_imp.str();
  j["certified_bound"] = r.certified_bound();
  j["measured_ratio"] = std::isfinite(r.measured_ratio()) ? json(r.measured_ratio()) : json(nullptr);
  j["failures"] = r.failures;
  if (r.partition) {
    json parts = json::array();
    for (std::size_t i = 0; i < r.partition->A_parts.size(); ++i)
      parts.push_back({{"A", r.partition->A_parts[i]}, {"B", r.partition->B_parts[i]}});
    j["partition"] = parts;
  }
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kValidation, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kValidation, "cannot write " + path);
  out << j.dump(2) << '\n';
}

inline Instance read_instance(const std::string& path) {
  return instance_from_json(read_json_file(path));
}
inline Solution read_solution(const std::string& path) {
  return solution_from_json(read_json_file(path));
}

}  // namespace ckm::io

#endif  // CKM_IO_HPP
