#pragma once

#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steklov/bound.hpp"
#include "steklov/decomposition.hpp"
#include "steklov/flows.hpp"
#include "steklov/graph.hpp"
#include "steklov/spectrum.hpp"

// JSON and CSV serialization. Vertices are always written by their external id.

namespace steklov {

using json = nlohmann::ordered_json;

namespace detail {

/// JSON has no infinities; they are written as the strings "inf" / "-inf".
inline json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

inline double read_number(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

inline json labels_of(const BoundaryGraph& g, const std::vector<Vertex>& vs) {
  json out = json::array();
  for (Vertex v : vs) out.push_back(g.label(v));
  return out;
}

inline std::map<VertexId, Vertex> label_index(const BoundaryGraph& g) {
  std::map<VertexId, Vertex> idx;
  for (Vertex v = 0; v < g.vertex_count(); ++v) idx[g.label(v)] = v;
  return idx;
}

inline std::vector<Vertex> vertices_of(const std::map<VertexId, Vertex>& idx, const json& arr) {
  std::vector<Vertex> out;
  for (const auto& x : arr) {
    auto it = idx.find(x.get<VertexId>());
    if (it == idx.end()) throw Error(ErrorCode::ParseError, "unknown vertex id " + x.dump());
    out.push_back(it->second);
  }
  return out;
}

inline json vertex_map(const BoundaryGraph& g, const Eigen::VectorXd& f) {
  json out = json::object();
  for (Vertex v = 0; v < g.vertex_count(); ++v) out[std::to_string(g.label(v))] = f(static_cast<Eigen::Index>(v));
  return out;
}

}  // namespace detail

inline json graph_summary(const BoundaryGraph& g) {
  json j;
  j["vertices"] = g.vertex_count();
  j["edges"] = g.edge_count();
  j["boundary"] = detail::labels_of(g, g.boundary());
  j["max_degree"] = g.max_degree();
  j["genus_hint"] = g.genus_hint() ? json(*g.genus_hint()) : json(nullptr);
  return j;
}

inline json spectrum_to_json(const SpectrumResult& s) {
  json j;
  j["eigenvalues"] = json::array();
  j["residuals"] = json::array();
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    j["eigenvalues"].push_back(s.eigenvalues(i));
    j["residuals"].push_back(s.residuals(i));
  }
  return j;
}

inline json flow_to_json(const BoundaryGraph& g, const Flow& f) {
  json arr = json::array();
  for (std::size_t i = 0; i < f.paths.size(); ++i)
    arr.push_back({{"path", detail::labels_of(g, f.paths.path(i))}, {"value", f.values[i]}});
  return arr;
}

inline Flow flow_from_json(const BoundaryGraph& g, const json& j) {
  const auto idx = detail::label_index(g);
  PathSet paths;
  std::vector<double> values;
  for (const auto& entry : j) {
    const std::size_t before = paths.size();
    paths.add(g, detail::vertices_of(idx, entry.at("path")));
    if (paths.size() == before) throw Error(ErrorCode::ParseError, "duplicate path in flow dump");
    values.push_back(entry.at("value").get<double>());
  }
  return Flow(std::move(paths), std::move(values));
}

inline json distribution_to_json(const BoundaryGraph& g, const FlowDistribution& mu) {
  json arr = json::array();
  for (std::size_t i = 0; i < mu.subsets.size(); ++i)
    arr.push_back({{"subset", detail::labels_of(g, mu.subsets[i])}, {"mass", mu.mass[i]}});
  return {{"r", mu.r}, {"support", arr}};
}

inline FlowDistribution distribution_from_json(const BoundaryGraph& g, const json& j) {
  const auto idx = detail::label_index(g);
  FlowDistribution mu;
  mu.r = j.at("r").get<std::size_t>();
  for (const auto& entry : j.at("support")) {
    auto s = detail::vertices_of(idx, entry.at("subset"));
    std::sort(s.begin(), s.end());
    mu.subsets.push_back(std::move(s));
    mu.mass.push_back(entry.at("mass").get<double>());
  }
  mu.validate(g);
  return mu;
}

inline json partition_to_json(const BoundaryGraph& g, const Partition& p) {
  json blocks = json::array();
  for (const auto& b : p.blocks) blocks.push_back(detail::labels_of(g, b));
  return {{"kappa", p.kappa}, {"seed", p.seed}, {"blocks", blocks}};
}

inline json padding_to_json(const BoundaryGraph& g, const PaddingReport& r) {
  json per = json::object();
  for (std::size_t i = 0; i < r.boundary.size(); ++i) per[std::to_string(g.label(r.boundary[i]))] = r.pad_probability[i];
  return {{"kappa", r.kappa},
          {"alpha", r.alpha},
          {"delta_target", r.delta_target},
          {"samples", r.samples},
          {"seed", r.seed},
          {"confidence_halfwidth", r.confidence_halfwidth},
          {"min_pad_probability", r.min_pad_probability},
          {"best_grid_alpha", detail::number(r.best_grid_alpha)},
          {"pad_probability", per}};
}

inline json calibration_to_json(const AlphaCalibration& c) {
  json pts = json::array();
  for (std::size_t i = 0; i < c.grid.size(); ++i)
    pts.push_back({{"alpha", c.grid[i]}, {"min_pad_probability", c.min_pad_probability[i]}});
  return {{"alpha", detail::number(c.alpha)},
          {"monotone", c.monotone},
          {"confidence_halfwidth", c.confidence_halfwidth},
          {"grid", pts}};
}

inline json audit_to_json(const FamilyAudit& a) {
  return {{"supports_disjoint", a.supports_disjoint},
          {"lipschitz", a.lipschitz},
          {"energy_within_budget", a.energy_within_budget},
          {"budget_within_4d_over_k", a.budget_within_4d_over_k},
          {"total_budget", a.total_budget},
          {"boundary_mass", a.boundary_mass},
          {"peak_on_sources", a.peak_on_sources}};
}

inline json certificate_to_json(const BoundaryGraph& g, const BoundCertificate& c) {
  json j;
  j["parameters"] = {{"k", c.k},
                     {"delta", c.delta},
                     {"boundary_size", c.boundary_size},
                     {"max_degree", c.max_degree},
                     {"r_nominal", c.r_nominal},
                     {"r_used", c.r_used},
                     {"seed", c.seed}};
  j["sigma_k"] = c.sigma_k;
  j["certified"] = c.certified;
  j["verdict"] = c.verdict();
  if (!c.certified) {
    j["failed_stage"] = c.failed_stage;
    j["failure"] = c.failure;
  }
  j["fallback"] = {{"bound", c.fallback_bound}, {"holds", c.fallback_holds}};
  if (c.weight.size() == g.vertex_count()) {
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(c.weight.values().data(),
                                                          static_cast<Eigen::Index>(c.weight.size()));
    j["weight"] = detail::vertex_map(g, w);
    j["epsilon"] = c.epsilon;
    j["kappa"] = c.kappa;
    j["alpha"] = detail::number(c.alpha);
    j["alpha_confidence_halfwidth"] = c.alpha_halfwidth;
    j["alpha_note"] = "alpha is the empirically calibrated padding modulus of the sampler; the bound is conditional on it";
  }
  if (c.partition) {
    j["partition"] = partition_to_json(g, *c.partition);
    j["attempts"] = c.attempts;
    json cores = json::array(), sets = json::array();
    for (const auto& s : c.cores) cores.push_back(detail::labels_of(g, s));
    for (const auto& s : c.grouped_sets) sets.push_back(detail::labels_of(g, s));
    j["cores"] = cores;
    j["grouped_sets"] = sets;
  }
  if (c.family) {
    const auto& f = *c.family;
    json fns = json::array();
    for (Eigen::Index i = 0; i < f.functions.cols(); ++i) {
      const auto ci = static_cast<std::size_t>(i);
      fns.push_back({{"source_set", detail::labels_of(g, f.source_sets[ci])},
                     {"neighborhood", detail::labels_of(g, f.neighborhoods[ci])},
                     {"w_value", f.w_values[ci]},
                     {"rayleigh", detail::number(c.rayleigh_values[ci])},
                     {"values", detail::vertex_map(g, f.functions.col(i))}});
    }
    j["test_functions"] = {{"radius", f.radius}, {"all_w_values", f.all_w_values}, {"functions", fns}};
  }
  if (c.audit) j["audit"] = audit_to_json(*c.audit);
  j["max_rayleigh"] = detail::number(c.max_rayleigh);
  j["rhs"] = detail::number(c.rhs);
  j["rayleigh_bound_holds"] = c.rayleigh_bound_holds;
  j["per_function_holds"] = c.per_function_holds;
  return j;
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "instance,size,k,sigma_k,boundary_size,max_degree,ratio_k2,ratio_k,in_certified_range\n";
  for (const auto& r : rows) {
    out << r.instance << ',' << r.size << ',' << r.k << ',' << format_double(r.sigma_k) << ',' << r.boundary_size
        << ',' << r.max_degree << ',' << format_double(r.ratio) << ',' << format_double(r.ratio_linear) << ','
        << (r.in_certified_range ? 1 : 0) << '\n';
  }
}

inline json scaling_to_json(const std::vector<ScalingRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"instance", r.instance},
                   {"size", r.size},
                   {"k", r.k},
                   {"sigma_k", r.sigma_k},
                   {"boundary_size", r.boundary_size},
                   {"max_degree", r.max_degree},
                   {"ratio_k2", r.ratio},
                   {"ratio_k", r.ratio_linear},
                   {"in_certified_range", r.in_certified_range}});
  return arr;
}

}  // namespace steklov
