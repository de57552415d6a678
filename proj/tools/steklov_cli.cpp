// Command-line front end for the steklov library.
//
//   steklov spectrum  --gen path:3
//   steklov flow      --gen star:4 -r 2 --gap
//   steklov spreading --gen grid:5:outer -r 2
//   steklov decompose --gen grid:8:outer --kappa 8 --alpha 8 --samples 10000 --seed 1
//   steklov certify   --gen grid:5:outer -k 2 --delta 0.5 --seed 7
//   steklov scaling   --family grid --sizes 4,5,6 --k 2,3 --format csv
//
// Exit status: 0 success / verdict true, 2 verdict false, 1 error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "steklov/steklov.hpp"

namespace {

using steklov::json;

struct RunConfig {
  std::string command;
  std::string gen;
  std::string input;
  std::string output;
  std::string format = "json";
  bool timing = false;

  std::size_t k = 2;
  std::size_t r = 2;
  double delta = 0.5;
  double kappa = 0.0;
  double alpha = 0.0;
  std::size_t samples = 1000;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_len;
  bool gap = false;
  double gap_tol = 1e-4;
  std::string method = "auto";
  std::size_t retries = 64;
  std::string weight = "unit";

  std::string family = "grid";
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> k_values;

  json to_json() const {
    json j;
    j["command"] = command;
    if (!gen.empty()) j["gen"] = gen;
    if (!input.empty()) j["input"] = input;
    j["format"] = format;
    if (command == "flow" || command == "spreading") {
      j["r"] = r;
      j["max_len"] = max_len ? json(*max_len) : json(nullptr);
      j["method"] = method;
    }
    if (command == "flow") {
      j["gap"] = gap;
      j["gap_tol"] = gap_tol;
    }
    if (command == "decompose") {
      j["kappa"] = kappa;
      j["alpha"] = alpha;
      j["delta"] = delta;
      j["samples"] = samples;
      j["weight"] = weight;
      if (weight == "spreading") j["r"] = r;
    }
    if (command == "certify") {
      j["k"] = k;
      j["delta"] = delta;
      j["samples"] = samples;
      j["retries"] = retries;
    }
    if (command == "scaling") {
      j["family"] = family;
      j["sizes"] = sizes;
      j["k"] = k_values;
      j["delta"] = delta;
    }
    j["seed"] = seed ? json(*seed) : json(nullptr);
    return j;
  }
};

steklov::BoundaryGraph load_graph(const RunConfig& cfg) {
  if (!cfg.gen.empty()) return steklov::generate(cfg.gen);
  std::ifstream in(cfg.input);
  if (!in) throw steklov::Error(steklov::ErrorCode::InvalidInput, "cannot open " + cfg.input);
  return steklov::read_graph(in);
}

void require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw steklov::Error(steklov::ErrorCode::InvalidInput, cfg.command + " is randomized: --seed is required");
}

struct Outcome {
  json report;
  std::string text;  // CSV payload when format == csv
  int status = 0;
};

Outcome run_spectrum(const RunConfig& cfg) {
  const auto g = load_graph(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = steklov::steklov_spectrum(g);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome out;
  out.report["graph"] = steklov::graph_summary(g);
  out.report["spectrum"] = steklov::spectrum_to_json(s);
  if (cfg.timing) out.report["wall_seconds"] = secs;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "index,eigenvalue,residual\n";
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
      os << i + 1 << ',' << steklov::format_double(s.eigenvalues(i)) << ',' << steklov::format_double(s.residuals(i)) << '\n';
    out.text = os.str();
  }
  return out;
}

steklov::PathSet boundary_paths(const steklov::BoundaryGraph& g, const RunConfig& cfg) {
  return steklov::enumerate_paths(g, cfg.max_len, g.boundary());
}

Outcome run_flow(const RunConfig& cfg) {
  const auto g = load_graph(cfg);
  Outcome out;
  out.report["graph"] = steklov::graph_summary(g);
  const auto paths = boundary_paths(g, cfg);
  out.report["path_count"] = paths.size();
  if (cfg.gap) {
    const auto dg = steklov::duality_gap(g, cfg.r, paths);
    const bool ok = dg.gap <= cfg.gap_tol * std::max(1.0, dg.dual);
    out.report["duality"] = {{"primal", dg.primal}, {"dual", dg.dual}, {"gap", dg.gap}, {"within_tolerance", ok}};
    out.report["flow"] = steklov::flow_to_json(g, dg.dual_solution.flow);
    out.report["distribution"] = steklov::distribution_to_json(g, dg.dual_solution.mu);
    out.report["sqrt_congestion"] = dg.dual_solution.value;
    out.status = ok ? 0 : 2;
  } else {
    const auto sol = steklov::min_congestion_flow(g, cfg.r, paths);
    out.report["flow"] = steklov::flow_to_json(g, sol.flow);
    out.report["distribution"] = steklov::distribution_to_json(g, sol.mu);
    out.report["sqrt_congestion"] = sol.value;
    out.report["dual_objective"] = sol.dual_objective;
    out.report["congestion"] = steklov::congestion(sol.flow, g.vertex_count());
    out.report["intersection_number"] = steklov::intersection_number(sol.flow);
  }
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "path,value\n";
    for (const auto& e : out.report["flow"]) {
      std::string p;
      for (const auto& v : e["path"]) p += (p.empty() ? "" : " ") + std::to_string(v.get<std::uint64_t>());
      os << p << ',' << steklov::format_double(e["value"].get<double>()) << '\n';
    }
    out.text = os.str();
  }
  return out;
}

Outcome run_spreading(const RunConfig& cfg) {
  const auto g = load_graph(cfg);
  const bool explicit_route =
      cfg.method == "ipm" ||
      (cfg.method == "auto" && (cfg.max_len || g.vertex_count() <= steklov::kFullEnumerationMaxVertices));
  const auto sw = explicit_route ? steklov::max_spreading_weight(g, cfg.r, boundary_paths(g, cfg))
                                 : steklov::max_spreading_weight(g, cfg.r);
  Outcome out;
  out.report["graph"] = steklov::graph_summary(g);
  out.report["route"] = explicit_route ? "interior-point" : "min-norm-point";
  out.report["epsilon"] = sw.epsilon;
  out.report["program_value"] = sw.program_value;
  json argmin = json::array();
  for (auto v : sw.argmin) argmin.push_back(g.label(v));
  out.report["argmin"] = argmin;
  json w = json::object();
  for (steklov::Vertex v = 0; v < g.vertex_count(); ++v) w[std::to_string(g.label(v))] = sw.weight[v];
  out.report["weight"] = w;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "vertex,weight\n";
    for (steklov::Vertex v = 0; v < g.vertex_count(); ++v) os << g.label(v) << ',' << steklov::format_double(sw.weight[v]) << '\n';
    out.text = os.str();
  }
  return out;
}

Outcome run_decompose(const RunConfig& cfg) {
  require_seed(cfg);
  const auto g = load_graph(cfg);
  if (!(cfg.kappa > 0.0)) throw steklov::Error(steklov::ErrorCode::InvalidInput, "--kappa must be positive");
  steklov::VertexWeight w = steklov::VertexWeight::constant(g.vertex_count(), 1.0);
  if (cfg.weight == "spreading") w = steklov::max_spreading_weight(g, cfg.r).weight;
  const auto m = steklov::semi_metric(g, w);
  Outcome out;
  out.report["graph"] = steklov::graph_summary(g);
  const auto part = steklov::sample_partition(m, cfg.kappa, *cfg.seed);
  out.report["partition"] = steklov::partition_to_json(g, part);
  out.report["calibration"] =
      steklov::calibration_to_json(steklov::calibrate_alpha(m, g.boundary(), cfg.kappa, cfg.delta, cfg.samples, *cfg.seed));
  if (cfg.alpha >= 1.0)
    out.report["padding"] = steklov::padding_to_json(
        g, steklov::estimate_padding(m, g.boundary(), cfg.kappa, cfg.alpha, cfg.samples, *cfg.seed, cfg.delta));
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "vertex,block\n";
    for (steklov::Vertex v = 0; v < g.vertex_count(); ++v) os << g.label(v) << ',' << part.assignment[v] << '\n';
    out.text = os.str();
  }
  return out;
}

Outcome run_certify(const RunConfig& cfg) {
  require_seed(cfg);
  const auto g = load_graph(cfg);
  steklov::CertifyOptions opt;
  opt.seed = *cfg.seed;
  opt.retries = cfg.retries;
  opt.calibration_samples = cfg.samples;
  const auto cert = steklov::certify_bound(g, cfg.k, cfg.delta, opt);
  Outcome out;
  out.report["graph"] = steklov::graph_summary(g);
  out.report["certificate"] = steklov::certificate_to_json(g, cert);
  out.status = cert.verdict() ? 0 : 2;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "k,delta,sigma_k,max_rayleigh,rhs,certified,verdict,fallback_bound\n"
       << cert.k << ',' << cert.delta << ',' << steklov::format_double(cert.sigma_k) << ','
       << steklov::format_double(cert.max_rayleigh) << ',' << steklov::format_double(cert.rhs) << ','
       << cert.certified << ',' << cert.verdict() << ',' << cert.fallback_bound << '\n';
    out.text = os.str();
  }
  return out;
}

Outcome run_scaling(const RunConfig& cfg) {
  if (cfg.family == "tree") require_seed(cfg);
  if (cfg.sizes.empty() || cfg.k_values.empty())
    throw steklov::Error(steklov::ErrorCode::InvalidInput, "--sizes and --k are required");
  unsigned workers = 1;
  if (const char* env = std::getenv("STEKLOV_WORKERS")) workers = static_cast<unsigned>(std::max(1, std::atoi(env)));
  const auto rows = steklov::scaling_experiment(cfg.family, cfg.sizes, cfg.k_values, cfg.delta, cfg.seed.value_or(0), workers);
  Outcome out;
  out.report["rows"] = steklov::scaling_to_json(rows);
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.ratio);
  out.report["max_ratio_k2"] = worst;
  if (cfg.format == "csv") {
    std::ostringstream os;
    steklov::write_scaling_csv(os, rows);
    out.text = os.str();
  }
  return out;
}

void add_source(CLI::App* sub, RunConfig& cfg) {
  auto* gen = sub->add_option("--gen", cfg.gen, "generator spec, e.g. grid:5:outer");
  auto* in = sub->add_option("--input", cfg.input, "graph file")->check(CLI::ExistingFile);
  gen->excludes(in);
  in->excludes(gen);
}

void add_output(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("-o,--output", cfg.output, "report path (default: stdout)");
  sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steklov spectra of graphs with boundary and constructive eigenvalue certificates"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* spectrum = app.add_subcommand("spectrum", "Steklov eigenvalues via the Dirichlet-to-Neumann matrix");
  add_source(spectrum, cfg);
  add_output(spectrum, cfg);
  spectrum->add_flag("--timing", cfg.timing, "include wall time (makes reports non-reproducible)");

  auto* flow = app.add_subcommand("flow", "minimum-congestion probability flow");
  add_source(flow, cfg);
  add_output(flow, cfg);
  flow->add_option("-r", cfg.r, "subset size")->check(CLI::PositiveNumber);
  flow->add_option("--max-len", cfg.max_len, "cap on interior vertices per path");
  flow->add_flag("--gap", cfg.gap, "solve the spreading program too and report the duality gap");
  flow->add_option("--gap-tol", cfg.gap_tol, "relative duality gap tolerance")->check(CLI::PositiveNumber);

  auto* spreading = app.add_subcommand("spreading", "optimal spreading vertex weight");
  add_source(spreading, cfg);
  add_output(spreading, cfg);
  spreading->add_option("-r", cfg.r, "subset size")->check(CLI::PositiveNumber);
  spreading->add_option("--max-len", cfg.max_len, "cap on interior vertices per path");
  spreading->add_option("--method", cfg.method, "auto, ipm or minnorm")->check(CLI::IsMember({"auto", "ipm", "minnorm"}));

  auto* decompose = app.add_subcommand("decompose", "random partitions and padding statistics");
  add_source(decompose, cfg);
  add_output(decompose, cfg);
  decompose->add_option("--kappa", cfg.kappa, "block diameter bound")->required();
  decompose->add_option("--alpha", cfg.alpha, "padding modulus to estimate (>= 1)");
  decompose->add_option("--delta", cfg.delta, "padding probability target")->check(CLI::Range(0.0, 1.0));
  decompose->add_option("--samples", cfg.samples, "Monte-Carlo samples")->check(CLI::PositiveNumber);
  decompose->add_option("--seed", cfg.seed, "random seed");
  decompose->add_option("--weight", cfg.weight, "unit or spreading")->check(CLI::IsMember({"unit", "spreading"}));
  decompose->add_option("-r", cfg.r, "subset size for --weight spreading");

  auto* certify = app.add_subcommand("certify", "build the test-function certificate for sigma_k");
  add_source(certify, cfg);
  add_output(certify, cfg);
  certify->add_option("-k", cfg.k, "eigenvalue index")->required();
  certify->add_option("--delta", cfg.delta, "padding probability")->check(CLI::Range(0.0, 1.0));
  certify->add_option("--seed", cfg.seed, "random seed");
  certify->add_option("--retries", cfg.retries, "partition resampling cap");
  certify->add_option("--samples", cfg.samples, "calibration samples")->check(CLI::PositiveNumber);

  auto* scaling = app.add_subcommand("scaling", "sigma_k |B| / (D k^2) across a generator family");
  add_output(scaling, cfg);
  scaling->add_option("--family", cfg.family, "grid, star, tree, path, cycle or torus-grid");
  scaling->add_option("--sizes", cfg.sizes, "instance sizes")->delimiter(',');
  scaling->add_option("--k", cfg.k_values, "eigenvalue indices")->delimiter(',');
  scaling->add_option("--delta", cfg.delta, "delta used to flag k in [2, delta|B|/4]");
  scaling->add_option("--seed", cfg.seed, "random seed (random families)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; every other parse problem is a usage error.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (cfg.command != "scaling" && cfg.gen.empty() && cfg.input.empty()) {
    std::cerr << "error [config]: one of --gen or --input is required\n";
    return 1;
  }

  Outcome outcome;
  try {
    if (cfg.command == "spectrum") outcome = run_spectrum(cfg);
    else if (cfg.command == "flow") outcome = run_flow(cfg);
    else if (cfg.command == "spreading") outcome = run_spreading(cfg);
    else if (cfg.command == "decompose") outcome = run_decompose(cfg);
    else if (cfg.command == "certify") outcome = run_certify(cfg);
    else outcome = run_scaling(cfg);
  } catch (const steklov::Error& e) {
    std::cerr << "error [" << cfg.command << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error [" << cfg.command << "]: " << e.what() << '\n';
    return 1;
  }

  std::string payload;
  if (cfg.format == "csv") {
    payload = "# config " + cfg.to_json().dump() + "\n" + outcome.text;
  } else {
    json doc;
    doc["config"] = cfg.to_json();
    for (auto it = outcome.report.begin(); it != outcome.report.end(); ++it) doc[it.key()] = it.value();
    payload = doc.dump(2) + "\n";
  }
  if (cfg.output.empty()) {
    std::cout << payload;
  } else {
    std::ofstream out(cfg.output);
    if (!out) {
      std::cerr << "error [output]: cannot write " << cfg.output << '\n';
      return 1;
    }
    out << payload;
  }
  return outcome.status;
}
