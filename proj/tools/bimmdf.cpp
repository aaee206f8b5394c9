// Command-line front end: sample, fit, eval, estimate-k, sweep, ingest.

#include "bimmdf/bimmdf.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using bimmdf::Index;
using bimmdf::Matrix;
using bimmdf::io::json;

Matrix load_matrix(const std::string& path) {
  if (path.size() >= 4 && (path.ends_with(".tsv") || path.ends_with(".txt"))) {
    auto f = bimmdf::io::open_in(path);
    return bimmdf::io::read_edge_tsv(f);
  }
  return bimmdf::io::load_csv(path);
}

json load_json(const std::string& path) {
  auto f = bimmdf::io::open_in(path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw bimmdf::ParseError(path + ": " + e.what());
  }
}

json vector_json(const bimmdf::Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json indices_json(const bimmdf::PureIndexSet& idx) {
  json out = json::array();
  for (Index i : idx.indices) out.push_back(i + 1);
  return out;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    auto f = bimmdf::io::open_out(out_path);
    f << j.dump(2) << '\n';
  }
}

bimmdf::EigengapMethod parse_method(const std::string& s) {
  if (s == "difference") return bimmdf::EigengapMethod::Difference;
  if (s == "ratio") return bimmdf::EigengapMethod::Ratio;
  throw bimmdf::ParseError("unknown eigengap method '" + s + "'");
}

struct SampleArgs {
  std::string spec, out, omega_out;
  std::uint64_t seed = 0, stream = 0;
  bool tsv = false;
};

int run_sample(const SampleArgs& a) {
  const auto spec = bimmdf::io::spec_from_json(load_json(a.spec));
  const auto omega = bimmdf::build_omega(spec);
  const Matrix adj = bimmdf::sample_adjacency(omega, spec.dist, bimmdf::RandomSource{a.seed, a.stream});
  auto f = bimmdf::io::open_out(a.out);
  if (a.tsv) {
    bimmdf::io::write_edge_tsv(f, adj);
  } else {
    bimmdf::io::write_csv(f, adj);
  }
  if (!a.omega_out.empty()) bimmdf::io::save_csv(a.omega_out, omega.omega);
  return 0;
}

struct FitArgs {
  std::string input, prefix, k = "auto", method = "difference", json_out;
  Index k_max = 10;
};

int run_fit(const FitArgs& a) {
  const Matrix adj = load_matrix(a.input);
  Index k = 0;
  if (a.k == "auto") {
    const Index limit = std::min<Index>(a.k_max, std::min(adj.rows(), adj.cols()));
    k = bimmdf::estimate_k_eigengap(bimmdf::singular_values(adj, limit), parse_method(a.method));
  } else {
    k = std::stol(a.k);
  }
  const auto fit = bimmdf::disp(adj, k);
  if (!a.prefix.empty()) {
    bimmdf::io::save_csv(a.prefix + "Pi_r.csv", fit.Pi_r_hat.weights());
    bimmdf::io::save_csv(a.prefix + "Pi_c.csv", fit.Pi_c_hat.weights());
  }
  json j{{"K", k},
         {"n_r", adj.rows()},
         {"n_c", adj.cols()},
         {"singular_values", vector_json(fit.singular_values)},
         {"pure_rows", indices_json(fit.pure_rows)},
         {"pure_cols", indices_json(fit.pure_cols)},
         {"condition_r", fit.condition_r},
         {"condition_c", fit.condition_c}};
  if (k >= 2) {
    j["eta_r"] = bimmdf::mixed_proportion(fit.Pi_r_hat);
    j["eta_c"] = bimmdf::mixed_proportion(fit.Pi_c_hat);
  }
  if (adj.rows() == adj.cols()) j["hamm_rc"] = bimmdf::hamm_rc(fit.Pi_r_hat, fit.Pi_c_hat);
  emit(j, a.json_out);
  return 0;
}

struct EvalArgs {
  std::string est_r, truth_r, est_c, truth_c;
};

int run_eval(const EvalArgs& a) {
  using bimmdf::MembershipMatrix;
  const MembershipMatrix est_r(bimmdf::io::load_csv(a.est_r)), truth_r(bimmdf::io::load_csv(a.truth_r));
  const MembershipMatrix est_c(bimmdf::io::load_csv(a.est_c)), truth_c(bimmdf::io::load_csv(a.truth_c));
  json j{{"error_rate", bimmdf::error_rate(est_r, truth_r, est_c, truth_c)}};
  if (est_r.communities() >= 2) {
    j["eta_r"] = bimmdf::mixed_proportion(est_r);
    j["eta_c"] = bimmdf::mixed_proportion(est_c);
  }
  if (est_r.rows() == est_c.rows()) j["hamm_rc"] = bimmdf::hamm_rc(est_r, est_c);
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct EstimateKArgs {
  std::string input;
  Index k_max = 10;
};

// Singular values as CSV, then the estimate under each eigengap rule.
int run_estimate_k(const EstimateKArgs& a) {
  const Matrix adj = load_matrix(a.input);
  const Index limit = std::min<Index>(a.k_max, std::min(adj.rows(), adj.cols()));
  const auto sv = bimmdf::singular_values(adj, limit);
  std::cout << "index,singular_value\n";
  for (std::size_t i = 0; i < sv.size(); ++i) {
    std::cout << i + 1 << ',' << bimmdf::io::format_double(sv[i]) << '\n';
  }
  std::cout << "\nmethod,k\n";
  for (auto m : {bimmdf::EigengapMethod::Difference, bimmdf::EigengapMethod::Ratio}) {
    std::cout << bimmdf::to_string(m) << ',' << bimmdf::estimate_k_eigengap(sv, m) << '\n';
  }
  return 0;
}

struct SweepArgs {
  std::string scenario, config, out, heatmap;
  std::optional<std::uint64_t> seed;
  std::optional<Index> replicates;
  unsigned threads = bimmdf::default_thread_count();
  bool list = false, dump_plan = false;
};

int run_sweep_cmd(const SweepArgs& a) {
  if (a.list) {
    for (const auto& name : bimmdf::scenario_names()) std::cout << name << '\n';
    return 0;
  }
  bimmdf::SweepPlan plan;
  if (!a.config.empty()) {
    plan = bimmdf::plan_from_json(load_json(a.config));
  } else if (!a.scenario.empty()) {
    plan = bimmdf::scenario_plan(a.scenario);
  } else {
    throw bimmdf::ParseError("sweep: give --scenario or --config");
  }
  if (a.seed) plan.master_seed = *a.seed;
  if (a.replicates) plan.replicates = *a.replicates;
  if (a.dump_plan) {
    std::cout << bimmdf::plan_to_json(plan).dump(2) << '\n';
    return 0;
  }
  const auto result = bimmdf::run_sweep(plan, a.threads);
  if (a.out.empty()) {
    bimmdf::write_sweep_csv(std::cout, result);
  } else {
    auto f = bimmdf::io::open_out(a.out);
    bimmdf::write_sweep_csv(f, result);
  }
  if (!a.heatmap.empty()) {
    auto f = bimmdf::io::open_out(a.heatmap);
    bimmdf::write_heatmap_csv(f, result);
  }
  return 0;
}

struct IngestArgs {
  std::string input, format, out, summary, ids_out;
  double weight_default = 1.0;
  bool sum_duplicates = false, keep_isolated = false, numeric_ids = false, bipartite = false;
};

int run_ingest(const IngestArgs& a) {
  bimmdf::LoadOptions opt;
  opt.format = a.format.empty() ? bimmdf::format_for_path(a.input)
               : a.format == "csv" ? bimmdf::EdgeFormat::Csv
                                   : bimmdf::EdgeFormat::Tsv;
  opt.weight_default = a.weight_default;
  opt.order = a.numeric_ids ? bimmdf::IdOrder::Numeric : bimmdf::IdOrder::FirstAppearance;
  auto edges = bimmdf::load_edge_list(a.input, opt);
  if (!a.keep_isolated) edges = bimmdf::drop_isolated(edges);
  const auto net = bimmdf::to_dense(edges, !a.bipartite,
                                    a.sum_duplicates ? bimmdf::DuplicatePolicy::Sum
                                                     : bimmdf::DuplicatePolicy::Error);
  if (!a.out.empty()) bimmdf::io::save_csv(a.out, net.adjacency);
  if (!a.ids_out.empty()) {
    auto f = bimmdf::io::open_out(a.ids_out);
    f << "index,side,id\n";
    for (std::size_t i = 0; i < net.row_ids.size(); ++i) f << i + 1 << ",row," << net.row_ids[i] << '\n';
    for (std::size_t i = 0; i < net.col_ids.size(); ++i) f << i + 1 << ",col," << net.col_ids[i] << '\n';
  }
  emit(bimmdf::summary_to_json(bimmdf::summarize_network(net.adjacency)), a.summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-membership modelling of weighted bipartite networks"};
  app.require_subcommand(1);

  SampleArgs sample;
  auto* sub_sample = app.add_subcommand("sample", "Draw an adjacency matrix from a model spec");
  sub_sample->add_option("--spec", sample.spec, "Model spec JSON")->required();
  sub_sample->add_option("--seed", sample.seed, "Random seed");
  sub_sample->add_option("--stream", sample.stream, "Substream index");
  sub_sample->add_option("--out", sample.out, "Output matrix")->required();
  sub_sample->add_flag("--tsv", sample.tsv, "Write a 1-indexed row/col/weight edge list");
  sub_sample->add_option("--omega-out", sample.omega_out, "Also write the expectation matrix");

  FitArgs fit;
  auto* sub_fit = app.add_subcommand("fit", "Estimate row and column memberships");
  sub_fit->add_option("input", fit.input, "Adjacency matrix (.csv, or .tsv edge list)")->required();
  sub_fit->add_option("-k,--k", fit.k, "Number of communities, or 'auto'");
  sub_fit->add_option("--k-max", fit.k_max, "Largest K considered with --k auto");
  sub_fit->add_option("--method", fit.method, "Eigengap rule: difference | ratio");
  sub_fit->add_option("--prefix", fit.prefix, "Write <prefix>Pi_r.csv and <prefix>Pi_c.csv");
  sub_fit->add_option("--json", fit.json_out, "Write the fit summary here instead of stdout");

  EvalArgs ev;
  auto* sub_eval = app.add_subcommand("eval", "Score estimated memberships against truth");
  sub_eval->add_option("--estimate-r", ev.est_r)->required();
  sub_eval->add_option("--truth-r", ev.truth_r)->required();
  sub_eval->add_option("--estimate-c", ev.est_c)->required();
  sub_eval->add_option("--truth-c", ev.truth_c)->required();

  EstimateKArgs ek;
  auto* sub_k = app.add_subcommand("estimate-k", "Pick K from the singular-value eigengap");
  sub_k->add_option("input", ek.input, "Adjacency matrix")->required();
  sub_k->add_option("--k-max", ek.k_max, "Number of singular values inspected");

  SweepArgs sw;
  auto* sub_sweep = app.add_subcommand("sweep", "Run a replicated simulation sweep");
  sub_sweep->add_option("--scenario", sw.scenario, "Catalogued scenario, e.g. sim1b or setup5");
  sub_sweep->add_option("--config", sw.config, "Sweep plan JSON");
  sub_sweep->add_option("--seed", sw.seed, "Master seed");
  sub_sweep->add_option("--replicates", sw.replicates, "Replicates per grid point");
  sub_sweep->add_option("--threads", sw.threads, "Worker threads");
  sub_sweep->add_option("--out", sw.out, "Result CSV (stdout if omitted)");
  sub_sweep->add_option("--heatmap", sw.heatmap, "Alpha-grid heatmap CSV");
  sub_sweep->add_flag("--list", sw.list, "List catalogued scenarios");
  sub_sweep->add_flag("--dump-plan", sw.dump_plan, "Print the plan as JSON and exit");

  IngestArgs ing;
  auto* sub_ingest = app.add_subcommand("ingest", "Edge list to dense adjacency matrix");
  sub_ingest->add_option("input", ing.input, "Edge list file")->required();
  sub_ingest->add_option("--format", ing.format, "tsv | csv (default: by extension)");
  sub_ingest->add_option("--weight-default", ing.weight_default, "Weight for 2-column lines");
  sub_ingest->add_flag("--sum-duplicates", ing.sum_duplicates, "Sum repeated edges instead of failing");
  sub_ingest->add_flag("--keep-isolated", ing.keep_isolated, "Keep nodes without edges");
  sub_ingest->add_flag("--numeric-ids", ing.numeric_ids, "Ids are integers 1..max");
  sub_ingest->add_flag("--bipartite", ing.bipartite, "Separate row (source) and column (target) nodes");
  sub_ingest->add_option("--out", ing.out, "Dense adjacency CSV");
  sub_ingest->add_option("--ids", ing.ids_out, "Row/column id table CSV");
  sub_ingest->add_option("--summary", ing.summary, "Summary JSON (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sub_sample) return run_sample(sample);
    if (*sub_fit) return run_fit(fit);
    if (*sub_eval) return run_eval(ev);
    if (*sub_k) return run_estimate_k(ek);
    if (*sub_sweep) return run_sweep_cmd(sw);
    if (*sub_ingest) return run_ingest(ing);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
