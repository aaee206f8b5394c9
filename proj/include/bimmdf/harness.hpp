#pragma once

// Replicated simulation runs and parameter sweeps.

#include "bimmdf/core.hpp"
#include "bimmdf/disp.hpp"
#include "bimmdf/distribution.hpp"
#include "bimmdf/io.hpp"
#include "bimmdf/metrics.hpp"
#include "bimmdf/model.hpp"
#include "bimmdf/random.hpp"
#include "bimmdf/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace bimmdf {

enum class SweepAxis { Rho, AlphaGrid, DistParam };

inline std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Rho: return "rho";
    case SweepAxis::AlphaGrid: return "alpha_grid";
    case SweepAxis::DistParam: return "dist_param";
  }
  return "?";
}

inline SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "rho") return SweepAxis::Rho;
  if (name == "alpha_grid") return SweepAxis::AlphaGrid;
  if (name == "dist_param") return SweepAxis::DistParam;
  throw ParseError("unknown sweep axis '" + std::string(name) + "'");
}

/// One grid coordinate. `first` holds rho, the distribution parameter, or
/// alpha_in; `second` holds alpha_out on alpha grids.
struct GridPoint {
  double first = 0.0;
  double second = 0.0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct SweepPlan {
  std::string scenario = "custom";
  EdgeDistribution dist;
  Index n_r = 0;
  Index n_c = 0;
  Index pure_r = 0;  // pure nodes per row community
  Index pure_c = 0;
  Matrix P;          // ignored on alpha grids
  double rho = 1.0;  // ignored on rho and alpha axes
  SweepAxis axis = SweepAxis::Rho;
  std::vector<GridPoint> grid;
  Index replicates = 50;
  std::uint64_t master_seed = 0;

  Index K() const { return axis == SweepAxis::AlphaGrid ? 2 : P.rows(); }
};

/// Name of the swept distribution parameter ("m", "sigma2", "beta").
inline std::string_view dist_param_name(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Binomial: return "m";
    case DistributionKind::Normal: return "sigma2";
    case DistributionKind::Logistic: return "beta";
    default: return {};
  }
}

/// Row-major (alpha_in outer, alpha_out inner) product of `values` with itself.
inline std::vector<GridPoint> alpha_grid(const std::vector<double>& values) {
  std::vector<GridPoint> out;
  out.reserve(values.size() * values.size());
  for (double a : values)
    for (double b : values) out.push_back({a, b});
  return out;
}

/// {first, first+step, ..., last} / scale, each value correctly rounded.
inline std::vector<double> decimal_range(int first, int last, int step, double scale = 1.0) {
  std::vector<double> out;
  for (int v = first; v <= last; v += step) out.push_back(static_cast<double>(v) / scale);
  return out;
}

inline std::vector<GridPoint> axis_grid(const std::vector<double>& values) {
  std::vector<GridPoint> out;
  for (double v : values) out.push_back({v, 0.0});
  return out;
}

/// The model at one grid point. Throws when the point is not a valid model.
inline ModelSpec spec_at(const SweepPlan& plan, const GridPoint& pt) {
  ModelSpec spec;
  spec.dist = plan.dist;
  switch (plan.axis) {
    case SweepAxis::Rho:
      spec.P = BlockMatrix::with_inferred_class(plan.P);
      spec.rho = pt.first;
      break;
    case SweepAxis::DistParam:
      spec.P = BlockMatrix::with_inferred_class(plan.P);
      spec.rho = plan.rho;
      switch (plan.dist.kind) {
        case DistributionKind::Binomial:
          if (std::floor(pt.first) != pt.first) throw DomainError("m must be an integer");
          spec.dist.trials = static_cast<int>(pt.first);
          break;
        case DistributionKind::Normal: spec.dist.variance = pt.first; break;
        case DistributionKind::Logistic: spec.dist.scale = pt.first; break;
        default:
          throw DomainError(std::string(to_string(plan.dist.kind)) + " has no sweepable parameter");
      }
      break;
    case SweepAxis::AlphaGrid: {
      if (plan.n_r != plan.n_c) throw DomainError("alpha grids need n_r == n_c");
      auto two = make_standard_two_block(plan.n_r, pt.first, pt.second);
      spec.P = std::move(two.P);
      spec.rho = two.rho;
      break;
    }
  }
  const Index k = spec.P.order();
  spec.Pi_r = make_planted_memberships(plan.n_r, k, plan.pure_r);
  spec.Pi_c = make_planted_memberships(plan.n_c, k, plan.pure_c);
  const auto report = validate_model(spec);
  if (!report.ok()) throw InvalidSpecError(report.summary());
  return spec;
}

struct ReplicateSummary {
  double mean = 0.0;
  double std = 0.0;  // n-1 denominator; 0 for a single replicate
};

namespace detail {

template <class E>
[[noreturn]] void rethrow_as(const E& e, const std::string& prefix) {
  throw E(prefix + e.what());
}

[[noreturn]] inline void rethrow_annotated(Index replicate) {
  const std::string prefix = "replicate " + std::to_string(replicate) + ": ";
  try {
    throw;
  } catch (const IllPosedFitError& e) { rethrow_as(e, prefix);
  } catch (const RankDeficientError& e) { rethrow_as(e, prefix);
  } catch (const ConvergenceError& e) { rethrow_as(e, prefix);
  } catch (const ShapeError& e) { rethrow_as(e, prefix);
  } catch (const DomainError& e) { rethrow_as(e, prefix);
  } catch (const InvalidSpecError& e) { rethrow_as(e, prefix);
  } catch (const Error& e) { rethrow_as(e, prefix);
  }
}

// Replicate r (1-based) of one model: sample, fit, score.
inline double replicate_error(const ModelSpec& spec, std::uint64_t seed, Index r) {
  try {
    const Matrix omega = build_omega(spec).omega;
    const RandomSource source{rng::combine(seed, static_cast<std::uint64_t>(r)), 0};
    const Matrix a = sample_adjacency(omega, spec.dist, source);
    const FitResult fit = disp(a, spec.K());
    return error_rate(fit.Pi_r_hat, spec.Pi_r, fit.Pi_c_hat, spec.Pi_c);
  } catch (const Error&) {
    rethrow_annotated(r);
  }
}

inline ReplicateSummary summarize(const double* errors, Index count) {
  ReplicateSummary s;
  double sum = 0.0;
  for (Index r = 0; r < count; ++r) sum += errors[r];
  s.mean = sum / static_cast<double>(count);
  if (count > 1) {
    double ss = 0.0;
    for (Index r = 0; r < count; ++r) ss += (errors[r] - s.mean) * (errors[r] - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(count - 1));
  }
  return s;
}

// Runs task(0..count-1) on `threads` workers. The exception of the lowest
// failing task index is rethrown after all workers finish.
template <class Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(count);
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

}  // namespace detail

inline unsigned default_thread_count() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Mean and sample standard deviation of the error rate over `replicates`
/// independent draws. Replicate r samples with seed combine(seed, r).
inline ReplicateSummary run_replicates(const ModelSpec& spec, Index replicates, std::uint64_t seed,
                                       unsigned threads = 1) {
  if (replicates < 1) throw DomainError("run_replicates: replicates must be >= 1");
  const auto report = validate_model(spec);
  if (!report.ok()) throw InvalidSpecError("run_replicates: " + report.summary());
  std::vector<double> errors(static_cast<std::size_t>(replicates));
  detail::parallel_for(errors.size(), threads, [&](std::size_t i) {
    errors[i] = detail::replicate_error(spec, seed, static_cast<Index>(i) + 1);
  });
  return detail::summarize(errors.data(), replicates);
}

struct SweepRecord {
  GridPoint point;
  double mean_error = 0.0;
  double std_error = 0.0;
  Index replicates = 0;
  bool skipped = false;
  std::string skip_reason;
  std::uint64_t seed = 0;
};

struct SweepResult {
  std::string scenario;
  SweepAxis axis = SweepAxis::Rho;
  EdgeDistribution dist;
  Index n_r = 0, n_c = 0, K = 0;
  std::uint64_t master_seed = 0;
  std::vector<SweepRecord> records;  // grid order, skipped points included

  Index evaluated() const {
    return static_cast<Index>(std::count_if(records.begin(), records.end(),
                                            [](const SweepRecord& r) { return !r.skipped; }));
  }
  const SweepRecord* find(const GridPoint& p) const {
    for (const auto& r : records)
      if (r.point == p) return &r;
    return nullptr;
  }
};

inline std::uint64_t point_seed(std::uint64_t master_seed, std::size_t grid_index) {
  return rng::combine(master_seed, static_cast<std::uint64_t>(grid_index));
}

/// Runs every (grid point, replicate) pair. Results do not depend on the
/// thread count.
inline SweepResult run_sweep(const SweepPlan& plan, unsigned threads = default_thread_count()) {
  if (plan.grid.empty()) throw DomainError("run_sweep: grid is empty");
  if (plan.replicates < 1) throw DomainError("run_sweep: replicates must be >= 1");

  SweepResult result;
  result.scenario = plan.scenario;
  result.axis = plan.axis;
  result.dist = plan.dist;
  result.n_r = plan.n_r;
  result.n_c = plan.n_c;
  result.K = plan.K();
  result.master_seed = plan.master_seed;

  std::vector<std::optional<ModelSpec>> specs(plan.grid.size());
  std::vector<std::size_t> active;
  for (std::size_t g = 0; g < plan.grid.size(); ++g) {
    SweepRecord rec;
    rec.point = plan.grid[g];
    rec.seed = point_seed(plan.master_seed, g);
    try {
      specs[g] = spec_at(plan, plan.grid[g]);
      rec.replicates = plan.replicates;
      active.push_back(g);
    } catch (const Error& e) {
      rec.skipped = true;
      rec.skip_reason = e.what();
    }
    result.records.push_back(std::move(rec));
  }
  if (active.empty()) {
    throw InvalidSpecError("run_sweep: every grid point is invalid (first: " +
                           result.records.front().skip_reason + ")");
  }

  const std::size_t reps = static_cast<std::size_t>(plan.replicates);
  std::vector<double> errors(active.size() * reps);
  detail::parallel_for(errors.size(), threads, [&](std::size_t t) {
    const std::size_t g = active[t / reps];
    const Index r = static_cast<Index>(t % reps) + 1;
    try {
      errors[t] = detail::replicate_error(*specs[g], result.records[g].seed, r);
    } catch (const Error& e) {
      throw Error("grid point " + std::to_string(g + 1) + ", " + e.what());
    }
  });
  for (std::size_t a = 0; a < active.size(); ++a) {
    const auto s = detail::summarize(errors.data() + a * reps, plan.replicates);
    auto& rec = result.records[active[a]];
    rec.mean_error = s.mean;
    rec.std_error = s.std;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Scenario catalog
// ---------------------------------------------------------------------------

namespace scenarios {

inline Matrix p1() { return (Matrix(2, 2) << 1.0, 0.2, 0.3, 0.8).finished(); }
inline Matrix p2() { return (Matrix(2, 2) << 1.0, -0.2, 0.3, -0.8).finished(); }
inline Matrix pa() { return (Matrix(2, 2) << 1.0, 0.2, 0.1, 0.9).finished(); }
inline Matrix pb() { return (Matrix(2, 2) << 1.0, -0.2, 0.1, -0.9).finished(); }

inline SweepPlan base(std::string name, EdgeDistribution dist, Index n_r, Index n_c, Index pure_r,
                      Index pure_c, Matrix p) {
  SweepPlan plan;
  plan.scenario = std::move(name);
  plan.dist = dist;
  plan.n_r = n_r;
  plan.n_c = n_c;
  plan.pure_r = pure_r;
  plan.pure_c = pure_c;
  plan.P = std::move(p);
  return plan;
}

inline SweepPlan rho_sweep(std::string name, EdgeDistribution dist, Index n_r, Index n_c,
                           Index pure_r, Index pure_c, Matrix p, std::vector<double> rhos) {
  auto plan = base(std::move(name), dist, n_r, n_c, pure_r, pure_c, std::move(p));
  plan.axis = SweepAxis::Rho;
  plan.grid = axis_grid(rhos);
  return plan;
}

inline SweepPlan param_sweep(std::string name, EdgeDistribution dist, Index n_r, Index n_c,
                             Index pure_r, Index pure_c, Matrix p, double rho,
                             std::vector<double> values) {
  auto plan = base(std::move(name), dist, n_r, n_c, pure_r, pure_c, std::move(p));
  plan.axis = SweepAxis::DistParam;
  plan.rho = rho;
  plan.grid = axis_grid(values);
  return plan;
}

inline SweepPlan alpha_sweep(std::string name, EdgeDistribution dist, Index n, Index pure_r,
                             Index pure_c, std::vector<double> alphas) {
  auto plan = base(std::move(name), dist, n, n, pure_r, pure_c, Matrix());
  plan.axis = SweepAxis::AlphaGrid;
  plan.grid = alpha_grid(alphas);
  return plan;
}

inline SweepPlan setup(std::string name, EdgeDistribution dist, Index n_r, Index pure_r, Index n_c,
                       Index pure_c, double rho, Matrix p) {
  return rho_sweep(std::move(name), dist, n_r, n_c, pure_r, pure_c, std::move(p), {rho});
}

using D = EdgeDistribution;

inline const std::map<std::string, SweepPlan (*)(), std::less<>>& catalog() {
  static const std::map<std::string, SweepPlan (*)(), std::less<>> table = {
      {"sim1a", [] { return rho_sweep("sim1a", D::bernoulli(), 200, 300, 50, 100, p1(), decimal_range(1, 10, 1, 10)); }},
      {"sim1b", [] { return alpha_sweep("sim1b", D::bernoulli(), 300, 50, 100, decimal_range(1, 30, 1)); }},
      {"sim1c", [] { return alpha_sweep("sim1c", D::bernoulli(), 300, 50, 100, decimal_range(50, 500, 25, 10)); }},
      {"sim2a", [] { return rho_sweep("sim2a", D::poisson(), 200, 300, 50, 100, p1(), decimal_range(2, 40, 2, 10)); }},
      {"sim2b", [] { return alpha_sweep("sim2b", D::poisson(), 300, 50, 100, decimal_range(10, 100, 5)); }},
      {"sim2c", [] { return alpha_sweep("sim2c", D::poisson(), 300, 50, 100, decimal_range(200, 2000, 100)); }},
      {"sim3a", [] { return rho_sweep("sim3a", D::binomial(7), 200, 300, 50, 100, p1(), decimal_range(2, 20, 2, 10)); }},
      {"sim3b", [] { return param_sweep("sim3b", D::binomial(7), 200, 300, 50, 100, p1(), 2.0, decimal_range(2, 20, 2)); }},
      {"sim3c", [] { return alpha_sweep("sim3c", D::binomial(7), 300, 50, 100, decimal_range(1, 20, 1)); }},
      {"sim3d", [] { return alpha_sweep("sim3d", D::binomial(7), 300, 50, 100, decimal_range(15, 300, 15)); }},
      {"sim4a", [] { return rho_sweep("sim4a", D::normal(1.0), 200, 300, 50, 100, p2(), decimal_range(2, 20, 2, 10)); }},
      {"sim4b", [] { return param_sweep("sim4b", D::normal(1.0), 200, 300, 50, 100, p2(), 2.0, decimal_range(5, 50, 5, 10)); }},
      {"sim4c", [] { return alpha_sweep("sim4c", D::normal(1.0), 300, 50, 100, decimal_range(-50, 50, 5)); }},
      {"sim4d", [] { return alpha_sweep("sim4d", D::normal(1.0), 300, 50, 100, decimal_range(-500, 500, 50)); }},
      {"sim5a", [] { return rho_sweep("sim5a", D::exponential(), 200, 300, 50, 100, p1(), decimal_range(1, 100, 1)); }},
      {"sim5b", [] { return alpha_sweep("sim5b", D::exponential(), 300, 50, 100, decimal_range(10, 100, 5)); }},
      {"sim5c", [] { return alpha_sweep("sim5c", D::exponential(), 300, 50, 100, decimal_range(1000, 10000, 500)); }},
      {"sim6a", [] { return rho_sweep("sim6a", D::uniform(), 30, 50, 10, 20, p1(), decimal_range(1, 100, 1)); }},
      {"sim6b", [] { return alpha_sweep("sim6b", D::uniform(), 50, 10, 20, decimal_range(10, 100, 5)); }},
      {"sim6c", [] { return alpha_sweep("sim6c", D::uniform(), 50, 10, 20, decimal_range(1000, 10000, 500)); }},
      {"sim7a", [] { return rho_sweep("sim7a", D::logistic(1.0), 30, 50, 10, 20, p2(), decimal_range(2, 40, 2, 10)); }},
      {"sim7b", [] { return param_sweep("sim7b", D::logistic(1.0), 30, 50, 10, 20, p2(), 0.5, decimal_range(10, 40, 5, 100)); }},
      {"sim7c", [] { return alpha_sweep("sim7c", D::logistic(1.0), 50, 10, 20, decimal_range(-50, 50, 5)); }},
      {"sim7d", [] { return alpha_sweep("sim7d", D::logistic(1.0), 50, 10, 20, decimal_range(-500, 500, 50)); }},
      {"sim8a", [] { return rho_sweep("sim8a", D::signed_edges(), 100, 150, 30, 60, p2(), decimal_range(1, 10, 1, 10)); }},
      {"sim8b", [] { return alpha_sweep("sim8b", D::signed_edges(), 300, 100, 120, decimal_range(-30, 30, 2)); }},
      {"sim8c", [] { return alpha_sweep("sim8c", D::signed_edges(), 300, 100, 120, decimal_range(-50, 50, 5)); }},
      {"setup1", [] { return setup("setup1", D::bernoulli(), 16, 7, 14, 6, 0.9, pa()); }},
      {"setup2", [] { return setup("setup2", D::poisson(), 16, 7, 14, 6, 60.0, pa()); }},
      {"setup3", [] { return setup("setup3", D::binomial(7), 16, 7, 14, 6, 6.0, pa()); }},
      {"setup4", [] { return setup("setup4", D::normal(1.0), 10, 4, 8, 3, 40.0, pb()); }},
      {"setup5", [] { return setup("setup5", D::exponential(), 10, 4, 8, 3, 10.0, pa()); }},
      {"setup6", [] { return setup("setup6", D::uniform(), 10, 4, 8, 3, 10.0, pa()); }},
      {"setup7", [] { return setup("setup7", D::logistic(1.0), 10, 4, 8, 3, 40.0, pb()); }},
      {"setup8", [] { return setup("setup8", D::signed_edges(), 32, 14, 28, 12, 0.9, pb()); }},
  };
  return table;
}

}  // namespace scenarios

inline std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& [name, make] : scenarios::catalog()) out.push_back(name);
  return out;
}

/// Catalogued simulation (sim1a..sim8c) or single-point set-up (setup1..setup8).
inline SweepPlan scenario_plan(std::string_view name) {
  const auto& table = scenarios::catalog();
  const auto it = table.find(name);
  if (it == table.end()) throw DomainError("unknown scenario '" + std::string(name) + "'");
  return it->second();
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline std::vector<std::string> axis_columns(const SweepResult& r) {
  switch (r.axis) {
    case SweepAxis::Rho: return {"rho"};
    case SweepAxis::AlphaGrid: return {"alpha_in", "alpha_out"};
    case SweepAxis::DistParam: return {std::string(dist_param_name(r.dist.kind))};
  }
  return {};
}

/// One line per grid point; skipped points have empty error fields.
inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "scenario";
  for (const auto& c : axis_columns(r)) os << ',' << c;
  os << ",mean_error,std_error,replicates,skipped,seed\n";
  for (const auto& rec : r.records) {
    os << r.scenario << ',' << io::format_double(rec.point.first);
    if (r.axis == SweepAxis::AlphaGrid) os << ',' << io::format_double(rec.point.second);
    if (rec.skipped) {
      os << ",,,0,1,";
    } else {
      os << ',' << io::format_double(rec.mean_error) << ',' << io::format_double(rec.std_error)
         << ',' << rec.replicates << ",0,";
    }
    os << rec.seed << '\n';
  }
}

/// Mean-error matrix of an alpha grid: alpha_in rows ascending, alpha_out
/// columns ascending, empty cells for skipped points.
inline void write_heatmap_csv(std::ostream& os, const SweepResult& r) {
  if (r.axis != SweepAxis::AlphaGrid) throw DomainError("heatmap export needs an alpha grid");
  std::vector<double> ins, outs;
  for (const auto& rec : r.records) {
    ins.push_back(rec.point.first);
    outs.push_back(rec.point.second);
  }
  for (auto* v : {&ins, &outs}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  os << "alpha_in\\alpha_out";
  for (double b : outs) os << ',' << io::format_double(b);
  os << '\n';
  for (double a : ins) {
    os << io::format_double(a);
    for (double b : outs) {
      os << ',';
      const auto* rec = r.find({a, b});
      if (rec && !rec->skipped) os << io::format_double(rec->mean_error);
    }
    os << '\n';
  }
}

/// JSON form of a plan; grids are listed explicitly.
inline io::json plan_to_json(const SweepPlan& plan) {
  io::json grid = io::json::array();
  for (const auto& p : plan.grid) {
    if (plan.axis == SweepAxis::AlphaGrid) {
      grid.push_back(io::json::array({p.first, p.second}));
    } else {
      grid.push_back(p.first);
    }
  }
  io::json j{{"scenario", plan.scenario},
             {"distribution", io::distribution_to_json(plan.dist)},
             {"n_r", plan.n_r},
             {"n_c", plan.n_c},
             {"pure_r", plan.pure_r},
             {"pure_c", plan.pure_c},
             {"axis", std::string(to_string(plan.axis))},
             {"grid", std::move(grid)},
             {"replicates", plan.replicates},
             {"master_seed", plan.master_seed}};
  if (plan.axis != SweepAxis::AlphaGrid) j["P"] = io::matrix_to_json(plan.P);
  if (plan.axis == SweepAxis::DistParam) j["rho"] = plan.rho;
  return j;
}

/// Reads a plan. A "scenario" naming a catalog entry supplies defaults that
/// the remaining keys override; "alpha_values" expands to a square grid.
inline SweepPlan plan_from_json(const io::json& j) {
  try {
    SweepPlan plan;
    if (j.contains("scenario")) {
      const auto name = j.at("scenario").get<std::string>();
      const auto& table = scenarios::catalog();
      if (table.find(name) != table.end()) {
        plan = scenario_plan(name);
      } else {
        plan.scenario = name;
      }
    }
    if (j.contains("distribution")) plan.dist = io::distribution_from_json(j.at("distribution"));
    if (j.contains("n_r")) plan.n_r = j.at("n_r").get<Index>();
    if (j.contains("n_c")) plan.n_c = j.at("n_c").get<Index>();
    if (j.contains("n")) plan.n_r = plan.n_c = j.at("n").get<Index>();
    if (j.contains("pure_r")) plan.pure_r = j.at("pure_r").get<Index>();
    if (j.contains("pure_c")) plan.pure_c = j.at("pure_c").get<Index>();
    if (j.contains("P")) plan.P = io::matrix_from_json(j.at("P"), "P");
    if (j.contains("rho")) plan.rho = j.at("rho").get<double>();
    if (j.contains("axis")) plan.axis = parse_sweep_axis(j.at("axis").get<std::string>());
    if (j.contains("alpha_values")) {
      plan.axis = SweepAxis::AlphaGrid;
      plan.grid = alpha_grid(j.at("alpha_values").get<std::vector<double>>());
    }
    if (j.contains("grid")) {
      plan.grid.clear();
      for (const auto& g : j.at("grid")) {
        if (g.is_array()) {
          if (g.size() != 2) throw ParseError("sweep plan: grid pairs need 2 values");
          plan.grid.push_back({g.at(0).get<double>(), g.at(1).get<double>()});
        } else {
          plan.grid.push_back({g.get<double>(), 0.0});
        }
      }
    }
    if (j.contains("replicates")) plan.replicates = j.at("replicates").get<Index>();
    if (j.contains("master_seed")) plan.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (plan.grid.empty()) throw ParseError("sweep plan: grid is empty");
    if (plan.replicates < 1) throw ParseError("sweep plan: replicates must be >= 1");
    if (plan.axis != SweepAxis::AlphaGrid && plan.P.size() == 0)
      throw ParseError("sweep plan: P is required unless sweeping an alpha grid");
    return plan;
  } catch (const io::json::exception& e) {
    throw ParseError(std::string("sweep plan: ") + e.what());
  }
}

}  // namespace bimmdf
