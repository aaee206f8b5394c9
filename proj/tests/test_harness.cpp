#include "bimmdf/harness.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace bimmdf;

namespace {

std::string csv_of(const SweepResult& r) {
  std::ostringstream os;
  write_sweep_csv(os, r);
  return os.str();
}

SweepPlan small_rho_plan() {
  auto plan = scenarios::rho_sweep("small", EdgeDistribution::poisson(), 40, 30, 8, 6, scenarios::p1(),
                                   {0.5, 2.0, 8.0});
  plan.replicates = 6;
  plan.master_seed = 11;
  return plan;
}

}  // namespace

TEST(Catalog, Sim3b) {
  const auto p = scenario_plan("sim3b");
  EXPECT_EQ(p.dist, EdgeDistribution::binomial(7));
  EXPECT_EQ(p.axis, SweepAxis::DistParam);
  EXPECT_EQ(p.rho, 2.0);
  EXPECT_EQ(p.n_r, 200);
  EXPECT_EQ(p.n_c, 300);
  ASSERT_EQ(p.grid.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(p.grid[i].first, 2.0 * static_cast<double>(i + 1));
  EXPECT_EQ(spec_at(p, p.grid[3]).dist.trials, 8);
}

TEST(Catalog, Setup5) {
  const auto p = scenario_plan("setup5");
  EXPECT_EQ(p.dist.kind, DistributionKind::Exponential);
  EXPECT_EQ(p.n_r, 10);
  EXPECT_EQ(p.pure_r, 4);
  EXPECT_EQ(p.n_c, 8);
  EXPECT_EQ(p.pure_c, 3);
  ASSERT_EQ(p.grid.size(), 1u);
  EXPECT_EQ(p.grid[0].first, 10.0);
  EXPECT_EQ(p.P, scenarios::pa());
}

TEST(Catalog, UnknownScenario) {
  EXPECT_THROW(scenario_plan("sim9x"), DomainError);
}

TEST(Catalog, EveryScenarioHasAValidFirstPoint) {
  const auto names = scenario_names();
  EXPECT_EQ(names.size(), 35u);
  for (const auto& name : names) {
    const auto plan = scenario_plan(name);
    EXPECT_EQ(plan.scenario, name);
    EXPECT_FALSE(plan.grid.empty());
    std::size_t valid = 0;
    for (const auto& pt : plan.grid) {
      try {
        spec_at(plan, pt);
        ++valid;
      } catch (const Error&) {
      }
    }
    EXPECT_GT(valid, 0u) << name;
  }
}

TEST(Catalog, Sim1aGridIsExactDecimals) {
  const auto p = scenario_plan("sim1a");
  ASSERT_EQ(p.grid.size(), 10u);
  EXPECT_EQ(p.grid[0].first, 0.1);
  EXPECT_EQ(p.grid[2].first, 0.3);
  EXPECT_EQ(p.grid[9].first, 1.0);
}

TEST(Catalog, Sim1bSkipsTheDiagonal) {
  const auto p = scenario_plan("sim1b");
  ASSERT_EQ(p.grid.size(), 900u);
  std::size_t valid = 0;
  for (const auto& pt : p.grid) {
    try {
      spec_at(p, pt);
      ++valid;
    } catch (const Error&) {
      EXPECT_EQ(pt.first, pt.second);
    }
  }
  EXPECT_EQ(valid, 870u);
}

TEST(Catalog, Sim8aDropsRhoOne) {
  const auto p = scenario_plan("sim8a");
  EXPECT_THROW(spec_at(p, {1.0, 0.0}), InvalidSpecError);
  EXPECT_NO_THROW(spec_at(p, {0.9, 0.0}));
}

TEST(RunReplicates, ZeroVarianceNormalIsExact) {
  auto plan = scenario_plan("sim4a");
  plan.dist = EdgeDistribution::normal(0.0);
  const auto s = run_replicates(spec_at(plan, plan.grid[0]), 3, 5);
  EXPECT_LE(s.mean, 1e-8);
}

TEST(RunReplicates, DeterministicAndThreadIndependent) {
  const auto plan = small_rho_plan();
  const auto spec = spec_at(plan, plan.grid[0]);
  const auto a = run_replicates(spec, 8, 42, 1);
  const auto b = run_replicates(spec, 8, 42, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std, b.std);
  EXPECT_NE(run_replicates(spec, 8, 43, 1).mean, a.mean);
}

TEST(RunReplicates, SingleReplicateHasZeroStd) {
  const auto plan = small_rho_plan();
  EXPECT_EQ(run_replicates(spec_at(plan, plan.grid[1]), 1, 1).std, 0.0);
}

TEST(RunReplicates, AnnotatesFailuresWithReplicateIndex) {
  auto plan = small_rho_plan();
  auto spec = spec_at(plan, plan.grid[0]);
  spec.Pi_c = MembershipMatrix(Matrix::Constant(1, 2, 0.5));
  EXPECT_THROW(run_replicates(spec, 2, 1), InvalidSpecError);
  try {
    detail::replicate_error(spec, 1, 3);
    FAIL();
  } catch (const InvalidSpecError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("replicate 3: ", 0), 0u) << e.what();
  }
}

TEST(RunReplicates, Sim1aImprovesWithRho) {
  const auto plan = scenario_plan("sim1a");
  const auto low = run_replicates(spec_at(plan, {0.1, 0}), 50, 3);
  const auto high = run_replicates(spec_at(plan, {1.0, 0}), 50, 3);
  EXPECT_LT(high.mean, low.mean);
}

TEST(RunSweep, RecordsEveryPointWithSeeds) {
  const auto plan = small_rho_plan();
  const auto r = run_sweep(plan, 1);
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(r.evaluated(), 3);
  for (std::size_t g = 0; g < 3; ++g) {
    EXPECT_EQ(r.records[g].seed, point_seed(11, g));
    EXPECT_EQ(r.records[g].replicates, 6);
    const auto direct = run_replicates(spec_at(plan, plan.grid[g]), 6, point_seed(11, g));
    EXPECT_EQ(r.records[g].mean_error, direct.mean);
    EXPECT_EQ(r.records[g].std_error, direct.std);
  }
}

TEST(RunSweep, CsvIsThreadIndependent) {
  const auto plan = small_rho_plan();
  EXPECT_EQ(csv_of(run_sweep(plan, 1)), csv_of(run_sweep(plan, 3)));
}

TEST(RunSweep, SkippedPointsAndCsvLayout) {
  auto plan = scenarios::alpha_sweep("grid", EdgeDistribution::bernoulli(), 40, 8, 8, {2, 6});
  plan.replicates = 2;
  const auto r = run_sweep(plan, 2);
  ASSERT_EQ(r.records.size(), 4u);
  EXPECT_EQ(r.evaluated(), 2);
  EXPECT_TRUE(r.find({2, 2})->skipped);
  EXPECT_FALSE(r.find({2, 6})->skipped);
  EXPECT_FALSE(r.find({2, 6})->skip_reason.size());
  EXPECT_FALSE(r.find({6, 6})->skip_reason.empty());

  std::istringstream lines(csv_of(r));
  std::string header, first, second;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_EQ(header, "scenario,alpha_in,alpha_out,mean_error,std_error,replicates,skipped,seed");
  EXPECT_EQ(first, "grid,2,2,,,0,1," + std::to_string(point_seed(0, 0)));
  EXPECT_EQ(second.rfind("grid,2,6,", 0), 0u);

  std::ostringstream heat;
  write_heatmap_csv(heat, r);
  std::istringstream hl(heat.str());
  std::getline(hl, header);
  std::getline(hl, first);
  EXPECT_EQ(header, "alpha_in\\alpha_out,2,6");
  EXPECT_EQ(first.rfind("2,,", 0), 0u);
}

TEST(RunSweep, Errors) {
  auto plan = small_rho_plan();
  plan.grid.clear();
  EXPECT_THROW(run_sweep(plan, 1), DomainError);
  plan = small_rho_plan();
  plan.grid = {{-1.0, 0.0}};
  EXPECT_THROW(run_sweep(plan, 1), InvalidSpecError);
  plan = small_rho_plan();
  EXPECT_THROW(write_heatmap_csv(std::cout, run_sweep(plan, 1)), DomainError);
}

TEST(PlanJson, RoundTripAndOverrides) {
  for (const auto& name : {"sim1b", "sim3b", "setup8"}) {
    const auto plan = scenario_plan(name);
    const auto back = plan_from_json(io::json::parse(plan_to_json(plan).dump()));
    EXPECT_EQ(back.scenario, plan.scenario);
    EXPECT_EQ(back.dist, plan.dist);
    EXPECT_EQ(back.axis, plan.axis);
    EXPECT_EQ(back.grid, plan.grid);
    EXPECT_EQ(back.n_r, plan.n_r);
    EXPECT_EQ(back.pure_c, plan.pure_c);
    if (plan.axis != SweepAxis::AlphaGrid) {
      EXPECT_EQ(back.P, plan.P);
    }
  }
  const auto custom = plan_from_json(io::json::parse(
      R"({"scenario": "sim1a", "grid": [0.5], "replicates": 3, "master_seed": 9})"));
  EXPECT_EQ(custom.n_r, 200);
  EXPECT_EQ(custom.grid.size(), 1u);
  EXPECT_EQ(custom.replicates, 3);
  EXPECT_EQ(custom.master_seed, 9u);
  const auto alpha = plan_from_json(io::json::parse(
      R"({"scenario": "mine", "distribution": {"name": "poisson"}, "n": 60, "pure_r": 10,
          "pure_c": 10, "alpha_values": [1, 2, 3]})"));
  EXPECT_EQ(alpha.axis, SweepAxis::AlphaGrid);
  EXPECT_EQ(alpha.grid.size(), 9u);
  EXPECT_THROW(plan_from_json(io::json::parse(R"({"scenario": "mine", "grid": [1]})")), ParseError);
  EXPECT_THROW(plan_from_json(io::json::parse(R"({"scenario": "sim1a", "grid": []})")), ParseError);
}
