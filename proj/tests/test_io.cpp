#include "bimmdf/io.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace bimmdf;

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(-0.0), "0");
  EXPECT_EQ(io::format_double(2.0), "2");
  EXPECT_EQ(io::format_double(1e-300), "1e-300");
  gen::Gen g(61);
  for (int i = 0; i < 1000; ++i) {
    const double v = g.uniform(-1e6, 1e6) * std::pow(10.0, static_cast<double>(g.integer(-20, 20)));
    EXPECT_EQ(*io::parse_double(io::format_double(v)), v);
  }
}

TEST(ParseDouble, AcceptsAndRejects) {
  EXPECT_EQ(io::parse_double(" +2.5 "), 2.5);
  EXPECT_EQ(io::parse_double("-1e3"), -1000.0);
  EXPECT_FALSE(io::parse_double(""));
  EXPECT_FALSE(io::parse_double("1.5x"));
  EXPECT_FALSE(io::parse_double("abc"));
}

TEST(Csv, RoundTripIsExact) {
  gen::Gen g(62);
  Matrix m(7, 4);
  for (Index i = 0; i < m.size(); ++i) m(i) = g.uniform(-10, 10);
  std::stringstream ss;
  io::write_csv(ss, m);
  EXPECT_EQ(io::read_csv(ss), m);
}

TEST(Csv, ReportsLineNumbers) {
  std::istringstream bad("1,2\n3,x\n");
  try {
    io::read_csv(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream ragged("1,2\n# note\n3\n");
  try {
    io::read_csv(ragged);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(EdgeTsv, RoundTripWithDimensions) {
  Matrix m = Matrix::Zero(4, 5);
  m(0, 1) = 2.5;
  m(3, 0) = -1;
  std::stringstream ss;
  io::write_edge_tsv(ss, m);
  EXPECT_EQ(ss.str(), "1\t2\t2.5\n4\t1\t-1\n");
  std::istringstream in(ss.str());
  EXPECT_EQ(io::read_edge_tsv(in, 4, 5), m);
  std::istringstream again(ss.str());
  EXPECT_EQ(io::read_edge_tsv(again).cols(), 2);
  std::istringstream over(ss.str());
  EXPECT_THROW(io::read_edge_tsv(over, 3, 5), ParseError);
  std::istringstream zero("0\t1\t1\n");
  EXPECT_THROW(io::read_edge_tsv(zero), ParseError);
}

TEST(Json, SpecRoundTrip) {
  gen::Gen g(63);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = gen::spec(g);
    const auto back = io::spec_from_json(io::json::parse(io::spec_to_json(s).dump()));
    EXPECT_EQ(back.P.entries(), s.P.entries());
    EXPECT_EQ(back.P.sign_class(), s.P.sign_class());
    EXPECT_EQ(back.rho, s.rho);
    EXPECT_EQ(back.Pi_r.weights(), s.Pi_r.weights());
    EXPECT_EQ(back.Pi_c.weights(), s.Pi_c.weights());
    EXPECT_EQ(back.dist, s.dist);
  }
}

TEST(Json, SpecErrors) {
  const auto good = io::json::parse(R"({
    "rho": 0.5, "P": [[1, 0.2], [0.3, 0.8]],
    "Pi_r": [[1, 0], [0, 1], [0.5, 0.5]], "Pi_c": [[1, 0], [0, 1]],
    "distribution": {"name": "bernoulli"}})");
  const auto spec = io::spec_from_json(good);
  EXPECT_EQ(spec.P.sign_class(), SignClass::StrictlyPositive);
  auto no_rho = good;
  no_rho.erase("rho");
  EXPECT_THROW(io::spec_from_json(no_rho), ParseError);
  auto bad_rho = good;
  bad_rho["rho"] = 2.0;
  EXPECT_THROW(io::spec_from_json(bad_rho), InvalidSpecError);
  auto wrong_n = good;
  wrong_n["n_r"] = 4;
  EXPECT_THROW(io::spec_from_json(wrong_n), ParseError);
  auto bad_dist = good;
  bad_dist["distribution"] = {{"name", "normal"}};
  EXPECT_THROW(io::spec_from_json(bad_dist), ParseError);
}

TEST(Json, DistributionRoundTrip) {
  for (auto kind : kAllDistributionKinds) {
    gen::Gen g(64);
    const auto d = gen::distribution(g, kind);
    EXPECT_EQ(io::distribution_from_json(io::distribution_to_json(d)), d);
  }
}
