#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "secres/catalog.hpp"
#include "secres/pipeline.hpp"

using namespace secres;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

SystemEntry ups() { return Catalog::load(SECRES_CATALOG_FILE).find("ups_And"); }

ChainOptions quick(int order) {
  ChainOptions o;
  o.order = order;
  o.policy = {1, 8, 8};
  o.birkhoff_order = 6;
  return o;
}

std::string csv(const SecularTrajectory& tr) {
  std::ostringstream os;
  write_csv(os, tr);
  return os.str();
}

}  // namespace

TEST_CASE("trajectory utilities") {
  std::vector<double> t, x;
  for (int i = 0; i <= 4000; ++i) {
    t.push_back(0.01 * i);
    x.push_back(0.3 + std::sin(2 * kPi * t.back() / 7.0 + 0.4));
  }
  CHECK(crossing_period(t, x) == Approx(7.0).epsilon(1e-4));
  CHECK(std::isnan(crossing_period({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0})));

  const auto u = unwrap({3.0, -3.0, -2.9});
  CHECK(u[1] == Approx(-3.0 + 2 * kPi));
  CHECK(u[2] - u[1] == Approx(0.1));

  const auto m = running_mean(t, std::vector<double>(t.size(), 2.5), 3.0);
  for (double v : m) CHECK(v == Approx(2.5));
  CHECK(linear_slope(t, t) == Approx(1.0));
  const auto r = resample({0.0, 1.0}, {1.0, 3.0}, {-1.0, 0.25, 2.0});
  CHECK(r == std::vector<double>{1.0, 1.5, 3.0});

  const auto g = uniform_grid(10.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 10.0);
}

TEST_CASE("trajectory csv") {
  SecularTrajectory tr;
  tr.source = TrajectorySource::analytic_order2;
  tr.push(0.0, 0.1, 0.2, 0.5);
  tr.push(1.5, 0.11, 0.19, 0.6);
  std::istringstream in(csv(tr));
  std::string line;
  std::getline(in, line);
  CHECK(line == "t_yr,e1,e2,dpomega_rad,source");
  std::getline(in, line);
  CHECK(line.find("0.10000000000000001") != std::string::npos);
  CHECK(line.substr(line.rfind(',') + 1) == to_string(TrajectorySource::analytic_order2));
}

TEST_CASE("secular table scaling and file format") {
  const double G = kGravity;
  CHECK(appendix_scale(2, G) == 1.0);
  CHECK(appendix_scale(0, G) == Approx(G));
  CHECK(appendix_scale(4, G) == Approx(1.0 / G));

  std::vector<SecularCoefficient> rows = {{{0, 0, 0, 0}, -3.8, -3.9}, {{2, 0, 0, 0}, 1e-3, 1.1e-3}};
  std::stringstream ss;
  write_secular_table(ss, "toy", rows);
  const auto back = read_secular_table(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[1].exps == rows[1].exps);
  CHECK(back[1].order2 == rows[1].order2);
  std::istringstream bad("1 0 0\n");
  CHECK_THROWS_AS(read_secular_table(bad), std::runtime_error);
}

TEST_CASE("secular table rows") {
  SecularTableOptions opt;
  opt.policy = {1, 6, 8};
  opt.max_degree = 4;
  const auto rows = secular_table(ups(), opt);
  REQUIRE(!rows.empty());
  CHECK(rows.front().exps == std::array<int, 4>{0, 0, 0, 0});
  for (const auto& r : rows) {
    const int d = r.exps[0] + r.exps[1] + r.exps[2] + r.exps[3];
    CHECK(d % 2 == 0);
    CHECK(d <= 4);
  }
}

TEST_CASE("order one ignores the mean anomalies") {
  const std::vector<double> grid = uniform_grid(3000.0, 31);
  SystemEntry a = ups(), b = ups();
  b.planet[0].M += 2.0;
  const AnalyticRun ra = run_analytic(a, quick(1), grid);
  const AnalyticRun rb = run_analytic(b, quick(1), grid);
  REQUIRE(ra.ok);
  REQUIRE(rb.ok);
  CHECK(csv(ra.propagation.trajectory) == csv(rb.propagation.trajectory));
}

TEST_CASE("period table") {
  const auto rows = period_table(ups(), {{4, 2}, {6, 4}}, quick(2));
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(std::isfinite(r.period));
    CHECK(r.period > 1000.0);
    CHECK(r.period == Approx(2 * kPi / std::abs(r.phi_dot[0] - r.phi_dot[1])));
  }
  CHECK(rows[0].K_F == 4);
  CHECK(rows[1].K_S == 4);
}

TEST_CASE("analytic runs report failures instead of throwing") {
  SystemEntry s = ups();
  s.planet[1].a = s.planet[0].a * 1.01;
  const AnalyticRun r = run_analytic(s, quick(1), uniform_grid(100.0, 3));
  CHECK(!r.ok);
  CHECK(!r.error.empty());
}
