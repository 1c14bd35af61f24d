#include <doctest.h>

#include "shadowlp/experiments.hpp"
#include "shadowlp/instance_io.hpp"

#include <cmath>
#include <sstream>

using namespace shadowlp;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool message_has(const std::function<void()>& f, const std::string& needle) {
  try {
    f();
  } catch (const ParseError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

ExperimentConfig small_pivot_config(int trials) {
  return parse_config(R"({"n": [12], "d": [3], "sigma": [0.1], "trials": )" + std::to_string(trials) +
                      R"(, "seed": 5, "timing": false})");
}

}  // namespace

TEST_CASE("parse_instance round trip and diagnostics") {
  const std::string text = R"({"d": 2, "n": 3, "A": [[1, 0], [0, 1], [-1, -1]], "b": [1, 1, 1], "z": [1, 1]})";
  const LP lp = parse_instance(text);
  CHECK(lp.n() == 3);
  CHECK(lp.A(2, 1) == -1);
  const LP again = parse_instance(instance_to_json(lp));
  CHECK(again.A == lp.A);
  CHECK(again.b == lp.b);
  CHECK(again.z == lp.z);

  CHECK(message_has([] { parse_instance("{\"d\": 2,\n \"n\": "); }, "line 2"));
  CHECK(message_has([] { parse_instance(R"({"n": 3, "A": [], "b": [], "z": []})"); }, "'d'"));
  CHECK(message_has([] { parse_instance(R"({"d": 2, "n": 3, "A": [[1, 0], [0, 1]], "b": [1, 1, 1], "z": [1, 1]})"); },
                    "'A'"));
  CHECK(message_has([] { parse_instance(R"({"d": 2, "n": 3, "A": [[1, 0], [0, 1], [1, 1]], "b": [1, 1], "z": [1, 1]})"); },
                    "'b'"));
  CHECK_THROWS_AS(parse_instance(R"({"d": 2, "n": 2, "A": [[1, 0], [0, 1]], "b": [1, 1], "z": [1, 1]})"), ParseError);
}

TEST_CASE("format_report") {
  const LP lp = parse_instance(R"({"d": 2, "n": 3, "A": [[1, 0], [0, 1], [-1, -1]], "b": [1, 1, 1], "z": [1, 1]})");
  RandomStream rng(1);
  const std::string report = format_report(lp, solve_lp(lp, rng));
  CHECK(report.find("status: optimal") != std::string::npos);
  CHECK(report.find("objective: 2") != std::string::npos);
}

TEST_CASE("parse_config") {
  const ExperimentConfig c = parse_config(
      R"({"n": [10, 20], "d": [3], "sigma": [0.1, 1], "trials": 4, "seed": 9, "threads": 2, "centers": "ball"})");
  CHECK(c.n == std::vector<Index>{10, 20});
  CHECK(c.sigma == std::vector<double>{0.1, 1.0});
  CHECK(c.trials == 4);
  CHECK(c.seed == 9);
  CHECK(c.threads == 2);
  CHECK(c.centers == CenterFamily::Ball);
  CHECK(c.timing);
  CHECK_FALSE(c.fixture);

  CHECK(message_has([] { parse_config(R"({"d": [3], "sigma": [1], "trials": 1, "seed": 1})"); }, "'n'"));
  CHECK(message_has([] { parse_config(R"({"n": [10], "d": [3], "sigma": [1], "trials": 1, "seed": 1, "centers": "cube"})"); },
                    "cube"));
  CHECK(message_has([] { parse_config("{\n\"n\": [10],\n\"d\": [3,\n"); }, "line"));
  CHECK_THROWS(parse_config(R"({"n": [3], "d": [3], "sigma": [1], "trials": 1, "seed": 1})"));
  CHECK_THROWS(parse_config(R"({"n": [10], "d": [3], "sigma": [-1], "trials": 1, "seed": 1})"));
  CHECK_THROWS(parse_config(R"({"n": [10], "d": [3], "sigma": [1], "trials": 0, "seed": 1})"));

  const ExperimentConfig f = parse_config(R"({"trials": 1, "seed": 1, "fixture": "square"})");
  REQUIRE(f.fixture);
  CHECK(f.fixture->points.cols() == 4);
  const ExperimentConfig g = parse_config(
      R"({"trials": 1, "seed": 1, "fixture": {"points": [[1,1],[-1,1],[-1,-1],[1,-1],[0.5,0]], "plane": [[1,0],[0,1]]}})");
  REQUIRE(g.fixture);
  CHECK(g.fixture->points.cols() == 5);
  CHECK(message_has([] { parse_config(R"({"trials": 1, "seed": 1, "fixture": "cube"})"); }, "cube"));
}

TEST_CASE("seeds depend on cell parameters only") {
  CHECK(cell_seed(1, 10, 3, 0.1) == cell_seed(1, 10, 3, 0.1));
  CHECK(cell_seed(1, 10, 3, 0.1) != cell_seed(1, 10, 3, 0.2));
  CHECK(cell_seed(1, 10, 3, 0.1) != cell_seed(1, 11, 3, 0.1));
  CHECK(cell_seed(1, 10, 3, 0.1) != cell_seed(2, 10, 3, 0.1));
  CHECK(trial_seed(7, 0) != trial_seed(7, 1));

  ExperimentConfig a = small_pivot_config(2);
  ExperimentConfig b = a;
  b.n = {30, 12};
  const auto ra = run_pivot_experiment(a);
  const auto rb = run_pivot_experiment(b);
  REQUIRE(rb.size() == 4);
  for (int t = 0; t < 2; ++t) {
    CHECK(ra[static_cast<std::size_t>(t)].seed == rb[static_cast<std::size_t>(2 + t)].seed);
    CHECK(ra[static_cast<std::size_t>(t)].pivots_phase2 == rb[static_cast<std::size_t>(2 + t)].pivots_phase2);
  }
}

TEST_CASE("make_spec families") {
  RandomStream rng(2);
  const SmoothedSpec o = make_spec(CenterFamily::Origin, 20, 3, 0.5, rng);
  CHECK(o.centers_A.isZero());
  CHECK(o.centers_b.isOnes());
  const SmoothedSpec s = make_spec(CenterFamily::Sphere, 20, 3, 0.5, rng);
  for (Index i = 0; i < 20; ++i) CHECK(s.centers_A.row(i).norm() == doctest::Approx(std::sqrt(0.5)));
  const SmoothedSpec b = make_spec(CenterFamily::Ball, 200, 3, 0.5, rng);
  CHECK(b.centers_A.rowwise().norm().maxCoeff() <= 1.0);
  CHECK(b.centers_b.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(b.centers_b.minCoeff() < 0);
  for (auto f : {CenterFamily::Origin, CenterFamily::Sphere, CenterFamily::Ball})
    CHECK(parse_center_family(to_string(f)) == f);
}

TEST_CASE("pivot CSV: one trial gives one trial row and one aggregate row") {
  const auto rows = run_pivot_experiment(small_pivot_config(1));
  REQUIRE(rows.size() == 1);
  const auto ls = lines(pivots_csv(rows, false));
  REQUIRE(ls.size() == 3);
  const auto header = fields(ls[0]);
  CHECK(header.front() == "schema_version");
  CHECK(header.back() == "wall_ms");
  CHECK(fields(ls[1])[1] == "trial");
  CHECK(fields(ls[2])[1] == "aggregate");
  for (const auto& l : ls) CHECK(fields(l).size() == header.size());
  CHECK(fields(ls[1]).back().empty());
  CHECK_FALSE(fields(lines(pivots_csv(rows, true))[1]).back().empty());
}

TEST_CASE("pivot CSV: header only for an empty grid, identical bytes for a repeated run") {
  CHECK(lines(pivots_csv({}, false)).size() == 1);
  ExperimentConfig c = small_pivot_config(6);
  const std::string first = pivots_csv(run_pivot_experiment(c), false);
  c.threads = 3;
  CHECK(pivots_csv(run_pivot_experiment(c), false) == first);
}

TEST_CASE("pivot experiment rows are consistent") {
  const auto rows = run_pivot_experiment(small_pivot_config(8));
  for (const auto& r : rows) {
    CHECK(r.error.empty());
    CHECK(r.status == "optimal");
    CHECK(r.iterations >= 1);
  }
}

TEST_CASE("section fixtures") {
  ExperimentConfig c = parse_config(R"({"trials": 1, "seed": 3, "fixture": "square", "timing": false})");
  auto rows = run_section_experiment(c);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].edge_count == 4);
  CHECK_FALSE(rows[0].degenerate);

  c.fixture = builtin_fixture("degenerate-slice");
  rows = run_section_experiment(c);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].edge_count == 0);
  CHECK(rows[0].degenerate);
  const auto ls = lines(sections_csv(rows, false));
  REQUIRE(ls.size() == 3);
  const auto header = fields(ls[0]);
  const auto row = fields(ls[1]);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "degenerate") CHECK(row[i] == "1");
    if (header[i] == "edge_count") CHECK(row[i] == "0");
  }
}

TEST_CASE("section experiment over a grid") {
  const ExperimentConfig c =
      parse_config(R"({"n": [8, 40], "d": [3], "sigma": [1], "trials": 5, "seed": 4, "timing": false})");
  const auto rows = run_section_experiment(c);
  REQUIRE(rows.size() == 10);
  for (const auto& r : rows) {
    CHECK_FALSE(r.failed);
    if (!r.degenerate) CHECK(r.edge_count >= 3);
  }
  CHECK(sections_csv(rows, false) == sections_csv(run_section_experiment(c), false));
}

TEST_CASE("loglog_slope and number formatting") {
  std::vector<std::pair<Index, double>> xy;
  for (Index x : {2, 4, 8, 16, 32}) xy.emplace_back(x, 3.0 * std::pow(static_cast<double>(x), 0.5));
  CHECK(loglog_slope(xy) == doctest::Approx(0.5));
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2.0) == "2");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("mean_total_pivots groups by n") {
  std::vector<PivotTrial> rows(4);
  rows[0] = {.n = 10, .status = "optimal", .pivots_phase1 = 2, .pivots_phase2 = 4};
  rows[1] = {.n = 10, .status = "optimal", .pivots_phase1 = 0, .pivots_phase2 = 2};
  rows[2] = {.n = 20, .status = "error", .pivots_phase1 = 100};
  rows[3] = {.n = 20, .status = "unbounded", .pivots_phase1 = 5};
  const auto m = mean_total_pivots(rows);
  REQUIRE(m.size() == 2);
  CHECK(m[0] == std::pair<Index, double>{10, 4.0});
  CHECK(m[1] == std::pair<Index, double>{20, 5.0});
}
