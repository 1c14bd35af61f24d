#include <doctest.h>

#include "shadowlp/oracle.hpp"
#include "shadowlp/random.hpp"

#include <set>

using namespace shadowlp;

namespace {

MatrixXd cols(std::initializer_list<std::initializer_list<double>> pts) {
  const auto d = static_cast<Index>(pts.begin()->size());
  MatrixXd m(d, static_cast<Index>(pts.size()));
  Index j = 0;
  for (const auto& p : pts) {
    Index i = 0;
    for (double v : p) m(i++, j) = v;
    ++j;
  }
  return m;
}

VectorXd vec(std::initializer_list<double> v) {
  return Eigen::Map<const VectorXd>(v.begin(), static_cast<Index>(v.size()));
}

std::set<std::vector<Index>> index_sets(const std::vector<FacetIndexSet<double>>& fs) {
  std::set<std::vector<Index>> out;
  for (const auto& f : fs) out.insert(f.indices);
  return out;
}

}  // namespace

TEST_CASE("binomial and subset enumeration") {
  CHECK(oracle::binomial(5, 2) == 10);
  CHECK(oracle::binomial(50, 4) == 230300);
  CHECK(oracle::binomial(3, 5) == 0);
  int count = 0;
  std::vector<Index> last;
  oracle::for_each_subset(6, 3, 100, [&](const std::vector<Index>& s) {
    ++count;
    CHECK(std::is_sorted(s.begin(), s.end()));
    if (!last.empty()) CHECK(last < s);
    last = s;
  });
  CHECK(count == 20);
  CHECK_THROWS_AS(oracle::for_each_subset(60, 5, 1000, [](const std::vector<Index>&) {}), oracle::CapExceeded);
}

TEST_CASE("enumerate_facets") {
  CHECK(index_sets(oracle::enumerate_facets(PointSet<double>(cols({{1, 0}, {0, 1}})))) ==
        std::set<std::vector<Index>>{{0, 1}});
  CHECK(index_sets(oracle::enumerate_facets(PointSet<double>(cols({{1, 0}, {0, 1}, {0.9, 0.9}})))) ==
        std::set<std::vector<Index>>{{0, 2}, {1, 2}});

  // Cube in d = 3: any 3 of a face's 4 vertices span it.
  MatrixXd cube(3, 8);
  for (int k = 0; k < 8; ++k)
    for (int i = 0; i < 3; ++i) cube(i, k) = (k >> i) & 1 ? 1.0 : -1.0;
  const auto facets = oracle::enumerate_facets(PointSet<double>(cube));
  CHECK(facets.size() == 6 * 4);
  for (const auto& f : facets) CHECK(f.normal.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("enumerate_facets with a vertex at infinity") {
  const PointSet<double> pts(cols({{1, 0}, {0.5, 0.5}}), vec({0, -1}));
  const auto fs = index_sets(oracle::enumerate_facets(pts));
  CHECK(fs.count({0, 2}) == 1);
}

TEST_CASE("facet_of") {
  const PointSet<double> pts(cols({{1, 0}, {0, 1}, {0.9, 0.9}}));
  auto r = oracle::facet_of(pts, vec({1, 0.1}));
  REQUIRE(r.kind == oracle::LookupKind::Facet);
  CHECK(r.facet->indices == std::vector<Index>{0, 2});

  CHECK(oracle::facet_of(pts, vec({-1, 0})).kind == oracle::LookupKind::Empty);

  // A vertex direction sits on the boundary of two cones.
  CHECK(oracle::facet_of(pts, vec({0.9, 0.9})).kind == oracle::LookupKind::Ambiguous);
  r = oracle::facet_of(pts, vec({0.9, 0.9 + 1e-6}));
  REQUIRE(r.kind == oracle::LookupKind::Facet);
  CHECK(r.facet->contains(2));
}

TEST_CASE("certify_facet matches facet_of") {
  RandomStream rng(21);
  int certified = 0;
  for (int t = 0; t < 100; ++t) {
    const Index d = 2 + t % 3;
    const PointSet<double> pts(rng.gaussian_matrix(d, d + 4));
    const VectorXd z = rng.unit_vector(d);
    const auto r = oracle::facet_of(pts, z);
    if (r.kind != oracle::LookupKind::Facet) continue;
    CHECK(oracle::certify_facet(pts, z, r.facet->indices));
    ++certified;
    oracle::for_each_subset(pts.size(), d, 1000, [&](const std::vector<Index>& idx) {
      if (idx != r.facet->indices) CHECK_FALSE(oracle::certify_facet(pts, z, idx));
    });
  }
  CHECK(certified > 30);
  const PointSet<double> pts(cols({{1, 0}, {0, 1}}));
  CHECK_FALSE(oracle::certify_facet(pts, vec({1, 1}), {0}));
}

TEST_CASE("cone_margin") {
  const PointSet<double> pts(cols({{1, 0}, {0, 1}}));
  CHECK(oracle::cone_margin(pts, vec({1, 1})) == doctest::Approx(1.0));
  CHECK(oracle::cone_margin(pts, vec({1, -0.5})) == doctest::Approx(-0.5));
}

TEST_CASE("classify_lp") {
  LP lp;
  lp.A = cols({{1, 0, -1}, {0, 1, -1}});
  lp.b = vec({1, 1, 1});
  lp.z = vec({1, 1});
  auto v = oracle::classify_lp(lp);
  REQUIRE(v.status == oracle::Verdict::Optimal);
  CHECK(v.basis == std::vector<Index>{0, 1});
  CHECK(v.x_opt.isApprox(vec({1, 1})));
  CHECK(v.value == doctest::Approx(2.0));

  lp.A = cols({{-1, 0, 0}, {0, 1, -1}});
  lp.z = vec({1, 0});
  CHECK(oracle::classify_lp(lp).status == oracle::Verdict::Unbounded);

  lp.A = cols({{1, -1, 0, 0}, {0, 0, 1, -1}});
  lp.b = vec({-3, -3, 1, 1});
  CHECK(oracle::classify_lp(lp).status == oracle::Verdict::Infeasible);

  // Two parallel constraints, no vertices: x1 <= -3 and -x1 <= -3 plus a copy.
  lp.A = cols({{1, -1, 1}, {0, 0, 0}});
  lp.b = vec({-3, -3, -2});
  CHECK(oracle::classify_lp(lp).status == oracle::Verdict::Infeasible);

  lp.A = cols({{1, 0}, {0, 1}});
  lp.b = vec({1, 1});
  CHECK_THROWS_AS(oracle::classify_lp(lp), std::invalid_argument);
}

TEST_CASE("classify_lp: optimum beats every feasible random point") {
  RandomStream rng(22);
  for (int t = 0; t < 50; ++t) {
    LP lp;
    lp.A = rng.gaussian_matrix(8, 2);
    lp.b = VectorXd::Ones(8);
    lp.z = rng.unit_vector(2);
    const auto v = oracle::classify_lp(lp);
    if (v.status != oracle::Verdict::Optimal) continue;
    for (int k = 0; k < 200; ++k) {
      const VectorXd x = 3.0 * rng.gaussian_vector(2);
      if ((lp.A * x - lp.b).maxCoeff() <= 0) CHECK(lp.z.dot(x) <= v.value + 1e-12);
    }
  }
}

TEST_CASE("section_edge_count_bruteforce: square") {
  SweepPlane<double> plane{vec({1, 0}), vec({0, 1})};
  CHECK(oracle::section_edge_count_bruteforce<double>(cols({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}), plane) == 4);
}

TEST_CASE("section_edge_count_bruteforce: simplex cuts give 3 and 4") {
  const MatrixXd simplex = cols({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}});
  RandomStream rng(23);
  std::set<int> seen;
  for (int t = 0; t < 200; ++t) {
    const MatrixXd U = haar_rotation(3, rng);
    const SweepPlane<double> plane{U.col(0), U.col(1)};
    const int c = oracle::section_edge_count_bruteforce<double>(simplex, plane);
    CHECK((c == 3 || c == 4));
    seen.insert(c);
  }
  CHECK(seen == std::set<int>{3, 4});
}

TEST_CASE("hull_halfspaces") {
  const MatrixXd square = cols({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}, {0.2, 0.1}});
  const auto hs = oracle::hull_halfspaces<double>(square);
  CHECK(hs.size() == 4);
  for (const auto& [normal, offset] : hs) {
    CHECK(offset == doctest::Approx(1.0));
    CHECK((square.transpose() * normal).maxCoeff() <= offset + 1e-12);
  }
}
