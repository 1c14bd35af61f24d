#include <doctest.h>

#include "shadowlp/interpolate.hpp"
#include "shadowlp/oracle.hpp"

#include <algorithm>

using namespace shadowlp;

namespace {

LP make_lp(std::initializer_list<std::initializer_list<double>> rows, std::initializer_list<double> b,
           std::initializer_list<double> z) {
  LP lp;
  lp.A.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) lp.A(i, j++) = v;
    ++i;
  }
  lp.b = Eigen::Map<const VectorXd>(b.begin(), static_cast<Index>(b.size()));
  lp.z = Eigen::Map<const VectorXd>(z.begin(), static_cast<Index>(z.size()));
  return lp;
}

LP triangle() { return make_lp({{1, 0}, {0, 1}, {-1, -1}}, {1, 1, 1}, {1, 1}); }

}  // namespace

TEST_CASE("lift: rows become (a_i, 1 - b_i)") {
  const LP lp = make_lp({{1, 0}, {0, 1}, {-1, -1}}, {1, -2, 0.5}, {1, 1});
  const IntLPLift l = lift(lp);
  CHECK(l.points.dim() == 3);
  CHECK(l.n() == 3);
  CHECK(l.d() == 2);
  CHECK(l.points.at(0) == (VectorXd(3) << 1, 0, 0).finished());
  CHECK(l.points.at(1) == (VectorXd(3) << 0, 1, 3).finished());
  CHECK(l.points.at(2) == (VectorXd(3) << -1, -1, 0.5).finished());
  CHECK(l.points.at(l.top_index) == (VectorXd(3) << 0, 0, 1).finished());
  CHECK(l.points.is_infinite(l.infinity_index));
  CHECK(l.points.at(l.infinity_index) == (VectorXd(3) << 0, 0, -1).finished());
  CHECK(l.u_bar == (VectorXd(3) << 1, 1, 0).finished());
}

TEST_CASE("initial_limit_facet: unit solution plus infinity") {
  const LP lp = triangle();
  const IntLPLift l = lift(lp);
  const auto f = initial_limit_facet(l, {0, 1});
  REQUIRE(f);
  CHECK(f->indices == std::vector<Index>{0, 1, l.infinity_index});
  CHECK(f->contains_infinite);
  CHECK(f->normal.isApprox((VectorXd(3) << 1, 1, 0).finished()));
  CHECK(std::abs(f->normal.dot(l.points.at(l.infinity_index))) < 1e-15);
  CHECK(all_below(l.points, f->normal));

  // q = (eps z, -1) pierces the facet: positive cone coefficients.
  VectorXd q = l.z_bar0 + 1e-4 * l.u_bar;
  const auto lam = cone_coefficients(l.points, std::span<const Index>(f->indices), q);
  REQUIRE(lam);
  CHECK(lam->minCoeff() > 0);

  CHECK_THROWS_AS(initial_limit_facet(l, {0}), std::invalid_argument);
}

TEST_CASE("classify_final") {
  const LP lp = make_lp({{1, 0}, {0, 1}, {-1, -1}, {1, 1}, {2, 1}, {1, 2}, {-1, 0}}, {1, 1, 1, 1, 1, 1, 1}, {1, 1});
  const IntLPLift l = lift(lp);
  FacetIndexSet<double> f;
  f.indices = {2, 5, l.top_index};
  const FinalClass c = classify_final(f, l);
  CHECK(c.status == LPStatus::Optimal);
  CHECK(c.basis == std::vector<Index>{2, 5});
  f.indices = {2, 5, 6};
  CHECK(classify_final(f, l).status == LPStatus::Infeasible);
}

TEST_CASE("solve_lp: optimal triangle") {
  RandomStream rng(1);
  const LP lp = triangle();
  const LPResult r = solve_lp(lp, rng);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.basis == std::vector<Index>{0, 1});
  CHECK(r.x_opt.isApprox((VectorXd(2) << 1, 1).finished()));
  CHECK(r.objective(lp) == doctest::Approx(2.0));
  CHECK_FALSE(r.feasibility_probe);

  const auto v = oracle::classify_lp(lp);
  CHECK(v.status == oracle::Verdict::Optimal);
  CHECK(v.basis == r.basis);
  CHECK(v.value == doctest::Approx(2.0));
}

TEST_CASE("solve_lp: unbounded") {
  RandomStream rng(2);
  const LP lp = make_lp({{-1, 0}, {0, 1}, {0, -1}}, {1, 1, 1}, {1, 0});
  const LPResult r = solve_lp(lp, rng);
  CHECK(r.status == LPStatus::Unbounded);
  CHECK(r.basis.empty());
  CHECK(oracle::classify_lp(lp).status == oracle::Verdict::Unbounded);
}

TEST_CASE("solve_lp: infeasible pair with padding") {
  RandomStream rng(3);
  for (const auto& z : {VectorXd((VectorXd(2) << 1, 0).finished()), VectorXd((VectorXd(2) << -0.3, 2).finished())}) {
    LP lp = make_lp({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {-3, -3, 1, 1}, {1, 0});
    lp.z = z;
    const LPResult r = solve_lp(lp, rng);
    CHECK(r.status == LPStatus::Infeasible);
    CHECK(oracle::classify_lp(lp).status == oracle::Verdict::Infeasible);
  }
}

TEST_CASE("solve_lp: feasible bounded programs with b > 0 never probe") {
  RandomStream gen(4);
  for (int t = 0; t < 30; ++t) {
    LP lp;
    lp.A = gen.gaussian_matrix(12, 3);
    lp.b = VectorXd::Ones(12);
    lp.z = gen.unit_vector(3);
    RandomStream rng = gen.derive(StreamTag::Trial, static_cast<std::uint64_t>(t));
    const LPResult r = solve_lp(lp, rng);
    if (r.status == LPStatus::Optimal) {
      CHECK_FALSE(r.feasibility_probe);
      CHECK((lp.A * r.x_opt - lp.b).maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("solve_lp: agrees with classify_lp on smoothed instances") {
  RandomStream base(5);
  int compared = 0;
  for (int t = 0; t < 200; ++t) {
    RandomStream rng = base.derive(StreamTag::Trial, static_cast<std::uint64_t>(t));
    const Index d = 2 + t % 2;
    const Index n = d + 3 + t % 5;
    SmoothedSpec spec;
    spec.centers_A = MatrixXd::Zero(n, d);
    spec.centers_b = VectorXd::Zero(n);
    for (Index i = 0; i < n; ++i) spec.centers_b(i) = 2.0 * rng.uniform() - 1.0;
    spec.objective = rng.unit_vector(d);
    spec.sigma = 1.0;
    RandomStream inst = rng.derive(StreamTag::Instance);
    const LP lp = sample_instance(normalize(spec), inst);
    const auto v = oracle::classify_lp(lp);
    if (v.status == oracle::Verdict::Ambiguous) continue;
    ++compared;
    const LPResult r = solve_lp(lp, rng);
    CHECK(to_string(r.status) == std::string(oracle::to_string(v.status)));
    if (v.status == oracle::Verdict::Optimal && r.status == LPStatus::Optimal) {
      CHECK(r.basis == v.basis);
      CHECK(r.objective(lp) == doctest::Approx(v.value).epsilon(1e-7));
    }
  }
  CHECK(compared >= 190);
}

TEST_CASE("solve_lp: status does not depend on the seed") {
  RandomStream gen(6);
  for (int t = 0; t < 20; ++t) {
    LP lp;
    lp.A = gen.gaussian_matrix(10, 3);
    lp.b = gen.gaussian_vector(10);
    lp.z = gen.unit_vector(3);
    RandomStream a(100 + t), b(900 + t);
    const LPResult ra = solve_lp(lp, a);
    const LPResult rb = solve_lp(lp, b);
    CHECK(ra.status == rb.status);
    CHECK(ra.basis == rb.basis);
  }
}

TEST_CASE("solve_lp: rejects malformed programs") {
  RandomStream rng(7);
  LP lp = triangle();
  lp.z.setZero();
  CHECK_THROWS_AS(solve_lp(lp, rng), std::invalid_argument);
  lp = make_lp({{1, 0}, {0, 1}}, {1, 1}, {1, 1});
  CHECK_THROWS_AS(solve_lp(lp, rng), std::invalid_argument);
}
