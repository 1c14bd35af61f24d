#include <doctest.h>

#include "shadowlp/random.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace shadowlp;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

SmoothedSpec example_spec(Index n, Index d, double sigma, RandomStream& rng) {
  SmoothedSpec s;
  s.centers_A = rng.gaussian_matrix(n, d);
  s.centers_b = rng.gaussian_vector(n);
  s.sigma = sigma;
  return s;
}

bool same(const SmoothedSpec& a, const SmoothedSpec& b, double tol) {
  return (a.centers_A - b.centers_A).cwiseAbs().maxCoeff() <= tol &&
         (a.centers_b - b.centers_b).cwiseAbs().maxCoeff() <= tol && std::abs(a.sigma - b.sigma) <= tol;
}

}  // namespace

TEST_CASE("normal_quantile") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(normal_quantile(0.001) == doctest::Approx(-3.090232306167814).epsilon(1e-14));
  for (double p : {1e-300, 1e-12, 1e-5, 0.02, 0.2, 0.6, 0.9, 0.99999}) {
    const double x = normal_quantile(p);
    CHECK(normal_cdf(x) == doctest::Approx(p).epsilon(1e-12));
    if (p > 1e-100) CHECK(normal_quantile(1.0 - p) == doctest::Approx(-x).epsilon(p < 1e-10 ? 1e-5 : 1e-9));
  }
}

TEST_CASE("derive_seed separates tags and indices") {
  std::set<std::uint64_t> seen;
  for (auto tag : {StreamTag::Instance, StreamTag::Trial, StreamTag::Phase1Iteration, StreamTag::Haar,
                   StreamTag::Smoothing, StreamTag::Objective, StreamTag::Plane, StreamTag::Probe, StreamTag::Centers})
    for (std::uint64_t i = 0; i < 200; ++i) seen.insert(derive_seed(42, tag, i));
  CHECK(seen.size() == 9 * 200);
  CHECK(derive_seed(42, StreamTag::Trial, 3) != derive_seed(43, StreamTag::Trial, 3));
  static_assert(derive_seed(1, StreamTag::Trial, 0) == derive_seed(1, StreamTag::Trial, 0));

  // Neighbouring streams are uncorrelated.
  const int N = 20000;
  double sxy = 0, sx = 0, sy = 0;
  for (int i = 0; i < N; ++i) {
    RandomStream a(derive_seed(7, StreamTag::Trial, static_cast<std::uint64_t>(i)));
    RandomStream b(derive_seed(7, StreamTag::Trial, static_cast<std::uint64_t>(i) + 1));
    const double x = a.uniform() - 0.5, y = b.uniform() - 0.5;
    sxy += x * y;
    sx += x * x;
    sy += y * y;
  }
  CHECK(std::abs(sxy / std::sqrt(sx * sy)) < 4.0 / std::sqrt(N));
}

TEST_CASE("RandomStream: uniform range and determinism") {
  RandomStream a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.uniform());
  }
  RandomStream c(5);
  CHECK(c.derive(StreamTag::Haar, 2).seed() == derive_seed(5, StreamTag::Haar, 2));
  const VectorXd v = c.unit_vector(5);
  CHECK(v.norm() == doctest::Approx(1.0));
}

TEST_CASE("gaussian moments and tails") {
  RandomStream rng(6);
  const int N = 200000;
  double s = 0, s2 = 0;
  int beyond3 = 0;
  for (int i = 0; i < N; ++i) {
    const double g = rng.gaussian();
    s += g;
    s2 += g * g;
    if (std::abs(g) > 3) ++beyond3;
  }
  const double mean = s / N, var = s2 / N - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(N));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / N));
  const double p3 = 2.0 * normal_cdf(-3.0);
  CHECK(std::abs(static_cast<double>(beyond3) / N - p3) < 5.0 * std::sqrt(p3 / N));
}

TEST_CASE("gaussian vectors stay within 3 sigma sqrt(d log n)") {
  RandomStream rng(7);
  const Index d = 3, n = 10;
  const double sigma = 0.2;
  const double radius = 3.0 * sigma * std::sqrt(static_cast<double>(d) * std::log(static_cast<double>(n)));
  const double bound = 10.0 * std::pow(static_cast<double>(n), -2.9 * static_cast<double>(d) + 1.0);
  int far = 0;
  const int batches = 10000;
  for (int b = 0; b < batches; ++b)
    for (Index i = 0; i < n; ++i)
      if (sigma * rng.gaussian_vector(d).norm() >= radius) {
        ++far;
        break;
      }
  CHECK(static_cast<double>(far) / batches <= bound + 3.0 / batches);
}

TEST_CASE("haar_rotation: orthogonal") {
  RandomStream rng(8);
  for (Index d = 2; d <= 8; ++d)
    for (int t = 0; t < 20; ++t) {
      const MatrixXd U = haar_rotation(d, rng);
      CHECK((U.transpose() * U - MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <= 10.0 * d * 1e-9);
    }
}

TEST_CASE("haar_rotation: image of a fixed vector is uniform") {
  RandomStream rng(9);
  const int N = 10000;
  VectorXd sum = VectorXd::Zero(4);
  for (int i = 0; i < N; ++i) sum += haar_rotation(4, rng).col(0);
  CHECK((sum / N).norm() <= 0.05);

  std::vector<double> u(N);
  for (auto& a : u) {
    const MatrixXd U = haar_rotation(2, rng);
    a = (std::atan2(U(1, 0), U(0, 0)) + std::numbers::pi) / (2.0 * std::numbers::pi);
  }
  std::sort(u.begin(), u.end());
  double ks = 0;
  for (int i = 0; i < N; ++i)
    ks = std::max({ks, (i + 1.0) / N - u[static_cast<std::size_t>(i)], u[static_cast<std::size_t>(i)] - double(i) / N});
  CHECK(ks < 1.628 / std::sqrt(N));
}

TEST_CASE("haar_rotation: both orientations occur") {
  RandomStream rng(10);
  int negative = 0;
  for (int i = 0; i < 400; ++i) negative += haar_rotation(3, rng).determinant() < 0;
  CHECK(negative > 140);
  CHECK(negative < 260);
}

TEST_CASE("normalize") {
  RandomStream rng(11);
  const SmoothedSpec s = example_spec(20, 3, 0.01, rng);
  const SmoothedSpec once = normalize(s);
  CHECK(same(normalize(once), once, 1e-15));

  double max_norm = 0;
  for (Index i = 0; i < once.n(); ++i)
    max_norm = std::max(max_norm, std::hypot(once.centers_A.row(i).norm(), once.centers_b(i)));
  CHECK(max_norm == doctest::Approx(1.0));

  SmoothedSpec doubled = s;
  doubled.centers_A *= 2;
  doubled.centers_b *= 2;
  doubled.sigma *= 2;
  CHECK(same(normalize(doubled), once, 1e-15));

  SmoothedSpec big;
  big.centers_A = MatrixXd::Zero(100, 4);
  big.centers_b = VectorXd::Ones(100);
  big.sigma = 1.0;
  const SmoothedSpec capped = normalize(big);
  CHECK(capped.sigma == doctest::Approx(1.0 / (6.0 * std::sqrt(4.0 * std::log(100.0)))));
  CHECK(capped.sigma == doctest::Approx(0.03883).epsilon(1e-3));
  CHECK(capped.centers_b(0) == doctest::Approx(capped.sigma));

  SmoothedSpec zero = big;
  zero.centers_b.setZero();
  CHECK_THROWS_AS(normalize(zero), std::invalid_argument);
}

TEST_CASE("sample_instance") {
  RandomStream rng(12);
  SmoothedSpec s = example_spec(6, 3, 0.0, rng);
  LP lp = sample_instance(s, rng);
  CHECK(lp.A == s.centers_A);
  CHECK(lp.b == s.centers_b);
  CHECK(lp.z == VectorXd::Unit(3, 0));

  s.sigma = 0.5;
  s.objective = VectorXd::Ones(3);
  RandomStream a(99), b(99);
  const LP la = sample_instance(s, a), lb = sample_instance(s, b);
  CHECK(la.A == lb.A);
  CHECK(la.b == lb.b);
  CHECK(la.z == s.objective);

  SmoothedSpec one;
  one.centers_A = MatrixXd::Constant(1, 2, 0.3);
  one.centers_b = VectorXd::Constant(1, -0.7);
  one.sigma = 0.5;
  const int N = 100000;
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (int i = 0; i < N; ++i) {
    const LP l = sample_instance(one, rng);
    sum += Eigen::Vector3d(l.A(0, 0), l.A(0, 1), l.b(0));
  }
  const Eigen::Vector3d mean = sum / N;
  const double se = 0.5 / std::sqrt(N);
  CHECK(std::abs(mean(0) - 0.3) < 5 * se);
  CHECK(std::abs(mean(1) - 0.3) < 5 * se);
  CHECK(std::abs(mean(2) + 0.7) < 5 * se);
}
