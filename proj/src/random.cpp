#include "shadowlp/random.hpp"

#include <cmath>
#include <numbers>

namespace shadowlp {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0, 1)");
  // Acklam's rational approximation followed by one Halley step against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1 + 0.5 * x * u);
}

VectorXd RandomStream::unit_vector(Index d) {
  while (true) {
    VectorXd v = gaussian_vector(d);
    const double nrm = v.norm();
    if (nrm > 1e-300) return v / nrm;
  }
}

MatrixXd haar_rotation(Index d, RandomStream& rng) {
  if (d < 2) throw std::invalid_argument("haar_rotation: d must be at least 2");
  while (true) {
    const MatrixXd g = rng.gaussian_matrix(d, d);
    Eigen::HouseholderQR<MatrixXd> qr(g);
    const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    if (r.diagonal().cwiseAbs().minCoeff() <= 1e-12 * r.cwiseAbs().maxCoeff()) continue;
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(d, d);
    for (Index j = 0; j < d; ++j)
      if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
  }
}

double ell(Index d) {
  if (d < 2) throw std::invalid_argument("ell: d must be at least 2");
  return kPhase1C1 / std::sqrt(std::log(static_cast<double>(d)));
}

double sigma_cap(Index d, Index n) {
  if (d < 1 || n < 2) throw std::invalid_argument("sigma_cap: need d >= 1 and n >= 2");
  return 1.0 / (6.0 * std::sqrt(static_cast<double>(d) * std::log(static_cast<double>(n))));
}

double sigma1(Index d, Index n) {
  if (d < 2 || n <= d) throw std::invalid_argument("sigma1: need n > d >= 2");
  const double dd = static_cast<double>(d);
  return std::min(sigma_cap(d, n), kPhase1C1 / (std::pow(dd, 1.5) * std::log(dd)));
}

double m0(double magnitude) {
  if (!(magnitude > 0) || !std::isfinite(magnitude)) throw std::invalid_argument("m0: magnitude must be positive");
  return std::exp(std::ceil(std::log(magnitude)));
}

SmoothedSpec normalize(const SmoothedSpec& spec) {
  if (spec.centers_b.size() != spec.n()) throw std::invalid_argument("normalize: shape mismatch");
  double max_norm = 0;
  for (Index i = 0; i < spec.n(); ++i) {
    const double sq = spec.centers_A.row(i).squaredNorm() + spec.centers_b(i) * spec.centers_b(i);
    max_norm = std::max(max_norm, std::sqrt(sq));
  }
  if (!(max_norm > 0)) throw std::invalid_argument("normalize: all-zero centers");
  SmoothedSpec out = spec;
  out.centers_A /= max_norm;
  out.centers_b /= max_norm;
  out.sigma /= max_norm;
  const double cap = sigma_cap(spec.d(), spec.n());
  if (out.sigma > cap) {
    const double f = out.sigma / cap;
    out.centers_A /= f;
    out.centers_b /= f;
    out.sigma = cap;
  }
  return out;
}

LP sample_instance(const SmoothedSpec& spec, RandomStream& rng) {
  LP lp;
  const Index n = spec.n(), d = spec.d();
  lp.A.resize(n, d);
  lp.b.resize(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) lp.A(i, j) = spec.centers_A(i, j) + spec.sigma * rng.gaussian();
    lp.b(i) = spec.centers_b(i) + spec.sigma * rng.gaussian();
  }
  if (spec.objective.size() == d) {
    lp.z = spec.objective;
  } else {
    lp.z = VectorXd::Unit(d, 0);
  }
  return lp;
}

}  // namespace shadowlp
