#pragma once

#include "shadowlp/types.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <span>

namespace shadowlp {

/// LU factorization of the d x d system whose rows are the points of an index set
/// (the recession direction for the infinite index). Rows are equilibrated to unit norm
/// before factoring, so the singularity test is invariant under scaling of individual points.
template <typename Scalar>
class FacetSystem {
 public:
  static std::optional<FacetSystem> factor(const PointSet<Scalar>& pts, std::span<const Index> idx,
                                           const Tolerance& tol) {
    const Index d = pts.dim();
    if (static_cast<Index>(idx.size()) != d) return std::nullopt;
    Matrix<Scalar> m(d, d);
    Vector<Scalar> scale(d);
    for (Index r = 0; r < d; ++r) {
      const Index k = idx[static_cast<std::size_t>(r)];
      if (k < 0 || k >= pts.size()) return std::nullopt;
      m.row(r) = pts.at(k).transpose();
      const Scalar nrm = m.row(r).norm();
      if (!(nrm > Scalar(0)) || !std::isfinite(static_cast<double>(nrm))) return std::nullopt;
      scale(r) = Scalar(1) / nrm;
      m.row(r) *= scale(r);
    }
    FacetSystem sys;
    sys.lu_.compute(m);
    // Pivot magnitudes first; rcond() misses exact zeros.
    const auto pivots = sys.lu_.matrixLU().diagonal().cwiseAbs();
    if (!(static_cast<double>(pivots.minCoeff()) > tol.eps_singular * static_cast<double>(pivots.maxCoeff())))
      return std::nullopt;
    if (!(static_cast<double>(sys.lu_.rcond()) > tol.eps_singular)) return std::nullopt;
    sys.scale_ = std::move(scale);
    return sys;
  }

  /// Solves M x = rhs, where row r of M is point idx[r].
  Vector<Scalar> solve(const Vector<Scalar>& rhs) const {
    return lu_.solve(scale_.cwiseProduct(rhs));
  }

  /// Solves M^T lambda = z, i.e. z = sum_r lambda_r * point(idx[r]).
  Vector<Scalar> solve_transposed(const Vector<Scalar>& z) const {
    Vector<Scalar> mu = lu_.transpose().solve(z);
    return scale_.cwiseProduct(mu);
  }

 private:
  FacetSystem() = default;
  Eigen::PartialPivLU<Matrix<Scalar>> lu_;
  Vector<Scalar> scale_;
};

/// Right-hand side (1 for finite points, 0 at infinity) for the facet equations of an index set.
template <typename Scalar>
Vector<Scalar> facet_levels(const PointSet<Scalar>& pts, std::span<const Index> idx) {
  Vector<Scalar> rhs(static_cast<Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) rhs(static_cast<Index>(r)) = pts.level(idx[r]);
  return rhs;
}

/// Normal h of the affine hyperplane {x : <h, x> = 1} through the points of `idx`.
/// For the infinite index the equation is <h, u> = 0. Empty when the system is singular.
template <typename Scalar>
std::optional<Vector<Scalar>> facet_normal(const PointSet<Scalar>& pts, std::span<const Index> idx,
                                           const Tolerance& tol = {}) {
  auto sys = FacetSystem<Scalar>::factor(pts, idx, tol);
  if (!sys) return std::nullopt;
  return sys->solve(facet_levels(pts, idx));
}

/// Largest value of <h, a_k> - level(k) over all points (including the infinite one).
template <typename Scalar>
Scalar max_level_excess(const PointSet<Scalar>& pts, const Vector<Scalar>& h) {
  Scalar worst = -std::numeric_limits<Scalar>::infinity();
  if (pts.finite_count() > 0) worst = (pts.points.transpose() * h).maxCoeff() - Scalar(1);
  if (pts.infinite_dir) worst = std::max(worst, pts.infinite_dir->dot(h));
  return worst;
}

/// True iff every point lies below the hyperplane {<h, x> = 1}, and the recession
/// direction (if any) does not point above it.
template <typename Scalar>
bool all_below(const PointSet<Scalar>& pts, const Vector<Scalar>& h, const Tolerance& tol = {}) {
  if (pts.finite_count() > 0 &&
      (pts.points.transpose() * h).maxCoeff() > Scalar(1) + Scalar(tol.eps_feas))
    return false;
  if (pts.infinite_dir && pts.infinite_dir->dot(h) > Scalar(tol.eps_feas)) return false;
  return true;
}

/// Coefficients lambda with z = sum_{i in idx} lambda_i a_i; empty if singular.
template <typename Scalar>
std::optional<Vector<Scalar>> cone_coefficients(const PointSet<Scalar>& pts,
                                                std::span<const Index> idx,
                                                const Vector<Scalar>& z, const Tolerance& tol = {}) {
  auto sys = FacetSystem<Scalar>::factor(pts, idx, tol);
  if (!sys) return std::nullopt;
  return sys->solve_transposed(z);
}

/// Cone membership with a tolerance relative to the coefficient magnitude.
template <typename Scalar>
bool coefficients_nonnegative(const Vector<Scalar>& lambda, double eps) {
  const Scalar scale = std::max(Scalar(1), lambda.cwiseAbs().maxCoeff());
  return lambda.minCoeff() >= -Scalar(eps) * scale;
}

/// Builds a facet candidate from an arbitrary index list: sorts it and computes the normal.
/// Does not test that the other points lie below.
template <typename Scalar>
std::optional<FacetIndexSet<Scalar>> make_facet(const PointSet<Scalar>& pts, std::vector<Index> idx,
                                                const Tolerance& tol = {}) {
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) return std::nullopt;
  auto h = facet_normal<Scalar>(pts, idx, tol);
  if (!h) return std::nullopt;
  FacetIndexSet<Scalar> f;
  f.contains_infinite = pts.has_infinite() && std::binary_search(idx.begin(), idx.end(),
                                                                 pts.infinite_index());
  f.indices = std::move(idx);
  f.normal = std::move(*h);
  return f;
}

/// Facet validity: nonsingular index set with every point below its hyperplane.
template <typename Scalar>
bool is_valid_facet(const PointSet<Scalar>& pts, const FacetIndexSet<Scalar>& f,
                    const Tolerance& tol = {}) {
  auto h = facet_normal<Scalar>(pts, f.indices, tol);
  return h && all_below(pts, *h, tol);
}

/// Angle between the lines spanned by x and y, in [0, pi/2].
template <typename Derived1, typename Derived2>
auto angular_distance(const Eigen::MatrixBase<Derived1>& x, const Eigen::MatrixBase<Derived2>& y) {
  using Scalar = typename Derived1::Scalar;
  const Scalar nx = x.norm();
  const Scalar ny = y.norm();
  if (!(nx > Scalar(0)) || !(ny > Scalar(0)))
    throw std::invalid_argument("angular_distance: zero vector");
  Scalar c = std::abs(x.dot(y)) / (nx * ny);
  c = std::clamp(c, Scalar(0), Scalar(1));
  return std::acos(c);
}

// --- planar utilities -------------------------------------------------------

/// Euclidean distance from p to the line through a and b.
template <typename Scalar>
Scalar line_distance(const Eigen::Matrix<Scalar, 2, 1>& p, const Eigen::Matrix<Scalar, 2, 1>& a,
                     const Eigen::Matrix<Scalar, 2, 1>& b) {
  const Eigen::Matrix<Scalar, 2, 1> dir = b - a;
  const Scalar cross = dir.x() * (p.y() - a.y()) - dir.y() * (p.x() - a.x());
  return std::abs(cross) / dir.norm();
}

/// Three fixed viewpoints: an equilateral triangle centred at 0 with vertices of norm 4,
/// at angles 90, 210 and 330 degrees.
template <typename Scalar>
std::array<Eigen::Matrix<Scalar, 2, 1>, 3> viewpoints() {
  std::array<Eigen::Matrix<Scalar, 2, 1>, 3> out;
  constexpr double deg = std::numbers::pi / 180.0;
  const double angles[3] = {90.0 * deg, 210.0 * deg, 330.0 * deg};
  for (int i = 0; i < 3; ++i)
    out[static_cast<std::size_t>(i)] << Scalar(4 * std::cos(angles[i])), Scalar(4 * std::sin(angles[i]));
  return out;
}

/// Certificate that `edge` of the polygon stays an edge when viewpoint `vp` is added to the
/// hull and that vp is at distance >= 1 from the edge's line.
template <typename Scalar>
bool viewpoint_certifies(const Matrix<Scalar>& polygon, std::pair<Index, Index> edge,
                         const Eigen::Matrix<Scalar, 2, 1>& vp, Scalar slack = Scalar(1e-12)) {
  const Eigen::Matrix<Scalar, 2, 1> a = polygon.col(edge.first);
  const Eigen::Matrix<Scalar, 2, 1> b = polygon.col(edge.second);
  const Eigen::Matrix<Scalar, 2, 1> dir = b - a;
  auto side = [&](const Eigen::Matrix<Scalar, 2, 1>& p) {
    return (dir.x() * (p.y() - a.y()) - dir.y() * (p.x() - a.x())) / dir.norm();
  };
  // The polygon lies weakly on one side; find which.
  Scalar polygon_side = 0;
  for (Index k = 0; k < polygon.cols(); ++k) {
    const Scalar s = side(polygon.col(k));
    if (std::abs(s) > slack) {
      if (polygon_side != 0 && (s > 0) != (polygon_side > 0)) return false;  // not a hull edge
      polygon_side = s;
    }
  }
  const Scalar vs = side(vp);
  if (std::abs(vs) < Scalar(1) - slack) return false;
  return polygon_side == 0 || (vs > 0) == (polygon_side > 0);
}

/// Returns the 1-based index of a viewpoint certifying `edge`, or empty if none does.
template <typename Scalar>
std::optional<int> viewpoint_for_edge(const Matrix<Scalar>& polygon, std::pair<Index, Index> edge) {
  if (polygon.rows() != 2) throw std::invalid_argument("viewpoint_for_edge: polygon must be planar");
  if (edge.first == edge.second) throw std::invalid_argument("viewpoint_for_edge: degenerate edge");
  const auto vps = viewpoints<Scalar>();
  for (int i = 0; i < 3; ++i)
    if (viewpoint_certifies(polygon, edge, vps[static_cast<std::size_t>(i)])) return i + 1;
  return std::nullopt;
}

}  // namespace shadowlp
