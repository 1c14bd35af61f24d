#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shadowlp {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

/// Numerical thresholds shared by every geometric predicate.
struct Tolerance {
  double eps_singular = 1e-10;  // reciprocal condition number below which a d x d system is Singular
  double eps_feas = 1e-9;       // slack for "below" and cone-membership tests
  double eps_angle = 1e-12;     // angular comparisons, radians

  bool valid(Index d) const {
    return eps_singular > 0 && eps_feas > 0 && eps_angle > 0 &&
           eps_feas >= std::numeric_limits<double>::epsilon() * static_cast<double>(d);
  }
};

/// Thrown when a tolerance-level breakdown makes the current computation meaningless
/// (walk state not pierced, cycling, singular recovery systems).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Constraint points of a unit program, stored one per column (d x n), plus at most one
/// vertex at infinity. The infinite vertex, when present, has index n.
template <typename Scalar>
struct PointSet {
  Matrix<Scalar> points;
  std::optional<Vector<Scalar>> infinite_dir;

  PointSet() = default;
  explicit PointSet(Matrix<Scalar> pts, std::optional<Vector<Scalar>> inf = std::nullopt)
      : points(std::move(pts)), infinite_dir(std::move(inf)) {}

  Index dim() const { return points.rows(); }
  Index finite_count() const { return points.cols(); }
  Index size() const { return points.cols() + (infinite_dir ? 1 : 0); }
  bool has_infinite() const { return infinite_dir.has_value(); }
  bool is_infinite(Index k) const { return infinite_dir && k == points.cols(); }
  Index infinite_index() const { return points.cols(); }

  /// Column k as a vector: the point itself, or the recession direction for the infinite index.
  Vector<Scalar> at(Index k) const {
    if (is_infinite(k)) return *infinite_dir;
    return points.col(k);
  }

  /// Right-hand side of the facet equation for index k: 1 for finite points, 0 at infinity.
  Scalar level(Index k) const { return is_infinite(k) ? Scalar(0) : Scalar(1); }
};

/// A sorted set of d constraint indices together with the normal h of the hyperplane through them.
template <typename Scalar>
struct FacetIndexSet {
  std::vector<Index> indices;
  Vector<Scalar> normal;
  bool contains_infinite = false;

  bool contains(Index k) const { return std::binary_search(indices.begin(), indices.end(), k); }
  bool same_indices(const FacetIndexSet& other) const { return indices == other.indices; }
};

/// maximize <z, x> subject to A x <= b, with A of size n x d.
template <typename Scalar>
struct GeneralLP {
  Matrix<Scalar> A;
  Vector<Scalar> b;
  Vector<Scalar> z;

  Index n() const { return A.rows(); }
  Index d() const { return A.cols(); }

  /// Throws std::invalid_argument unless n > d >= 2, shapes agree, entries are finite, z != 0.
  void validate() const {
    if (d() < 2) throw std::invalid_argument("GeneralLP: dimension must be at least 2");
    if (n() <= d()) throw std::invalid_argument("GeneralLP: need more constraints than variables");
    if (b.size() != n() || z.size() != d()) throw std::invalid_argument("GeneralLP: shape mismatch");
    if (!A.allFinite() || !b.allFinite() || !z.allFinite())
      throw std::invalid_argument("GeneralLP: non-finite entries");
    if (!(z.norm() > Scalar(0))) throw std::invalid_argument("GeneralLP: zero objective");
  }

  /// The constraint normals a_i as columns.
  PointSet<Scalar> rows_as_points() const { return PointSet<Scalar>(A.transpose()); }
};

using LP = GeneralLP<double>;

inline std::string format_indices(const std::vector<Index>& idx) {
  std::string out = "{";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(idx[i]);
  }
  return out + "}";
}

}  // namespace shadowlp
