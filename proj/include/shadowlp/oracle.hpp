#pragma once

// Brute-force ground truth for small instances. Everything here enumerates d-subsets and
// never calls the walker, so it can be used to check it.

#include "shadowlp/geometry.hpp"
#include "shadowlp/shadow_walk.hpp"

#include <functional>

namespace shadowlp::oracle {

struct Options {
  Tolerance tol;
  double band = 1e-9;              // margin tests closer than this to zero are Ambiguous
  std::uint64_t subset_cap = 1000000;
};

class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return static_cast<std::uint64_t>(r + 0.5L);
}

/// Calls f(subset) for every sorted k-subset of {0..n-1}.
inline void for_each_subset(Index n, Index k, std::uint64_t cap, const std::function<void(const std::vector<Index>&)>& f) {
  if (k > n || k <= 0) return;
  if (binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)) > cap)
    throw CapExceeded("oracle: subset enumeration exceeds cap");
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    f(idx);
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

namespace detail {

/// Largest <h, a_k> - level(k) over points outside `members` (normalized for the infinite vertex).
template <typename Scalar>
double excess_outside(const PointSet<Scalar>& pts, const Vector<Scalar>& h, const std::vector<Index>& members) {
  double worst = -std::numeric_limits<double>::infinity();
  for (Index k = 0; k < pts.size(); ++k) {
    if (std::binary_search(members.begin(), members.end(), k)) continue;
    double v;
    if (pts.is_infinite(k)) {
      v = static_cast<double>(pts.infinite_dir->dot(h) / (pts.infinite_dir->norm() * h.norm()));
    } else {
      v = static_cast<double>(pts.points.col(k).dot(h)) - 1.0;
    }
    worst = std::max(worst, v);
  }
  return worst;
}

template <typename Scalar>
double relative_min(const Vector<Scalar>& lambda) {
  const double scale = std::max(1e-300, static_cast<double>(lambda.cwiseAbs().maxCoeff()));
  return static_cast<double>(lambda.minCoeff()) / scale;
}

}  // namespace detail

/// All facets of Conv(0, points) not containing the origin: d-subsets with a nonsingular
/// hyperplane {<h, x> = 1} that has every point below it.
template <typename Scalar>
std::vector<FacetIndexSet<Scalar>> enumerate_facets(const PointSet<Scalar>& pts, const Options& opt = {}) {
  std::vector<FacetIndexSet<Scalar>> out;
  for_each_subset(pts.size(), pts.dim(), opt.subset_cap, [&](const std::vector<Index>& idx) {
    auto f = make_facet(pts, idx, opt.tol);
    if (f && all_below(pts, f->normal, opt.tol)) out.push_back(std::move(*f));
  });
  return out;
}

enum class LookupKind { Facet, Empty, Ambiguous };

template <typename Scalar>
struct FacetLookup {
  LookupKind kind = LookupKind::Empty;
  std::optional<FacetIndexSet<Scalar>> facet;
};

/// The facet of Conv(0, points) pierced by the direction z. Empty when z is outside the cone of
/// the points (the unit program is unbounded); Ambiguous when a margin test is within the band.
template <typename Scalar>
FacetLookup<Scalar> facet_of(const PointSet<Scalar>& pts, const Vector<Scalar>& z, const Options& opt = {}) {
  FacetLookup<Scalar> out;
  int definite = 0;
  bool ambiguous = false;
  for_each_subset(pts.size(), pts.dim(), opt.subset_cap, [&](const std::vector<Index>& idx) {
    auto sys = FacetSystem<Scalar>::factor(pts, idx, opt.tol);
    if (!sys) return;
    const double m = detail::relative_min<Scalar>(sys->solve_transposed(z));
    if (m < -opt.band) return;
    const Vector<Scalar> h = sys->solve(facet_levels(pts, std::span<const Index>(idx)));
    const double excess = detail::excess_outside(pts, h, idx);
    if (excess > opt.band) return;
    if (m <= opt.band || excess >= -opt.band) {
      ambiguous = true;
      return;
    }
    ++definite;
    FacetIndexSet<Scalar> f;
    f.indices = idx;
    f.normal = h;
    f.contains_infinite = pts.has_infinite() && std::binary_search(idx.begin(), idx.end(), pts.infinite_index());
    out.facet = std::move(f);
  });
  if (ambiguous || definite > 1) {
    out.kind = LookupKind::Ambiguous;
    out.facet.reset();
  } else if (definite == 1) {
    out.kind = LookupKind::Facet;
  } else {
    out.kind = LookupKind::Empty;
  }
  return out;
}

/// Independent cone-membership test by Caratheodory: z in cone(points) iff some nonsingular
/// d-subset has nonnegative coefficients. Returns the best relative minimum coefficient.
template <typename Scalar>
double cone_margin(const PointSet<Scalar>& pts, const Vector<Scalar>& z, const Options& opt = {}) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_subset(pts.size(), pts.dim(), opt.subset_cap, [&](const std::vector<Index>& idx) {
    auto lam = cone_coefficients(pts, std::span<const Index>(idx), z, opt.tol);
    if (lam) best = std::max(best, detail::relative_min<Scalar>(*lam));
  });
  return best;
}

/// Checks a claimed facet(z) against the definition: nonsingular, every point below its
/// hyperplane, and z in the cone of its points. Linear in n, for instances too large to enumerate.
template <typename Scalar>
bool certify_facet(const PointSet<Scalar>& pts, const Vector<Scalar>& z, const std::vector<Index>& idx,
                   const Options& opt = {}) {
  if (static_cast<Index>(idx.size()) != pts.dim()) return false;
  auto h = facet_normal<Scalar>(pts, std::span<const Index>(idx), opt.tol);
  if (!h || !all_below(pts, *h, opt.tol)) return false;
  auto lam = cone_coefficients(pts, std::span<const Index>(idx), z, opt.tol);
  return lam && detail::relative_min<Scalar>(*lam) >= -opt.band;
}

enum class Verdict { Optimal, Unbounded, Infeasible, Ambiguous };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Optimal: return "optimal";
    case Verdict::Unbounded: return "unbounded";
    case Verdict::Infeasible: return "infeasible";
    case Verdict::Ambiguous: return "ambiguous";
  }
  return "?";
}

template <typename Scalar>
struct OracleVerdict {
  Verdict status = Verdict::Ambiguous;
  std::vector<Index> basis;
  Vector<Scalar> x_opt;
  double value = 0;
  std::string reason;
};

/// Classifies an LP by enumeration: feasibility from the vertices (d-subsets of tight
/// constraints), boundedness from z in cone(a_i), optimum as the best feasible vertex.
template <typename Scalar>
OracleVerdict<Scalar> classify_lp(const GeneralLP<Scalar>& lp, const Options& opt = {}) {
  lp.validate();
  const Index n = lp.n(), d = lp.d();
  const PointSet<Scalar> rows = lp.rows_as_points();
  OracleVerdict<Scalar> out;

  struct Vertex {
    std::vector<Index> basis;
    Vector<Scalar> x;
    double value;
  };
  std::vector<Vertex> feasible;
  bool feasible_ambiguous = false;
  bool any_vertex = false;
  for_each_subset(n, d, opt.subset_cap, [&](const std::vector<Index>& idx) {
    auto sys = FacetSystem<Scalar>::factor(rows, idx, opt.tol);
    if (!sys) return;
    any_vertex = true;
    Vector<Scalar> bI(d);
    for (Index r = 0; r < d; ++r) bI(r) = lp.b(idx[static_cast<std::size_t>(r)]);
    Vector<Scalar> x = sys->solve(bI);
    const double xs = std::max(1.0, static_cast<double>(x.norm()));
    double viol = -std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k) {
      if (std::binary_search(idx.begin(), idx.end(), k)) continue;
      const double scale = static_cast<double>(lp.A.row(k).norm()) * xs + std::abs(static_cast<double>(lp.b(k)));
      viol = std::max(viol, static_cast<double>(lp.A.row(k).dot(x) - lp.b(k)) / scale);
    }
    if (viol > opt.band) return;
    if (viol >= -opt.band) {
      feasible_ambiguous = true;
      return;
    }
    feasible.push_back({idx, x, static_cast<double>(lp.z.dot(x))});
  });

  if (feasible.empty()) {
    if (feasible_ambiguous) {
      out.reason = "vertex feasibility within band";
      return out;
    }
    if (any_vertex) {
      out.status = Verdict::Infeasible;
      return out;
    }
    // Rank-deficient A: the feasible set has no vertices. Coarse grid search for a point with
    // positive minimum slack.
    if (d > 4) {
      out.reason = "rank-deficient system too large for grid search";
      return out;
    }
    double radius = 1;
    for (Index k = 0; k < n; ++k)
      radius = std::max(radius, 10.0 * std::abs(static_cast<double>(lp.b(k))) /
                                    std::max(1e-12, static_cast<double>(lp.A.row(k).norm())));
    const int steps = 21;
    double best_slack = -std::numeric_limits<double>::infinity();
    std::vector<int> c(static_cast<std::size_t>(d), 0);
    Vector<Scalar> x(d);
    while (true) {
      for (Index j = 0; j < d; ++j)
        x(j) = Scalar(-radius + 2.0 * radius * c[static_cast<std::size_t>(j)] / (steps - 1));
      best_slack = std::max(best_slack, static_cast<double>((lp.b - lp.A * x).minCoeff()));
      Index j = 0;
      while (j < d && ++c[static_cast<std::size_t>(j)] == steps) c[static_cast<std::size_t>(j++)] = 0;
      if (j == d) break;
    }
    if (best_slack > opt.band) {
      // Feasible without vertices: bounded only if z is orthogonal to the lineality space,
      // which is not decidable by this oracle.
      out.reason = "feasible set without vertices";
      return out;
    }
    out.status = best_slack < -opt.band ? Verdict::Infeasible : Verdict::Ambiguous;
    return out;
  }

  const double cm = cone_margin(rows, lp.z, opt);
  if (std::abs(cm) <= opt.band) {
    out.reason = "cone membership within band";
    return out;
  }
  if (cm < 0) {
    out.status = Verdict::Unbounded;
    return out;
  }
  if (feasible_ambiguous) {
    out.reason = "bounded, but a vertex is near-degenerate";
    return out;
  }

  std::sort(feasible.begin(), feasible.end(), [](const Vertex& a, const Vertex& b) { return a.value > b.value; });
  if (feasible.size() > 1) {
    const double gap = feasible[0].value - feasible[1].value;
    if (gap <= opt.band * std::max(1.0, std::abs(feasible[0].value))) {
      out.reason = "tied optimal vertices";
      return out;
    }
  }
  auto lam = cone_coefficients(rows, std::span<const Index>(feasible[0].basis), lp.z, opt.tol);
  if (!lam || detail::relative_min<Scalar>(*lam) < -opt.band) {
    out.reason = "optimality certificate failed";
    return out;
  }
  out.status = Verdict::Optimal;
  out.basis = feasible[0].basis;
  out.x_opt = feasible[0].x;
  out.value = feasible[0].value;
  return out;
}

/// Number of edges of the polygon Conv(points) cap E, counted as facets of Conv(points) whose
/// intersection with the plane is a segment of positive length.
template <typename Scalar>
int section_edge_count_bruteforce(const Matrix<Scalar>& points, const SweepPlane<Scalar>& plane,
                                  const Options& opt = {}) {
  const Index d = points.rows(), n = points.cols();
  const double extent = std::max(1.0, static_cast<double>(points.cwiseAbs().maxCoeff()));
  const double side_tol = 1e3 * opt.tol.eps_feas * extent;
  int count = 0;
  for_each_subset(n, d, opt.subset_cap, [&](const std::vector<Index>& idx) {
    Matrix<Scalar> diffs(d - 1, d);
    for (Index r = 1; r < d; ++r)
      diffs.row(r - 1) = (points.col(idx[static_cast<std::size_t>(r)]) - points.col(idx[0])).transpose();
    Eigen::FullPivLU<Matrix<Scalar>> lu(diffs);
    const Matrix<Scalar> ker = lu.kernel();
    if (ker.cols() != 1) return;
    const Vector<Scalar> normal = ker.col(0).normalized();
    const Scalar offset = normal.dot(points.col(idx[0]));
    const Vector<Scalar> side = points.transpose() * normal - Vector<Scalar>::Constant(n, offset);
    const bool below = side.maxCoeff() <= Scalar(side_tol);
    const bool above = side.minCoeff() >= Scalar(-side_tol);
    if (!below && !above) return;

    // Line E cap H in plane coordinates (s1, s2): p s1 + q s2 = offset.
    const double p = static_cast<double>(normal.dot(plane.basis1));
    const double q = static_cast<double>(normal.dot(plane.basis2));
    const double pq = p * p + q * q;
    if (pq <= 1e-20) return;
    const double c = static_cast<double>(offset);
    const Vector<Scalar> base = plane.basis1 * Scalar(c * p / pq) + plane.basis2 * Scalar(c * q / pq);
    const Vector<Scalar> dir = (plane.basis1 * Scalar(-q) + plane.basis2 * Scalar(p)) / Scalar(std::sqrt(pq));

    // Barycentric coordinates of base + r dir in the simplex conv(a_I).
    Matrix<Scalar> bary(d + 1, d);
    for (Index r = 0; r < d; ++r) {
      bary.col(r).head(d) = points.col(idx[static_cast<std::size_t>(r)]);
      bary(d, r) = Scalar(1);
    }
    Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(bary);
    Vector<Scalar> rhs0(d + 1), rhs1(d + 1);
    rhs0 << base, Scalar(1);
    rhs1 << dir, Scalar(0);
    const Vector<Scalar> mu0 = qr.solve(rhs0);
    const Vector<Scalar> mu1 = qr.solve(rhs1);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < d; ++i) {
      const double a0 = static_cast<double>(mu0(i)), a1 = static_cast<double>(mu1(i));
      if (std::abs(a1) <= 1e-14) {
        if (a0 < 0) return;
        continue;
      }
      const double r = -a0 / a1;
      if (a1 > 0) lo = std::max(lo, r);
      else hi = std::min(hi, r);
    }
    if (hi - lo > 1e3 * opt.tol.eps_feas * extent) ++count;
  });
  return count;
}

/// Facets of Conv(points) as outward (normal, offset) pairs, used for membership checks.
template <typename Scalar>
std::vector<std::pair<Vector<Scalar>, Scalar>> hull_halfspaces(const Matrix<Scalar>& points, const Options& opt = {}) {
  const Index d = points.rows(), n = points.cols();
  const double extent = std::max(1.0, static_cast<double>(points.cwiseAbs().maxCoeff()));
  const double side_tol = 1e3 * opt.tol.eps_feas * extent;
  std::vector<std::pair<Vector<Scalar>, Scalar>> out;
  for_each_subset(n, d, opt.subset_cap, [&](const std::vector<Index>& idx) {
    Matrix<Scalar> diffs(d - 1, d);
    for (Index r = 1; r < d; ++r)
      diffs.row(r - 1) = (points.col(idx[static_cast<std::size_t>(r)]) - points.col(idx[0])).transpose();
    Eigen::FullPivLU<Matrix<Scalar>> lu(diffs);
    const Matrix<Scalar> ker = lu.kernel();
    if (ker.cols() != 1) return;
    Vector<Scalar> normal = ker.col(0).normalized();
    Scalar offset = normal.dot(points.col(idx[0]));
    const Vector<Scalar> side = points.transpose() * normal - Vector<Scalar>::Constant(n, offset);
    if (side.minCoeff() >= Scalar(-side_tol)) {
      normal = -normal;
      offset = -offset;
    } else if (side.maxCoeff() > Scalar(side_tol)) {
      return;
    }
    out.emplace_back(normal, offset);
  });
  return out;
}

}  // namespace shadowlp::oracle
