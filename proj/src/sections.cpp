#include "shadowlp/sections.hpp"

#include <numbers>

namespace shadowlp {

namespace {

using Vec2 = Eigen::Vector2d;

/// Orthonormal basis of the orthogonal complement of E (d x (d-2)).
MatrixXd complement_basis(const SweepPlane<double>& plane) {
  const Index d = plane.basis1.size();
  MatrixXd span(d, 2);
  span << plane.basis1, plane.basis2;
  Eigen::HouseholderQR<MatrixXd> qr(span);
  const MatrixXd q = qr.householderQ() * MatrixXd::Identity(d, d);
  return q.rightCols(d - 2);
}

/// Vertex of the section polygon maximizing <c, x>, in plane coordinates; empty if the slice is
/// empty. Support LP in (mu, tau): minimize tau s.t. <c + V mu, a_i> <= tau, whose optimal basis
/// carries the convex weights of the primal vertex.
std::optional<Vec2> support_vertex(const MatrixXd& points, const SweepPlane<double>& plane, const MatrixXd& comp,
                                   const VectorXd& c, RandomStream& rng, const SolveOptions& opts) {
  const Index d = points.rows(), n = points.cols();
  LP lp;
  lp.A.resize(n, d - 1);
  lp.A.leftCols(d - 2) = points.transpose() * comp;
  lp.A.col(d - 2).setConstant(-1.0);
  lp.b = -(points.transpose() * c);
  lp.z = -VectorXd::Unit(d - 1, d - 2);
  const LPResult r = solve_lp(lp, rng, opts);
  if (r.status == LPStatus::Unbounded) return std::nullopt;
  if (r.status != LPStatus::Optimal) throw NumericalError("support_vertex: support program infeasible");

  const PointSet<double> rows(lp.A.transpose());
  auto w = cone_coefficients(rows, std::span<const Index>(r.basis), VectorXd(lp.z), opts.tol);
  if (!w) throw NumericalError("support_vertex: singular basis");
  VectorXd x = VectorXd::Zero(d);
  for (std::size_t i = 0; i < r.basis.size(); ++i) x += (*w)(static_cast<Index>(i)) * points.col(r.basis[i]);
  return Vec2(x.dot(plane.basis1), x.dot(plane.basis2));
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool add_distinct(std::vector<Vec2>& verts, const Vec2& v, double tol) {
  for (const auto& u : verts)
    if ((u - v).norm() <= tol) return false;
  verts.push_back(v);
  return true;
}

bool has_area(const std::vector<Vec2>& verts, double tol) {
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j)
      for (std::size_t k = j + 1; k < verts.size(); ++k)
        if (std::abs(cross(verts[j] - verts[i], verts[k] - verts[i])) > tol) return true;
  return false;
}

}  // namespace

SliceInterior interior_point_in_slice(const MatrixXd& points, const SweepPlane<double>& plane, RandomStream& rng,
                                      const SolveOptions& opts) {
  const Index d = points.rows(), n = points.cols();
  if (n <= d) throw std::invalid_argument("interior_point_in_slice: need n > d");
  if (plane.basis1.size() != d) throw std::invalid_argument("interior_point_in_slice: plane dimension mismatch");
  const double extent = std::max(1.0, points.cwiseAbs().maxCoeff());
  SliceInterior out;

  if (d == 2) {
    out.point = points.rowwise().mean();
  } else {
    const MatrixXd comp = complement_basis(plane);
    std::vector<Vec2> verts;
    const double dup_tol = 1e-9 * extent;
    std::uint64_t query = 0;
    auto probe = [&](const VectorXd& c) {
      RandomStream qrng = rng.derive(StreamTag::Probe, query++);
      auto v = support_vertex(points, plane, comp, c, qrng, opts);
      if (v) add_distinct(verts, *v, dup_tol);
      return v.has_value();
    };
    for (const VectorXd& c : {VectorXd(plane.basis1), VectorXd(-plane.basis1), VectorXd(plane.basis2),
                              VectorXd(-plane.basis2)}) {
      if (!probe(c)) {
        out.degenerate = true;  // empty slice
        return out;
      }
    }
    if (!has_area(verts, dup_tol * extent) && verts.size() >= 2) {
      const Vec2 edge = verts[1] - verts[0];
      const Vec2 normal2(-edge.y(), edge.x());
      const VectorXd c = (plane.basis1 * normal2.x() + plane.basis2 * normal2.y()).normalized();
      probe(c);
      probe(-c);
    }
    if (verts.size() < 3 || !has_area(verts, dup_tol * extent)) {
      out.degenerate = true;
      return out;
    }
    Vec2 centroid = Vec2::Zero();
    for (const auto& v : verts) centroid += v;
    centroid /= static_cast<double>(verts.size());
    out.point = plane.basis1 * centroid.x() + plane.basis2 * centroid.y();
  }

  // Margin by ray shooting from x0: the facet of the recentred polytope pierced by +-basis_k.
  const MatrixXd shifted = points.colwise() - out.point;
  double margin = std::numeric_limits<double>::infinity();
  std::uint64_t ray = 0;
  phase1::UnitOptions uo;
  uo.solve = opts;
  for (const VectorXd& dir : {VectorXd(plane.basis1), VectorXd(-plane.basis1), VectorXd(plane.basis2),
                              VectorXd(-plane.basis2)}) {
    RandomStream rrng = rng.derive(StreamTag::Plane, ray++);
    const phase1::UnitResult u = phase1::solve_unit(shifted, dir, rrng, uo);
    if (u.status == phase1::UnitStatus::Unbounded) {
      out.degenerate = true;
      out.margin = 0;
      return out;
    }
    margin = std::min(margin, 1.0 / u.facet->normal.dot(dir));
  }
  out.margin = margin;
  out.degenerate = !(margin > 10.0 * opts.tol.eps_feas * extent);
  return out;
}

SectionReport section_edges(const MatrixXd& points, const SweepPlane<double>& plane, RandomStream& rng,
                            const SolveOptions& opts) {
  SectionReport report;
  RandomStream interior_rng = rng.derive(StreamTag::Centers, 0);
  const SliceInterior interior = interior_point_in_slice(points, plane, interior_rng, opts);
  report.interior_point = interior.point;
  if (interior.degenerate) {
    report.degenerate = true;
    return report;
  }
  const MatrixXd shifted = points.colwise() - interior.point;
  RandomStream start_rng = rng.derive(StreamTag::Phase1Iteration, 0);
  phase1::UnitOptions uo;
  uo.solve = opts;
  const phase1::UnitResult start = phase1::solve_unit(shifted, plane.basis1, start_rng, uo);
  if (start.status != phase1::UnitStatus::OptimalFacet)
    throw NumericalError("section_edges: recentred polytope does not contain the origin");

  const PointSet<double> pts(shifted);
  report.sweep = sweep_full(pts, plane, *start.facet, 0.0, opts.tol, opts.walk);
  if (report.sweep.status == WalkStatus::Unbounded)
    throw NumericalError("section_edges: sweep left the polytope");
  if (opts.on_walk) opts.on_walk(pts, report.sweep);
  report.facets = distinct_facets(report.sweep);
  report.edge_count = static_cast<int>(report.facets.size());
  return report;
}

}  // namespace shadowlp
