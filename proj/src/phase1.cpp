#include "shadowlp/phase1.hpp"

#include <cmath>
#include <numbers>

namespace shadowlp::phase1 {

const char* to_string(AddFailure f) {
  switch (f) {
    case AddFailure::NotInCone: return "not_in_cone";
    case AddFailure::TooClose: return "too_close";
    case AddFailure::Singular: return "singular";
  }
  return "?";
}

SimplexFrame simplex_vertices(Index d, double ell) {
  if (d < 2) throw std::invalid_argument("simplex_vertices: d must be at least 2");
  if (!(ell > 0)) throw std::invalid_argument("simplex_vertices: ell must be positive");
  SimplexFrame frame;
  frame.z0_prime = VectorXd::Unit(d, d - 1);

  // Vertices of the standard simplex centred in the plane orthogonal to the all-ones vector.
  const double dd = static_cast<double>(d);
  MatrixXd f = MatrixXd::Identity(d, d) - MatrixXd::Constant(d, d, 1.0 / dd);
  f *= ell / std::sqrt((dd - 1.0) / dd);

  // Householder reflection taking 1/sqrt(d) onto z0'.
  const VectorXd ones = VectorXd::Constant(d, 1.0 / std::sqrt(dd));
  const VectorXd v = ones - frame.z0_prime;
  const MatrixXd reflect = MatrixXd::Identity(d, d) - 2.0 * v * v.transpose() / v.squaredNorm();

  frame.vertices = (reflect * f).colwise() + frame.z0_prime;
  return frame;
}

AddOutcome add_constraints(const MatrixXd& points, double M0, const MatrixXd& U, RandomStream& rng,
                           const Params& params, const Tolerance& tol) {
  const Index d = points.rows();
  if (U.rows() != d || U.cols() != d) throw std::invalid_argument("add_constraints: rotation shape");
  const double magnitude = points.cols() > 0 ? points.colwise().norm().maxCoeff() : 0.0;
  if (M0 < magnitude) throw std::invalid_argument("add_constraints: M0 below max point norm");

  const SimplexFrame frame = simplex_vertices(d, params.ell);
  AddOutcome out;
  AddedBlock& blk = out.block;
  blk.M0 = M0;
  blk.U = U;
  blk.z0 = 2.0 * M0 * (U * frame.z0_prime);
  blk.centers = 2.0 * M0 * (U * frame.vertices);
  blk.added_points = blk.centers;
  const double sd = 2.0 * M0 * params.sigma1;
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) blk.added_points(i, j) += sd * rng.gaussian();

  const PointSet<double> added(blk.added_points);
  std::vector<Index> all(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) all[static_cast<std::size_t>(i)] = i;
  auto sys = FacetSystem<double>::factor(added, all, tol);
  if (!sys) {
    out.failure = AddFailure::Singular;
    return out;
  }
  if (!coefficients_nonnegative<double>(sys->solve_transposed(blk.z0), tol.eps_feas)) {
    out.failure = AddFailure::NotInCone;
    return out;
  }
  const VectorXd h = sys->solve(VectorXd::Ones(d));
  if (1.0 / h.norm() < magnitude) out.failure = AddFailure::TooClose;
  return out;
}

namespace {

VectorXd default_rotation(const VectorXd& z) {
  for (Index k = 0; k < z.size(); ++k) {
    VectorXd e = VectorXd::Unit(z.size(), k);
    e -= z * (z.dot(e) / z.squaredNorm());
    if (e.norm() > 1e-8) return e;
  }
  throw std::invalid_argument("default_rotation: no axis independent of z");
}

}  // namespace

UnitResult solve_unit(const MatrixXd& points, const VectorXd& z, RandomStream& rng, const UnitOptions& opts) {
  const Index d = points.rows(), n = points.cols();
  if (d < 2 || n <= d) throw std::invalid_argument("solve_unit: need n > d >= 2");
  if (z.size() != d || !(z.norm() > 0)) throw std::invalid_argument("solve_unit: bad objective");
  const Tolerance& tol = opts.solve.tol;
  const Params params = opts.params.value_or(Params::standard(d, n));

  UnitResult result;
  const double magnitude = points.colwise().norm().maxCoeff();
  if (!(magnitude > 0)) return result;  // every constraint reads 0 <= 1
  const double M0 = m0(magnitude);

  PointSet<double> combined(MatrixXd(d, n + d));
  combined.points.leftCols(n) = points;
  std::vector<Index> start_idx(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) start_idx[static_cast<std::size_t>(i)] = n + i;

  for (int it = 0; it < opts.solve.retry_cap; ++it) {
    ++result.iterations;
    RandomStream iter_rng = rng.derive(StreamTag::Phase1Iteration, static_cast<std::uint64_t>(it));
    RandomStream haar_rng = iter_rng.derive(StreamTag::Haar);
    RandomStream smooth_rng = iter_rng.derive(StreamTag::Smoothing);
    const MatrixXd U = haar_rotation(d, haar_rng);
    const AddOutcome add = add_constraints(points, M0, U, smooth_rng, params, tol);
    IterationRecord rec;
    rec.iteration = it;
    rec.add = &add;
    if (!add.ok()) {
      if (opts.on_iteration) opts.on_iteration(rec);
      continue;
    }

    combined.points.rightCols(d) = add.block.added_points;
    auto start = make_facet(combined, start_idx, tol);
    if (!start) throw NumericalError("solve_unit: added block singular after passing checks");
    const SweepPlane<double> plane = SweepPlane<double>::through(add.block.z0, z, default_rotation(z));
    double target = plane.angle_of(z);  // in [0, pi] up to rounding at either end
    if (target < 0) target = target < -1.0 ? target + 2.0 * std::numbers::pi : 0.0;
    const auto w = walk(combined, plane, *start, 0.0, target, tol, opts.solve.walk);
    if (opts.solve.on_walk) opts.solve.on_walk(combined, w);
    result.pivots_total += w.pivots;
    rec.walk_status = w.status;

    if (w.status == WalkStatus::Unbounded) {
      rec.accepted = true;
      if (opts.on_iteration) opts.on_iteration(rec);
      result.status = UnitStatus::Unbounded;
      return result;
    }
    const auto& f = w.final_facet();
    const bool uses_added = std::any_of(f.indices.begin(), f.indices.end(), [&](Index k) { return k >= n; });
    rec.accepted = !uses_added;
    if (opts.on_iteration) opts.on_iteration(rec);
    if (uses_added) continue;
    result.status = UnitStatus::OptimalFacet;
    result.facet = f;
    return result;
  }
  throw GaveUp("solve_unit: retry cap reached");
}

std::optional<VectorXd> numb_halfspace_witness(const MatrixXd& points, const std::vector<Index>& optimal_facet,
                                               const Tolerance& tol) {
  const PointSet<double> pts(points);
  return facet_normal<double>(pts, optimal_facet, tol);
}

}  // namespace shadowlp::phase1
