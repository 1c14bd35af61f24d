#include "shadowlp/interpolate.hpp"

#include <numbers>

namespace shadowlp {

const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::Infeasible: return "infeasible";
  }
  return "?";
}

IntLPLift lift(const LP& lp) {
  lp.validate();
  const Index n = lp.n(), d = lp.d();
  IntLPLift out;
  MatrixXd pts(d + 1, n + 1);
  pts.topLeftCorner(d, n) = lp.A.transpose();
  pts.bottomLeftCorner(1, n) = (VectorXd::Ones(n) - lp.b).transpose();
  pts.col(n) = VectorXd::Unit(d + 1, d);
  out.points = PointSet<double>(std::move(pts), VectorXd(-VectorXd::Unit(d + 1, d)));
  out.top_index = n;
  out.infinity_index = n + 1;
  out.z_bar0 = -VectorXd::Unit(d + 1, d);
  out.z_bar = VectorXd::Unit(d + 1, d);
  out.u_bar = VectorXd::Zero(d + 1);
  out.u_bar.head(d) = lp.z;
  return out;
}

std::optional<FacetIndexSet<double>> initial_limit_facet(const IntLPLift& lifted, const std::vector<Index>& unit_solution,
                                                         const Tolerance& tol) {
  if (static_cast<Index>(unit_solution.size()) != lifted.d())
    throw std::invalid_argument("initial_limit_facet: unit solution must have d indices");
  std::vector<Index> idx = unit_solution;
  idx.push_back(lifted.infinity_index);
  return make_facet(lifted.points, std::move(idx), tol);
}

FinalClass classify_final(const FacetIndexSet<double>& final_facet, const IntLPLift& lifted) {
  FinalClass out;
  if (!final_facet.contains(lifted.top_index)) return out;
  out.status = LPStatus::Optimal;
  for (Index k : final_facet.indices)
    if (k != lifted.top_index) out.basis.push_back(k);
  return out;
}

Phase2Outcome run_phase2(const IntLPLift& lifted, const std::vector<Index>& unit_solution, const SolveOptions& opts) {
  auto start = initial_limit_facet(lifted, unit_solution, opts.tol);
  if (!start) throw NumericalError("phase-II: phase-I facet is singular in the lifted program");
  SweepPlane<double> plane;
  plane.basis1 = lifted.u_bar.normalized();
  plane.basis2 = lifted.z_bar;
  constexpr double half_pi = 0.5 * std::numbers::pi;
  Phase2Outcome out;
  out.walk = walk(lifted.points, plane, *start, -half_pi, half_pi, opts.tol, opts.walk);
  if (opts.on_walk) opts.on_walk(lifted.points, out.walk);
  if (out.walk.status == WalkStatus::Unbounded)
    throw NumericalError("phase-II: lifted program unbounded although the unit program is bounded");
  out.classification = classify_final(out.walk.final_facet(), lifted);
  return out;
}

namespace {

struct PhaseTwoResult {
  LPStatus status;
  std::vector<Index> basis;
  std::size_t pivots;
};

PhaseTwoResult phase_two(const LP& lp, const std::vector<Index>& unit_solution, const SolveOptions& opts) {
  const IntLPLift lifted = lift(lp);
  const Phase2Outcome p2 = run_phase2(lifted, unit_solution, opts);
  return {p2.classification.status, p2.classification.basis, p2.walk.pivots};
}

phase1::UnitOptions unit_options(const SolveOptions& opts) {
  phase1::UnitOptions u;
  u.solve = opts;
  return u;
}

}  // namespace

LPResult solve_lp(const LP& lp, RandomStream& rng, const SolveOptions& opts) {
  lp.validate();
  const MatrixXd rows = lp.A.transpose();
  LPResult result;

  RandomStream phase1_rng = rng.derive(StreamTag::Trial, 0);
  const phase1::UnitResult unit = phase1::solve_unit(rows, lp.z, phase1_rng, unit_options(opts));
  result.pivots_phase1 = unit.pivots_total;
  result.phase1_iterations = unit.iterations;

  if (unit.status == phase1::UnitStatus::Unbounded) {
    // Unbounded or infeasible. Re-solve with a random positive combination of the rows.
    result.feasibility_probe = true;
    RandomStream weights = rng.derive(StreamTag::Probe, 1);
    VectorXd w(lp.n());
    for (Index i = 0; i < lp.n(); ++i) w(i) = 0.5 + weights.uniform();
    LP probe = lp;
    probe.z = lp.A.transpose() * w;
    RandomStream probe_rng = rng.derive(StreamTag::Probe, 0);
    const phase1::UnitResult pu = phase1::solve_unit(rows, probe.z, probe_rng, unit_options(opts));
    result.pivots_phase1 += pu.pivots_total;
    result.phase1_iterations += pu.iterations;
    if (pu.status != phase1::UnitStatus::OptimalFacet)
      throw NumericalError("solve_lp: probe objective reported unbounded");
    const PhaseTwoResult p2 = phase_two(probe, pu.facet->indices, opts);
    result.pivots_phase2 = p2.pivots;
    result.status = p2.status == LPStatus::Optimal ? LPStatus::Unbounded : LPStatus::Infeasible;
    return result;
  }

  const PhaseTwoResult p2 = phase_two(lp, unit.facet->indices, opts);
  result.pivots_phase2 = p2.pivots;
  result.status = p2.status;
  if (p2.status != LPStatus::Optimal) return result;

  result.basis = p2.basis;
  const PointSet<double> rowset(rows);
  auto sys = FacetSystem<double>::factor(rowset, result.basis, opts.tol);
  if (!sys) throw NumericalError("solve_lp: singular optimal basis");
  VectorXd bB(lp.d());
  for (Index r = 0; r < lp.d(); ++r) bB(r) = lp.b(result.basis[static_cast<std::size_t>(r)]);
  result.x_opt = sys->solve(bB);
  return result;
}

}  // namespace shadowlp
