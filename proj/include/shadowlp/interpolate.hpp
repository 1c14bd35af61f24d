#pragma once

// Two-phase solver for general programs max <z, x> s.t. A x <= b. Phase-II walks the unit
// program in dimension d + 1 with constraint points (a_i, 1 - b_i), (0, 1) and the vertex at
// infinity in direction (0, -1), rotating the objective from (0, -1) through (z, 0) to (0, 1).

#include "shadowlp/phase1.hpp"

namespace shadowlp {

struct IntLPLift {
  PointSet<double> points;  // n lifted rows, then the top point (0, 1); infinite vertex (0, -1)
  Index top_index = 0;
  Index infinity_index = 0;
  VectorXd z_bar0;  // (0, -1)
  VectorXd z_bar;   // (0, 1)
  VectorXd u_bar;   // (z, 0)

  Index n() const { return top_index; }
  Index d() const { return points.dim() - 1; }
};

IntLPLift lift(const LP& lp);

/// Phase-I solution plus the vertex at infinity: the facet pierced by z_bar0 + eps u_bar for
/// small eps > 0. Empty if that index set is singular.
std::optional<FacetIndexSet<double>> initial_limit_facet(const IntLPLift& lifted, const std::vector<Index>& unit_solution,
                                                         const Tolerance& tol = {});

enum class LPStatus { Optimal, Unbounded, Infeasible };

const char* to_string(LPStatus s);

struct FinalClass {
  LPStatus status = LPStatus::Infeasible;
  std::vector<Index> basis;
};

/// Optimal with basis = facet \ {top} iff the top point (t = 1 active) is in the final facet.
FinalClass classify_final(const FacetIndexSet<double>& final_facet, const IntLPLift& lifted);

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  std::vector<Index> basis;
  VectorXd x_opt;
  std::size_t pivots_phase1 = 0;
  std::size_t pivots_phase2 = 0;
  int phase1_iterations = 0;
  bool feasibility_probe = false;  // a second solve was needed to separate unbounded from infeasible

  double objective(const LP& lp) const { return lp.z.dot(x_opt); }
  std::size_t pivots_total() const { return pivots_phase1 + pivots_phase2; }
};

/// Phase-II alone: walk the lifted program from the phase-I facet and classify the end point.
/// Exposed for tests; returns the walk as well.
struct Phase2Outcome {
  FinalClass classification;
  WalkOutcome<double> walk;
};

Phase2Outcome run_phase2(const IntLPLift& lifted, const std::vector<Index>& unit_solution, const SolveOptions& opts = {});

/// Solves lp. Throws NumericalError (or a subclass) when tolerances break down.
LPResult solve_lp(const LP& lp, RandomStream& rng, const SolveOptions& opts = {});

}  // namespace shadowlp
