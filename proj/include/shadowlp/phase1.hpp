#pragma once

// Randomized phase-I for unit programs max <z, x> s.t. <a_i, x> <= 1: add d random constraints
// whose facet is known to be optimal for a random objective z0, then walk from z0 to z.

#include "shadowlp/random.hpp"
#include "shadowlp/shadow_walk.hpp"

#include <functional>

namespace shadowlp {

/// Hooks and limits shared by the phase-I and two-phase solvers.
struct SolveOptions {
  Tolerance tol;
  WalkOptions walk;
  int retry_cap = 1000;
  /// Called after every walk with the point set it ran on.
  std::function<void(const PointSet<double>&, const WalkOutcome<double>&)> on_walk;
};

class GaveUp : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

namespace phase1 {

struct Params {
  double ell = 0;
  double sigma1 = 0;

  static Params standard(Index d, Index n) { return {shadowlp::ell(d), shadowlp::sigma1(d, n)}; }
};

/// A regular simplex in the hyperplane {<z0', x> = 1}: centroid z0' = e_d, circumradius ell.
struct SimplexFrame {
  VectorXd z0_prime;
  MatrixXd vertices;  // d x d, one vertex per column
};

SimplexFrame simplex_vertices(Index d, double ell);

enum class AddFailure { NotInCone, TooClose, Singular };

const char* to_string(AddFailure f);

struct AddedBlock {
  MatrixXd added_points;  // d x d, smoothed vertices a_{n+1..n+d}
  VectorXd z0;            // 2 M0 U z0'
  double M0 = 0;
  MatrixXd U;
  MatrixXd centers;  // 2 M0 U a'_i before smoothing
};

struct AddOutcome {
  AddedBlock block;
  std::optional<AddFailure> failure;

  bool ok() const { return !failure.has_value(); }
};

/// Rotates and dilates the fixed simplex by 2 M0 U, smooths its vertices with standard deviation
/// 2 M0 sigma1, and checks (a) z0 in cone(added) and (b) dist(0, aff(added)) >= max_i |a_i|.
AddOutcome add_constraints(const MatrixXd& points, double M0, const MatrixXd& U, RandomStream& rng,
                           const Params& params, const Tolerance& tol = {});

enum class UnitStatus { OptimalFacet, Unbounded };

struct UnitResult {
  UnitStatus status = UnitStatus::Unbounded;
  std::optional<FacetIndexSet<double>> facet;  // indices refer to the original points only
  std::size_t pivots_total = 0;
  int iterations = 0;
};

/// One pass of the retry loop, for instrumentation.
struct IterationRecord {
  int iteration = 0;
  const AddOutcome* add = nullptr;
  std::optional<WalkStatus> walk_status;
  bool accepted = false;
};

struct UnitOptions {
  SolveOptions solve;
  std::optional<Params> params;  // defaults to Params::standard(d, n)
  std::function<void(const IterationRecord&)> on_iteration;
};

/// Solves the unit program with objective z over the columns of `points` (d x n).
/// Throws GaveUp after retry_cap failed iterations.
UnitResult solve_unit(const MatrixXd& points, const VectorXd& z, RandomStream& rng, const UnitOptions& opts = {});

/// Normal of the affine span of the optimal facet: points below it can be added without
/// changing the program.
std::optional<VectorXd> numb_halfspace_witness(const MatrixXd& points, const std::vector<Index>& optimal_facet,
                                               const Tolerance& tol = {});

}  // namespace phase1
}  // namespace shadowlp
