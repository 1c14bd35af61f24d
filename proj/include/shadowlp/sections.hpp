#pragma once

// Edge counts of planar sections Conv(a_1..a_n) cap E, measured with the walker itself: move the
// origin into the slice, find one facet with phase-I, then sweep the full circle of E.

#include "shadowlp/interpolate.hpp"

namespace shadowlp {

struct SliceInterior {
  VectorXd point;     // x0 in E, ambient coordinates
  double margin = 0;  // min distance from x0 to the section boundary along +-basis1, +-basis2
  bool degenerate = false;
};

/// A point deep inside the section polygon: the centroid of at least three non-collinear
/// vertices of the polygon, each found as the solution of a support-function LP solved by
/// solve_lp. Degenerate when the slice is empty, lower-dimensional, or thinner than 10 eps_feas.
SliceInterior interior_point_in_slice(const MatrixXd& points, const SweepPlane<double>& plane, RandomStream& rng,
                                      const SolveOptions& opts = {});

struct SectionReport {
  int edge_count = 0;
  VectorXd interior_point;
  std::vector<FacetIndexSet<double>> facets;
  bool degenerate = false;
  WalkOutcome<double> sweep;
};

SectionReport section_edges(const MatrixXd& points, const SweepPlane<double>& plane, RandomStream& rng,
                            const SolveOptions& opts = {});

}  // namespace shadowlp
