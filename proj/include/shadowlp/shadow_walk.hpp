#pragma once

// Polar shadow-vertex walk: track the facet of P = Conv(0, a_1..a_n) pierced by the
// direction q(theta) = basis1 cos(theta) + basis2 sin(theta) while theta increases.

#include "shadowlp/geometry.hpp"

#include <cstddef>
#include <numbers>

namespace shadowlp {

class CycleSuspected : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Orthonormal pair spanning the rotation plane E.
template <typename Scalar>
struct SweepPlane {
  Vector<Scalar> basis1;
  Vector<Scalar> basis2;

  Vector<Scalar> at(double theta) const {
    return basis1 * Scalar(std::cos(theta)) + basis2 * Scalar(std::sin(theta));
  }

  /// Angle of a vector of E in this parametrization.
  double angle_of(const Vector<Scalar>& v) const {
    return std::atan2(static_cast<double>(basis2.dot(v)), static_cast<double>(basis1.dot(v)));
  }

  bool orthonormal(double eps) const {
    return std::abs(static_cast<double>(basis1.dot(basis2))) <= eps &&
           std::abs(static_cast<double>(basis1.norm()) - 1.0) <= eps &&
           std::abs(static_cast<double>(basis2.norm()) - 1.0) <= eps;
  }

  /// Plane through `from` and `toward`, oriented so that rotating from `from` reaches `toward`
  /// after an angle in [0, pi]. When the two are collinear the rotation direction `rotation`
  /// fixes the orientation; it must not be parallel to `from`.
  static SweepPlane through(const Vector<Scalar>& from, const Vector<Scalar>& toward,
                            const std::optional<Vector<Scalar>>& rotation = std::nullopt,
                            double collinear_eps = 1e-12) {
    SweepPlane plane;
    const Scalar nf = from.norm();
    if (!(nf > Scalar(0))) throw std::invalid_argument("SweepPlane: zero start direction");
    plane.basis1 = from / nf;
    Vector<Scalar> w = toward - plane.basis1 * plane.basis1.dot(toward);
    if (static_cast<double>(w.norm()) <= collinear_eps * std::max(1.0, static_cast<double>(toward.norm()))) {
      if (!rotation) throw std::invalid_argument("SweepPlane: collinear directions need a rotation direction");
      w = *rotation - plane.basis1 * plane.basis1.dot(*rotation);
      if (!(static_cast<double>(w.norm()) > collinear_eps * static_cast<double>(rotation->norm())))
        throw std::invalid_argument("SweepPlane: rotation direction parallel to start direction");
    }
    plane.basis2 = w / w.norm();
    // One re-orthogonalization pass.
    plane.basis2 -= plane.basis1 * plane.basis1.dot(plane.basis2);
    plane.basis2.normalize();
    return plane;
  }
};

enum class WalkStatus { OptimalFacet, Unbounded, ExhaustedArc };

inline const char* to_string(WalkStatus s) {
  switch (s) {
    case WalkStatus::OptimalFacet: return "optimal_facet";
    case WalkStatus::Unbounded: return "unbounded";
    case WalkStatus::ExhaustedArc: return "exhausted_arc";
  }
  return "?";
}

/// A visited facet and the half-open angular interval [theta_start, theta_end) on which
/// q(theta) pierced it.
template <typename Scalar>
struct TraceEntry {
  FacetIndexSet<Scalar> facet;
  double theta_start = 0;
  double theta_end = 0;
};

template <typename Scalar>
struct WalkOutcome {
  WalkStatus status = WalkStatus::ExhaustedArc;
  std::size_t pivots = 0;
  std::vector<TraceEntry<Scalar>> trace;

  const FacetIndexSet<Scalar>& final_facet() const { return trace.back().facet; }
};

struct WalkOptions {
  std::size_t iteration_cap = 0;   // 0 selects 10 n d + 1000
  bool invert_ratio_test = false;  // mutation-testing hook: flips the sign in the entering rule
};

struct ExitEvent {
  double theta = 0;
  Index leaving = -1;
};

namespace detail {

inline double wrap_two_pi(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0) a += two_pi;
  return a;
}

// Relative slack allowed when asserting that q(theta_now) pierces the current facet.
inline constexpr double kPiercingSlack = 1e-7;

}  // namespace detail

/// First angle after theta_now at which q(theta) leaves the cone of `facet`, and the index whose
/// cone coefficient crosses zero there. Empty if no coefficient ever decreases through zero.
/// Each coefficient is lambda_j(theta) = alpha_j cos(theta) + beta_j sin(theta), so its
/// downward zero crossing is found in closed form.
template <typename Scalar>
std::optional<ExitEvent> exit_angle(const PointSet<Scalar>& pts, const FacetIndexSet<Scalar>& facet,
                                    const SweepPlane<Scalar>& plane, double theta_now,
                                    const Tolerance& tol = {}) {
  auto sys = FacetSystem<Scalar>::factor(pts, facet.indices, tol);
  if (!sys) throw NumericalError("exit_angle: singular facet " + format_indices(facet.indices));
  const Vector<Scalar> alpha = sys->solve_transposed(plane.basis1);
  const Vector<Scalar> beta = sys->solve_transposed(plane.basis2);
  const Scalar c = Scalar(std::cos(theta_now));
  const Scalar s = Scalar(std::sin(theta_now));
  const Vector<Scalar> now = alpha * c + beta * s;
  if (!coefficients_nonnegative(now, detail::kPiercingSlack))
    throw NumericalError("exit_angle: q(theta) does not pierce facet " + format_indices(facet.indices));

  Scalar rmax = 0;
  for (Index j = 0; j < alpha.size(); ++j) rmax = std::max(rmax, Scalar(std::hypot(alpha(j), beta(j))));

  std::optional<ExitEvent> best;
  double best_delta = 0;
  for (Index j = 0; j < alpha.size(); ++j) {
    const double a = static_cast<double>(alpha(j));
    const double b = static_cast<double>(beta(j));
    if (std::hypot(a, b) <= 1e-14 * static_cast<double>(rmax)) continue;  // identically zero on E
    const double phi = std::atan2(b, a);
    double delta = detail::wrap_two_pi(phi + 0.5 * std::numbers::pi - theta_now);
    // A crossing just behind theta_now (rounding) means the coefficient is leaving right now.
    if (delta > 1.5 * std::numbers::pi) delta = 0;
    if (!best || delta < best_delta) {
      best = ExitEvent{theta_now + delta, facet.indices[static_cast<std::size_t>(j)]};
      best_delta = delta;
    }
  }
  return best;
}

/// Minimal-ratio pivot across the ridge facet \ {leaving}: rotate the supporting hyperplane about
/// the ridge until it meets the next point. Returns the adjacent facet, or empty when the ridge
/// is not shared with any facet away from the origin (the direction family leaves cone(a_i)).
template <typename Scalar>
std::optional<FacetIndexSet<Scalar>> pivot(const PointSet<Scalar>& pts, const FacetIndexSet<Scalar>& facet,
                                           Index leaving, const Tolerance& tol = {},
                                           const WalkOptions& opts = {}) {
  auto sys = FacetSystem<Scalar>::factor(pts, facet.indices, tol);
  if (!sys) throw NumericalError("pivot: singular facet " + format_indices(facet.indices));
  const auto pos = std::find(facet.indices.begin(), facet.indices.end(), leaving);
  if (pos == facet.indices.end()) throw std::invalid_argument("pivot: leaving index not in facet");

  const Index d = pts.dim();
  Vector<Scalar> e = Vector<Scalar>::Zero(d);
  e(pos - facet.indices.begin()) = Scalar(-1);
  const Vector<Scalar> g = sys->solve(e);
  const Vector<Scalar> h = sys->solve(facet_levels(pts, std::span<const Index>(facet.indices)));

  const Scalar sign = opts.invert_ratio_test ? Scalar(-1) : Scalar(1);
  const Vector<Scalar> gdot = pts.points.transpose() * g;
  const Vector<Scalar> hdot = pts.points.transpose() * h;

  Index entering = -1;
  Scalar best = 0;
  auto consider = [&](Index k, Scalar gk, Scalar hk) {
    const Scalar denom = sign * gk;
    if (!(denom > Scalar(tol.eps_feas))) return;
    const Scalar ratio = (pts.level(k) - hk) / denom;
    if (entering < 0 || ratio < best) {
      entering = k;
      best = ratio;
    }
  };
  for (Index k = 0; k < pts.size(); ++k) {
    if (facet.contains(k)) continue;
    if (pts.is_infinite(k)) {
      consider(k, pts.infinite_dir->dot(g), pts.infinite_dir->dot(h));
    } else {
      consider(k, gdot(k), hdot(k));
    }
  }
  if (entering < 0) return std::nullopt;

  std::vector<Index> next = facet.indices;
  next[static_cast<std::size_t>(pos - facet.indices.begin())] = entering;
  auto out = make_facet(pts, std::move(next), tol);
  if (!out) throw NumericalError("pivot: singular facet after entering " + std::to_string(entering));
  return out;
}

namespace detail {

template <typename Scalar>
WalkOutcome<Scalar> run_walk(const PointSet<Scalar>& pts, const SweepPlane<Scalar>& plane,
                             const FacetIndexSet<Scalar>& start, double theta_start, double theta_target,
                             WalkStatus on_arrival, const Tolerance& tol, const WalkOptions& opts) {
  const std::size_t cap = opts.iteration_cap
                              ? opts.iteration_cap
                              : 10u * static_cast<std::size_t>(pts.size() * pts.dim()) + 1000u;
  WalkOutcome<Scalar> out;
  FacetIndexSet<Scalar> current = start;
  double theta = theta_start;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > cap) throw CycleSuspected("walk: iteration cap exceeded");
    const auto ev = exit_angle(pts, current, plane, theta, tol);
    const double exit_theta = ev ? ev->theta : std::numeric_limits<double>::infinity();
    if (exit_theta >= theta_target - tol.eps_angle) {
      out.trace.push_back({std::move(current), theta, theta_target});
      out.status = on_arrival;
      return out;
    }
    out.trace.push_back({current, theta, exit_theta});
    auto next = pivot(pts, current, ev->leaving, tol, opts);
    if (!next) {
      out.status = WalkStatus::Unbounded;
      return out;
    }
    current = std::move(*next);
    theta = exit_theta;
    ++out.pivots;
  }
}

}  // namespace detail

/// Rotates q from theta_start to theta_target starting at `start` (pierced by q(theta_start), or
/// its limit just after theta_start). Returns the limit facet as q approaches theta_target from
/// below, or Unbounded when the rotating direction leaves cone(a_i) before reaching the target.
template <typename Scalar>
WalkOutcome<Scalar> walk(const PointSet<Scalar>& pts, const SweepPlane<Scalar>& plane,
                         const FacetIndexSet<Scalar>& start, double theta_start, double theta_target,
                         const Tolerance& tol = {}, const WalkOptions& opts = {}) {
  if (!(theta_target >= theta_start)) throw std::invalid_argument("walk: target angle precedes start");
  return detail::run_walk(pts, plane, start, theta_start, theta_target, WalkStatus::OptimalFacet, tol, opts);
}

/// Full revolution [theta_start, theta_start + 2 pi). Requires 0 in the relative interior of the
/// section P cap E and no vertex at infinity.
template <typename Scalar>
WalkOutcome<Scalar> sweep_full(const PointSet<Scalar>& pts, const SweepPlane<Scalar>& plane,
                               const FacetIndexSet<Scalar>& start, double theta_start,
                               const Tolerance& tol = {}, const WalkOptions& opts = {}) {
  if (pts.has_infinite()) throw std::invalid_argument("sweep_full: vertex at infinity not supported");
  return detail::run_walk(pts, plane, start, theta_start, theta_start + 2.0 * std::numbers::pi,
                          WalkStatus::ExhaustedArc, tol, opts);
}

/// Distinct facets of a full sweep, in order of first appearance. The first facet's interval
/// wraps around theta_start, so it may appear at both ends of the trace.
template <typename Scalar>
std::vector<FacetIndexSet<Scalar>> distinct_facets(const WalkOutcome<Scalar>& sweep) {
  std::vector<FacetIndexSet<Scalar>> out;
  for (const auto& e : sweep.trace) {
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const auto& f) { return f.same_indices(e.facet); });
    if (!seen) out.push_back(e.facet);
  }
  return out;
}

/// Structural checks on a finished walk: adjacent facets share d-1 indices, every facet is
/// valid, and the intervals are contiguous and nondecreasing.
struct TraceReport {
  bool locality = true;
  bool validity = true;
  bool contiguous = true;
  double covered = 0;  // total angular length
  std::string detail;

  bool ok() const { return locality && validity && contiguous; }
};

template <typename Scalar>
TraceReport check_trace(const PointSet<Scalar>& pts, const WalkOutcome<Scalar>& w, const Tolerance& tol = {}) {
  TraceReport r;
  const std::size_t d = static_cast<std::size_t>(pts.dim());
  for (std::size_t i = 0; i < w.trace.size(); ++i) {
    const auto& e = w.trace[i];
    r.covered += e.theta_end - e.theta_start;
    if (e.theta_end < e.theta_start) {
      r.contiguous = false;
      r.detail = "decreasing interval at " + std::to_string(i);
    }
    if (!is_valid_facet(pts, e.facet, tol)) {
      r.validity = false;
      r.detail = "invalid facet " + format_indices(e.facet.indices);
    }
    if (i > 0) {
      const auto& prev = w.trace[i - 1];
      if (prev.theta_end != e.theta_start) {
        r.contiguous = false;
        r.detail = "gap before entry " + std::to_string(i);
      }
      std::size_t shared = 0;
      for (Index k : e.facet.indices) shared += prev.facet.contains(k) ? 1 : 0;
      if (shared != d - 1) {
        r.locality = false;
        r.detail = "non-adjacent pivot at entry " + std::to_string(i);
      }
    }
  }
  return r;
}

}  // namespace shadowlp
