#include "shadowlp/verify.hpp"

#include "shadowlp/oracle.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace shadowlp {

void WalkAudit::record(const PointSet<double>& pts, const WalkOutcome<double>& w) {
  const TraceReport t = check_trace(pts, w);
  std::string problem;
  double sweep_error = 0;
  if (!t.ok()) problem = t.detail;
  if (w.status == WalkStatus::ExhaustedArc) {
    sweep_error = std::abs(t.covered - 2.0 * std::numbers::pi);
    if (sweep_error > 1e-9) problem = "sweep covers " + format_number(t.covered);
  }
  std::lock_guard lock(mutex_);
  ++walks_;
  if (w.status == WalkStatus::ExhaustedArc) {
    ++sweeps_;
    worst_sweep_error_ = std::max(worst_sweep_error_, sweep_error);
  }
  if (!problem.empty()) {
    if (failures_ == 0) first_failure_ = problem;
    ++failures_;
  }
}

WalkHook WalkAudit::hook() {
  return [this](const PointSet<double>& pts, const WalkOutcome<double>& w) { record(pts, w); };
}

namespace {

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void note_failure(SuiteResult& r, const std::string& what) {
  if (r.failures == 0) r.detail = "first failure: " + what;
  ++r.failures;
}

std::string join_detail(const std::string& summary, const SuiteResult& r) {
  return r.detail.empty() ? summary : summary + "; " + r.detail;
}

constexpr CenterFamily kFamilies[3] = {CenterFamily::Ball, CenterFamily::Sphere, CenterFamily::Origin};

LPStatus as_status(oracle::Verdict v) {
  switch (v) {
    case oracle::Verdict::Optimal: return LPStatus::Optimal;
    case oracle::Verdict::Unbounded: return LPStatus::Unbounded;
    default: return LPStatus::Infeasible;
  }
}

}  // namespace

SuiteResult suite_oracle_equivalence(const VerifyConfig& cfg, WalkAudit& audit) {
  SuiteResult r;
  r.id = 1;
  r.name = "oracle-equivalence";
  const Timer timer;
  SolveOptions opts;
  opts.walk.invert_ratio_test = cfg.invert_ratio_test;
  opts.on_walk = audit.hook();
  std::size_t by_status[3] = {0, 0, 0};
  for (std::uint64_t i = 0; i < 1000; ++i) {
    RandomStream rng(derive_seed(cfg.seed, StreamTag::Instance, i));
    const Index d = 2 + static_cast<Index>(i % 3);
    const double sigma = (i / 3) % 2 ? 0.5 : 0.1;
    const Index n = std::min<Index>(12, 5 + static_cast<Index>(rng.uniform() * 8));
    RandomStream centers = rng.derive(StreamTag::Centers);
    const CenterFamily family = kFamilies[(i / 6) % 3];
    SmoothedSpec spec = make_spec(family, n, d, sigma, centers);
    RandomStream obj = rng.derive(StreamTag::Objective);
    spec.objective = obj.unit_vector(d);
    RandomStream inst = rng.derive(StreamTag::Instance);
    const LP lp = sample_instance(normalize(spec), inst);

    const auto verdict = oracle::classify_lp(lp);
    if (verdict.status == oracle::Verdict::Ambiguous) {
      ++r.skipped;
      continue;
    }
    ++r.checked;
    const std::string tag = "instance " + std::to_string(i) + " (d=" + std::to_string(d) + ", n=" + std::to_string(n) + ")";
    LPResult res;
    try {
      res = solve_lp(lp, rng, opts);
    } catch (const std::exception& e) {
      note_failure(r, tag + ": " + e.what());
      continue;
    }
    const LPStatus expected = as_status(verdict.status);
    ++by_status[static_cast<int>(expected)];
    if (res.status != expected) {
      note_failure(r, tag + ": solver " + to_string(res.status) + ", oracle " + oracle::to_string(verdict.status));
      continue;
    }
    if (expected != LPStatus::Optimal) continue;
    std::vector<Index> basis = res.basis;
    std::sort(basis.begin(), basis.end());
    if (basis != verdict.basis) {
      note_failure(r, tag + ": basis " + format_indices(basis) + " vs " + format_indices(verdict.basis));
      continue;
    }
    const double value = res.objective(lp);
    if (std::abs(value - verdict.value) > 1e-7 * std::max(1.0, std::abs(verdict.value)))
      note_failure(r, tag + ": objective " + format_number(value) + " vs " + format_number(verdict.value));
  }
  r.passed = r.failures == 0 && r.checked > 0;
  r.detail = join_detail("optimal=" + std::to_string(by_status[0]) + " unbounded=" + std::to_string(by_status[1]) +
                             " infeasible=" + std::to_string(by_status[2]) + " ambiguous=" + std::to_string(r.skipped),
                         r);
  r.seconds = timer.seconds();
  return r;
}

SuiteResult suite_phase1_statistics(const VerifyConfig& cfg, WalkAudit& audit) {
  SuiteResult r;
  r.id = 2;
  r.name = "phase1-statistics";
  const Timer timer;
  phase1::UnitOptions uo;
  uo.solve.walk.invert_ratio_test = cfg.invert_ratio_test;
  uo.solve.on_walk = audit.hook();
  std::size_t iterations = 0, successes = 0, solves = 0;
  for (std::uint64_t i = 0; iterations < 2000; ++i) {
    const Index d = 3 + static_cast<Index>(i % 2), n = 50;
    RandomStream rng(derive_seed(cfg.seed, StreamTag::Phase1Iteration, i));
    const MatrixXd points = section_points(CenterFamily::Ball, n, d, 0.3, rng);
    RandomStream obj = rng.derive(StreamTag::Objective);
    const VectorXd z = obj.unit_vector(d);

    std::vector<std::optional<MatrixXd>> added;  // empty when add_constraints failed
    uo.on_iteration = [&](const phase1::IterationRecord& rec) {
      if (rec.add->ok()) added.emplace_back(rec.add->block.added_points);
      else added.emplace_back();
    };
    RandomStream srng = rng.derive(StreamTag::Trial);
    phase1::UnitResult res;
    try {
      res = phase1::solve_unit(points, z, srng, uo);
    } catch (const std::exception& e) {
      note_failure(r, "program " + std::to_string(i) + ": " + e.what());
      continue;
    }
    if (res.status == phase1::UnitStatus::Unbounded) {
      ++r.skipped;
      continue;
    }
    ++r.checked;
    const PointSet<double> pts(points);
    if (!oracle::certify_facet(pts, z, res.facet->indices)) {
      note_failure(r, "program " + std::to_string(i) + ": returned facet fails the definition");
      continue;
    }
    const auto h = phase1::numb_halfspace_witness(points, res.facet->indices);
    if (!h) {
      note_failure(r, "program " + std::to_string(i) + ": no witness");
      continue;
    }
    ++solves;
    for (const auto& block : added) {
      ++iterations;
      if (block && ((h->transpose() * *block).array() <= 1.0).all()) ++successes;
    }
  }
  const double fraction = static_cast<double>(successes) / static_cast<double>(iterations);
  const double mean_iterations = static_cast<double>(iterations) / static_cast<double>(std::max<std::size_t>(1, solves));
  const double threshold = 0.25 - 3.0 * std::sqrt(0.1875 / 2000.0);
  r.passed = r.failures == 0 && fraction >= threshold && mean_iterations <= 6.0;
  r.detail = join_detail("iterations=" + std::to_string(iterations) + " success_fraction=" + format_number(fraction) +
                             " (>= " + format_number(threshold) + ") mean_iterations=" + format_number(mean_iterations) +
                             " unbounded_skipped=" + std::to_string(r.skipped),
                         r);
  r.seconds = timer.seconds();
  return r;
}

ExperimentConfig pivot_growth_config(const VerifyConfig& cfg) {
  ExperimentConfig e;
  e.n = {16, 64, 256, 1024, 4096};
  e.d = {3};
  e.sigma = {0.1};
  e.trials = 100;
  e.seed = cfg.seed;
  e.threads = cfg.threads;
  e.centers = cfg.pivot_centers;
  return e;
}

SuiteResult suite_pivot_growth(const VerifyConfig& cfg, WalkAudit& audit) {
  SuiteResult r;
  r.id = 3;
  r.name = "pivot-growth";
  const Timer timer;
  const std::vector<PivotTrial> rows = run_pivot_experiment(pivot_growth_config(cfg), audit.hook());
  for (const PivotTrial& t : rows) {
    ++r.checked;
    if (t.status == "error") note_failure(r, "n=" + std::to_string(t.n) + " trial " + std::to_string(t.trial) + ": " + t.error);
  }
  const auto means = mean_total_pivots(rows);
  const double slope = loglog_slope(means);
  std::string summary = "slope=" + format_number(slope) + " (<= 0.4) means:";
  for (const auto& [n, m] : means) summary += " " + std::to_string(n) + ":" + format_number(m);
  r.passed = r.failures == 0 && slope <= 0.4;
  r.detail = join_detail(summary, r);
  r.seconds = timer.seconds();
  return r;
}

SuiteResult suite_section_counting(const VerifyConfig& cfg, WalkAudit& audit) {
  SuiteResult r;
  r.id = 4;
  r.name = "section-counting";
  const Timer timer;
  SolveOptions opts;
  opts.walk.invert_ratio_test = cfg.invert_ratio_test;
  opts.on_walk = audit.hook();
  std::size_t degenerate = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Index d = 3, n = 5 + static_cast<Index>(i % 6);
    RandomStream rng(derive_seed(cfg.seed, StreamTag::Plane, i));
    const MatrixXd points = section_points(CenterFamily::Origin, n, d, 1.0, rng);
    RandomStream prng = rng.derive(StreamTag::Plane);
    const SweepPlane<double> plane = random_plane(d, prng);
    ++r.checked;
    const int expected = oracle::section_edge_count_bruteforce(points, plane);
    RandomStream srng = rng.derive(StreamTag::Trial);
    try {
      const SectionReport rep = section_edges(points, plane, srng, opts);
      degenerate += rep.degenerate;
      if (rep.edge_count != expected)
        note_failure(r, "instance " + std::to_string(i) + ": " + std::to_string(rep.edge_count) + " edges vs " +
                            std::to_string(expected));
    } catch (const std::exception& e) {
      note_failure(r, "instance " + std::to_string(i) + ": " + e.what());
    }
  }
  const SectionFixture square = builtin_fixture("square");
  RandomStream frng(cfg.seed);
  ++r.checked;
  const int square_edges = section_edges(square.points, square.plane, frng, opts).edge_count;
  if (square_edges != 4) note_failure(r, "square fixture: " + std::to_string(square_edges) + " edges");
  r.passed = r.failures == 0;
  r.detail = join_detail("degenerate_slices=" + std::to_string(degenerate) +
                             " square=" + std::to_string(square_edges),
                         r);
  r.seconds = timer.seconds();
  return r;
}

SuiteResult suite_d2_growth(const VerifyConfig& cfg) {
  SuiteResult r;
  r.id = 5;
  r.name = "d2-growth";
  const Timer timer;
  ExperimentConfig e;
  e.n = {100, 10000};
  e.d = {2};
  e.sigma = {1.0};
  e.trials = 50;
  e.seed = cfg.seed;
  e.threads = cfg.threads;
  const std::vector<SectionTrial> rows = run_section_experiment(e);
  double sum[2] = {0, 0};
  for (const SectionTrial& t : rows) {
    ++r.checked;
    if (t.failed || t.degenerate) {
      note_failure(r, "n=" + std::to_string(t.n) + " trial " + std::to_string(t.trial) + ": " +
                          (t.failed ? t.error : std::string("degenerate")));
      continue;
    }
    sum[t.n == 100 ? 0 : 1] += t.edge_count;
  }
  const double small = sum[0] / 50.0, large = sum[1] / 50.0;
  const double root_small = std::sqrt(std::log(100.0)), root_large = std::sqrt(std::log(10000.0));
  r.passed = r.failures == 0 && large > small && small > root_small && large > root_large;
  r.detail = join_detail("mean_edges n=100: " + format_number(small) + " (sqrt ln n = " + format_number(root_small) +
                             "), n=10000: " + format_number(large) + " (sqrt ln n = " + format_number(root_large) + ")",
                         r);
  r.seconds = timer.seconds();
  return r;
}

SuiteResult suite_angular_viewpoints(const VerifyConfig& cfg) {
  SuiteResult r;
  r.id = 6;
  r.name = "angular-viewpoints";
  const Timer timer;
  const double slack = 10 * Tolerance{}.eps_feas;

  RandomStream arng(derive_seed(cfg.seed, StreamTag::Probe, 6));
  std::size_t angular_violations = 0;
  for (int k = 0; k < 10000; ++k) {
    const double dist0 = 1.0 + 9.0 * arng.uniform();
    const double phi = 2 * std::numbers::pi * arng.uniform();
    const Eigen::Vector2d normal(std::cos(phi), std::sin(phi)), along(-std::sin(phi), std::cos(phi));
    const double half = std::sqrt(100.0 - dist0 * dist0);
    const double t1 = half * (2 * arng.uniform() - 1), t2 = half * (2 * arng.uniform() - 1);
    const Eigen::Vector2d x1 = dist0 * normal + t1 * along, x2 = dist0 * normal + t2 * along;
    const double dist = (x1 - x2).norm();
    const double ang = angular_distance(x1, x2);
    ++r.checked;
    if (ang < dist / 101.0 - slack || ang > dist + slack) {
      ++angular_violations;
      note_failure(r, "angular bound: dist " + format_number(dist) + ", angle " + format_number(ang));
    }
  }

  RandomStream prng(derive_seed(cfg.seed, StreamTag::Probe, 7));
  std::size_t edges_checked = 0, no_viewpoint = 0;
  for (int k = 0; k < 1000; ++k) {
    const Index count = 3 + static_cast<Index>(prng.uniform() * 18);
    MatrixXd poly(2, count);
    for (Index j = 0; j < count; ++j) {
      const double rad = std::sqrt(prng.uniform()), ang = 2 * std::numbers::pi * prng.uniform();
      poly.col(j) << rad * std::cos(ang), rad * std::sin(ang);
    }
    for (Index a = 0; a < count; ++a) {
      for (Index b = a + 1; b < count; ++b) {
        const Eigen::Vector2d pa = poly.col(a), pb = poly.col(b), dir = pb - pa;
        auto side = [&](const Eigen::Vector2d& p) { return dir.x() * (p.y() - pa.y()) - dir.y() * (p.x() - pa.x()); };
        int pos = 0, neg = 0;
        for (Index j = 0; j < count; ++j) {
          if (j == a || j == b) continue;
          const double s = side(poly.col(j));
          pos += s > 0;
          neg += s < 0;
        }
        if (pos && neg) continue;  // not a hull edge
        ++edges_checked;
        ++r.checked;
        const auto vp = viewpoint_for_edge(poly, {a, b});
        if (!vp) {
          ++no_viewpoint;
          note_failure(r, "no viewpoint for a hull edge of polygon " + std::to_string(k));
          continue;
        }
        const Eigen::Vector2d o = viewpoints<double>()[static_cast<std::size_t>(*vp - 1)];
        const bool far = line_distance(o, pa, pb) >= 1.0 - slack;
        const bool same_side = (pos == 0 && neg == 0) || (side(o) > 0) == (pos > 0);
        if (!far || !same_side) note_failure(r, "viewpoint certificate fails on polygon " + std::to_string(k));
      }
    }
  }
  r.passed = r.failures == 0;
  r.detail = join_detail("angular_samples=10000 violations=" + std::to_string(angular_violations) +
                             " polygon_edges=" + std::to_string(edges_checked) +
                             " no_viewpoint=" + std::to_string(no_viewpoint),
                         r);
  r.seconds = timer.seconds();
  return r;
}

SuiteResult suite_walk_invariants(const WalkAudit& audit) {
  SuiteResult r;
  r.id = 7;
  r.name = "walk-invariants";
  r.checked = audit.walks();
  r.failures = audit.failures();
  r.passed = r.checked > 0 && r.failures == 0;
  r.detail = "walks=" + std::to_string(audit.walks()) + " sweeps=" + std::to_string(audit.sweeps()) +
             " worst_sweep_error=" + format_number(audit.worst_sweep_error());
  if (r.checked == 0) r.detail += "; no walks recorded (run with suites 1-4)";
  if (r.failures) r.detail += "; first failure: " + audit.first_failure();
  return r;
}

SuiteResult suite_determinism(const VerifyConfig& cfg) {
  SuiteResult r;
  r.id = 8;
  r.name = "determinism";
  const Timer timer;
  ExperimentConfig e = pivot_growth_config(cfg);
  e.n = {e.n.front()};
  e.threads = 1;
  const std::string first = pivots_csv(run_pivot_experiment(e), false);
  e.threads = std::max(2, cfg.threads);
  const std::string second = pivots_csv(run_pivot_experiment(e), false);
  r.checked = 1;
  if (first != second) note_failure(r, "CSV differs between runs");
  r.passed = r.failures == 0;
  r.detail = join_detail("bytes=" + std::to_string(first.size()) + " identical=" + (first == second ? "yes" : "no"), r);
  r.seconds = timer.seconds();
  return r;
}

bool VerifyReport::passed() const {
  return !suites.empty() && std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

std::string VerifyReport::json() const {
  nlohmann::json doc;
  doc["passed"] = passed();
  doc["suites"] = nlohmann::json::array();
  for (const SuiteResult& s : suites) {
    doc["suites"].push_back({{"id", s.id},
                             {"name", s.name},
                             {"passed", s.passed},
                             {"checked", s.checked},
                             {"failures", s.failures},
                             {"skipped", s.skipped},
                             {"detail", s.detail},
                             {"seconds", s.seconds}});
  }
  return doc.dump(2);
}

VerifyReport run_verify(const VerifyConfig& cfg, const std::function<void(const SuiteResult&)>& progress) {
  VerifyReport report;
  WalkAudit audit;
  auto add = [&](SuiteResult r) {
    if (progress) progress(r);
    report.suites.push_back(std::move(r));
  };
  if (cfg.selected(1)) add(suite_oracle_equivalence(cfg, audit));
  if (cfg.selected(2)) add(suite_phase1_statistics(cfg, audit));
  if (cfg.selected(3)) add(suite_pivot_growth(cfg, audit));
  if (cfg.selected(4)) add(suite_section_counting(cfg, audit));
  if (cfg.selected(5)) add(suite_d2_growth(cfg));
  if (cfg.selected(6)) add(suite_angular_viewpoints(cfg));
  if (cfg.selected(7)) add(suite_walk_invariants(audit));
  if (cfg.selected(8)) add(suite_determinism(cfg));
  return report;
}

std::string format_line(const SuiteResult& r) {
  std::ostringstream out;
  out << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.name << ": checked=" << r.checked
      << " failures=" << r.failures << " " << r.detail;
  out.precision(3);
  out << " (" << std::fixed << r.seconds << " s)";
  return out.str();
}

}  // namespace shadowlp
