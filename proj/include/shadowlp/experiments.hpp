#pragma once

// Seeded experiment grids over (n, d, sigma) with trial-level parallelism and CSV output.

#include "shadowlp/sections.hpp"

#include <filesystem>
#include <string>

namespace shadowlp {

inline constexpr int kCsvSchemaVersion = 1;

/// Where the unperturbed data sits before normalization.
///   origin: a_i = 0, b_i = 1 (always feasible)
///   sphere: a_i uniform on the sphere of radius 1/sqrt(2), b_i = 1/sqrt(2)
///   ball:   a_i uniform in the unit ball, b_i uniform in [-1, 1] (mixes all three statuses)
enum class CenterFamily { Origin, Sphere, Ball };

const char* to_string(CenterFamily f);
CenterFamily parse_center_family(const std::string& name);

/// A fixed point set and plane for the sections experiment, in place of random cells.
struct SectionFixture {
  std::string name;
  MatrixXd points;  // d x n
  SweepPlane<double> plane;
};

/// Built-in fixtures: "square" (d = 2) and "degenerate-slice" (d = 3, slice empty).
SectionFixture builtin_fixture(const std::string& name);

struct ExperimentConfig {
  std::vector<Index> n;
  std::vector<Index> d;
  std::vector<double> sigma;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string out;  // empty: standard output
  int threads = 1;
  CenterFamily centers = CenterFamily::Origin;
  bool timing = true;  // false writes an empty wall_ms column
  std::optional<SectionFixture> fixture;

  void validate() const;  // throws std::invalid_argument
};

/// Reads a JSON config:
///   {"n": [..], "d": [..], "sigma": [..], "trials": int, "seed": int, "out": str,
///    "threads": int, "centers": "origin"|"sphere"|"ball", "timing": bool,
///    "fixture": "square" | {"points": [[..], ..], "plane": [[..], [..]]}}
/// Errors are reported as ParseError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Seed of one cell: depends on the base seed and the cell parameters, not on grid position.
std::uint64_t cell_seed(std::uint64_t seed, Index n, Index d, double sigma);
std::uint64_t trial_seed(std::uint64_t cell, int trial);

/// Centers drawn from the family with the stream of a trial.
SmoothedSpec make_spec(CenterFamily family, Index n, Index d, double sigma, RandomStream& rng);

/// Points for the sections experiment (d x n): family centers plus sigma-Gaussian noise.
MatrixXd section_points(CenterFamily family, Index n, Index d, double sigma, RandomStream& rng);

/// Random 2-plane through the origin (first two columns of a Haar rotation).
SweepPlane<double> random_plane(Index d, RandomStream& rng);

struct PivotTrial {
  Index n = 0, d = 0;
  double sigma = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string status;  // optimal / unbounded / infeasible / error
  std::size_t pivots_phase1 = 0;
  std::size_t pivots_phase2 = 0;
  int iterations = 0;
  std::string error;
  double wall_ms = 0;
};

struct SectionTrial {
  Index n = 0, d = 0;
  double sigma = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  int edge_count = 0;
  bool degenerate = false;
  bool failed = false;
  std::string error;
  double wall_ms = 0;
};

using WalkHook = std::function<void(const PointSet<double>&, const WalkOutcome<double>&)>;

/// Runs every (cell, trial) and returns results in (n, d, sigma, trial) order. The hook, if set,
/// is called from worker threads.
std::vector<PivotTrial> run_pivot_experiment(const ExperimentConfig& cfg, const WalkHook& hook = {});
std::vector<SectionTrial> run_section_experiment(const ExperimentConfig& cfg, const WalkHook& hook = {});

std::string pivots_csv(const std::vector<PivotTrial>& rows, bool timing = true);
std::string sections_csv(const std::vector<SectionTrial>& rows, bool timing = true);

/// Means of total pivots per n, in the order of first appearance; failed trials excluded.
std::vector<std::pair<Index, double>> mean_total_pivots(const std::vector<PivotTrial>& rows);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<std::pair<Index, double>>& xy);

/// Formats a double with the shortest round-trip representation.
std::string format_number(double x);

}  // namespace shadowlp
