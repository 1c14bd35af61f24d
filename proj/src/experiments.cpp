#include "shadowlp/experiments.hpp"

#include "shadowlp/instance_io.hpp"

#include <json.hpp>

#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>

namespace shadowlp {

using nlohmann::json;

const char* to_string(CenterFamily f) {
  switch (f) {
    case CenterFamily::Origin: return "origin";
    case CenterFamily::Sphere: return "sphere";
    case CenterFamily::Ball: return "ball";
  }
  return "?";
}

CenterFamily parse_center_family(const std::string& name) {
  if (name == "origin") return CenterFamily::Origin;
  if (name == "sphere") return CenterFamily::Sphere;
  if (name == "ball") return CenterFamily::Ball;
  throw ParseError("field 'centers': unknown family '" + name + "' (origin, sphere, ball)");
}

SectionFixture builtin_fixture(const std::string& name) {
  SectionFixture f;
  f.name = name;
  if (name == "square") {
    f.points.resize(2, 4);
    f.points << 1, -1, -1, 1,  //
        1, 1, -1, -1;
    f.plane.basis1 = Eigen::Vector2d(1, 0);
    f.plane.basis2 = Eigen::Vector2d(0, 1);
  } else if (name == "degenerate-slice") {
    f.points.resize(3, 5);
    f.points << 1, 2, 1.5, 1, 3,  //
        0, 1, -1, 1, 0,           //
        0, 0, 1, -1, 1;
    f.plane.basis1 = Eigen::Vector3d(0, 1, 0);
    f.plane.basis2 = Eigen::Vector3d(0, 0, 1);
  } else {
    throw ParseError("unknown fixture '" + name + "' (square, degenerate-slice)");
  }
  return f;
}

void ExperimentConfig::validate() const {
  if (fixture) {
    if (fixture->points.cols() <= fixture->points.rows())
      throw std::invalid_argument("fixture: need more points than dimensions");
    if (fixture->plane.basis1.size() != fixture->points.rows() || fixture->plane.basis2.size() != fixture->points.rows())
      throw std::invalid_argument("fixture: plane dimension mismatch");
    return;
  }
  if (n.empty() || d.empty() || sigma.empty()) throw std::invalid_argument("config: n, d and sigma must be non-empty");
  for (Index dd : d)
    if (dd < 2) throw std::invalid_argument("config: every d must be at least 2");
  for (Index nn : n)
    for (Index dd : d)
      if (nn <= dd) throw std::invalid_argument("config: every n must exceed every d");
  for (double s : sigma)
    if (!(s > 0) || !std::isfinite(s)) throw std::invalid_argument("config: sigma must be positive");
  if (trials < 1) throw std::invalid_argument("config: trials must be at least 1");
  if (threads < 1) throw std::invalid_argument("config: threads must be at least 1");
}

namespace {

template <typename T>
std::vector<T> read_list(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) throw ParseError(std::string("missing field '") + name + "'");
  std::vector<T> out;
  auto take = [&](const json& v) {
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ParseError(std::string("field '") + name + "': expected integers");
    } else {
      if (!v.is_number()) throw ParseError(std::string("field '") + name + "': expected numbers");
    }
    out.push_back(v.get<T>());
  };
  if (it->is_array()) {
    for (const auto& v : *it) take(v);
  } else {
    take(*it);
  }
  return out;
}

MatrixXd read_columns(const json& v, const std::string& what) {
  if (!v.is_array() || v.empty()) throw ParseError(what + ": expected a non-empty array of points");
  const std::size_t dim = v[0].is_array() ? v[0].size() : 0;
  if (dim == 0) throw ParseError(what + ": points must be arrays");
  MatrixXd m(static_cast<Index>(dim), static_cast<Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!v[j].is_array() || v[j].size() != dim)
      throw ParseError(what + " entry " + std::to_string(j) + ": expected " + std::to_string(dim) + " numbers");
    for (std::size_t i = 0; i < dim; ++i) {
      if (!v[j][i].is_number()) throw ParseError(what + " entry " + std::to_string(j) + ": expected numbers");
      m(static_cast<Index>(i), static_cast<Index>(j)) = v[j][i].get<double>();
    }
  }
  return m;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) line += text[i] == '\n';
    throw ParseError("config JSON syntax error on line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  ExperimentConfig cfg;
  try {
    if (doc.contains("fixture")) {
      const json& f = doc["fixture"];
      if (f.is_string()) {
        cfg.fixture = builtin_fixture(f.get<std::string>());
      } else if (f.is_object()) {
        SectionFixture fx;
        fx.name = f.value("name", "custom");
        fx.points = read_columns(f.at("points"), "fixture.points");
        const MatrixXd plane = read_columns(f.at("plane"), "fixture.plane");
        if (plane.cols() != 2) throw ParseError("fixture.plane: expected two vectors");
        fx.plane.basis1 = plane.col(0);
        fx.plane.basis2 = plane.col(1);
        cfg.fixture = fx;
      } else {
        throw ParseError("field 'fixture': expected a name or an object");
      }
    } else {
      cfg.n = read_list<Index>(doc, "n");
      cfg.d = read_list<Index>(doc, "d");
      cfg.sigma = read_list<double>(doc, "sigma");
    }
    cfg.trials = doc.value("trials", 1);
    cfg.seed = doc.value("seed", std::uint64_t{0});
    cfg.out = doc.value("out", std::string{});
    cfg.threads = doc.value("threads", 1);
    cfg.timing = doc.value("timing", true);
    if (doc.contains("centers")) cfg.centers = parse_center_family(doc["centers"].get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::uint64_t cell_seed(std::uint64_t seed, Index n, Index d, double sigma) {
  std::uint64_t h = derive_seed(seed, StreamTag::Instance, static_cast<std::uint64_t>(n));
  h = mix64(h ^ static_cast<std::uint64_t>(d));
  return mix64(h ^ std::bit_cast<std::uint64_t>(sigma));
}

std::uint64_t trial_seed(std::uint64_t cell, int trial) {
  return derive_seed(cell, StreamTag::Trial, static_cast<std::uint64_t>(trial));
}

namespace {

VectorXd in_ball(Index d, RandomStream& rng) {
  const VectorXd u = rng.unit_vector(d);
  return u * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
}

}  // namespace

SmoothedSpec make_spec(CenterFamily family, Index n, Index d, double sigma, RandomStream& rng) {
  SmoothedSpec spec;
  spec.centers_A = MatrixXd::Zero(n, d);
  spec.centers_b = VectorXd::Ones(n);
  spec.sigma = sigma;
  switch (family) {
    case CenterFamily::Origin:
      break;
    case CenterFamily::Sphere:
      for (Index i = 0; i < n; ++i) spec.centers_A.row(i) = rng.unit_vector(d).transpose() * std::numbers::sqrt2 / 2;
      spec.centers_b.setConstant(std::numbers::sqrt2 / 2);
      break;
    case CenterFamily::Ball:
      for (Index i = 0; i < n; ++i) {
        spec.centers_A.row(i) = in_ball(d, rng).transpose();
        spec.centers_b(i) = 2 * rng.uniform() - 1;
      }
      break;
  }
  return spec;
}

MatrixXd section_points(CenterFamily family, Index n, Index d, double sigma, RandomStream& rng) {
  MatrixXd pts = MatrixXd::Zero(d, n);
  RandomStream centers = rng.derive(StreamTag::Centers);
  RandomStream noise = rng.derive(StreamTag::Smoothing);
  for (Index i = 0; i < n; ++i) {
    if (family == CenterFamily::Sphere) pts.col(i) = centers.unit_vector(d);
    if (family == CenterFamily::Ball) pts.col(i) = in_ball(d, centers);
    pts.col(i) += sigma * noise.gaussian_vector(d);
  }
  return pts;
}

SweepPlane<double> random_plane(Index d, RandomStream& rng) {
  const MatrixXd q = haar_rotation(d, rng);
  SweepPlane<double> p;
  p.basis1 = q.col(0);
  p.basis2 = q.col(1);
  return p;
}

namespace {

struct Cell {
  Index n, d;
  double sigma;
  std::uint64_t seed;
};

std::vector<Cell> cells_of(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  for (Index n : cfg.n)
    for (Index d : cfg.d)
      for (double s : cfg.sigma) cells.push_back({n, d, s, cell_seed(cfg.seed, n, d, s)});
  return cells;
}

/// Runs task(i) for i in [0, count) on `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) task(i);
  };
  const int extra = std::min<int>(threads, static_cast<int>(count)) - 1;
  std::vector<std::jthread> pool;
  for (int t = 0; t < extra; ++t) pool.emplace_back(worker);
  worker();
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ' ';
  return s;
}

}  // namespace

std::vector<PivotTrial> run_pivot_experiment(const ExperimentConfig& cfg, const WalkHook& hook) {
  cfg.validate();
  if (cfg.fixture) throw std::invalid_argument("pivot experiment: fixtures apply to sections only");
  const std::vector<Cell> cells = cells_of(cfg);
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  std::vector<PivotTrial> rows(cells.size() * trials);
  parallel_for(rows.size(), cfg.threads, [&](std::size_t k) {
    const Cell& c = cells[k / trials];
    PivotTrial& r = rows[k];
    r.n = c.n;
    r.d = c.d;
    r.sigma = c.sigma;
    r.trial = static_cast<int>(k % trials);
    r.seed = trial_seed(c.seed, r.trial);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      RandomStream rng(r.seed);
      RandomStream centers = rng.derive(StreamTag::Centers);
      SmoothedSpec spec = make_spec(cfg.centers, c.n, c.d, c.sigma, centers);
      RandomStream obj = rng.derive(StreamTag::Objective);
      spec.objective = obj.unit_vector(c.d);
      RandomStream inst = rng.derive(StreamTag::Instance);
      const LP lp = sample_instance(normalize(spec), inst);
      SolveOptions opts;
      opts.on_walk = hook;
      const LPResult res = solve_lp(lp, rng, opts);
      r.status = to_string(res.status);
      r.pivots_phase1 = res.pivots_phase1;
      r.pivots_phase2 = res.pivots_phase2;
      r.iterations = res.phase1_iterations;
    } catch (const std::exception& e) {
      r.status = "error";
      r.error = one_line(e.what());
    }
    r.wall_ms = elapsed_ms(t0);
  });
  return rows;
}

std::vector<SectionTrial> run_section_experiment(const ExperimentConfig& cfg, const WalkHook& hook) {
  cfg.validate();
  std::vector<Cell> cells;
  if (cfg.fixture) {
    cells.push_back({cfg.fixture->points.cols(), cfg.fixture->points.rows(), 0.0, cfg.seed});
  } else {
    cells = cells_of(cfg);
  }
  const std::size_t trials = cfg.fixture ? 1 : static_cast<std::size_t>(cfg.trials);
  std::vector<SectionTrial> rows(cells.size() * trials);
  parallel_for(rows.size(), cfg.threads, [&](std::size_t k) {
    const Cell& c = cells[k / trials];
    SectionTrial& r = rows[k];
    r.n = c.n;
    r.d = c.d;
    r.sigma = c.sigma;
    r.trial = static_cast<int>(k % trials);
    r.seed = trial_seed(c.seed, r.trial);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      RandomStream rng(r.seed);
      MatrixXd pts;
      SweepPlane<double> plane;
      if (cfg.fixture) {
        pts = cfg.fixture->points;
        plane = cfg.fixture->plane;
      } else {
        pts = section_points(cfg.centers, c.n, c.d, c.sigma, rng);
        RandomStream prng = rng.derive(StreamTag::Plane);
        plane = random_plane(c.d, prng);
      }
      SolveOptions opts;
      opts.on_walk = hook;
      RandomStream srng = rng.derive(StreamTag::Trial);
      const SectionReport rep = section_edges(pts, plane, srng, opts);
      r.edge_count = rep.edge_count;
      r.degenerate = rep.degenerate;
    } catch (const std::exception& e) {
      r.failed = true;
      r.error = one_line(e.what());
    }
    r.wall_ms = elapsed_ms(t0);
  });
  return rows;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

struct Stat {
  double sum = 0, sumsq = 0;
  std::size_t k = 0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++k;
  }
  double mean() const { return k ? sum / static_cast<double>(k) : std::nan(""); }
  double se() const {
    if (k < 2) return 0;
    const double m = mean();
    const double var = std::max(0.0, (sumsq - static_cast<double>(k) * m * m) / static_cast<double>(k - 1));
    return std::sqrt(var / static_cast<double>(k));
  }
};

using CellKey = std::tuple<Index, Index, double>;

template <typename Row>
std::vector<std::pair<CellKey, std::vector<const Row*>>> group(const std::vector<Row>& rows) {
  std::vector<std::pair<CellKey, std::vector<const Row*>>> out;
  for (const Row& r : rows) {
    CellKey key{r.n, r.d, r.sigma};
    if (out.empty() || out.back().first != key) out.push_back({key, {}});
    out.back().second.push_back(&r);
  }
  return out;
}

std::string prefix(const char* kind, Index n, Index d, double sigma) {
  return std::to_string(kCsvSchemaVersion) + "," + kind + "," + std::to_string(n) + "," + std::to_string(d) + "," +
         format_number(sigma) + ",";
}

}  // namespace

std::string pivots_csv(const std::vector<PivotTrial>& rows, bool timing) {
  std::string out =
      "schema_version,kind,n,d,sigma,trial,seed,status,pivots_phase1_total,pivots_phase2,pivots_total,iterations,"
      "se_pivots_phase1_total,se_pivots_phase2,se_pivots_total,se_iterations,trials_ok,trials_failed,error,wall_ms\n";
  auto wall = [&](double ms) { return timing ? format_number(ms) : std::string(); };
  for (const auto& [key, members] : group(rows)) {
    const auto& [n, d, sigma] = key;
    Stat p1, p2, pt, it, ms;
    std::size_t failed = 0;
    for (const PivotTrial* r : members) {
      out += prefix("trial", n, d, sigma) + std::to_string(r->trial) + "," + std::to_string(r->seed) + "," + r->status +
             ",";
      if (r->status == "error") {
        out += ",,,,";
        ++failed;
      } else {
        out += std::to_string(r->pivots_phase1) + "," + std::to_string(r->pivots_phase2) + "," +
               std::to_string(r->pivots_phase1 + r->pivots_phase2) + "," + std::to_string(r->iterations) + ",";
        p1.add(static_cast<double>(r->pivots_phase1));
        p2.add(static_cast<double>(r->pivots_phase2));
        pt.add(static_cast<double>(r->pivots_phase1 + r->pivots_phase2));
        it.add(r->iterations);
      }
      ms.add(r->wall_ms);
      out += ",,,,,," + r->error + "," + wall(r->wall_ms) + "\n";
    }
    out += prefix("aggregate", n, d, sigma) + ",,," + format_number(p1.mean()) + "," + format_number(p2.mean()) + "," +
           format_number(pt.mean()) + "," + format_number(it.mean()) + "," + format_number(p1.se()) + "," +
           format_number(p2.se()) + "," + format_number(pt.se()) + "," + format_number(it.se()) + "," +
           std::to_string(members.size() - failed) + "," + std::to_string(failed) + ",," + wall(ms.mean()) + "\n";
  }
  return out;
}

std::string sections_csv(const std::vector<SectionTrial>& rows, bool timing) {
  std::string out =
      "schema_version,kind,n,d,sigma,trial,seed,edge_count,degenerate,se_edge_count,trials_ok,trials_failed,error,"
      "wall_ms\n";
  auto wall = [&](double ms) { return timing ? format_number(ms) : std::string(); };
  for (const auto& [key, members] : group(rows)) {
    const auto& [n, d, sigma] = key;
    Stat edges, ms;
    std::size_t failed = 0, degenerate = 0;
    for (const SectionTrial* r : members) {
      out += prefix("trial", n, d, sigma) + std::to_string(r->trial) + "," + std::to_string(r->seed) + ",";
      if (r->failed) {
        out += ",,";
        ++failed;
      } else {
        out += std::to_string(r->edge_count) + "," + (r->degenerate ? "1" : "0");
        edges.add(r->edge_count);
        degenerate += r->degenerate;
      }
      ms.add(r->wall_ms);
      out += ",,,," + r->error + "," + wall(r->wall_ms) + "\n";
    }
    out += prefix("aggregate", n, d, sigma) + ",," + format_number(edges.mean()) + "," + std::to_string(degenerate) +
           "," + format_number(edges.se()) + "," + std::to_string(members.size() - failed) + "," +
           std::to_string(failed) + ",," + wall(ms.mean()) + "\n";
  }
  return out;
}

std::vector<std::pair<Index, double>> mean_total_pivots(const std::vector<PivotTrial>& rows) {
  std::vector<std::pair<Index, Stat>> acc;
  for (const PivotTrial& r : rows) {
    if (r.status == "error") continue;
    auto it = std::find_if(acc.begin(), acc.end(), [&](const auto& p) { return p.first == r.n; });
    if (it == acc.end()) {
      acc.push_back({r.n, {}});
      it = std::prev(acc.end());
    }
    it->second.add(static_cast<double>(r.pivots_phase1 + r.pivots_phase2));
  }
  std::vector<std::pair<Index, double>> out;
  for (const auto& [n, s] : acc) out.push_back({n, s.mean()});
  return out;
}

double loglog_slope(const std::vector<std::pair<Index, double>>& xy) {
  if (xy.size() < 2) throw std::invalid_argument("loglog_slope: need two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(xy.size());
  for (const auto& [x, y] : xy) {
    const double lx = std::log(static_cast<double>(x)), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace shadowlp
