// Acceptance suite: searches for designs with known reference optima and runs
// the property checks. Prints one PASS/FAIL line per criterion; exit status is
// nonzero if any criterion fails.

#include "support.hpp"

#include "fdoe/app.hpp"
#include "fdoe/criteria.hpp"
#include "fdoe/io.hpp"
#include "fdoe/optimizer.hpp"
#include "fdoe/oracle.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fdoe;

namespace {

constexpr std::uint64_t kSeed = 20240917;
constexpr int kStarts = 100;

struct Check {
  std::vector<std::string> notes;
  bool ok = true;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("FAILED: " + what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

OptimizerConfig search_config(int starts = kStarts) {
  OptimizerConfig cfg;
  cfg.starts = starts;
  cfg.seed = kSeed;
  cfg.workers = 0;
  return cfg;
}

// Searches are shared between criteria, keyed by (basis, degree, n, n_x).
std::map<std::string, double> g_cache;

double optimum(bool bspline, int degree, int n, int n_x) {
  const std::string key = std::to_string(bspline) + "/" + std::to_string(degree) + "/" +
                          std::to_string(n) + "/" + std::to_string(n_x);
  if (auto it = g_cache.find(key); it != g_cache.end()) {
    return it->second;
  }
  const auto spec = bspline ? test::bspline_problem(n, n_x, degree) : test::step_problem(n, n_x, degree);
  const double v = coordinate_exchange(spec, search_config()).best_value.value();
  g_cache[key] = v;
  return v;
}

struct Cell {
  int n;
  int n_x;
  double psi;
  double eff;
};

bool check_cells(Check& c, bool bspline, int degree, const std::vector<Cell>& cells,
                 const std::function<double(const Cell&)>& tol, bool check_eff) {
  std::map<int, double> reference;  // found value at the largest n_x per n
  std::map<int, int> largest;
  for (const auto& cell : cells) {
    if (cell.n_x >= largest[cell.n]) {
      largest[cell.n] = cell.n_x;
    }
  }
  for (const auto& cell : cells) {
    const double found = optimum(bspline, degree, cell.n, cell.n_x);
    const double rel = std::abs(found - cell.psi) / cell.psi;
    c.note(fmt("n=%g", cell.n) + fmt(" n_x=%g", cell.n_x) +
           fmt(": found %.4f, reference %.3f, rel err %.2e", found, cell.psi, rel));
    c.expect(rel <= tol(cell), fmt("n=%g", cell.n) + fmt(" n_x=%g value off by %.3e", cell.n_x, rel));
    if (cell.n_x == largest[cell.n]) {
      reference[cell.n] = found;
    }
  }
  if (check_eff) {
    for (const auto& cell : cells) {
      const double eff = reference[cell.n] / optimum(bspline, degree, cell.n, cell.n_x);
      c.expect(std::abs(eff - cell.eff) <= 0.01,
               fmt("n=%g", cell.n) + fmt(" n_x=%g efficiency %.4f vs reference %.3f", cell.n_x, eff, cell.eff));
    }
  }
  return c.ok;
}

const std::vector<Cell> kLinearStep = {
    {4, 2, 8.750, 0.961},   {4, 3, 8.828, 0.952},   {4, 4, 8.750, 0.961},
    {4, 8, 8.493, 0.990},   {4, 16, 8.427, 0.997},  {4, 100, 8.404, 1.000},
    {8, 2, 3.958, 0.981},   {8, 3, 4.287, 0.906},   {8, 4, 3.903, 0.995},
    {8, 8, 3.902, 0.995},   {8, 16, 3.887, 0.999},  {8, 100, 3.882, 1.000},
    {12, 2, 2.583, 0.972},  {12, 3, 2.778, 0.904},  {12, 4, 2.570, 0.977},
    {12, 8, 2.539, 0.989},  {12, 16, 2.520, 0.997}, {12, 100, 2.512, 1.000},
};

Check linear_step() {
  Check c;
  check_cells(c, false, 1, kLinearStep, [](const Cell& x) { return x.n_x == 100 ? 0.02 : 0.01; }, true);
  return c;
}

Check anomaly() {
  Check c;
  for (int n : {4, 8, 12}) {
    const double two = optimum(false, 1, n, 2);
    const double three = optimum(false, 1, n, 3);
    c.note(fmt("n=%g: n_x=2 %.4f, n_x=3 %.4f", n, two, three));
    c.expect(three > two, fmt("n=%g: n_x=3 is not worse than n_x=2", n));
  }
  return c;
}

Check quadratic_step() {
  Check c;
  const std::vector<Cell> row = {
      {4, 3, 386.408, 0.535}, {4, 4, 246.869, 0.838}, {4, 8, 218.479, 0.947},
      {4, 16, 208.843, 0.991}, {4, 100, 206.884, 1.000},
  };
  check_cells(c, false, 2, row, [](const Cell& x) { return x.n_x >= 16 ? 0.02 : 0.01; }, false);
  return c;
}

Check linear_bspline() {
  Check c;
  const std::vector<Cell> row = {{4, 3, 12.471, 0.674}, {4, 4, 9.314, 0.902}, {4, 8, 8.594, 0.978}};
  check_cells(c, true, 1, row, [](const Cell&) { return 0.01; }, false);
  // Hat-function designs never beat step designs by more than 1%.
  for (int n : {4, 8, 12}) {
    for (int n_x : {4, 8, 16}) {
      const double step = optimum(false, 1, n, n_x);
      const double hats = optimum(true, 1, n, n_x);
      c.note(fmt("n=%g", n) + fmt(" n_x=%g: step %.4f, bspline1 %.4f", n_x, step, hats));
      c.expect(hats >= 0.99 * step,
               fmt("n=%g", n) + fmt(" n_x=%g: bspline1 beats step by %.3e", n_x, 1 - hats / step));
    }
  }
  return c;
}

ProblemSpec mixed_problem(ScalarEffects effects) {
  auto spec = test::step_problem(12, 4, 1);
  for (int k = 0; k < 3; ++k) {
    spec.scalar.push_back({Bounds{-1, 1}, effects});
  }
  return spec;
}

Check scalar_structure() {
  Check c;
  const double single_profile = optimum(false, 1, 12, 4);
  const auto profile_only = test::step_problem(12, 4, 1);
  for (auto effects : {ScalarEffects::MainOnly, ScalarEffects::MainPlusQuadratic}) {
    const bool quadratic = effects == ScalarEffects::MainPlusQuadratic;
    const std::string tag = quadratic ? "case 2" : "case 1";
    const auto spec = mixed_problem(effects);
    const auto r = coordinate_exchange(spec, search_config());
    c.note(tag + fmt(": criterion %.4f", r.best_value.value()));
    const auto& x = r.best_design.scalars;
    for (Eigen::Index k = 0; k < 3; ++k) {
      int centres = 0;
      for (Eigen::Index i = 0; i < 12; ++i) {
        const double v = x(i, k);
        if (quadratic) {
          const bool level = std::abs(v + 1) <= 1e-6 || std::abs(v) <= 1e-6 || std::abs(v - 1) <= 1e-6;
          c.expect(level, tag + fmt(": setting %.9f of factor %g is not in {-1, 0, 1}", v, k + 1.0));
          centres += std::abs(v) <= 1e-6 ? 1 : 0;
        } else {
          c.expect(v == -1.0 || v == 1.0,
                   tag + fmt(": setting %.9f of factor %g is not at a bound", v, k + 1.0));
        }
      }
      if (quadratic) {
        c.expect(centres >= 1, tag + fmt(": factor %g has no centre run", k + 1.0));
      }
    }
    if (quadratic) {
      // Same design with every scalar setting snapped to the nearest of {-1, 0, 1}.
      Design snapped = r.best_design;
      snapped.scalars = snapped.scalars.array().round();
      c.note(tag + fmt(": settings snapped to {-1, 0, 1} give %.4f", evaluate_design(spec, snapped).raw()));
    }
    // The profile part alone, scored under the single-profile model.
    const Design sub{r.best_design.gammas, Eigen::MatrixXd(12, 0)};
    const double sub_value = evaluate_design(profile_only, sub).value();
    const double rel = std::abs(sub_value - single_profile) / single_profile;
    c.note(tag + fmt(": profile sub-design %.4f vs single-profile optimum %.4f", sub_value, single_profile));
    c.expect(rel <= 0.01, tag + fmt(": profile sub-design off by %.3e", rel));
  }
  return c;
}

Check oracle_equivalence() {
  Check c;
  const auto spec = test::step_problem(4, 2, 1);
  const auto vertex = oracle::exhaustive_vertex_search(spec);
  c.expect(vertex.designs_evaluated == 256, "enumeration did not visit 256 designs");
  const double v = vertex.value.value();
  c.note(fmt("vertex optimum %.12f over %g designs", v, static_cast<double>(vertex.designs_evaluated)));
  c.expect(std::abs(v - 8.75) <= 1e-9, fmt("vertex optimum %.12f is not 8.750", v));
  const double found = coordinate_exchange(spec, search_config()).best_value.value();
  c.note(fmt("coordinate exchange %.12f", found));
  c.expect(std::abs(found - v) <= 1e-9, fmt("search misses the oracle by %.3e", found - v));
  return c;
}

void cross_integral_property(Check& c) {
  double worst = 0.0;
  for (int size = 1; size <= 201; size += size < 20 ? 1 : 17) {
    for (int degree = 0; degree <= 2; ++degree) {
      const auto beta = BasisSystem::power(degree);
      const auto step = BasisSystem::uniform_step(size);
      worst = std::max(worst, (oracle::quad_cross_integral(step, beta) - cross_integral(step, beta))
                                  .cwiseAbs()
                                  .maxCoeff());
      if (size >= 2) {
        const auto hats = BasisSystem::uniform_bspline1(size);
        worst = std::max(worst, (oracle::quad_cross_integral(hats, beta) - cross_integral(hats, beta))
                                    .cwiseAbs()
                                    .maxCoeff());
      }
    }
  }
  c.note(fmt("closed form vs quadrature: max abs diff %.2e", worst));
  c.expect(worst <= 1e-10, "cross integrals disagree with quadrature");
}

void partition_property(Check& c) {
  double worst = 0.0;
  for (int size : {2, 3, 4, 8, 16, 100, 201}) {
    const auto hats = BasisSystem::uniform_bspline1(size);
    for (int k = 0; k <= 10000; ++k) {
      worst = std::max(worst, std::abs(eval_basis(hats, k / 10000.0).sum() - 1.0));
    }
  }
  c.note(fmt("bspline1 partition of unity: max deviation %.2e", worst));
  c.expect(worst <= 1e-12, "bspline1 basis does not sum to one");
}

void descent_property(Check& c) {
  auto spec = test::bspline_problem(6, 4, 1);
  spec.scalar.push_back({Bounds{-1, 1}, ScalarEffects::MainPlusQuadratic});
  OptimizerConfig cfg = search_config(3);
  std::size_t exchanges = 0;
  bool ok = true;
  for (std::uint64_t s = 0; s < 3; ++s) {
    auto stream = start_stream(kSeed, s);
    Design d = random_design(spec, stream);
    double value = evaluate_design(spec, d).raw();
    for (int sweep = 0; sweep < 4; ++sweep) {
      for (const auto& coord : sweep_order(spec)) {
        const auto out = exchange_coordinate(spec, d, coord, cfg);
        const double after = evaluate_design(spec, out.design).raw();
        ok = ok && after <= value * (1 + 1e-12);
        d = out.design;
        value = after;
        ++exchanges;
      }
    }
  }
  const auto r = coordinate_exchange(test::step_problem(8, 8, 2), search_config(20));
  for (const auto& trace : r.sweep_traces) {
    for (std::size_t k = 1; k < trace.size(); ++k) {
      ok = ok && trace[k] <= trace[k - 1];
    }
  }
  c.note(fmt("monotone descent over %g single exchanges and 20 search traces", static_cast<double>(exchanges)));
  c.expect(ok, "an exchange increased the criterion");
}

void augmentation_property(Check& c) {
  std::mt19937_64 rng(kSeed);
  bool ok = true;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index p = 1 + trial % 7;
    const Eigen::MatrixXd z = test::random_matrix(rng, p + 1 + trial % 4, p);
    Eigen::MatrixXd aug(z.rows() + 1, p);
    aug << z, test::random_matrix(rng, 1, p, -2, 2);
    const auto before = a_criterion(information_matrix(z));
    const auto after = a_criterion(information_matrix(aug));
    if (before.is_feasible()) {
      ok = ok && after.is_feasible() && after.raw() <= before.raw() * (1 + 1e-12);
    }
  }
  c.note("criterion never increases when a run is appended (500 random cases)");
  c.expect(ok, "augmentation increased the criterion");
}

void worker_property(Check& c) {
  auto spec = test::step_problem(8, 8, 2);
  spec.scalar.push_back({Bounds{-1, 1}, ScalarEffects::MainPlusQuadratic});
  auto cfg = search_config(24);
  cfg.workers = 1;
  const auto base = coordinate_exchange(spec, cfg);
  bool same = true;
  for (int workers : {2, 8}) {
    cfg.workers = workers;
    const auto r = coordinate_exchange(spec, cfg);
    same = same && r.best_design == base.best_design && r.best_value == base.best_value &&
           r.per_start_values == base.per_start_values && r.winning_start == base.winning_start;
  }
  c.note("identical results for 1, 2 and 8 workers");
  c.expect(same, "results depend on the worker count");
}

void round_trip_property(Check& c) {
  auto cfg = io::parse_run_config(R"(
problem:
  runs: 12
  profile:
    - {x_basis: bspline1, size: 8, beta_degree: 2}
  scalar:
    - {bounds: [-1, 1], effects: main+quadratic}
    - {bounds: [0, 3], effects: main}
optimizer: {starts: 10}
)");
  cfg.optimizer.seed = kSeed;
  cfg.outputs.directory = std::filesystem::temp_directory_path() / "fdoe_acceptance_round_trip";
  const auto report = app::run_experiment(cfg);
  std::ifstream in(cfg.outputs.directory / "design.csv");
  const auto design = io::read_design_csv(in, cfg.problem);
  const double again = evaluate_design(cfg.problem, design).value();
  const double rel = std::abs(again - report.summary.criterion) / report.summary.criterion;
  c.note(fmt("design.csv round trip: relative difference %.2e", rel));
  c.expect(rel <= 1e-12, "reloaded design does not reproduce the criterion");
}

Check properties() {
  Check c;
  cross_integral_property(c);
  partition_property(c);
  descent_property(c);
  augmentation_property(c);
  worker_property(c);
  round_trip_property(c);
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {"AC1 reference optima and efficiencies, linear beta, step x", linear_step},
      {"AC2 n_x=3 is worse than n_x=2, linear beta, step x", anomaly},
      {"AC3 reference optima, quadratic beta, step x", quadratic_step},
      {"AC4 reference optima for bspline1 x, and bspline1 vs step", linear_bspline},
      {"AC5 scalar level structure with one profile and three scalar factors", scalar_structure},
      {"AC6 search matches exhaustive enumeration of 256 vertex designs", oracle_equivalence},
      {"AC7 Property suites", properties},
  };
  int failed = 0;
  for (const auto& crit : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    const Check c = crit.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& n : c.notes) {
      std::printf("    %s\n", n.c_str());
    }
    std::printf("[%s] %s (%.1fs)\n", c.ok ? "PASS" : "FAIL", crit.name, secs);
    std::fflush(stdout);
    failed += c.ok ? 0 : 1;
  }
  std::printf("%d of %zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
