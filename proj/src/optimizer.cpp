#include "fdoe/optimizer.hpp"

#include "fdoe/errors.hpp"
#include "fdoe/golden_section.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace fdoe {

void OptimizerConfig::validate() const {
  if (starts < 1) {
    throw std::invalid_argument("optimizer needs at least one start");
  }
  if (grid_size < 3 || grid_size % 2 == 0) {
    throw std::invalid_argument("candidate grid size must be odd and at least 3");
  }
  if (max_sweeps < 1) {
    throw std::invalid_argument("optimizer needs at least one sweep");
  }
  if (!(improvement_tol > 0.0)) {
    throw std::invalid_argument("improvement tolerance must be positive");
  }
  if (workers < 0) {
    throw std::invalid_argument("worker count must be nonnegative");
  }
}

std::vector<CoordinateId> sweep_order(const ProblemSpec& spec) {
  std::vector<CoordinateId> order;
  order.reserve(spec.coordinate_count());
  for (std::size_t j = 0; j < spec.profile.size(); ++j) {
    const auto n_x = static_cast<Eigen::Index>(spec.profile[j].x_basis.size());
    for (Eigen::Index i = 0; i < spec.runs; ++i) {
      for (Eigen::Index l = 0; l < n_x; ++l) {
        order.push_back({CoordinateId::Kind::Profile, j, i, l});
      }
    }
  }
  for (Eigen::Index i = 0; i < spec.runs; ++i) {
    for (std::size_t k = 0; k < spec.scalar.size(); ++k) {
      order.push_back({CoordinateId::Kind::Scalar, k, i, 0});
    }
  }
  return order;
}

Bounds coordinate_bounds(const ProblemSpec& spec, const CoordinateId& c) {
  return c.kind == CoordinateId::Kind::Profile ? spec.profile.at(c.factor).bounds
                                               : spec.scalar.at(c.factor).bounds;
}

double& coordinate_ref(Design& design, const CoordinateId& c) {
  if (c.kind == CoordinateId::Kind::Profile) {
    return design.gammas.at(c.factor)(c.run, c.index);
  }
  return design.scalars(c.run, static_cast<Eigen::Index>(c.factor));
}

double coordinate_value(const Design& design, const CoordinateId& c) {
  return coordinate_ref(const_cast<Design&>(design), c);
}

std::mt19937_64 start_stream(std::uint64_t seed, std::uint64_t start) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(start >> 32)};
  return std::mt19937_64(seq);
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_on(const Bounds& b, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  return std::clamp(b.lower + u * b.width(), b.lower, b.upper);
}

}  // namespace

Design random_design(const ProblemSpec& spec, std::mt19937_64& stream) {
  Design d;
  const auto n = static_cast<Eigen::Index>(spec.runs);
  for (const auto& f : spec.profile) {
    d.gammas.emplace_back(n, static_cast<Eigen::Index>(f.x_basis.size()));
  }
  d.scalars.resize(n, static_cast<Eigen::Index>(spec.scalar.size()));
  for (const auto& c : sweep_order(spec)) {
    coordinate_ref(d, c) = uniform_on(coordinate_bounds(spec, c), stream);
  }
  return d;
}

CriterionValue evaluate_design(const ProblemSpec& spec, const Design& design) {
  return a_criterion(information_matrix(build_model_matrix(spec, design).z));
}

namespace {

// Holds Z for the current design and evaluates single-coordinate changes
// through M = M_rest + z z^T, where M_rest sums every other run.
class ExchangeEngine {
public:
  ExchangeEngine(const ProblemSpec& spec, const OptimizerConfig& config)
      : spec_(spec), config_(config), ws_(cross_integrals(spec)),
        p_(static_cast<Eigen::Index>(spec.parameter_count())), criterion_(p_),
        m_rest_(p_, p_), m_trial_(p_, p_), row_(p_) {
    Eigen::Index col = 1;
    for (const auto& w : ws_) {
      block_offset_.push_back(col);
      col += w.cols();
    }
    Eigen::Index quad = col + static_cast<Eigen::Index>(spec.scalar.size());
    for (std::size_t k = 0; k < spec.scalar.size(); ++k) {
      main_col_.push_back(col + static_cast<Eigen::Index>(k));
      quad_col_.push_back(spec.scalar[k].effects == ScalarEffects::MainPlusQuadratic ? quad++ : -1);
    }
  }

  void load(Design design) {
    design_ = std::move(design);
    z_ = build_model_matrix(spec_, design_, ws_).z;
  }

  const Design& design() const { return design_; }

  CriterionValue current_value() {
    m_trial_ = information_matrix(z_);
    return criterion_(m_trial_);
  }

  // Returns true when the coordinate moved.
  bool exchange(const CoordinateId& c, CriterionValue& value) {
    const Bounds b = coordinate_bounds(spec_, c);
    if (!(b.width() > 0.0)) {
      return false;
    }
    prepare(c);
    const double incumbent_x = coordinate_value(design_, c);
    const CriterionValue incumbent = trial(incumbent_x);

    const int g = config_.grid_size;
    int best_k = -1;
    CriterionValue best_grid = CriterionValue::infeasible();
    for (int k = 0; k < g; ++k) {
      const CriterionValue v = trial(grid_point(b, k));
      if (v.better_than(best_grid)) {
        best_grid = v;
        best_k = k;
      }
    }

    double best_x = incumbent_x;
    CriterionValue best = incumbent;
    if (best_k >= 0 && best_grid.better_than(best)) {
      best = best_grid;
      best_x = grid_point(b, best_k);
    }
    if (config_.refine && best_k >= 0) {
      const double lo = grid_point(b, std::max(best_k - 1, 0));
      const double hi = grid_point(b, std::min(best_k + 1, g - 1));
      const LineMinimum line = golden_section_minimize(
          [&](double x) { return trial(x).raw(); }, lo, hi, 1e-6 * b.width());
      if (line.f < best.raw()) {
        best = CriterionValue::feasible(line.f);
        best_x = line.x;
      }
    }

    if (!best.better_than(incumbent)) {
      value = incumbent;
      return false;
    }
    commit(c, best_x);
    value = best;
    return true;
  }

private:
  double grid_point(const Bounds& b, int k) const {
    const int last = config_.grid_size - 1;
    return k == last ? b.upper : b.lower + k * b.width() / last;
  }

  void prepare(const CoordinateId& c) {
    run_ = c.run;
    m_rest_.setZero();
    for (Eigen::Index i = 0; i < z_.rows(); ++i) {
      if (i == run_) {
        continue;
      }
      for (Eigen::Index a = 0; a < p_; ++a) {
        const double za = z_(i, a);
        for (Eigen::Index bcol = a; bcol < p_; ++bcol) {
          m_rest_(a, bcol) += za * z_(i, bcol);
        }
      }
    }
    coord_ = c;
    row_ = z_.row(run_).transpose();
    if (c.kind == CoordinateId::Kind::Profile) {
      // J-row contributions of every other coefficient of this run.
      const auto& w = ws_[c.factor];
      const auto& gamma = design_.gammas[c.factor];
      partial_.resize(w.cols());
      for (Eigen::Index m = 0; m < w.cols(); ++m) {
        double s = 0.0;
        for (Eigen::Index l = 0; l < w.rows(); ++l) {
          if (l != c.index) {
            s += gamma(run_, l) * w(l, m);
          }
        }
        partial_[m] = s;
      }
    }
  }

  void fill_row(double x) {
    if (coord_.kind == CoordinateId::Kind::Profile) {
      const auto& w = ws_[coord_.factor];
      const Eigen::Index off = block_offset_[coord_.factor];
      for (Eigen::Index m = 0; m < w.cols(); ++m) {
        row_[off + m] = partial_[m] + x * w(coord_.index, m);
      }
    } else {
      row_[main_col_[coord_.factor]] = x;
      if (quad_col_[coord_.factor] >= 0) {
        row_[quad_col_[coord_.factor]] = x * x;
      }
    }
  }

  CriterionValue trial(double x) {
    fill_row(x);
    for (Eigen::Index a = 0; a < p_; ++a) {
      for (Eigen::Index bcol = a; bcol < p_; ++bcol) {
        m_trial_(a, bcol) = m_rest_(a, bcol) + row_[a] * row_[bcol];
        m_trial_(bcol, a) = m_trial_(a, bcol);
      }
    }
    return criterion_(m_trial_);
  }

  void commit(const CoordinateId& c, double x) {
    fill_row(x);
    coordinate_ref(design_, c) = x;
    z_.row(run_) = row_.transpose();
  }

  const ProblemSpec& spec_;
  const OptimizerConfig& config_;
  std::vector<CrossIntegralMatrix> ws_;
  Eigen::Index p_;
  ACriterionEvaluator criterion_;
  std::vector<Eigen::Index> block_offset_;
  std::vector<Eigen::Index> main_col_;
  std::vector<Eigen::Index> quad_col_;
  Design design_;
  Eigen::MatrixXd z_;
  Eigen::MatrixXd m_rest_;
  Eigen::MatrixXd m_trial_;
  Eigen::VectorXd row_;
  Eigen::VectorXd partial_;
  Eigen::Index run_ = 0;
  CoordinateId coord_;
};

}  // namespace

ExchangeOutcome exchange_coordinate(const ProblemSpec& spec, const Design& design,
                                    const CoordinateId& coordinate,
                                    const OptimizerConfig& config) {
  config.validate();
  check_conforms(spec, design);
  ExchangeEngine engine(spec, config);
  engine.load(design);
  CriterionValue value;
  const bool moved = engine.exchange(coordinate, value);
  return {engine.design(), value, moved};
}

namespace {

struct StartResult {
  Design design;
  CriterionValue value;
  int sweeps = 0;
  std::vector<double> trace;
};

StartResult run_start(ExchangeEngine& engine, const ProblemSpec& spec,
                      const OptimizerConfig& config, const std::vector<CoordinateId>& order,
                      std::uint64_t start) {
  auto stream = start_stream(config.seed, start);
  engine.load(random_design(spec, stream));
  StartResult out;
  CriterionValue value = engine.current_value();
  out.trace.push_back(value.raw());
  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    const CriterionValue before = value;
    for (const auto& c : order) {
      CriterionValue v;
      if (engine.exchange(c, v)) {
        value = v;
      }
    }
    ++out.sweeps;
    out.trace.push_back(value.raw());
    if (!value.is_feasible()) {
      break;
    }
    if (before.is_feasible() &&
        before.raw() - value.raw() < config.improvement_tol * std::abs(before.raw())) {
      break;
    }
  }
  out.design = engine.design();
  out.value = evaluate_design(spec, out.design);
  return out;
}

}  // namespace

OptimizerResult coordinate_exchange(const ProblemSpec& spec, const OptimizerConfig& config) {
  spec.validate();
  config.validate();
  const auto order = sweep_order(spec);
  const auto starts = static_cast<std::size_t>(config.starts);
  std::vector<StartResult> results(starts);

  unsigned workers = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, starts));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(starts);
  auto work = [&]() {
    ExchangeEngine engine(spec, config);
    for (std::size_t s = next++; s < starts; s = next++) {
      try {
        results[s] = run_start(engine, spec, config, order, s);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }

  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  OptimizerResult out;
  out.per_start_values.reserve(starts);
  std::size_t feasible = 0;
  std::size_t best = starts;
  for (std::size_t s = 0; s < starts; ++s) {
    const auto& r = results[s];
    out.per_start_values.push_back(r.value.raw());
    out.per_start_sweeps.push_back(r.sweeps);
    out.sweep_traces.push_back(r.trace);
    if (r.value.is_feasible()) {
      ++feasible;
      if (best == starts || r.value.better_than(results[best].value)) {
        best = s;
      }
    }
  }
  if (feasible == 0) {
    throw InfeasibleDesignError("all " + std::to_string(starts) +
                                " starts ended with a singular information matrix (p = " +
                                std::to_string(spec.parameter_count()) +
                                ", runs = " + std::to_string(spec.runs) + ")");
  }
  out.best_design = results[best].design;
  out.best_value = results[best].value;
  out.winning_start = best;
  out.sweeps_used = results[best].sweeps;
  return out;
}

}  // namespace fdoe
