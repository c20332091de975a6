#include "fdoe/model.hpp"

#include "fdoe/errors.hpp"

#include <Eigen/QR>

#include <cmath>
#include <stdexcept>
#include <string>

namespace fdoe {

const char* to_string(ScalarEffects effects) {
  return effects == ScalarEffects::MainOnly ? "main" : "main+quadratic";
}

std::size_t ProblemSpec::quadratic_count() const {
  std::size_t q = 0;
  for (const auto& s : scalar) {
    q += s.effects == ScalarEffects::MainPlusQuadratic ? 1 : 0;
  }
  return q;
}

std::size_t ProblemSpec::parameter_count() const {
  std::size_t p = 1 + scalar.size() + quadratic_count();
  for (const auto& f : profile) {
    p += f.beta_basis.size();
  }
  return p;
}

std::size_t ProblemSpec::coordinate_count() const {
  std::size_t c = scalar.size();
  for (const auto& f : profile) {
    c += f.x_basis.size();
  }
  return c * static_cast<std::size_t>(runs > 0 ? runs : 0);
}

namespace {

void check_bounds(const Bounds& b, const std::string& what) {
  if (!std::isfinite(b.lower) || !std::isfinite(b.upper)) {
    throw std::invalid_argument(what + " bounds must be finite");
  }
  if (b.lower > b.upper) {
    throw std::invalid_argument(what + " bounds are reversed");
  }
}

}  // namespace

void ProblemSpec::validate() const {
  if (runs < 1) {
    throw std::invalid_argument("run count must be positive");
  }
  for (std::size_t j = 0; j < profile.size(); ++j) {
    const auto& f = profile[j];
    const std::string name = "profile factor " + std::to_string(j + 1);
    if (f.x_basis.kind() == BasisKind::Power) {
      throw std::invalid_argument(name + ": x basis must be step or bspline1");
    }
    if (f.beta_basis.kind() != BasisKind::Power) {
      throw std::invalid_argument(name + ": beta basis must be a power basis");
    }
    if (f.x_basis.lower() != f.beta_basis.lower() || f.x_basis.upper() != f.beta_basis.upper()) {
      throw std::invalid_argument(name + ": x and beta bases live on different domains");
    }
    check_bounds(f.bounds, name);
    if (f.x_basis.size() < f.beta_basis.size()) {
      throw IdentifiabilityError(name + ": x basis size " + std::to_string(f.x_basis.size()) +
                                 " is smaller than beta basis size " +
                                 std::to_string(f.beta_basis.size()));
    }
  }
  for (std::size_t k = 0; k < scalar.size(); ++k) {
    check_bounds(scalar[k].bounds, "scalar factor " + std::to_string(k + 1));
  }
  const auto p = parameter_count();
  if (static_cast<std::size_t>(runs) < p) {
    throw IdentifiabilityError("run count " + std::to_string(runs) + " is below the " +
                               std::to_string(p) + " model parameters");
  }
}

bool Design::operator==(const Design& other) const {
  if (gammas.size() != other.gammas.size()) {
    return false;
  }
  for (std::size_t j = 0; j < gammas.size(); ++j) {
    if (gammas[j].rows() != other.gammas[j].rows() ||
        gammas[j].cols() != other.gammas[j].cols() || gammas[j] != other.gammas[j]) {
      return false;
    }
  }
  return scalars.rows() == other.scalars.rows() && scalars.cols() == other.scalars.cols() &&
         scalars == other.scalars;
}

void check_conforms(const ProblemSpec& spec, const Design& design) {
  const auto n = static_cast<Eigen::Index>(spec.runs);
  if (design.gammas.size() != spec.profile.size()) {
    throw std::invalid_argument("design has " + std::to_string(design.gammas.size()) +
                                " profile blocks, spec has " +
                                std::to_string(spec.profile.size()));
  }
  for (std::size_t j = 0; j < spec.profile.size(); ++j) {
    const auto& g = design.gammas[j];
    const auto& f = spec.profile[j];
    if (g.rows() != n || g.cols() != static_cast<Eigen::Index>(f.x_basis.size())) {
      throw std::invalid_argument("profile block " + std::to_string(j + 1) + " has wrong shape");
    }
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      if (!f.bounds.contains(g.data()[i])) {
        throw std::invalid_argument("profile block " + std::to_string(j + 1) +
                                    " has a coefficient outside its bounds");
      }
    }
  }
  if (design.scalars.rows() != n ||
      design.scalars.cols() != static_cast<Eigen::Index>(spec.scalar.size())) {
    throw std::invalid_argument("scalar settings have wrong shape");
  }
  for (Eigen::Index k = 0; k < design.scalars.cols(); ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!spec.scalar[static_cast<std::size_t>(k)].bounds.contains(design.scalars(i, k))) {
        throw std::invalid_argument("scalar factor " + std::to_string(k + 1) +
                                    " has a setting outside its bounds");
      }
    }
  }
}

Eigen::MatrixXd build_J(const Eigen::Ref<const Eigen::MatrixXd>& gamma,
                        const CrossIntegralMatrix& w) {
  if (gamma.cols() != w.rows()) {
    throw std::invalid_argument("coefficient matrix has " + std::to_string(gamma.cols()) +
                                " columns but the cross-integral matrix has " +
                                std::to_string(w.rows()) + " rows");
  }
  return gamma * w;
}

Eigen::MatrixXd scalar_effect_columns(const Eigen::Ref<const Eigen::MatrixXd>& settings,
                                      const std::vector<ScalarFactorSpec>& specs) {
  if (settings.cols() != static_cast<Eigen::Index>(specs.size())) {
    throw std::invalid_argument("settings column count does not match scalar factor count");
  }
  Eigen::Index quadratic = 0;
  for (const auto& s : specs) {
    quadratic += s.effects == ScalarEffects::MainPlusQuadratic ? 1 : 0;
  }
  Eigen::MatrixXd out(settings.rows(), settings.cols() + quadratic);
  Eigen::Index q = settings.cols();
  for (Eigen::Index k = 0; k < settings.cols(); ++k) {
    const auto& s = specs[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < settings.rows(); ++i) {
      if (!s.bounds.contains(settings(i, k))) {
        throw std::invalid_argument("scalar factor " + std::to_string(k + 1) +
                                    " has a setting outside its bounds");
      }
    }
    out.col(k) = settings.col(k);
    if (s.effects == ScalarEffects::MainPlusQuadratic) {
      out.col(q++) = settings.col(k).array().square();
    }
  }
  return out;
}

std::vector<std::string> column_labels(const ProblemSpec& spec) {
  std::vector<std::string> labels{"intercept"};
  for (std::size_t j = 0; j < spec.profile.size(); ++j) {
    for (std::size_t m = 0; m < spec.profile[j].beta_basis.size(); ++m) {
      labels.push_back("theta" + std::to_string(j + 1) + "_" + std::to_string(m + 1));
    }
  }
  for (std::size_t k = 0; k < spec.scalar.size(); ++k) {
    labels.push_back("scalar" + std::to_string(k + 1));
  }
  for (std::size_t k = 0; k < spec.scalar.size(); ++k) {
    if (spec.scalar[k].effects == ScalarEffects::MainPlusQuadratic) {
      labels.push_back("scalar" + std::to_string(k + 1) + "^2");
    }
  }
  return labels;
}

std::vector<CrossIntegralMatrix> cross_integrals(const ProblemSpec& spec) {
  std::vector<CrossIntegralMatrix> ws;
  ws.reserve(spec.profile.size());
  for (const auto& f : spec.profile) {
    ws.push_back(cross_integral(f.x_basis, f.beta_basis));
  }
  return ws;
}

ModelMatrix build_model_matrix(const ProblemSpec& spec, const Design& design) {
  return build_model_matrix(spec, design, cross_integrals(spec));
}

ModelMatrix build_model_matrix(const ProblemSpec& spec, const Design& design,
                               const std::vector<CrossIntegralMatrix>& ws) {
  check_conforms(spec, design);
  if (ws.size() != spec.profile.size()) {
    throw std::invalid_argument("one cross-integral matrix is needed per profile factor");
  }
  const auto n = static_cast<Eigen::Index>(spec.runs);
  ModelMatrix out;
  out.z.resize(n, static_cast<Eigen::Index>(spec.parameter_count()));
  out.z.col(0).setOnes();
  Eigen::Index col = 1;
  for (std::size_t j = 0; j < ws.size(); ++j) {
    const Eigen::MatrixXd block = build_J(design.gammas[j], ws[j]);
    out.z.middleCols(col, block.cols()) = block;
    col += block.cols();
  }
  if (!spec.scalar.empty()) {
    const Eigen::MatrixXd x = scalar_effect_columns(design.scalars, spec.scalar);
    out.z.middleCols(col, x.cols()) = x;
  }
  out.column_labels = column_labels(spec);
  return out;
}

Eigen::VectorXd least_squares_estimate(const ModelMatrix& model,
                                       const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (y.size() != model.z.rows()) {
    throw std::invalid_argument("response length does not match the model matrix");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(model.z);
  if (qr.rank() < model.z.cols()) {
    throw InfeasibleDesignError("model matrix is column-rank deficient");
  }
  return qr.solve(y);
}

}  // namespace fdoe
