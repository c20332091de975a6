#include "fdoe/io.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace fdoe::io {

namespace {

void reject_unknown_keys(const YAML::Node& node, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get(const YAML::Node& node, const char* key, const std::string& where, T fallback) {
  const auto v = node[key];
  if (!v) {
    return fallback;
  }
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

template <typename T>
T require(const YAML::Node& node, const char* key, const std::string& where) {
  if (!node[key]) {
    throw ConfigError("missing '" + std::string(key) + "' in " + where);
  }
  return get<T>(node, key, where, T{});
}

std::array<double, 2> pair_of(const YAML::Node& node, const char* key, const std::string& where,
                              std::array<double, 2> fallback) {
  const auto v = node[key];
  if (!v) {
    return fallback;
  }
  if (!v.IsSequence() || v.size() != 2) {
    throw ConfigError("'" + std::string(key) + "' in " + where + " must be a [low, high] pair");
  }
  try {
    return {v[0].as<double>(), v[1].as<double>()};
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + std::string(key) + "' in " + where + " must hold two numbers");
  }
}

BasisSystem make_x_basis(const std::string& kind, int size, double lower, double upper,
                         const std::string& where) {
  if (size < 1) {
    throw ConfigError("x basis size must be positive in " + where);
  }
  if (kind == "step") {
    return BasisSystem::uniform_step(size, lower, upper);
  }
  if (kind == "bspline1") {
    if (size < 2) {
      throw ConfigError("bspline1 x basis needs size >= 2 in " + where);
    }
    return BasisSystem::uniform_bspline1(size, lower, upper);
  }
  throw ConfigError("x_basis must be 'step' or 'bspline1' in " + where);
}

ProblemSpec parse_problem(const YAML::Node& node) {
  const std::string where = "problem";
  if (!node || !node.IsMap()) {
    throw ConfigError("missing 'problem' section");
  }
  reject_unknown_keys(node, where, {"runs", "domain", "profile", "scalar"});
  ProblemSpec spec;
  spec.runs = require<int>(node, "runs", where);
  const auto domain = pair_of(node, "domain", where, {0.0, 1.0});
  if (!(domain[0] < domain[1])) {
    throw ConfigError("problem domain must satisfy lower < upper");
  }
  if (const auto prof = node["profile"]) {
    if (!prof.IsSequence()) {
      throw ConfigError("'profile' must be a list");
    }
    for (std::size_t j = 0; j < prof.size(); ++j) {
      const auto f = prof[j];
      const std::string fw = "problem.profile[" + std::to_string(j) + "]";
      reject_unknown_keys(f, fw, {"x_basis", "size", "beta_degree", "bounds"});
      const auto kind = require<std::string>(f, "x_basis", fw);
      const int size = require<int>(f, "size", fw);
      const int degree = require<int>(f, "beta_degree", fw);
      if (degree < 0) {
        throw ConfigError("beta_degree must be nonnegative in " + fw);
      }
      const auto b = pair_of(f, "bounds", fw, {-1.0, 1.0});
      spec.profile.push_back({make_x_basis(kind, size, domain[0], domain[1], fw),
                              BasisSystem::power(degree, domain[0], domain[1]),
                              Bounds{b[0], b[1]}});
    }
  }
  if (const auto sc = node["scalar"]) {
    if (!sc.IsSequence()) {
      throw ConfigError("'scalar' must be a list");
    }
    for (std::size_t k = 0; k < sc.size(); ++k) {
      const auto s = sc[k];
      const std::string sw = "problem.scalar[" + std::to_string(k) + "]";
      reject_unknown_keys(s, sw, {"bounds", "effects"});
      const auto b = pair_of(s, "bounds", sw, {-1.0, 1.0});
      const auto effects = get<std::string>(s, "effects", sw, "main");
      ScalarFactorSpec spec_k{Bounds{b[0], b[1]}, ScalarEffects::MainOnly};
      if (effects == "main+quadratic" || effects == "quadratic") {
        spec_k.effects = ScalarEffects::MainPlusQuadratic;
      } else if (effects != "main") {
        throw ConfigError("effects must be 'main' or 'main+quadratic' in " + sw);
      }
      spec.scalar.push_back(spec_k);
    }
  }
  return spec;
}

OptimizerConfig parse_optimizer(const YAML::Node& node) {
  OptimizerConfig cfg;
  if (!node) {
    return cfg;
  }
  const std::string where = "optimizer";
  reject_unknown_keys(node, where,
                      {"starts", "seed", "grid_size", "max_sweeps", "improvement_tol", "refine",
                       "workers"});
  cfg.starts = get<int>(node, "starts", where, cfg.starts);
  cfg.seed = get<std::uint64_t>(node, "seed", where, cfg.seed);
  cfg.grid_size = get<int>(node, "grid_size", where, cfg.grid_size);
  cfg.max_sweeps = get<int>(node, "max_sweeps", where, cfg.max_sweeps);
  cfg.improvement_tol = get<double>(node, "improvement_tol", where, cfg.improvement_tol);
  cfg.refine = get<bool>(node, "refine", where, cfg.refine);
  cfg.workers = get<int>(node, "workers", where, cfg.workers);
  return cfg;
}

OutputConfig parse_outputs(const YAML::Node& node) {
  OutputConfig out;
  if (!node) {
    return out;
  }
  const std::string where = "outputs";
  reject_unknown_keys(node, where, {"directory", "sample_points", "reference_value"});
  out.directory = get<std::string>(node, "directory", where, out.directory.string());
  out.sample_points = get<int>(node, "sample_points", where, out.sample_points);
  if (out.sample_points < 2) {
    throw ConfigError("outputs.sample_points must be at least 2");
  }
  if (node["reference_value"]) {
    const double r = get<double>(node, "reference_value", where, 0.0);
    if (!(r > 0.0)) {
      throw ConfigError("outputs.reference_value must be positive");
    }
    out.reference_value = r;
  }
  return out;
}

std::vector<int> int_list(const YAML::Node& node, const char* key, const std::string& where) {
  const auto v = node[key];
  if (!v || !v.IsSequence() || v.size() == 0) {
    throw ConfigError("'" + std::string(key) + "' in " + where + " must be a non-empty list");
  }
  try {
    return v.as<std::vector<int>>();
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + std::string(key) + "' in " + where + " must hold integers");
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) {
    throw ConfigError("config must be a mapping with a 'problem' section");
  }
  reject_unknown_keys(root, "config", {"problem", "optimizer", "outputs", "sweep"});
  RunConfig cfg;
  cfg.problem = parse_problem(root["problem"]);
  cfg.optimizer = parse_optimizer(root["optimizer"]);
  cfg.outputs = parse_outputs(root["outputs"]);
  if (const auto s = root["sweep"]) {
    reject_unknown_keys(s, "sweep", {"runs", "sizes"});
    cfg.sweep = SweepConfig{int_list(s, "runs", "sweep"), int_list(s, "sizes", "sweep")};
  }
  try {
    cfg.optimizer.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

ProblemSpec with_cell(const ProblemSpec& spec, int runs, int size) {
  ProblemSpec out = spec;
  out.runs = runs;
  for (auto& f : out.profile) {
    const double lo = f.x_basis.lower();
    const double hi = f.x_basis.upper();
    f.x_basis = f.x_basis.kind() == BasisKind::Step ? BasisSystem::uniform_step(size, lo, hi)
                                                    : BasisSystem::uniform_bspline1(size, lo, hi);
  }
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_design_csv(std::ostream& out, const ProblemSpec& spec, const Design& design) {
  check_conforms(spec, design);
  out << "run,factor,kind,index,value\n";
  for (const auto& c : sweep_order(spec)) {
    const bool profile = c.kind == CoordinateId::Kind::Profile;
    out << c.run + 1 << ',' << c.factor + 1 << ',' << (profile ? "profile" : "scalar") << ','
        << c.index + 1 << ',' << format_double(coordinate_value(design, c)) << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

template <typename T>
T parse_number(const std::string& s, const std::string& what) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw std::invalid_argument("bad " + what + " '" + s + "' in design file");
  }
  return v;
}

}  // namespace

Design read_design_csv(std::istream& in, const ProblemSpec& spec) {
  std::string line;
  if (!std::getline(in, line) || line != "run,factor,kind,index,value") {
    throw std::invalid_argument("design file must start with the header run,factor,kind,index,value");
  }
  Design d;
  const auto n = static_cast<Eigen::Index>(spec.runs);
  for (const auto& f : spec.profile) {
    d.gammas.emplace_back(n, static_cast<Eigen::Index>(f.x_basis.size()));
  }
  d.scalars.resize(n, static_cast<Eigen::Index>(spec.scalar.size()));

  const auto order = sweep_order(spec);
  std::set<std::size_t> seen;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 5) {
      throw std::invalid_argument("design row must have 5 fields: " + line);
    }
    CoordinateId c;
    c.run = parse_number<Eigen::Index>(fields[0], "run") - 1;
    c.factor = parse_number<std::size_t>(fields[1], "factor") - 1;
    if (fields[2] == "profile") {
      c.kind = CoordinateId::Kind::Profile;
      c.index = parse_number<Eigen::Index>(fields[3], "index") - 1;
    } else if (fields[2] == "scalar") {
      c.kind = CoordinateId::Kind::Scalar;
      if (parse_number<Eigen::Index>(fields[3], "index") != 1) {
        throw std::invalid_argument("scalar rows must have index 1: " + line);
      }
    } else {
      throw std::invalid_argument("unknown coordinate kind '" + fields[2] + "'");
    }
    const auto it = std::find(order.begin(), order.end(), c);
    if (it == order.end()) {
      throw std::invalid_argument("design row does not match the problem: " + line);
    }
    if (!seen.insert(static_cast<std::size_t>(it - order.begin())).second) {
      throw std::invalid_argument("duplicate design row: " + line);
    }
    coordinate_ref(d, c) = parse_number<double>(fields[4], "value");
  }
  if (seen.size() != order.size()) {
    throw std::invalid_argument("design file is missing " +
                                std::to_string(order.size() - seen.size()) + " coordinates");
  }
  check_conforms(spec, d);
  return d;
}

void write_functions_csv(std::ostream& out, const ProblemSpec& spec, const Design& design,
                         std::size_t factor, int sample_points) {
  check_conforms(spec, design);
  if (sample_points < 2) {
    throw std::invalid_argument("need at least two sample points");
  }
  const auto& basis = spec.profile.at(factor).x_basis;
  const auto& gamma = design.gammas[factor];
  out << 't';
  for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
    out << ",run_" << i + 1;
  }
  out << '\n';
  const double lo = basis.lower();
  const double hi = basis.upper();
  for (int k = 0; k < sample_points; ++k) {
    const double t = k == sample_points - 1 ? hi : lo + k * (hi - lo) / (sample_points - 1);
    const Eigen::VectorXd c = eval_basis(basis, t);
    out << format_double(t);
    for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
      out << ',' << format_double(gamma.row(i).dot(c));
    }
    out << '\n';
  }
}

std::optional<double> Summary::efficiency() const {
  if (!reference_value) {
    return std::nullopt;
  }
  return *reference_value / criterion;
}

void write_summary_csv(std::ostream& out, const Summary& s) {
  out << "criterion,efficiency,reference_value,winning_start,sweeps,seed,starts,runs,parameters";
  if (s.oracle_value) {
    out << ",oracle_value";
  }
  out << '\n';
  const auto eff = s.efficiency();
  out << format_double(s.criterion) << ',' << (eff ? format_double(*eff) : "") << ','
      << (s.reference_value ? format_double(*s.reference_value) : "") << ',' << s.winning_start
      << ',' << s.sweeps << ',' << s.seed << ',' << s.starts << ',' << s.runs << ','
      << s.parameters;
  if (s.oracle_value) {
    out << ',' << format_double(*s.oracle_value);
  }
  out << '\n';
}

void fill_sweep_efficiencies(std::vector<SweepRow>& rows) {
  std::map<int, const SweepRow*> reference;
  for (const auto& r : rows) {
    auto& ref = reference[r.runs];
    if (ref == nullptr || r.size > ref->size) {
      ref = &r;
    }
  }
  std::map<int, double> ref_value;
  for (const auto& [n, r] : reference) {
    ref_value[n] = r->criterion;
  }
  for (auto& r : rows) {
    r.efficiency = ref_value[r.runs] / r.criterion;
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "runs,size,criterion,efficiency,winning_start,sweeps\n";
  for (const auto& r : rows) {
    out << r.runs << ',' << r.size << ',' << format_double(r.criterion) << ','
        << format_double(r.efficiency) << ',' << r.winning_start << ',' << r.sweeps << '\n';
  }
}

}  // namespace fdoe::io
