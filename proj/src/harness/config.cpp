#include "ircg/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace ircg {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "run.solvers",           "run.max_iters",        "run.time_limit_s",   "run.record_every",
      "run.seed",              "run.g_opt_coarse",     "run.g_opt_fine",     "schedule.varsigma",
      "schedule.p",            "solver.line_search_tol", "solver.irpg_mode", "solver.irpg_theta",
      "solver.irpg_alpha_tilde", "solver.irpg_eta",    "solver.eps_g",       "solver.bisg_alpha",
      "solver.bisg_c",         "instance.kind",        "instance.rows",      "instance.cols",
      "instance.rank",         "instance.density",     "instance.noise",     "instance.delta",
      "instance.radius",       "instance.f_center",    "instance.aq_diag",   "instance.kappa",
      "instance.path"};
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used == v.size() && std::isfinite(out)) return out;
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::ConfigError, key + ": expected a number, got '" + v + "'");
}

Index to_index(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || d < 0) throw Error(ErrorCode::ConfigError, key + ": expected a nonnegative integer");
  return static_cast<Index>(d);
}

std::vector<std::string> to_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : to_list(v)) out.push_back(to_double(key, item));
  return out;
}

}  // namespace

void apply_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  const auto& keys = config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
  }
  c.raw[key] = value;
  if (key == "run.solvers") {
    c.solvers = to_list(value);
    if (c.solvers.empty()) throw Error(ErrorCode::ConfigError, "run.solvers is empty");
  } else if (key == "run.max_iters") c.max_iters = to_index(key, value);
  else if (key == "run.time_limit_s") c.time_limit_s = to_double(key, value);
  else if (key == "run.record_every") c.record_every = std::max<Index>(1, to_index(key, value));
  else if (key == "run.seed") c.seed = static_cast<std::uint64_t>(to_index(key, value));
  else if (key == "run.g_opt_coarse") c.g_opt_coarse = to_double(key, value);
  else if (key == "run.g_opt_fine") c.g_opt_fine = to_double(key, value);
  else if (key == "schedule.varsigma") c.schedule.varsigma = to_double(key, value);
  else if (key == "schedule.p") c.schedule.p = to_double(key, value);
  else if (key == "solver.line_search_tol") c.line_search_tol = to_double(key, value);
  else if (key == "solver.irpg_mode") c.irpg_mode = value;
  else if (key == "solver.irpg_theta") c.irpg_theta = to_double(key, value);
  else if (key == "solver.irpg_alpha_tilde") c.irpg_alpha_tilde = to_double(key, value);
  else if (key == "solver.irpg_eta") c.irpg_eta = to_double(key, value);
  else if (key == "solver.eps_g") c.eps_g = to_double(key, value);
  else if (key == "solver.bisg_alpha") c.bisg_alpha = to_double(key, value);
  else if (key == "solver.bisg_c") c.bisg_c = to_double(key, value);
  else if (key == "instance.kind") c.instance = value;
  else if (key == "instance.rows") c.rows = to_index(key, value);
  else if (key == "instance.cols") c.cols = to_index(key, value);
  else if (key == "instance.rank") c.rank = to_index(key, value);
  else if (key == "instance.density") c.density = to_double(key, value);
  else if (key == "instance.noise") c.noise = to_double(key, value);
  else if (key == "instance.delta") c.delta = to_double(key, value);
  else if (key == "instance.radius") c.radius = to_double(key, value);
  else if (key == "instance.f_center") c.f_center = to_doubles(key, value);
  else if (key == "instance.aq_diag") c.aq_diag = to_doubles(key, value);
  else if (key == "instance.kappa") c.kappa = to_double(key, value);
  else if (key == "instance.path") c.path = value;
}

RunConfig parse_config(const std::string& text, const std::string& name) {
  RunConfig config;
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError, name + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (config.raw.count(key)) {
      throw Error(ErrorCode::ConfigError, name + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    try {
      apply_config_value(config, key, trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

BilevelProblem build_instance(const RunConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  if (c.instance == "least_norm") {
    Eigen::MatrixXd a(c.rows, c.cols);
    for (Index j = 0; j < a.cols(); ++j)
      for (Index i = 0; i < a.rows(); ++i) a(i, j) = normal(rng);
    Eigen::VectorXd x(c.cols);
    for (Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
    const Eigen::VectorXd b = a * x;
    return make_least_norm(a, b, c.radius > 0 ? std::optional<double>(c.radius) : std::nullopt);
  }
  if (c.instance == "ball_quadratic") {
    const Index n = !c.aq_diag.empty() ? static_cast<Index>(c.aq_diag.size())
                                       : std::max<Index>(static_cast<Index>(c.f_center.size()), 2);
    Eigen::MatrixXd aq = Eigen::MatrixXd::Identity(n, n);
    if (!c.aq_diag.empty()) aq = Eigen::Map<const Eigen::VectorXd>(c.aq_diag.data(), n).asDiagonal();
    Eigen::VectorXd center = Eigen::VectorXd::Zero(n);
    if (!c.f_center.empty()) {
      if (static_cast<Index>(c.f_center.size()) != n) {
        throw Error(ErrorCode::ConfigError, "instance.f_center length must match instance.aq_diag");
      }
      center = Eigen::Map<const Eigen::VectorXd>(c.f_center.data(), n);
    }
    return make_ball_quadratic(aq, Eigen::VectorXd::Zero(n), center,
                               c.kappa > 0 ? std::optional<double>(c.kappa) : std::nullopt);
  }
  if (c.instance == "interval") return make_interval_quadratic();
  if (c.instance == "matrix_completion") {
    const Observations obs = c.path.empty()
                                 ? gen_synthetic_completion(c.rows, c.cols, c.rank, c.density, c.noise, c.seed)
                                 : load_ratings(c.path, c.raw.count("instance.rows") ? c.rows : 6040,
                                                c.raw.count("instance.cols") ? c.cols : 3952);
    return make_matrix_completion(obs, c.delta);
  }
  throw Error(ErrorCode::ConfigError, "unknown instance.kind '" + c.instance + "'");
}

}  // namespace ircg
