#include "bernoulli/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bernoulli/errors.hpp"
#include "text_util.hpp"

namespace bernoulli::config {

namespace {

double parse_plain(std::string_view text) {
  const std::string s(detail::trim(text));
  if (s.empty()) throw ConfigError("empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError("bad number '" + s + "'");
  }
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  const std::string s(detail::trim(text));
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || v < -1000000 || v > 1000000) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + s + "'");
  }
  return static_cast<int>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
  const auto s = detail::trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(std::string(key) + ": expected true or false");
}

Point2 parse_point(std::string_view key, std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string x, y, extra;
  if (!(is >> x >> y) || (is >> extra)) throw ConfigError(std::string(key) + ": expected two numbers 'x y'");
  return {parse_number(x), parse_number(y)};
}

std::vector<Point2> parse_vertices(std::string_view key, std::string_view text) {
  std::vector<Point2> pts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto semi = text.find(';', start);
    const auto piece = detail::trim(text.substr(start, semi == std::string_view::npos ? std::string_view::npos
                                                                                       : semi - start));
    if (!piece.empty()) pts.push_back(parse_point(key, piece));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  if (pts.size() < 3) throw ConfigError(std::string(key) + ": a polygon needs at least three vertices");
  return pts;
}

}  // namespace

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Optimize: return "OPTIMIZE";
    case RunMode::GradCheck: return "GRAD_CHECK";
    case RunMode::HessianProbe: return "HESSIAN_PROBE";
    case RunMode::SingleEval: return "SINGLE_EVAL";
  }
  return "?";
}

RunMode parse_run_mode(std::string_view text) {
  const auto s = detail::trim(text);
  for (RunMode m : {RunMode::Optimize, RunMode::GradCheck, RunMode::HessianProbe, RunMode::SingleEval}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown mode '" + std::string(s) + "'");
}

double parse_number(std::string_view text) {
  const auto s = detail::trim(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_plain(s);
  const double num = parse_plain(s.substr(0, slash));
  const double den = parse_plain(s.substr(slash + 1));
  if (den == 0.0) throw ConfigError("zero denominator in '" + std::string(s) + "'");
  return num / den;
}

FourierBoundary ExperimentConfig::initial_boundary() const {
  std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0), b(static_cast<std::size_t>(order), 0.0);
  for (auto [i, v] : init_a) {
    if (i > order) {
      if (v == 0.0) continue;
      throw ConfigError("init.a" + std::to_string(i) + " exceeds N = " + std::to_string(order));
    }
    a[static_cast<std::size_t>(i)] = v;
  }
  for (auto [i, v] : init_b) {
    if (i > order) {
      if (v == 0.0) continue;
      throw ConfigError("init.b" + std::to_string(i) + " exceeds N = " + std::to_string(order));
    }
    b[static_cast<std::size_t>(i) - 1] = v;
  }
  return FourierBoundary(std::move(a), std::move(b));
}

ExperimentConfig parse_config(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::map<std::string, int> line_of;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key(detail::trim(body.substr(0, eq)));
    const std::string value(detail::trim(body.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = value;
    line_of[key] = lineno;
  }

  ExperimentConfig cfg;
  std::set<std::string> used;
  auto take = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };
  auto require = [&](const std::string& key) -> const std::string& {
    const std::string* v = take(key);
    if (!v) throw ConfigError("missing required key '" + key + "'");
    return *v;
  };
  auto number = [&](const std::string& key, double& target) {
    if (const std::string* v = take(key)) {
      try {
        target = parse_number(*v);
      } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
      }
    }
  };

  cfg.problem.f = ScalarFunction::parse(require("f"));
  cfg.problem.g = ScalarFunction::parse(require("g"));
  cfg.problem.h = ScalarFunction::parse(require("h"));

  const std::string kind(detail::trim(require("sigma.kind")));
  if (kind == "polygon") {
    try {
      cfg.problem.sigma = FixedBoundarySpec(PolygonSigma{parse_vertices("sigma.vertices", require("sigma.vertices"))});
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("sigma.vertices: ") + e.what());
    }
  } else if (kind == "circle") {
    CircleSigma c;
    c.center = parse_point("sigma.center", require("sigma.center"));
    number("sigma.radius", c.radius);
    if (!used.count("sigma.radius")) throw ConfigError("missing required key 'sigma.radius'");
    if (!(c.radius > 0.0)) throw ConfigError("sigma.radius must be positive");
    cfg.problem.sigma = FixedBoundarySpec(c);
  } else {
    throw ConfigError("sigma.kind must be polygon or circle");
  }

  cfg.order = parse_int("N", require("N"));
  cfg.mesh.cnt_sigma = parse_int("cnt1", require("cnt1"));
  cfg.mesh.cnt_gamma = parse_int("cnt2", require("cnt2"));

  for (const auto& [key, value] : kv) {
    if (key.rfind("init.", 0) != 0) continue;
    const std::string rest = key.substr(5);
    if (rest.size() < 2 || (rest[0] != 'a' && rest[0] != 'b')) throw ConfigError("unknown key '" + key + "'");
    const int index = parse_int(key, rest.substr(1));
    if (index < 0 || (rest[0] == 'b' && index < 1)) throw ConfigError("bad coefficient index in '" + key + "'");
    double v = 0.0;
    number(key, v);
    (rest[0] == 'a' ? cfg.init_a : cfg.init_b)[index] = v;
  }
  if (!cfg.init_a.count(0)) throw ConfigError("missing required key 'init.a0'");

  number("opt.alpha0", cfg.descent.alpha0);
  number("opt.beta1", cfg.descent.beta1);
  number("opt.beta2", cfg.descent.beta2);
  number("opt.eps", cfg.descent.epsilon);
  if (const std::string* v = take("opt.max_iters")) cfg.descent.max_iters = parse_int("opt.max_iters", *v);

  if (const std::string* v = take("mode")) cfg.mode = parse_run_mode(*v);
  cfg.out = std::string(detail::trim(require("out")));
  if (cfg.out.empty()) throw ConfigError("out must not be empty");

  number("mesh.edge_factor", cfg.mesh.edge_factor);
  number("mesh.min_angle", cfg.mesh.min_angle_deg);
  if (const std::string* v = take("mesh.graded")) cfg.mesh.graded = parse_bool("mesh.graded", *v);
  number("fd.h", cfg.fd.h);
  if (const std::string* v = take("fd.mode")) {
    const auto s = detail::trim(*v);
    if (s == "MORPH") {
      cfg.fd.mode = validation::FdMode::Morph;
    } else if (s == "REMESH") {
      cfg.fd.mode = validation::FdMode::Remesh;
    } else {
      throw ConfigError("fd.mode must be MORPH or REMESH");
    }
  }
  number("hessian.delta", cfg.hessian_delta);
  if (const std::string* v = take("hessian.max_mode")) cfg.hessian_max_mode = parse_int("hessian.max_mode", *v);

  for (const auto& [key, value] : kv) {
    if (!used.count(key)) {
      throw ConfigError("line " + std::to_string(line_of[key]) + ": unknown key '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  try {
    return parse_config(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.order < 0 || cfg.order > 64) throw ConfigError("N must lie in [0, 64]");
  if (cfg.mesh.cnt_sigma < 8) throw ConfigError("cnt1 must be at least 8");
  if (cfg.mesh.cnt_gamma < 8) throw ConfigError("cnt2 must be at least 8");
  if (!(cfg.mesh.edge_factor > 0.0)) throw ConfigError("mesh.edge_factor must be positive");
  if (!(cfg.mesh.min_angle_deg > 0.0 && cfg.mesh.min_angle_deg <= 30.0)) {
    throw ConfigError("mesh.min_angle must lie in (0, 30]");
  }
  opt::validate(cfg.descent);
  validation::validate(cfg.fd);
  if (!(cfg.hessian_delta > 0.0 && cfg.hessian_delta < 1.0)) throw ConfigError("hessian.delta must lie in (0, 1)");
  if (cfg.hessian_max_mode < 0) throw ConfigError("hessian.max_mode must be non-negative");
  (void)cfg.initial_boundary();
}

}  // namespace bernoulli::config
