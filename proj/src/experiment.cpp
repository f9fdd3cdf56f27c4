#include "bernoulli/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "bernoulli/errors.hpp"
#include "bernoulli/meshing.hpp"
#include "text_util.hpp"

namespace bernoulli::experiment {

namespace {

using Files = std::map<std::string, std::string>;

constexpr int kBoundaryPlotPoints = 512;

std::string boundary_csv(const FourierBoundary& boundary) {
  std::ostringstream os;
  write_polyline_csv(os, sample_polyline(boundary, kBoundaryPlotPoints));
  return os.str();
}

std::string mesh_text(const Mesh& mesh) {
  std::ostringstream os;
  write_mesh(os, mesh);
  return os.str();
}

std::string gamma_values_csv(const fem::Discretization& disc, const std::vector<double>& values) {
  std::ostringstream os;
  for (std::size_t k = 0; k < values.size(); ++k) {
    os << disc.gamma_nodes()[k] << ',' << detail::format_real(values[k]) << '\n';
  }
  return os.str();
}

std::string field_csv(const fem::ScalarField& field) {
  std::ostringstream os;
  fem::write_field_csv(os, field);
  return os.str();
}

void write_files(const std::filesystem::path& dir, const Files& files) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : files) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    if (!out) throw Error("cannot write " + (dir / name).string());
  }
}

// Summary lines shared by all modes.
void describe_setup(std::ostream& os, const config::ExperimentConfig& cfg, const Mesh& mesh) {
  const auto gamma_pts = sample_polyline(cfg.initial_boundary(), cfg.mesh.cnt_gamma);
  os << "mode " << config::to_string(cfg.mode) << '\n'
     << "N " << cfg.order << '\n'
     << "cnt1 " << cfg.mesh.cnt_sigma << '\n'
     << "cnt2 " << cfg.mesh.cnt_gamma << '\n'
     << "mesh_edge_factor " << detail::format_real(cfg.mesh.edge_factor) << '\n'
     << "mesh_graded " << (cfg.mesh.graded ? "true" : "false") << '\n'
     << "mesh_min_angle_deg " << detail::format_real(cfg.mesh.min_angle_deg) << '\n'
     << "initial_mesh_target_edge_length "
     << detail::format_real(shape::target_edge_length(gamma_pts, cfg.mesh)) << '\n'
     << "initial_mesh_nodes " << mesh.nodes.size() << '\n'
     << "initial_mesh_triangles " << mesh.triangles.size() << '\n';
}

RunResult run_optimize(const config::ExperimentConfig& cfg, const RunOptions& options, Files& files) {
  const int order = cfg.order;
  const FourierBoundary initial = cfg.initial_boundary();
  const shape::ProblemData& problem = cfg.problem;

  // The line search evaluates J at trial points; the gradient is always taken
  // at the last accepted point, whose evaluation is cached here.
  std::vector<double> cached_x;
  std::shared_ptr<shape::ShapeEvaluation> cached_eval;
  auto objective = [&](const std::vector<double>& x) {
    auto ev = std::make_shared<shape::ShapeEvaluation>(
        shape::evaluate(problem, FourierBoundary::from_coefficients(x, order), cfg.mesh));
    cached_x = x;
    cached_eval = ev;
    return ev->J;
  };
  std::map<std::vector<double>, std::shared_ptr<shape::ShapeEvaluation>> accepted;
  auto gradient = [&](const std::vector<double>& x) {
    const auto it = accepted.find(x);
    if (it != accepted.end()) return shape::gradient(*it->second, problem);
    return shape::gradient(problem, FourierBoundary::from_coefficients(x, order), cfg.mesh);
  };
  auto on_accept = [&](int k, const std::vector<double>& x, double, double) {
    accepted.clear();
    if (cached_eval && cached_x == x) accepted.emplace(x, cached_eval);
    if (options.dump_mesh_iters.count(k)) {
      const auto mesh = shape::build_mesh(FourierBoundary::from_coefficients(x, order), problem.sigma, cfg.mesh);
      files["mesh_iter" + std::to_string(k) + ".txt"] = mesh_text(*mesh);
    }
  };

  const opt::OptTrajectory traj = opt::descend(objective, gradient, initial.coefficients(), cfg.descent, on_accept);
  const FourierBoundary final_boundary = FourierBoundary::from_coefficients(traj.iterates.back(), order);

  {
    std::ostringstream os;
    opt::write_trajectory_csv(os, traj, order);
    files["trajectory.csv"] = os.str();
  }
  files["boundary_initial.csv"] = boundary_csv(initial);
  files["boundary_final.csv"] = boundary_csv(final_boundary);

  const auto initial_mesh = shape::build_mesh(initial, problem.sigma, cfg.mesh);
  const auto final_mesh = shape::build_mesh(final_boundary, problem.sigma, cfg.mesh);
  if (options.dump_final_mesh) files["mesh_final.txt"] = mesh_text(*final_mesh);

  RunResult result;
  result.initial_error = traj.objective_values.front();
  result.final_error = traj.objective_values.back();
  result.iterations = traj.accepted_steps();
  result.stop_reason = std::string(opt::to_string(traj.stop_reason));

  const validation::CircleError circle = validation::exact_circle_error(final_boundary);
  std::ostringstream os;
  describe_setup(os, cfg, *initial_mesh);
  os << "final_mesh_nodes " << final_mesh->nodes.size() << '\n'
     << "final_mesh_triangles " << final_mesh->triangles.size() << '\n'
     << "initial_error " << detail::format_real(result.initial_error) << '\n'
     << "NoI " << result.iterations << '\n'
     << "final_error " << detail::format_real(result.final_error) << '\n'
     << "stop_reason " << result.stop_reason << '\n'
     << "final_unit_circle_mean_dev " << detail::format_real(circle.mean_radius_dev) << '\n'
     << "final_unit_circle_max_dev " << detail::format_real(circle.max_radius_dev) << '\n';
  files["summary.txt"] = os.str();
  return result;
}

RunResult run_single_eval(const config::ExperimentConfig& cfg, Files& files) {
  const FourierBoundary boundary = cfg.initial_boundary();
  const shape::ShapeEvaluation ev = shape::evaluate(cfg.problem, boundary, cfg.mesh);
  const fem::ScalarField p = shape::solve_adjoint(ev);
  const std::vector<double> grad = shape::gradient(ev, cfg.problem);

  files["boundary_initial.csv"] = boundary_csv(boundary);
  files["u.csv"] = field_csv(ev.u);
  files["w.csv"] = field_csv(ev.w);
  files["p.csv"] = field_csv(p);
  files["flux.csv"] = gamma_values_csv(*ev.disc, ev.flux);
  std::ostringstream os;
  describe_setup(os, cfg, ev.disc->mesh());
  os << "J " << detail::format_real(ev.J) << '\n';
  const auto modes = shape::gradient_modes(cfg.order);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    os << "gradient " << shape::to_string(modes[i]) << ' ' << detail::format_real(grad[i]) << '\n';
  }
  files["summary.txt"] = os.str();
  RunResult r;
  r.initial_error = r.final_error = ev.J;
  return r;
}

RunResult run_grad_check(const config::ExperimentConfig& cfg, Files& files) {
  const FourierBoundary boundary = cfg.initial_boundary();
  const shape::ValueAndGradient vg = shape::value_and_gradient(cfg.problem, boundary, cfg.mesh);
  const std::vector<double> fd = validation::fd_gradient(cfg.problem, boundary, cfg.mesh, cfg.fd);
  std::vector<validation::GradientRow> rows;
  double worst = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    rows.push_back({i, vg.gradient[i], fd[i]});
    const double scale = std::max(std::abs(vg.gradient[i]), std::abs(fd[i]));
    if (scale > 0.0) worst = std::max(worst, std::abs(vg.gradient[i] - fd[i]) / scale);
  }
  std::ostringstream report;
  validation::write_gradient_report(report, rows);
  files["gradient_check.csv"] = report.str();
  files["boundary_initial.csv"] = boundary_csv(boundary);
  std::ostringstream os;
  describe_setup(os, cfg, vg.eval.disc->mesh());
  os << "J " << detail::format_real(vg.eval.J) << '\n'
     << "fd_h " << detail::format_real(cfg.fd.h) << '\n'
     << "fd_mode " << (cfg.fd.mode == validation::FdMode::Morph ? "MORPH" : "REMESH") << '\n'
     << "max_rel_diff " << detail::format_real(worst) << '\n';
  files["summary.txt"] = os.str();
  RunResult r;
  r.initial_error = r.final_error = vg.eval.J;
  return r;
}

RunResult run_hessian_probe(const config::ExperimentConfig& cfg, Files& files) {
  const FourierBoundary boundary = cfg.initial_boundary();
  const validation::ShapeLine line(cfg.problem, boundary, cfg.mesh, cfg.fd.mode);
  const double d = cfg.hessian_delta;
  std::vector<validation::HessianRow> rows;
  for (int k = 0; k <= cfg.hessian_max_mode; ++k) {
    const shape::VelocityMode mode{shape::ModeKind::Cos, k};
    rows.push_back({mode, (line(mode, d) - 2.0 * line.base().J + line(mode, -d)) / (d * d)});
  }
  std::ostringstream report;
  validation::write_hessian_report(report, rows);
  files["hessian_probe.csv"] = report.str();
  files["boundary_initial.csv"] = boundary_csv(boundary);
  std::ostringstream os;
  describe_setup(os, cfg, line.base().disc->mesh());
  os << "J " << detail::format_real(line.base().J) << '\n'
     << "hessian_delta " << detail::format_real(d) << '\n';
  files["summary.txt"] = os.str();
  RunResult r;
  r.initial_error = r.final_error = line.base().J;
  return r;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

}  // namespace

std::filesystem::path output_directory(const config::ExperimentConfig& cfg, const RunOptions& options) {
  const std::filesystem::path out(cfg.out);
  if (out.is_absolute()) return out;
  if (!options.output_root.empty()) return options.output_root / out;
  if (const char* root = std::getenv(kOutputRootEnv); root && *root) return std::filesystem::path(root) / out;
  return out;
}

RunResult run(const config::ExperimentConfig& cfg, const RunOptions& options) {
  config::validate(cfg);
  Files files;
  RunResult result;
  switch (cfg.mode) {
    case config::RunMode::Optimize: result = run_optimize(cfg, options, files); break;
    case config::RunMode::SingleEval: result = run_single_eval(cfg, files); break;
    case config::RunMode::GradCheck: result = run_grad_check(cfg, files); break;
    case config::RunMode::HessianProbe: result = run_hessian_probe(cfg, files); break;
  }
  result.out_dir = output_directory(cfg, options);
  write_files(result.out_dir, files);
  return result;
}

SweepParam parse_sweep_param(std::string_view text) {
  if (text == "N") return SweepParam::N;
  if (text == "cnt_pair") return SweepParam::CntPair;
  throw ConfigError("sweep parameter must be N or cnt_pair");
}

std::vector<std::string> parse_sweep_values(SweepParam param, std::string_view text) {
  std::vector<std::string> values;
  const auto trimmed = detail::trim(text);
  if (param == SweepParam::N) {
    const auto dots = trimmed.find("..");
    if (dots != std::string_view::npos) {
      const double lo = config::parse_number(trimmed.substr(0, dots));
      const double hi = config::parse_number(trimmed.substr(dots + 2));
      if (lo != std::floor(lo) || hi != std::floor(hi) || lo > hi) {
        throw ConfigError("bad range '" + std::string(trimmed) + "'");
      }
      for (int n = static_cast<int>(lo); n <= static_cast<int>(hi); ++n) values.push_back(std::to_string(n));
      return values;
    }
  }
  std::size_t start = 0;
  while (start <= trimmed.size()) {
    const auto comma = trimmed.find(',', start);
    const auto piece = detail::trim(
        trimmed.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!piece.empty()) values.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (values.empty()) throw ConfigError("sweep value list is empty");
  for (const std::string& v : values) {
    if (param == SweepParam::CntPair && v.find(':') == std::string::npos) {
      throw ConfigError("cnt_pair values look like cnt1:cnt2, got '" + v + "'");
    }
  }
  return values;
}

std::vector<SweepRow> sweep(const config::ExperimentConfig& base, SweepParam param,
                            const std::vector<std::string>& values, const RunOptions& options) {
  if (values.empty()) throw ConfigError("sweep value list is empty");
  if (base.mode != config::RunMode::Optimize) throw ConfigError("sweeps need mode = OPTIMIZE");
  const std::filesystem::path root = output_directory(base, options);
  std::vector<SweepRow> rows;
  for (const std::string& value : values) {
    SweepRow row;
    row.value = value;
    try {
      config::ExperimentConfig cfg = base;
      std::string tag;
      if (param == SweepParam::N) {
        cfg.order = static_cast<int>(config::parse_number(value));
        if (cfg.order != config::parse_number(value)) throw ConfigError("N must be an integer");
        tag = "N_" + value;
      } else {
        const auto colon = value.find(':');
        cfg.mesh.cnt_sigma = static_cast<int>(config::parse_number(value.substr(0, colon)));
        cfg.mesh.cnt_gamma = static_cast<int>(config::parse_number(value.substr(colon + 1)));
        tag = "cnt_" + value.substr(0, colon) + "_" + value.substr(colon + 1);
      }
      cfg.out = std::filesystem::absolute(root / tag).string();
      row.result = run(cfg, options);
      row.status = "ok";
    } catch (const std::exception& e) {
      row.status = sanitize(e.what());
    }
    rows.push_back(std::move(row));
  }
  std::ostringstream os;
  write_sweep_csv(os, rows);
  write_files(root, {{"sweep.csv", os.str()}});
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "value,initial_error,NoI,final_error,status\n";
  for (const SweepRow& r : rows) {
    os << r.value << ',';
    if (r.status == "ok") {
      os << detail::format_real(r.result.initial_error) << ',' << r.result.iterations << ','
         << detail::format_real(r.result.final_error);
    } else {
      os << ",,";
    }
    os << ',' << r.status << '\n';
  }
}

}  // namespace bernoulli::experiment
