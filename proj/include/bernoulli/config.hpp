#pragma once

// Flat key=value experiment configuration.
//
//   # comment
//   f = const 0
//   g = const 3
//   h = const 1
//   sigma.kind = polygon            # or circle
//   sigma.vertices = -0.25 -0.25; 0.25 -0.25; 0.25 0; 0 0; 0 0.25; -0.25 0.25
//   sigma.center = 0 0              # circle only
//   sigma.radius = 0.3              # circle only
//   init.a0 = 2/3
//   init.a3 = 1/12
//   N = 8
//   cnt1 = 48                       # points on Sigma
//   cnt2 = 100                      # points on Gamma
//   opt.alpha0 = 0.005
//   opt.beta1 = 2/3
//   opt.beta2 = 1/2
//   opt.eps = 1e-4
//   opt.max_iters = 200
//   mode = OPTIMIZE                 # GRAD_CHECK, HESSIAN_PROBE, SINGLE_EVAL
//   out = experiment1_N8
//
// Optional: mesh.edge_factor, mesh.min_angle, mesh.graded, fd.h, fd.mode
// (MORPH|REMESH), hessian.delta, hessian.max_mode. Numbers accept a/b
// fractions. Unknown keys are errors.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "bernoulli/optimizer.hpp"
#include "bernoulli/shape_calculus.hpp"
#include "bernoulli/validation.hpp"

namespace bernoulli::config {

enum class RunMode { Optimize, GradCheck, HessianProbe, SingleEval };

std::string_view to_string(RunMode mode);
RunMode parse_run_mode(std::string_view text);

struct ExperimentConfig {
  shape::ProblemData problem;
  std::map<int, double> init_a;  // index -> coefficient
  std::map<int, double> init_b;
  int order = 1;
  shape::MeshParams mesh;
  opt::DescentParams descent;
  RunMode mode = RunMode::Optimize;
  std::string out;
  validation::FdParams fd;
  double hessian_delta = 1e-2;
  int hessian_max_mode = 5;

  // Throws ConfigError if an initial coefficient exceeds the order.
  FourierBoundary initial_boundary() const;
};

// Parses a real, allowing `p/q`. Throws ConfigError.
double parse_number(std::string_view text);

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& path);

// Throws ConfigError on violated invariants (counts >= 8, descent parameters,
// FD step, ...).
void validate(const ExperimentConfig& config);

}  // namespace bernoulli::config
