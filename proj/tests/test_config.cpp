#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bernoulli/config.hpp"
#include "bernoulli/errors.hpp"
#include "bernoulli/experiment.hpp"

using namespace bernoulli;
namespace fs = std::filesystem;

namespace {

const char* kMinimal =
    "f = const 0\n"
    "g = const 1\n"
    "h = logdist 1 0 0\n"
    "sigma.kind = circle\n"
    "sigma.center = 0 0\n"
    "sigma.radius = 0.3\n"
    "init.a0 = 2/3\n"
    "init.b1 = 1/12\n"
    "N = 1\n"
    "cnt1 = 20\n"
    "cnt2 = 50\n"
    "out = tiny\n";

config::ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return config::parse_config(is);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bernoulli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + BERNOULLI_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("bundled configurations parse") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(BERNOULLI_CONFIG_DIR)) {
    if (entry.path().extension() != ".conf") continue;
    CAPTURE(entry.path().string());
    const auto cfg = config::load_config(entry.path());
    CHECK(cfg.mode == config::RunMode::Optimize);
    CHECK(cfg.descent.alpha0 == 0.005);
    CHECK(cfg.descent.beta1 == doctest::Approx(2.0 / 3.0));
    CHECK(cfg.descent.beta2 == 0.5);
    CHECK(cfg.descent.epsilon == 1e-4);
    CHECK(cfg.descent.max_iters == 200);
    CHECK(cfg.out == entry.path().stem().string());
    ++count;
  }
  CHECK(count == 17);
}

TEST_CASE("minimal configuration and defaults") {
  const auto cfg = parse(kMinimal);
  CHECK(cfg.order == 1);
  CHECK(cfg.mesh.cnt_sigma == 20);
  CHECK(cfg.mesh.cnt_gamma == 50);
  const auto b = cfg.initial_boundary();
  CHECK(b.a()[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(b.b()[0] == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(cfg.mode == config::RunMode::Optimize);
  CHECK(cfg.descent.alpha0 == 0.005);
}

TEST_CASE("number syntax") {
  CHECK(config::parse_number("2/3") == doctest::Approx(2.0 / 3.0));
  CHECK(config::parse_number(" 1e-4 ") == 1e-4);
  CHECK_THROWS_AS(config::parse_number("1/0"), ConfigError);
  CHECK_THROWS_AS(config::parse_number("abc"), ConfigError);
  CHECK_THROWS_AS(config::parse_number(""), ConfigError);
}

TEST_CASE("malformed configurations are rejected") {
  const std::string base = kMinimal;
  auto without = [&](const std::string& key) {
    std::istringstream is(base);
    std::string line, out;
    while (std::getline(is, line)) {
      if (line.rfind(key + " ", 0) != 0) out += line + "\n";
    }
    return out;
  };
  for (const char* key : {"f", "g", "h", "sigma.kind", "sigma.radius", "N", "cnt1", "cnt2", "init.a0", "out"}) {
    CAPTURE(key);
    CHECK_THROWS_AS(parse(without(key)), ConfigError);
  }
  CHECK_THROWS_AS(parse(base + "bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse(base + "N = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse(base + "this line has no equals\n"), ConfigError);
  CHECK_THROWS_AS(parse(base + "init.a5 = 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse(base + "init.b0 = 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse(base + "opt.beta1 = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse(base + "opt.eps = 0.01\n"), ConfigError);
  CHECK_THROWS_AS(parse(base + "mode = FAST\n"), ConfigError);
  CHECK_THROWS_AS(parse(base + "fd.mode = SIDEWAYS\n"), ConfigError);
  CHECK_THROWS_AS(parse(without("g") + "g = sqrt 2\n"), ConfigError);
  CHECK_THROWS_AS(parse(without("cnt1") + "cnt1 = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse(without("sigma.kind") + "sigma.kind = ellipse\n"), ConfigError);
  CHECK_NOTHROW(parse(base + "# comment\n\nmesh.graded = true  # trailing\n"));
}

TEST_CASE("polygon sigma") {
  std::string text = kMinimal;
  text.replace(text.find("sigma.kind = circle"), 19, "sigma.kind = polygon");
  text.replace(text.find("sigma.center = 0 0\n"), 19, "");
  text.replace(text.find("sigma.radius = 0.3\n"), 19, "sigma.vertices = -0.2 -0.2; 0.2 -0.2; 0.2 0.2; -0.2 0.2\n");
  CHECK_NOTHROW(parse(text));
  std::string crossing = text;
  crossing.replace(crossing.find("-0.2 -0.2; 0.2 -0.2; 0.2 0.2; -0.2 0.2"), 38,
                   "-0.2 -0.2; 0.2 0.2; 0.2 -0.2; -0.2 0.2");
  CHECK_THROWS_AS(parse(crossing), ConfigError);
}

TEST_CASE("sweep value lists") {
  using experiment::SweepParam;
  CHECK(experiment::parse_sweep_values(SweepParam::N, "3..6") == std::vector<std::string>{"3", "4", "5", "6"});
  CHECK(experiment::parse_sweep_values(SweepParam::N, "3,5") == std::vector<std::string>{"3", "5"});
  CHECK(experiment::parse_sweep_values(SweepParam::CntPair, "24:50,48:100").size() == 2);
  CHECK_THROWS_AS(experiment::parse_sweep_values(SweepParam::N, ""), ConfigError);
  CHECK_THROWS_AS(experiment::parse_sweep_values(SweepParam::N, "6..3"), ConfigError);
  CHECK_THROWS_AS(experiment::parse_sweep_values(SweepParam::CntPair, "24-50"), ConfigError);
  CHECK_THROWS_AS(experiment::parse_sweep_param("alpha"), ConfigError);
}

TEST_CASE("a failing run leaves no files") {
  const fs::path root = fresh_dir("failing");
  // The initial shape does not enclose the fixed boundary.
  std::string text = kMinimal;
  text.replace(text.find("init.a0 = 2/3"), 13, "init.a0 = 0.2");
  text.replace(text.find("init.b1 = 1/12\n"), 15, "");
  const auto cfg = parse(text);
  experiment::RunOptions opt;
  opt.output_root = root;
  CHECK_THROWS_AS(experiment::run(cfg, opt), InfeasibleShape);
  CHECK(fs::is_empty(root));
}

TEST_CASE("single evaluation artifacts") {
  const fs::path root = fresh_dir("single");
  auto cfg = parse(std::string(kMinimal) + "mode = SINGLE_EVAL\n");
  experiment::RunOptions opt;
  opt.output_root = root;
  const auto r = experiment::run(cfg, opt);
  for (const char* name : {"u.csv", "w.csv", "p.csv", "flux.csv", "summary.txt", "boundary_initial.csv"}) {
    CHECK(fs::exists(r.out_dir / name));
  }
}

TEST_CASE("optimize runs are deterministic and complete") {
  const fs::path root = fresh_dir("determinism");
  const auto cfg = parse(kMinimal);
  experiment::RunOptions a, b;
  a.output_root = root / "a";
  b.output_root = root / "b";
  a.dump_mesh_iters = {0, 2};
  a.dump_final_mesh = true;
  const auto ra = experiment::run(cfg, a);
  const auto rb = experiment::run(cfg, b);
  CHECK(ra.iterations == rb.iterations);
  CHECK(ra.final_error < ra.initial_error);
  for (const char* name : {"trajectory.csv", "boundary_initial.csv", "boundary_final.csv", "summary.txt"}) {
    CAPTURE(name);
    CHECK(slurp(ra.out_dir / name) == slurp(rb.out_dir / name));
  }
  CHECK(fs::exists(ra.out_dir / "mesh_iter0.txt"));
  CHECK(fs::exists(ra.out_dir / "mesh_iter2.txt"));
  CHECK(fs::exists(ra.out_dir / "mesh_final.txt"));
  CHECK_FALSE(fs::exists(rb.out_dir / "mesh_final.txt"));

  std::istringstream traj(slurp(ra.out_dir / "trajectory.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(traj, line)) ++rows;
  CHECK(rows == ra.iterations + 1);
}

TEST_CASE("command line exit codes") {
  const fs::path root = fresh_dir("cli");
  const fs::path good = root / "good.conf";
  std::ofstream(good) << kMinimal << "mode = SINGLE_EVAL\n";
  const fs::path bad = root / "bad.conf";
  std::ofstream(bad) << kMinimal << "unknown.key = 3\n";

  CHECK(run_cli("run \"" + good.string() + "\" --output-root \"" + (root / "out").string() + "\"") == 0);
  CHECK(fs::exists(root / "out" / "tiny" / "summary.txt"));
  CHECK(run_cli("run \"" + bad.string() + "\" --output-root \"" + (root / "bad_out").string() + "\"") != 0);
  CHECK_FALSE(fs::exists(root / "bad_out"));
  CHECK(run_cli("run \"" + (root / "missing.conf").string() + "\"") != 0);
  CHECK(run_cli("sweep \"" + good.string() + "\" --param N --values \"\"") != 0);
  CHECK(run_cli("") != 0);
}
