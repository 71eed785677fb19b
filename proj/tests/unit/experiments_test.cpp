#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fchv/checkpoint.hpp"
#include "fchv/error.hpp"
#include "fchv/experiments.hpp"
#include "test_support.hpp"

using namespace fchv;

namespace {

std::string out_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "fchv_unit_exp" / name;
  std::filesystem::remove_all(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_simulation(const std::string& dir) {
  ExperimentConfig cfg = default_config("simulate");
  cfg.grid = {2, 32, 6.283185307179586};
  cfg.params.t_end = 0.2;
  cfg.params.dt = 0.01;
  cfg.sample_stride = 2;
  cfg.output_dir = dir;
  return cfg;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("exit codes") {
    CHECK(exit_code(Outcome::pass) == 0);
    CHECK(exit_code(Outcome::fail) == 1);
    CHECK(exit_code(Outcome::blow_up) == 3);
  }

  TEST_CASE("check list verdicts") {
    CheckList a;
    a.add("ok", true);
    a.info("note", {{"x", 1}});
    CHECK(a.passed());
    CheckList b;
    b.add("bad", false);
    a.merge(b);
    CHECK_FALSE(a.passed());
    CHECK(a.json().size() == 3);
  }

  TEST_CASE("unknown datum and scenario") {
    ExperimentConfig cfg = small_simulation(out_dir("unknown"));
    cfg.datum.kind = "nonsense";
    CHECK_THROWS_AS(make_datum(cfg, SpectralGrid::create(2, 16, 1.0)), ConfigError);
    cfg.scenario = "nonsense";
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  }

  TEST_CASE("simulation output is reproducible and restartable") {
    const auto a = small_simulation(out_dir("sim_a"));
    const auto b = small_simulation(out_dir("sim_b"));
    CHECK(run_experiment(a).outcome == Outcome::pass);
    CHECK(run_experiment(b).outcome == Outcome::pass);
    const auto csv = slurp(a.output_dir + "/energy.csv");
    CHECK(csv.rfind("t,E,D,v_l2,gradv_l2,fhat_max\n", 0) == 0);
    CHECK(csv == slurp(b.output_dir + "/energy.csv"));
    CHECK(std::filesystem::exists(a.output_dir + "/report.json"));

    auto first = small_simulation(out_dir("sim_first"));
    first.params.t_end = 0.1;
    CHECK(run_experiment(first).outcome == Outcome::pass);
    auto resumed = small_simulation(out_dir("sim_resumed"));
    resumed.resume = first.output_dir + "/final.bin";
    CHECK(run_experiment(resumed).outcome == Outcome::pass);
    const auto whole = load_checkpoint(a.output_dir + "/final.bin");
    const auto split = load_checkpoint(resumed.output_dir + "/final.bin");
    CHECK(testing::max_abs_diff(whole.state.v.field, split.state.v.field) <=
          1e-13 * testing::max_abs(whole.state.v.field));
  }

  TEST_CASE("self test suite passes") {
    ExperimentConfig cfg = default_config("selftest");
    cfg.output_dir = out_dir("selftest");
    const auto r = run_experiment(cfg);
    INFO(r.json.dump(2));
    CHECK(r.outcome == Outcome::pass);
  }
}
