#include "harness.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  namespace h = ogflow::harness;

  CLI::App app{"Constrained sampling with orthogonal-space gradient flows"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "Run a sampler from a JSON config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--output-dir", output_dir, "Override the config's output_dir");

  h::VerifyOptions verify_opts;
  std::string fault;
  auto* verify = app.add_subcommand("verify", "Check geometric identities and derivatives");
  verify->add_option("--points", verify_opts.n_points, "Random points for identity checks");
  verify->add_option("--seed", verify_opts.seed, "Seed for the check points");
  verify->add_option("--inject-fault", fault)
      ->check(CLI::IsMember({"negate-r", "critical-point"}))
      ->group("");

  std::string samples_a;
  std::string samples_b;
  std::string constraint;
  auto* metrics = app.add_subcommand("metrics", "Energy distance between two sample CSVs");
  metrics->add_option("a", samples_a)->required();
  metrics->add_option("b", samples_b)->required();
  metrics->add_option("--constraint", constraint, "Also report MAE for this constraint");

  long long gt_n = 0;
  std::uint64_t gt_seed = 0;
  std::string gt_out;
  auto* gt = app.add_subcommand("groundtruth", "Exact samples from the synthetic target");
  gt->add_option("--n", gt_n)->required();
  gt->add_option("--seed", gt_seed)->required();
  gt->add_option("--out", gt_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : h::kExitConfigError;
  }

  if (*run) {
    std::optional<std::filesystem::path> override;
    if (!output_dir.empty()) override = output_dir;
    return h::cli_run(config_path, override, std::cout, std::cerr);
  }
  if (*verify) {
    verify_opts.negate_correction = fault == "negate-r";
    verify_opts.inject_critical_point = fault == "critical-point";
    return h::cli_verify(verify_opts, std::cout, std::cerr);
  }
  if (*metrics) {
    std::optional<std::string> c;
    if (!constraint.empty()) c = constraint;
    return h::cli_metrics(samples_a, samples_b, c, std::cout, std::cerr);
  }
  return h::cli_groundtruth(gt_n, gt_seed, gt_out, std::cout, std::cerr);
}
