#include "ctd/errors.hpp"
#include "ctd/experiments.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  CLI::App app{"Thin domain geometry and Korn inequality experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  std::string config_path, out_dir, resolution;
  std::uint64_t seed = 0;
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  auto* out_opt = run->add_option("--out", out_dir, "Output directory");
  auto* seed_opt = run->add_option("--seed", seed, "Random seed");
  auto* res_opt = run->add_option("--resolution", resolution, "Quadrature resolution N1xN2xNr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    // --help is not an error; everything else is bad input
    return rc == 0 ? 0 : 2;
  }

  try {
    ctd::RunConfig cfg = ctd::parse_config_file(config_path);
    if (*out_opt)
      cfg.out = out_dir;
    if (*seed_opt)
      cfg.seed = seed;
    if (*res_opt)
      cfg.resolution = ctd::parse_resolution(resolution);
    const ctd::RunResult result = ctd::run_experiment(cfg);
    ctd::write_outputs(result, cfg.out);
    std::cout << cfg.experiment << ": " << (result.pass ? "pass" : "FAIL") << "\n";
    for (const auto& f : result.failures)
      std::cout << "  failed: " << f << "\n";
    return result.pass ? 0 : 1;
  } catch (const ctd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
