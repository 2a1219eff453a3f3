// fuzzyds: build, verify, quantize, and limit-scan fuzzy de Sitter operator
// matrices from the command line.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fuzzyds/cli.hpp"

int main(int argc, char **argv) {
  CLI::App app{"fuzzy de Sitter coherent-state quantization toolkit"};
  app.require_subcommand(1);

  fuzzyds::cli::RunConfig cfg;
  std::string config_path;
  std::string x0_convention = "cs";

  const auto add_common = [&](CLI::App *cmd, bool with_grids = true) {
    cmd->add_option("--config", config_path,
                    "JSON config file; explicit flags win");
    cmd->add_option("--model", cfg.model, "ds2 | ds4");
    cmd->add_option("--r", cfg.r, "fuzziness length r");
    cmd->add_option("--rho", cfg.rho, "principal-series rho (ds2)");
    cmd->add_option("--nu", cfg.nu, "principal-series nu (ds4)");
    cmd->add_option("--s", cfg.s, "spin s, positive half-integer (ds4)");
    cmd->add_option("--epsilon", cfg.epsilon,
                    "Gaussian regularization (default 0.1)");
    cmd->add_option("--M", cfg.M, "ds2 truncation: labels -M..M (default 20)");
    cmd->add_option("--L-max", cfg.l_max,
                    "ds4 model-provider truncation (default 2)");
    cmd->add_option("--Hinv", cfg.h_inv,
                    "curvature length H^{-1} (ds4/limit-scan; default 1)");
    cmd->add_option("--spectrum", cfg.spectrum_path,
                    "JSON spectrum override table (ds4)");
    if (with_grids) {
      cmd->add_option("--nodes-per-unit", cfg.nodes_per_unit,
                      "tau quadrature nodes per unit panel (default 20)");
      cmd->add_option("--theta-count", cfg.theta_count,
                      "theta nodes (ds2; default 4M+5)");
      cmd->add_option("--n-chi", cfg.n_chi, "S^3 chi nodes (default 32)");
      cmd->add_option("--n-theta", cfg.n_theta, "S^3 theta nodes (default 32)");
      cmd->add_option("--n-phi", cfg.n_phi, "S^3 phi nodes (default 32)");
    }
  };

  auto *build = app.add_subcommand(
      "build", "construct operator matrices and write them as JSON");
  add_common(build);
  build->add_option("--out", cfg.out_dir, "output directory")->required();
  build->add_option("--x0-convention", x0_convention,
                    "cs (quantized r tau) or killing (flips the sign)")
      ->check(CLI::IsMember({"cs", "killing"}));

  auto *verify = app.add_subcommand(
      "verify", "check the operator identities and print a report");
  add_common(verify);
  verify->add_option("--from", cfg.from_dir,
                     "verify matrices from a build directory (ds2)");
  verify->add_option("--report", cfg.report_path, "also write the report here");

  auto *quantize = app.add_subcommand(
      "quantize", "quantize a classical observable given as an expression");
  add_common(quantize);
  quantize->add_option("--f", cfg.f_src, "observable (real part)")->required();
  quantize->add_option("--f-im", cfg.f_im_src, "imaginary part, if any");
  quantize->add_option("--out", cfg.out_dir, "output directory")->required();

  auto *scan = app.add_subcommand(
      "limit-scan", "walk the commutative limit r -> 0 at fixed H^{-1}");
  add_common(scan, false);
  scan->add_option("--r-list", cfg.r_list, "r values to scan")
      ->delimiter(',');
  scan->add_option("--report", cfg.report_path, "also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return fuzzyds::cli::exit_config;
  }

  cfg.x0_killing = (x0_convention == "killing");

  const auto run = [&](auto fn) {
    return fuzzyds::cli::guarded(
        [&] {
          if (!config_path.empty())
            fuzzyds::cli::merge_config_file(cfg, config_path);
          return fn(cfg, std::cout);
        },
        std::cerr);
  };

  if (build->parsed())
    return run(fuzzyds::cli::run_build);
  if (verify->parsed())
    return run(fuzzyds::cli::run_verify);
  if (quantize->parsed())
    return run(fuzzyds::cli::run_quantize);
  if (scan->parsed())
    return run(fuzzyds::cli::run_limit_scan);
  return fuzzyds::cli::exit_config;
}
