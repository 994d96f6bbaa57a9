#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wavesel/config.hpp"
#include "wavesel/run.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::string format = "text";
};

void add_common_options(CLI::App* sub, CliOptions* cli) {
  sub->add_option("-c,--config", cli->config_path,
                  "configuration file (key = value lines)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("-o,--out", cli->out_dir,
                  "output directory (created if missing)")
      ->capture_default_str();
  sub->add_option("--seed", cli->seed, "seed for synthetic noise")
      ->capture_default_str();
  sub->add_option("--format", cli->format, "report format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelength-selective device toolkit: simulate, analyze, fit, "
               "and audit transmission spectra"};
  app.require_subcommand(1);

  CliOptions cli;
  add_common_options(
      app.add_subcommand("simulate",
                         "Write the transmission spectrum of a device"),
      &cli);
  add_common_options(
      app.add_subcommand("analyze",
                         "Extract resonance features and summary metrics"),
      &cli);
  add_common_options(
      app.add_subcommand("fit",
                         "Fit microring parameters to a measured spectrum"),
      &cli);
  add_common_options(
      app.add_subcommand("audit",
                         "Check a linewidth against the uncertainty floor"),
      &cli);
  add_common_options(
      app.add_subcommand("sweep",
                         "Tabulate metrics across a device parameter range"),
      &cli);

  CLI11_PARSE(app, argc, argv);

  try {
    const wavesel::Command command =
        wavesel::parse_command_name(app.get_subcommands().front()->get_name());
    const wavesel::RunConfig config =
        wavesel::load_config_file(cli.config_path);
    wavesel::RunOptions options;
    options.out_dir = cli.out_dir;
    options.seed = cli.seed;
    options.format = cli.format == "structured" ? wavesel::ReportFormat::structured
                                                : wavesel::ReportFormat::text;
    return wavesel::run_command(command, config, options, std::cerr);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return wavesel::kExitValidation;
  }
}
