#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "campaign.hpp"
#include "subrv/errors.hpp"

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int run_command(const std::string& config_path, const std::string& out_path, std::optional<std::uint64_t> seed) {
  using namespace subrv::cli;
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const subrv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  if (seed) cfg.seed = *seed;
  if (!out_path.empty()) cfg.report_path = out_path;

  const Report rep = run(cfg);
  const std::string text = rep.to_json(utc_now()).dump(2) + "\n";
  if (cfg.report_path) {
    std::ofstream out(*cfg.report_path);
    if (!out) {
      std::cerr << "cannot write report '" << *cfg.report_path << "'\n";
      return 1;
    }
    out << text;
  } else {
    std::cout << text;
  }
  if (cfg.csv_dir)
    for (const auto& t : rep.tables) write_csv(*cfg.csv_dir, t);
  for (const auto& t : rep.tasks) std::cerr << to_string(t.status) << "  " << t.name << '\n';
  return rep.any_fail() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subrv: sub-Riemannian limit verification campaigns"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "run the tasks listed in a config file");
  run->add_option("--config", config_path, "JSON config")->required();
  run->add_option("--out", out_path, "report path (default: config output.report, else stdout)");
  run->add_option("--seed", seed, "override the config seed");

  auto* list = app.add_subcommand("list-tasks", "list task names");
  auto* conv = app.add_subcommand("print-conventions", "print the sign conventions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) return run_command(config_path, out_path, seed);
    if (*list) {
      for (const auto& t : subrv::cli::task_registry()) std::cout << t.name << "  " << t.summary << '\n';
      return 0;
    }
    if (*conv) {
      std::cout << subrv::cli::conventions_text();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
