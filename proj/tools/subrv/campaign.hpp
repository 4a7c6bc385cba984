#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "subrv/bcv.hpp"
#include "subrv/functionals.hpp"
#include "subrv/surface.hpp"

namespace subrv::cli {

using nlohmann::json;

struct SurfaceChoice {
  std::string preset = "horizontal-plane";  // horizontal-plane | tilted-plane | saddle
  double coefficient = 0.0;
  bool coefficient_set = false;
  ScalarField graph() const;                 // phi with u = x3 - phi(x1, x2)
  std::string label() const;
};

struct Tolerances {
  double lemma1 = 1e-10;
  double lemma2 = 1e-9;
  double scalar = 1e-10;
  double twisted = 1e-8;
  double gauss = 1e-8;
  double limit = 1e-4;
  double rate = 0.05;
  double mean_curvature = 1e-6;
  double area = 1e-6;
  double omega4 = 1e-7;
  double hand_value = 1e-12;
  double conformal = 1e-6;
  double referee = 2e-2;
  double constants = 1e-14;
};

struct RunConfig {
  std::uint64_t seed = 42;
  std::vector<double> lambdas{-1.0, -0.5, 0.0, 0.5, 1.0};
  std::vector<double> taus{0.5, 1.0, 2.0};
  std::vector<double> Ls{1.0, 2.0, 4.0};
  int points = 100;

  int twisted_specs = 5;
  int twisted_points = 50;

  std::vector<SurfaceChoice> surfaces{{"horizontal-plane"}, {"tilted-plane", 1.0, true}, {"saddle", 0.5, true}};
  std::vector<double> surface_lambdas{0.0, 1.0};
  double surface_tau = 1.0;
  double surface_L = 2.0;
  int surface_points = 50;

  SurfaceChoice limit_surface{};
  std::vector<double> limit_point{1.0, 1.0};
  double limit_lambda = 0.0;
  double limit_tau = 1.0;

  std::string base_metric = "curved";  // curved | flat
  std::string twist = "standard";      // standard | unit
  int omega4_specs = 3;
  int omega4_points = 50;

  std::vector<double> L_grid = default_L_grid();
  double check_L = 1e6;
  int base_nodes = 3;
  int fiber_nodes = 3;

  Tolerances tol{};
  std::vector<std::string> tasks;
  std::optional<std::string> report_path;
  std::optional<std::string> csv_dir;

  void validate() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

enum class Status { Pass, Flagged, Fail };
std::string to_string(Status s);

struct TaskRecord {
  std::string name;
  Status status = Status::Pass;
  json payload = json::object();
};

struct CsvTable {
  std::string name;
  std::vector<LSample> rows;
};

struct TaskOutput {
  TaskRecord record;
  std::vector<CsvTable> tables;
};

struct TaskInfo {
  std::string name;
  std::string summary;
  std::function<TaskOutput(const RunConfig&)> run;
};

const std::vector<TaskInfo>& task_registry();

struct Report {
  std::vector<TaskRecord> tasks;
  std::vector<CsvTable> tables;
  std::uint64_t seed = 0;
  bool any_fail() const;
  json to_json(const std::string& timestamp) const;
};

Report run(const RunConfig& config);

std::string conventions_text();
json conventions_json();

void write_csv(const std::string& dir, const CsvTable& table);

}  // namespace subrv::cli
