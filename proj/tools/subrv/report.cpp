#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include "campaign.hpp"
#include "subrv/conventions.hpp"
#include "subrv/errors.hpp"

namespace subrv::cli {

bool Report::any_fail() const {
  return std::any_of(tasks.begin(), tasks.end(), [](const TaskRecord& t) { return t.status == Status::Fail; });
}

json Report::to_json(const std::string& timestamp) const {
  json records = json::array();
  int pass = 0, flagged = 0, fail = 0;
  for (const auto& t : tasks) {
    records.push_back({{"name", t.name}, {"status", cli::to_string(t.status)}, {"payload", t.payload}});
    (t.status == Status::Pass ? pass : t.status == Status::Flagged ? flagged : fail)++;
  }
  return {{"schema_version", 1},
          {"timestamp", timestamp},
          {"seed", seed},
          {"conventions", conventions_json()},
          {"tasks", records},
          {"summary", {{"pass", pass}, {"flagged", flagged}, {"fail", fail}}},
          {"status", any_fail() ? "FAIL" : "PASS"}};
}

std::string conventions_text() { return conventions::describe(); }

json conventions_json() {
  return {{"curvature", "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z"},
          {"sectional", "K(a,b) = -<R(a,b)a,b>"},
          {"ricci", "Ric(Y,Z) = sum_k <R(E_k,Y)Z,E_k>; unit 2-sphere S = +2"},
          {"laplacian", "Delta = -tr(nabla d)"},
          {"omega4_curvature_sign", conventions::kOmega4CurvatureSign},
          {"ltilde", conventions::kLtildeIsFiberDim ? "dim F" : "dim B + dim F"},
          {"fiber_curvature", conventions::kFiberCurvatureIsLeaf ? "leaf metric f^2 g_F" : "g_F"}};
}

void write_csv(const std::string& dir, const CsvTable& table) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / (table.name + ".csv");
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "L,value\n" << std::setprecision(17);
  for (const auto& [L, v] : table.rows) out << L << ',' << v << '\n';
}

}  // namespace subrv::cli
