#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "campaign.hpp"

using namespace subrv;
using namespace subrv::cli;

namespace {

// pinned tolerances
constexpr double kLemma1 = 1e-10;
constexpr double kLemma2 = 1e-9;
constexpr double kScalar = 1e-10;
constexpr double kTwisted = 1e-8;
constexpr double kGauss = 1e-8;
constexpr double kLimit = 1e-4;
constexpr double kRate = 0.05;
constexpr double kMeanCurvature = 1e-6;
constexpr double kArea = 1e-6;
constexpr double kOmega4 = 1e-7;
constexpr double kHandValue = 1e-12;
constexpr double kConformal = 1e-6;
constexpr double kReferee = 2e-2;
constexpr double kCheckL = 1e6;
constexpr double kConstants = 1e-14;
constexpr double kLemmaSeconds = 10.0;
constexpr double kRefereeSeconds = 300.0;

// criteria whose FAIL is a known, documented outcome
const std::set<int> kExpectedFail{5, 6};

struct Clause {
  std::string text;
  Status status;
};

struct Criterion {
  int id;
  std::string title;
  std::vector<Clause> clauses;

  Status status() const {
    Status s = Status::Pass;
    for (const auto& c : clauses)
      if (static_cast<int>(c.status) > static_cast<int>(s)) s = c.status;
    return s;
  }
};

RunConfig pinned_config() {
  RunConfig c;
  c.tol = {kLemma1, kLemma2, kScalar, kTwisted, kGauss, kLimit, kRate, kMeanCurvature,
           kArea,   kOmega4, kHandValue, kConformal, kReferee, kConstants};
  c.check_L = kCheckL;
  c.validate();
  return c;
}

struct Timed {
  TaskRecord record;
  double seconds = 0;
};

Timed run_task(RunConfig c, const std::string& name) {
  c.tasks = {name};
  const auto t0 = std::chrono::steady_clock::now();
  auto rep = run(c);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {rep.tasks.front(), s};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double get(const json& j, const char* key) { return j.at(key).is_number() ? j.at(key).get<double>() : NAN; }

Status bound(double value, double limit) { return value <= limit ? Status::Pass : Status::Fail; }

std::string strip_timestamp(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {};
  auto j = json::parse(in);
  j.erase("timestamp");
  return j.dump();
}

Criterion c1(const RunConfig& cfg) {
  const auto t = run_task(cfg, "verify-lemma1");
  const double d = get(t.record.payload, "max_diff");
  return {1, "connection table vs Koszul oracle",
          {{"max diff " + num(d) + ", tol " + num(kLemma1), bound(d, kLemma1)},
           {"runtime " + num(t.seconds) + " s, limit " + num(kLemmaSeconds) + " s", bound(t.seconds, kLemmaSeconds)}}};
}

Criterion c2(const RunConfig& cfg) {
  const auto t = run_task(cfg, "verify-lemma2");
  const double d = get(t.record.payload, "max_diff_curvature"), s = get(t.record.payload, "max_diff_scalar");
  return {2, "curvature table vs frame oracle",
          {{"curvature max diff " + num(d) + ", tol " + num(kLemma2), bound(d, kLemma2)},
           {"scalar vs 2 lambda - 2 tau^2 L " + num(s) + ", tol " + num(kScalar), bound(s, kScalar)}}};
}

Criterion c3(const RunConfig& cfg) {
  const auto t = run_task(cfg, "verify-twisted");
  double worst = 0;
  for (const auto& [k, v] : t.record.payload["max_residual"].items()) worst = std::max(worst, v.get<double>());
  const auto& lt = t.record.payload["ltilde"];
  const int validated = lt["validated"].get<int>();
  Status arb = validated < 0 ? Status::Fail : lt["differs_from_dimension_sum"].get<bool>() ? Status::Flagged : Status::Pass;
  return {3, "twisted-product formulas vs coordinate oracle",
          {{"max residual " + num(worst) + ", tol " + num(kTwisted), bound(worst, kTwisted)},
           {"ltilde arbitration validates " + std::to_string(validated) + " (dimension sum is 4)", arb}}};
}

Criterion c4(const RunConfig& cfg) {
  const auto t = run_task(cfg, "gauss-referee");
  const double d = get(t.record.payload, "max_diff");
  return {4, "Gauss equation referee",
          {{"max diff " + num(d) + ", tol " + num(kGauss) + " over " +
                std::to_string(t.record.payload["points"].get<int>()) + " points",
            bound(d, kGauss)}}};
}

Criterion c5(const RunConfig& cfg) {
  const auto rate = run_task(cfg, "limit-rate").record.payload;
  const auto a1 = run_task(cfg, "limit-A1").record.payload;
  const auto h = run_task(cfg, "limit-mean-curvature").record.payload;
  const auto area = run_task(cfg, "limit-area").record.payload;
  const double a = get(rate["sqrt_fit"], "a"), r = get(rate["sqrt_fit"], "rate");
  const double err = get(rate, "relative_error");
  const double hl = std::abs(get(h, "H_L_at_largest_L")), ae = get(area, "abs_error");
  return {5, "sub-Riemannian limits of the Heisenberg plane",
          {{"a + b/sqrt(L) fit: a = " + num(a) + ", rel err " + num(err) + ", tol " + num(kLimit), bound(err, kLimit)},
           {"a + b/sqrt(L) fit: rate " + num(r) + " in -0.5 +- " + num(kRate),
            std::isfinite(r) && std::abs(r + 0.5) <= kRate ? Status::Pass : Status::Fail},
           {"with 1/L term: a = " + num(get(a1["fit"], "a")) + ", rel err " + num(get(a1, "relative_error")),
            bound(get(a1, "relative_error"), kLimit)},
           {"|H_L| at L=1e8 " + num(hl) + ", tol " + num(kMeanCurvature), bound(hl, kMeanCurvature)},
           {"area density / sqrt(L) vs sqrt(2) " + num(ae) + ", tol " + num(kArea), bound(ae, kArea)}}};
}

Criterion c6(const RunConfig& cfg) {
  const auto sum = run_task(cfg, "omega4-sum").record.payload;
  const auto terms = run_task(cfg, "omega4-terms");
  const auto hand = run_task(cfg, "omega4-hand-value").record.payload;
  std::string bad;
  for (const auto& t : terms.record.payload["terms"])
    if (!t["agrees"].get<bool>()) bad += t["term"].get<std::string>() + "(" + num(get(t, "max_residual")) + ") ";
  return {6, "Omega_4 c-term consistency",
          {{"c-term sum vs omega4 density max diff " + num(get(sum, "max_diff")) + ", tol " + num(kOmega4),
            bound(get(sum, "max_diff"), kOmega4)},
           {"per-term residuals: " + (bad.empty() ? std::string("none") : bad), terms.record.status},
           {"flat hand value -6, diff " + num(get(hand, "max_diff")), bound(get(hand, "max_diff"), kHandValue)}}};
}

Criterion c7(const RunConfig& cfg) {
  const auto t = run_task(cfg, "omega4-conformal").record.payload;
  std::string table;
  for (const auto& r : t["residuals"])
    table += "(" + std::to_string(r["curvature_sign"].get<int>()) + "," + std::to_string(r["laplacian_sign"].get<int>()) +
             ")=" + num(get(r, "max_relative_residual")) + " ";
  return {7, "Omega_4 conformal invariance",
          {{"documented ledger residual " + num(get(t, "documented_residual")) + ", tol " + num(kConformal) +
                "; table " + table,
            bound(get(t, "documented_residual"), kConformal)}}};
}

Criterion c8(const RunConfig& cfg) {
  Criterion c{8, "finite-L referees", {}};
  const auto t0 = std::chrono::steady_clock::now();
  const auto add = [&](const json& p) {
    std::string s = p["referee"].get<std::string>() + ": literal " +
                    num(get(p, "literal")) + " (rel err " + num(get(p, "rel_err_literal")) + ")";
    const auto matched = p["matched"].get<std::string>();
    if (matched != "literal") {
      double value = get(p, "extrapolated");
      for (const auto& k : p["candidates"])
        if (k["label"] == matched) value = get(k, "value");
      s += ", converges to " + matched + " " + num(value) + " (rel err " + num(get(p, "rel_err_matched")) + ")";
    }
    const auto v = p["verdict"].get<std::string>();
    c.clauses.push_back({s, v == "PASS" ? Status::Pass : v == "FLAGGED" ? Status::Flagged : Status::Fail});
  };
  for (const char* name : {"referee-kkw", "referee-einstein-A", "referee-einstein-B", "referee-einstein-C"})
    add(run_task(cfg, name).record.payload);
  const auto connes = run_task(cfg, "referee-connes");
  for (const auto& p : connes.record.payload["terms"]) add(p);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.clauses.push_back({"campaign runtime " + num(s) + " s, limit " + num(kRefereeSeconds) + " s", bound(s, kRefereeSeconds)});
  return c;
}

Criterion c9(const RunConfig& cfg) {
  const auto t = run_task(cfg, "wres-constants").record.payload;
  return {9, "residue constants",
          {{"KKW m=2 rel err " + num(get(t, "rel_err_kkw")), bound(get(t, "rel_err_kkw"), kConstants)},
           {"DSZ m=2 rel err " + num(get(t, "rel_err_dsz")), bound(get(t, "rel_err_dsz"), kConstants)}}};
}

Criterion c10(const std::string& cli, const std::filesystem::path& dir) {
  Criterion c{10, "report determinism", {}};
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "determinism.json";
  {
    std::ofstream out(cfg);
    out << R"({"schema_version": 1, "bcv": {"points": 10}, "twisted": {"specs": 2, "points": 5},
  "surface": {"points": 10}, "omega4": {"points": 5},
  "tasks": ["verify-lemma1", "verify-lemma2", "verify-twisted", "gauss-referee", "limit-A1", "limit-area",
            "omega4-terms", "omega4-conformal", "referee-kkw", "wres-constants"]})";
  }
  std::vector<std::string> reports;
  for (int i = 0; i < 2; ++i) {
    const auto rep = dir / ("report" + std::to_string(i) + ".json");
    std::filesystem::remove(rep);
    const std::string cmd = "\"" + cli + "\" run --config \"" + cfg.string() + "\" --out \"" + rep.string() + "\" 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    c.clauses.push_back({"run " + std::to_string(i + 1) + " exit status " + std::to_string(rc),
                         std::filesystem::exists(rep) ? Status::Pass : Status::Fail});
    reports.push_back(strip_timestamp(rep.string()));
  }
  const bool same = !reports[0].empty() && reports[0] == reports[1];
  c.clauses.push_back({same ? "reports identical apart from timestamp" : "reports differ", same ? Status::Pass : Status::Fail});
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: subrv_acceptance <path-to-subrv> <scratch-dir>\n";
    return 2;
  }
  const auto cfg = pinned_config();
  std::vector<Criterion> all;
  try {
    all = {c1(cfg), c2(cfg), c3(cfg), c4(cfg), c5(cfg), c6(cfg), c7(cfg), c8(cfg), c9(cfg), c10(argv[1], argv[2])};
  } catch (const std::exception& e) {
    std::cerr << "acceptance run aborted: " << e.what() << '\n';
    return 1;
  }

  int unexpected = 0;
  for (const auto& c : all) {
    const Status s = c.status();
    const bool expected = s == Status::Fail && kExpectedFail.count(c.id);
    if (s == Status::Fail && !expected) ++unexpected;
    std::printf("criterion %2d  %-7s %s%s\n", c.id, to_string(s).c_str(), c.title.c_str(),
                expected ? "  [expected]" : "");
    for (const auto& cl : c.clauses) std::printf("      %-7s %s\n", to_string(cl.status).c_str(), cl.text.c_str());
  }
  std::printf("unexpected failures: %d\n", unexpected);
  return unexpected;
}
