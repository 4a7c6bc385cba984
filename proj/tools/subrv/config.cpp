#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "campaign.hpp"
#include "subrv/errors.hpp"

namespace subrv::cli {

namespace {

// Reads fields off a JSON object and rejects whatever is left over.
class Fields {
 public:
  Fields(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) fail(where_, "expected an object");
  }

  static void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
  }

  std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const auto* v = get(key)) out = as_number(*v, path(key));
  }

  void integer(const std::string& key, int& out, int min) {
    if (const auto* v = get(key)) {
      if (!v->is_number_integer()) fail(path(key), "expected an integer");
      const auto i = v->get<long long>();
      if (i < min) fail(path(key), "must be >= " + std::to_string(min));
      out = static_cast<int>(i);
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const auto* v = get(key)) {
      if (!v->is_string()) fail(path(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  // a number or an array of numbers
  void numbers(const std::string& key, std::vector<double>& out) {
    if (const auto* v = get(key)) {
      out.clear();
      if (v->is_number()) {
        out.push_back(v->get<double>());
      } else if (v->is_array()) {
        for (std::size_t i = 0; i < v->size(); ++i) out.push_back(as_number((*v)[i], path(key)));
        if (out.empty()) fail(path(key), "must not be empty");
      } else {
        fail(path(key), "expected a number or an array of numbers");
      }
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("unknown config key '" + path(it.key()) + "'");
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

SurfaceChoice parse_surface(const json& v, const std::string& where) {
  SurfaceChoice s;
  if (v.is_string()) {
    s.preset = v.get<std::string>();
    return s;
  }
  Fields f(v, where);
  f.text("preset", s.preset);
  if (f.get("coefficient")) {
    f.number("coefficient", s.coefficient);
    s.coefficient_set = true;
  }
  f.finish();
  return s;
}

void parse_tolerances(const json& v, Tolerances& t) {
  Fields f(v, "tolerances");
  f.number("lemma1", t.lemma1);
  f.number("lemma2", t.lemma2);
  f.number("scalar", t.scalar);
  f.number("twisted", t.twisted);
  f.number("gauss", t.gauss);
  f.number("limit", t.limit);
  f.number("rate", t.rate);
  f.number("mean_curvature", t.mean_curvature);
  f.number("area", t.area);
  f.number("omega4", t.omega4);
  f.number("hand_value", t.hand_value);
  f.number("conformal", t.conformal);
  f.number("referee", t.referee);
  f.number("constants", t.constants);
  f.finish();
}

void require_increasing(const std::vector<double>& v, const std::string& field) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) Fields::fail(field, "must be strictly increasing");
}

void require_positive(const std::vector<double>& v, const std::string& field) {
  for (double x : v)
    if (!(x > 0.0)) Fields::fail(field, "values must be > 0");
}

}  // namespace

ScalarField SurfaceChoice::graph() const {
  const auto s0 = ScalarField::coord(2, 0), s1 = ScalarField::coord(2, 1);
  if (preset == "horizontal-plane") return ScalarField::constant(2, coefficient_set ? coefficient : 0.0);
  if (preset == "tilted-plane") return (coefficient_set ? coefficient : 1.0) * s0;
  if (preset == "saddle") return (coefficient_set ? coefficient : 0.5) * s0 * s1;
  throw ConfigError("unknown surface preset '" + preset + "'");
}

std::string SurfaceChoice::label() const {
  std::ostringstream os;
  os << preset;
  if (coefficient_set) os << "(" << coefficient << ")";
  return os.str();
}

void RunConfig::validate() const {
  require_positive(taus, "bcv.tau");
  require_positive(Ls, "bcv.L");
  if (!(surface_tau > 0) || !(surface_L > 0)) Fields::fail("surface", "tau and L must be > 0");
  if (!(limit_tau > 0)) Fields::fail("limit.tau", "must be > 0");
  if (limit_point.size() != 2) Fields::fail("limit.point", "expected two chart coordinates");
  for (const auto& s : surfaces) s.graph();
  limit_surface.graph();
  if (base_metric != "curved" && base_metric != "flat")
    Fields::fail("base_metric", "unknown preset '" + base_metric + "'");
  if (twist != "standard" && twist != "unit") Fields::fail("twist", "unknown preset '" + twist + "'");
  if (L_grid.size() < 4) Fields::fail("L_grid", "needs at least 4 values");
  require_positive(L_grid, "L_grid");
  require_increasing(L_grid, "L_grid");
  if (std::none_of(L_grid.begin(), L_grid.end(), [&](double L) { return std::abs(L - check_L) <= 1e-9 * check_L; }))
    Fields::fail("referee.check_L", "must be one of the L_grid values");
  if (twisted_specs > static_cast<int>(reference_twisted_specs().size()))
    Fields::fail("twisted.specs", "at most " + std::to_string(reference_twisted_specs().size()));
  if (omega4_specs > static_cast<int>(reference_twisted_specs().size()))
    Fields::fail("omega4.specs", "at most " + std::to_string(reference_twisted_specs().size()));
  const std::pair<const char*, double> tols[] = {
      {"lemma1", tol.lemma1}, {"lemma2", tol.lemma2},   {"scalar", tol.scalar},
      {"twisted", tol.twisted}, {"gauss", tol.gauss},   {"limit", tol.limit},
      {"rate", tol.rate},     {"mean_curvature", tol.mean_curvature}, {"area", tol.area},
      {"omega4", tol.omega4}, {"hand_value", tol.hand_value}, {"conformal", tol.conformal},
      {"referee", tol.referee}, {"constants", tol.constants}};
  for (const auto& [name, t] : tols)
    if (!(t > 0)) Fields::fail(std::string("tolerances.") + name, "tolerances > 0");
  const auto& reg = task_registry();
  std::set<std::string> seen;
  for (const auto& t : tasks) {
    if (std::none_of(reg.begin(), reg.end(), [&](const TaskInfo& i) { return i.name == t; }))
      throw ConfigError("unknown task '" + t + "'");
    if (!seen.insert(t).second) throw ConfigError("task '" + t + "' listed twice");
  }
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  RunConfig c;
  Fields top(doc, "");
  const auto* version = top.get("schema_version");
  if (!version) Fields::fail("schema_version", "missing");
  if (!version->is_number_integer() || version->get<long long>() != 1) Fields::fail("schema_version", "must be 1");
  if (const auto* v = top.get("seed")) {
    if (!v->is_number_unsigned()) Fields::fail("seed", "expected a non-negative integer");
    c.seed = v->get<std::uint64_t>();
  }
  if (const auto* v = top.get("bcv")) {
    Fields f(*v, "bcv");
    f.numbers("lambda", c.lambdas);
    f.numbers("tau", c.taus);
    f.numbers("L", c.Ls);
    f.integer("points", c.points, 1);
    f.finish();
  }
  if (const auto* v = top.get("twisted")) {
    Fields f(*v, "twisted");
    f.integer("specs", c.twisted_specs, 1);
    f.integer("points", c.twisted_points, 1);
    f.finish();
  }
  if (const auto* v = top.get("surface")) {
    Fields f(*v, "surface");
    if (const auto* p = f.get("presets")) {
      if (!p->is_array() || p->empty()) Fields::fail("surface.presets", "expected a non-empty array");
      c.surfaces.clear();
      for (const auto& s : *p) c.surfaces.push_back(parse_surface(s, "surface.presets"));
    }
    f.numbers("lambda", c.surface_lambdas);
    f.number("tau", c.surface_tau);
    f.number("L", c.surface_L);
    f.integer("points", c.surface_points, 1);
    f.finish();
  }
  if (const auto* v = top.get("limit")) {
    Fields f(*v, "limit");
    if (const auto* s = f.get("surface")) c.limit_surface = parse_surface(*s, "limit.surface");
    f.numbers("point", c.limit_point);
    f.number("lambda", c.limit_lambda);
    f.number("tau", c.limit_tau);
    f.finish();
  }
  if (const auto* v = top.get("omega4")) {
    Fields f(*v, "omega4");
    f.integer("specs", c.omega4_specs, 1);
    f.integer("points", c.omega4_points, 1);
    f.finish();
  }
  if (const auto* v = top.get("referee")) {
    Fields f(*v, "referee");
    f.text("base_metric", c.base_metric);
    f.text("twist", c.twist);
    f.number("check_L", c.check_L);
    if (const auto* n = f.get("nodes")) {
      Fields g(*n, "referee.nodes");
      g.integer("base", c.base_nodes, 1);
      g.integer("fiber", c.fiber_nodes, 1);
      g.finish();
    }
    f.finish();
  }
  top.numbers("L_grid", c.L_grid);
  if (const auto* v = top.get("tolerances")) parse_tolerances(*v, c.tol);
  if (const auto* v = top.get("tasks")) {
    if (!v->is_array()) Fields::fail("tasks", "expected an array of task names");
    for (const auto& t : *v) {
      if (!t.is_string()) Fields::fail("tasks", "expected task names");
      c.tasks.push_back(t.get<std::string>());
    }
  }
  if (const auto* v = top.get("output")) {
    Fields f(*v, "output");
    std::string s;
    if (f.get("report")) {
      f.text("report", s);
      c.report_path = s;
    }
    if (f.get("csv_dir")) {
      f.text("csv_dir", s);
      c.csv_dir = s;
    }
    f.finish();
  }
  top.finish();
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace subrv::cli
