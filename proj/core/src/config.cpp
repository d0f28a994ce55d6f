#include "aniso/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "aniso/error.hpp"
#include "aniso/nonlinearity.hpp"
#include "aniso/text.hpp"

namespace aniso {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& text, const std::string& path) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorKind::Validation, fmt::format("{}: '{}' is not a number", path, text));
  }
  return v;
}

std::int64_t parse_int(const std::string& text, const std::string& path) {
  const std::string t = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorKind::Validation, fmt::format("{}: '{}' is not an integer", path, text));
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& path) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw Error(ErrorKind::Validation, fmt::format("{}: '{}' is not a boolean", path, text));
}

std::string join_ints(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

std::string join_ints(const std::vector<int>& v) {
  return join_ints(std::vector<std::int64_t>(v.begin(), v.end()));
}

// Reads keys section by section, rejects unknown ones and records the effective value of
// every key in the resolved tree.
class Reader {
 public:
  Reader(const pt::ptree& tree, pt::ptree& resolved) : tree_(tree), resolved_(resolved) {
    for (const auto& [section, body] : tree_) {
      if (body.empty() && !body.data().empty()) {
        throw Error(ErrorKind::Validation, fmt::format("{}: key outside any section", section));
      }
      for (const auto& kv : body) unused_.insert(section + "." + kv.first);
    }
  }

  std::optional<std::string> raw(const std::string& path) {
    unused_.erase(path);
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return trim(*v);
    return std::nullopt;
  }

  void record(const std::string& path, const std::string& value) {
    resolved_.put(pt::ptree::path_type(path, '.'), value);
  }

  std::string str(const std::string& path, const std::string& def) {
    const std::string v = raw(path).value_or(def);
    record(path, v);
    return v;
  }
  double real(const std::string& path, double def) {
    const auto r = raw(path);
    const double v = r ? parse_double(*r, path) : def;
    record(path, num(v));
    return v;
  }
  std::int64_t integer(const std::string& path, std::int64_t def) {
    const auto r = raw(path);
    const std::int64_t v = r ? parse_int(*r, path) : def;
    record(path, std::to_string(v));
    return v;
  }
  bool boolean(const std::string& path, bool def) {
    const auto r = raw(path);
    const bool v = r ? parse_bool(*r, path) : def;
    record(path, v ? "true" : "false");
    return v;
  }
  std::optional<std::vector<double>> reals(const std::string& path) {
    const auto r = raw(path);
    if (!r) return std::nullopt;
    std::vector<double> out;
    if (!r->empty()) {
      const auto items = split(*r, ',');
      for (std::size_t i = 0; i < items.size(); ++i) {
        out.push_back(parse_double(items[i], fmt::format("{}[{}]", path, i + 1)));
      }
    }
    return out;
  }
  std::optional<std::vector<std::int64_t>> ints(const std::string& path) {
    const auto r = raw(path);
    if (!r) return std::nullopt;
    std::vector<std::int64_t> out;
    if (!r->empty()) {
      const auto items = split(*r, ',');
      for (std::size_t i = 0; i < items.size(); ++i) {
        out.push_back(parse_int(items[i], fmt::format("{}[{}]", path, i + 1)));
      }
    }
    return out;
  }

  void finish() const {
    if (!unused_.empty()) {
      throw Error(ErrorKind::Validation, fmt::format("{}: unknown key", *unused_.begin()));
    }
  }

 private:
  const pt::ptree& tree_;
  pt::ptree& resolved_;
  std::set<std::string> unused_;
};

void require_size(const std::vector<double>& v, int N, const std::string& path) {
  if (static_cast<int>(v.size()) != N) {
    throw Error(ErrorKind::Validation, fmt::format("{}: expected {} entries, got {}", path, N, v.size()));
  }
}

std::pair<std::string, std::string> split_preset(const std::string& preset) {
  const auto colon = preset.find(':');
  if (colon == std::string::npos) return {trim(preset), {}};
  return {trim(preset.substr(0, colon)), trim(preset.substr(colon + 1))};
}

}  // namespace

GridFunction sine_profile(const Grid& grid) {
  const auto L = grid.extents();
  return GridFunction::sample(grid, [&](std::span<const double> x) {
    double v = 1.0;
    for (std::size_t d = 0; d < x.size(); ++d) v *= std::sin(std::numbers::pi * x[d] / L[d]);
    return v;
  });
}

GridFunction node_preset(const Grid& grid, const std::string& preset, const std::filesystem::path& base_dir,
                         const std::string& field_path) {
  const auto [kind, arg] = split_preset(preset);
  if (kind == "zero") return GridFunction(grid);
  if (kind == "csv") {
    std::filesystem::path file(arg);
    if (file.is_relative()) file = base_dir / file;
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::Io, fmt::format("{}: cannot open '{}'", field_path, file.string()));
    return read_csv(in, grid);
  }
  if (arg.empty()) throw Error(ErrorKind::Validation, fmt::format("{}: preset '{}' needs a value", field_path, kind));
  const double amp = parse_double(arg, field_path);
  const auto L = grid.extents();
  if (kind == "const") {
    return GridFunction(grid, std::vector<double>(grid.size(), amp));
  }
  if (kind == "sines") return amp * sine_profile(grid);
  if (kind == "laplace_sines") {
    // Forcing of -Laplace(u) + u for u = amp * prod_i sin(pi x_i / L_i).
    double k2 = 1.0;
    for (double l : L) k2 += (std::numbers::pi / l) * (std::numbers::pi / l);
    return (amp * k2) * sine_profile(grid);
  }
  if (kind == "bump") {
    return GridFunction::sample(grid, [&](std::span<const double> x) {
      double v = amp;
      for (std::size_t d = 0; d < x.size(); ++d) v *= 4.0 * x[d] * (L[d] - x[d]) / (L[d] * L[d]);
      return v;
    });
  }
  throw Error(ErrorKind::Validation, fmt::format("{}: unknown preset '{}'", field_path, kind));
}

std::vector<EdgeField> edge_preset(const Grid& grid, const std::string& preset, const std::string& field_path) {
  const auto [kind, arg] = split_preset(preset);
  if (kind == "zero") return {};
  if (kind != "sines") throw Error(ErrorKind::Validation, fmt::format("{}: unknown preset '{}'", field_path, kind));
  const double amp = parse_double(arg, field_path);
  const int N = grid.dim();
  std::vector<EdgeField> out;
  for (int j = 0; j < N; ++j) {
    EdgeField e{j, std::vector<double>(grid.edge_count(j), 0.0)};
    const double hj = grid.spacing(j);
    const double Lj = grid.extents()[j];
    // Only the coordinate along axis j enters, so the value depends on the edge index along j.
    std::size_t along = 1;
    for (int d = 0; d < j; ++d) along *= static_cast<std::size_t>(grid.nodes()[d]);
    const std::size_t span_j = static_cast<std::size_t>(grid.nodes()[j]) + 1;
    for (std::size_t i = 0; i < e.values.size(); ++i) {
      const std::size_t k = (i / along) % span_j;
      const double x = (static_cast<double>(k) + 0.5) * hj;
      e.values[i] = amp * std::sin(2.0 * std::numbers::pi * x / Lj);
    }
    out.push_back(std::move(e));
  }
  return out;
}

PsiMap psi_preset(const std::string& preset, const std::string& field_path) {
  const auto [kind, arg] = split_preset(preset);
  PsiMap psi;
  if (kind == "none") return psi;
  const auto args = split(arg, ':');
  if (kind == "saturating" || kind == "saturating_abs") {
    if (args.size() != 1) throw Error(ErrorKind::Validation, fmt::format("{}: expected {}:c", field_path, kind));
    psi.kind = kind == "saturating" ? PsiMap::Kind::Saturating : PsiMap::Kind::SaturatingAbs;
    psi.c = parse_double(args[0], field_path);
    return psi;
  }
  if (kind == "cap") {
    if (args.size() != 2) throw Error(ErrorKind::Validation, fmt::format("{}: expected cap:c:M", field_path));
    psi.kind = PsiMap::Kind::Cap;
    psi.c = parse_double(args[0], field_path);
    psi.cap = parse_double(args[1], field_path);
    return psi;
  }
  throw Error(ErrorKind::Validation, fmt::format("{}: unknown preset '{}'", field_path, kind));
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir,
                              const ConfigOverrides& overrides) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::Validation, fmt::format("config line {}: {}", e.line(), e.message()));
  }
  pt::ptree resolved;
  Reader r(tree, resolved);
  ExperimentConfig cfg;

  // [problem]
  const auto p = r.reals("problem.p");
  if (!p || p->empty()) throw Error(ErrorKind::Validation, "problem.p: required");
  const int N = static_cast<int>(r.integer("problem.N", static_cast<std::int64_t>(p->size())));
  if (N < 1) throw Error(ErrorKind::Validation, "problem.N: must be positive");
  require_size(*p, N, "problem.p");
  auto vec_or = [&](const std::string& path, double def) {
    auto v = r.reals(path).value_or(std::vector<double>(N, def));
    require_size(v, N, path);
    r.record(path, join_numbers(v, ", "));
    return v;
  };
  r.record("problem.p", join_numbers(*p, ", "));
  ProblemSpec& spec = cfg.problem;
  spec.N = N;
  spec.p = *p;
  spec.q = vec_or("problem.q", 0.0);
  spec.theta = vec_or("problem.theta", 1.0);
  spec.a = vec_or("problem.a", 0.0);
  spec.m = r.real("problem.m", 2.0);
  spec.a0 = r.real("problem.a0", 0.0);
  spec.psi_enabled = r.boolean("problem.psi_enabled", true);
  const std::string case_text = r.str("problem.case", "auto");
  if (case_text == "auto") {
    spec.case_id = ProblemSpec::case_from_theta(spec.theta);
  } else if (case_text == "case1" || case_text == "Case1" || case_text == "1") {
    spec.case_id = CaseId::Case1;
  } else if (case_text == "case2" || case_text == "Case2" || case_text == "2") {
    spec.case_id = CaseId::Case2;
  } else {
    throw Error(ErrorKind::Validation, fmt::format("problem.case: unknown value '{}'", case_text));
  }
  r.record("problem.case", to_string(spec.case_id));

  {
    const double pm = harmonic_mean(spec.p);
    const double p_conj = pm > 1.0 ? pm / (pm - 1.0) : 1.0;
    const double b_max = spec.a0 > 0.0 ? spec.p[0] - 1.0 : spec.p[0] / p_conj;
    spec.b_exp = r.real("problem.b", b_max > 0.0 ? 0.5 * b_max : 0.5);
  }
  spec.s_exp = r.real("problem.s", 1.0);
  if (const auto h = r.raw("problem.h")) {
    spec.h_exp = parse_double(*h, "problem.h");
  }
  validate(spec, ValidationOptions{.require_subcritical = false});
  r.record("problem.h", num(spec.h_exp.value_or(default_h_exp(spec))));

  // [grid]
  {
    auto extents = r.reals("grid.extents").value_or(std::vector<double>(N, 1.0));
    require_size(extents, N, "grid.extents");
    r.record("grid.extents", join_numbers(extents, ", "));
    auto nodes_raw = r.ints("grid.nodes").value_or(std::vector<std::int64_t>(N, 15));
    if (static_cast<int>(nodes_raw.size()) != N) {
      throw Error(ErrorKind::GridMismatch,
                  fmt::format("grid.nodes: expected {} entries, got {}", N, nodes_raw.size()));
    }
    std::vector<int> nodes;
    for (std::size_t i = 0; i < nodes_raw.size(); ++i) {
      if (nodes_raw[i] < 1 || nodes_raw[i] > 1'000'000) {
        throw Error(ErrorKind::Validation, fmt::format("grid.nodes[{}]: must be in [1, 1e6]", i + 1));
      }
      nodes.push_back(static_cast<int>(nodes_raw[i]));
    }
    for (std::size_t i = 0; i < extents.size(); ++i) {
      if (!(extents[i] > 0.0)) throw Error(ErrorKind::Validation, fmt::format("grid.extents[{}]: must be > 0", i + 1));
    }
    r.record("grid.nodes", join_ints(nodes));
    cfg.grid = Grid(extents, nodes);
  }

  // [operator_b]
  OperatorBSpec& b = cfg.operator_b;
  b.F = node_preset(cfg.grid, r.str("operator_b.F", "zero"), base_dir, "operator_b.F");
  b.G = edge_preset(cfg.grid, r.str("operator_b.G", "zero"), "operator_b.G");
  b.psi = psi_preset(r.str("operator_b.psi", "none"), "operator_b.psi");
  const std::string f_text = r.str("operator_b.f", "zero");
  if (split_preset(f_text).first != "zero") b.f_datum = node_preset(cfg.grid, f_text, base_dir, "operator_b.f");
  b.tau = r.real("operator_b.tau", 1.0);

  // [solver]
  SolverOptions& so = cfg.solver;
  so.eps0 = r.real("solver.eps0", so.eps0);
  so.eps_min = r.real("solver.eps_min", so.eps_min);
  so.picard_max = static_cast<int>(r.integer("solver.picard_max", so.picard_max));
  so.newton_max = static_cast<int>(r.integer("solver.newton_max", so.newton_max));
  so.tol_residual = r.real("solver.tol", so.tol_residual);
  so.relax = r.real("solver.relax", so.relax);
  so.project_nonneg = r.boolean("solver.project_nonneg", so.project_nonneg);
  so.divergence_window = static_cast<int>(r.integer("solver.divergence_window", so.divergence_window));
  validate(so);

  // [run]
  RunParams& run = cfg.run;
  run.n = r.integer("run.n", run.n);
  if (run.n < 1) throw Error(ErrorKind::Validation, "run.n: must be >= 1");
  if (auto nl = r.ints("run.n_list")) run.n_list = *nl;
  if (run.n_list.empty()) throw Error(ErrorKind::Validation, "run.n_list: must be nonempty");
  for (std::size_t i = 0; i < run.n_list.size(); ++i) {
    if (run.n_list[i] < 1 || (i > 0 && run.n_list[i] <= run.n_list[i - 1])) {
      throw Error(ErrorKind::Validation, fmt::format("run.n_list[{}]: must be positive and increasing", i + 1));
    }
  }
  r.record("run.n_list", join_ints(run.n_list));
  if (const auto lv_raw = r.raw("run.levels"); lv_raw && *lv_raw != "auto") {
    const auto items = split(*lv_raw, ',');
    for (std::size_t i = 0; i < items.size(); ++i) {
      run.levels.push_back(parse_double(items[i], fmt::format("run.levels[{}]", i + 1)));
    }
  }
  for (std::size_t i = 0; i < run.levels.size(); ++i) {
    if (!(run.levels[i] > 0.0) || (i > 0 && run.levels[i] <= run.levels[i - 1])) {
      throw Error(ErrorKind::Validation, fmt::format("run.levels[{}]: must be positive and increasing", i + 1));
    }
  }
  r.record("run.levels", run.levels.empty() ? std::string("auto") : join_numbers(run.levels, ", "));
  run.samples = static_cast<int>(r.integer("run.samples", run.samples));
  if (run.samples < 1) throw Error(ErrorKind::Validation, "run.samples: must be >= 1");
  {
    const auto raw_seed = r.raw("run.seed");
    run.seed = raw_seed ? static_cast<std::uint64_t>(parse_int(*raw_seed, "run.seed")) : run.seed;
    if (overrides.seed) run.seed = *overrides.seed;
    r.record("run.seed", std::to_string(run.seed));
  }
  run.out = r.str("run.out", run.out);
  if (overrides.out) {
    run.out = *overrides.out;
    r.record("run.out", run.out);
  }
  run.exact = r.str("run.exact", run.exact);
  if (run.exact != "none" && run.exact != "sines") {
    throw Error(ErrorKind::Validation, fmt::format("run.exact: unknown value '{}'", run.exact));
  }
  run.svg = r.boolean("run.svg", run.svg);
  run.gar_lambda_scale = r.real("run.gar_lambda_scale", run.gar_lambda_scale);
  if (!(run.gar_lambda_scale > 0.0)) throw Error(ErrorKind::Validation, "run.gar_lambda_scale: must be > 0");
  if (const auto cb = r.raw("run.c_bound"); cb && *cb != "auto") run.c_bound = parse_double(*cb, "run.c_bound");
  r.record("run.c_bound", run.c_bound ? num(*run.c_bound) : std::string("auto"));
  run.allow_trivial = r.boolean("run.allow_trivial", run.allow_trivial);
  run.warm_start = r.boolean("run.warm_start", run.warm_start);
  r.finish();

  if (spec.case_id == CaseId::Case2) validate_case2(b);
  if (!b.nontrivial() && !run.allow_trivial) {
    throw Error(ErrorKind::Validation, "operator_b: all data zero (set run.allow_trivial = true for test mode)");
  }
  if (b.a0_flag() && !(spec.a0 > 0.0)) {
    throw Error(ErrorKind::Validation, "problem.a0: divergence-form data G requires a0 > 0");
  }

  std::ostringstream ini;
  pt::write_ini(ini, resolved);
  cfg.resolved_ini = ini.str();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open config '{}'", path.string()));
  return parse_config(in, path.parent_path(), overrides);
}

}  // namespace aniso
