#include "aniso/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <ostream>
#include <random>
#include <thread>

#include "aniso/exponents.hpp"
#include "aniso/nonlinearity.hpp"
#include "aniso/oracles.hpp"
#include "aniso/text.hpp"

namespace aniso {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Diverged:
    case ErrorKind::NewtonStall:
    case ErrorKind::NotANumber:
    case ErrorKind::DegenerateProfile:
      return kExitSolver;
    default:
      return kExitValidation;
  }
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

fs::path prepare_out(const ExperimentConfig& cfg) {
  const fs::path dir(cfg.run.out);
  fs::create_directories(dir);
  std::ofstream(dir / "resolved_config.ini") << cfg.resolved_ini;
  return dir;
}

void write_snapshot(const fs::path& dir, const SolveReport& rep) {
  std::ofstream out(dir / fmt::format("U_n{}.csv", rep.n));
  write_csv(out, rep.U);
}

// Seeds derived per check so results do not depend on scheduling.
std::mt19937_64 check_rng(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

VerifyRow row(std::string check, bool ok, double value, double threshold, std::string detail) {
  return {std::move(check), ok ? "pass" : "fail", value, threshold, std::move(detail)};
}

VerifyRow skip(std::string check, std::string detail) { return {std::move(check), "skip", kNaN, kNaN, std::move(detail)}; }

VerifyRow check_exponent_oracle(const ExperimentConfig& cfg) {
  auto rng = check_rng(cfg.run.seed, 1);
  int mismatches = 0;
  std::string first;
  for (int i = 0; i < cfg.run.samples; ++i) {
    const ProblemSpec spec = oracle::random_admissible_spec(rng);
    std::string diag;
    if (!oracle::classification_agrees(spec, &diag)) {
      if (mismatches++ == 0) first = fmt::format("tuple {}: {}", i, diag);
    }
  }
  return row("exponent_oracle", mismatches == 0, mismatches, 0, first);
}

VerifyRow check_side_inequalities(const ExperimentConfig& cfg) {
  auto rng = check_rng(cfg.run.seed, 2);
  int violations = 0;
  int tested = 0;
  std::string first;
  for (int i = 0; i < cfg.run.samples; ++i) {
    const ProblemSpec spec = oracle::random_admissible_spec(rng);
    const ExponentReport rep = analyze(spec);
    if (!rep.condition.holds) continue;
    ++tested;
    const auto bad = oracle::side_inequality_violations(spec, rep);
    if (!bad.empty() && violations == 0) first = bad.front();
    violations += static_cast<int>(bad.size());
  }
  return row("side_inequalities", violations == 0, violations, 0,
             first.empty() ? fmt::format("{} tuples satisfying condition (m)", tested) : first);
}

VerifyRow check_h_limit(const ExperimentConfig& cfg) {
  const ProblemSpec& spec = cfg.problem;
  auto rng = check_rng(cfg.run.seed, 3);
  std::uniform_real_distribution<double> t(0.01, 10.0);
  const double h = spec.h_exp.value_or(default_h_exp(spec));
  double worst_rel = 0.0;
  int monotone_breaks = 0;
  for (int i = 0; i < cfg.run.samples; ++i) {
    const double t1 = t(rng);
    const double t2 = t(rng);
    for (int j = 0; j < spec.N; ++j) {
      double prev = -1.0;
      double last = 0.0;
      for (std::int64_t n = 1; n <= 100'000'000; n *= 10) {
        last = eval_H_base(spec.theta[j], spec.q[j], RegularizationParams{n, h}, t1, t2);
        if (last < prev) ++monotone_breaks;
        prev = last;
      }
      const double target = std::pow(t1, spec.theta[j] - 1.0) * std::pow(t2, spec.q[j]);
      worst_rel = std::max(worst_rel, std::abs(last - target) / target);
    }
  }
  // Psi_n sup bound over random states.
  std::uniform_real_distribution<double> wide(-50.0, 50.0);
  int bound_breaks = 0;
  std::vector<double> grad(spec.N);
  for (std::int64_t n : {1, 10, 1000}) {
    const RegularizationParams params{n, h};
    const double bound = spec.N * std::pow(static_cast<double>(n), h);
    for (int i = 0; i < cfg.run.samples; ++i) {
      for (double& g : grad) g = wide(rng);
      double u = wide(rng);
      if (spec.case_id == CaseId::Case2) u = std::abs(u);
      const double v = eval_psi_n(PointState{u, grad}, params, spec);
      if (!(std::abs(v) <= bound)) ++bound_breaks;
    }
  }
  const bool ok = monotone_breaks == 0 && worst_rel < 1e-6 && bound_breaks == 0;
  return row("h_regularization", ok, worst_rel, 1e-6,
             fmt::format("monotonicity breaks {}, sup-bound breaks {}", monotone_breaks, bound_breaks));
}

VerifyRow check_gar(const ExperimentConfig& cfg) {
  auto rng = check_rng(cfg.run.seed, 4);
  std::uniform_real_distribution<double> kd(0.1, 5.0), md(1.01, 6.0), ad(0.0, 3.0);
  const int triples = std::max(1, cfg.run.samples / 10);
  constexpr int kPoints = 10'000;
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < triples; ++i) {
    const double k = kd(rng), m = md(rng), abar = ad(rng);
    const ExpTestFunction base = ExpTestFunction::for_level(k, m, abar);
    const ExpTestFunction phi(base.lambda() * cfg.run.gar_lambda_scale, base.coupling());
    for (int t = 0; t < kPoints; ++t) {
      const double s = -10.0 * k + 20.0 * k * t / (kPoints - 1);
      const double margin = phi.margin(s);
      worst = std::min(worst, margin);
      if (!(margin >= 0.5 - 1e-12)) ++violations;
    }
  }
  return row("gar_inequality", violations == 0, worst, 0.5,
             fmt::format("{} violations, lambda scale {}", violations, num(cfg.run.gar_lambda_scale)));
}

VerifyRow check_sobolev(const ExperimentConfig& cfg) {
  const double pm = harmonic_mean(cfg.problem.p);
  if (!(pm < cfg.problem.N)) return skip("sobolev_ratio", "p >= N");
  auto rng = check_rng(cfg.run.seed, 5);
  double worst = 0.0;
  bool finite = true;
  const int samples = std::max(1, cfg.run.samples / 20);
  for (int i = 0; i < samples; ++i) {
    const GridFunction u = oracle::random_smooth_function(cfg.grid, rng);
    const double r = sobolev_ratio(u, cfg.problem.p);
    finite = finite && std::isfinite(r) && r > 0.0;
    worst = std::max(worst, r);
  }
  constexpr double kBound = 10.0;
  return row("sobolev_ratio", finite && worst <= kBound, worst, kBound, fmt::format("{} sine-mode samples", samples));
}

VerifyRow check_case2_B(const ExperimentConfig& cfg) {
  if (cfg.problem.case_id != CaseId::Case2) return skip("case2_B_positivity", "Case 1");
  auto rng = check_rng(cfg.run.seed, 6);
  double worst = std::numeric_limits<double>::infinity();
  const int samples = std::max(1, cfg.run.samples / 20);
  for (int i = 0; i < samples; ++i) {
    GridFunction u = oracle::random_smooth_function(cfg.grid, rng);
    GridFunction v = oracle::random_smooth_function(cfg.grid, rng);
    for (std::size_t k = 0; k < u.size(); ++k) {
      u[k] = std::abs(u[k]);
      v[k] = std::abs(v[k]);
    }
    worst = std::min(worst, eval_B(u, v, cfg.operator_b));
  }
  return row("case2_B_positivity", worst >= 0.0, worst, 0.0, "<B u, v> over u, v >= 0");
}

VerifyRow check_growth(const ExperimentConfig& cfg) {
  const double pm = harmonic_mean(cfg.problem.p);
  if (!(pm < cfg.problem.N)) return skip("growth_bound_P1", "p >= N");
  const double bound = cfg.run.c_bound.value_or(holder_bound_P1(cfg.operator_b, cfg.problem));
  const EmpiricalP1 e =
      check_P1(cfg.operator_b, cfg.problem, std::max(1, cfg.run.samples / 5), cfg.run.seed, bound);
  if (e.trivial) return skip("growth_bound_P1", "B = 0");
  return row("growth_bound_P1", e.max_violation == 0.0, e.C_emp, bound,
             fmt::format("b {}, s {}, bound {}", num(e.b_used), num(e.s_used),
                         cfg.run.c_bound ? "configured" : "hoelder"));
}

struct SolveOutcome {
  std::optional<SolveReport> report;
  std::string error;
};

std::vector<double> profile_levels(const ExperimentConfig& cfg, const GridFunction& U) {
  if (!cfg.run.levels.empty()) return cfg.run.levels;
  const double top = U.max_abs();
  std::vector<double> levels;
  for (double f : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.25}) levels.push_back(f * top);
  return levels;
}

std::vector<VerifyRow> solve_checks(const ExperimentConfig& cfg, const SolveOutcome& s) {
  std::vector<VerifyRow> rows;
  const char* names[] = {"energy_identity", "monotone_core_descent", "coercivity_surrogate", "stampacchia_profile",
                         "level_measure_enumeration", "case2_nonnegativity"};
  if (!s.report) {
    for (const char* n : names) rows.push_back(row(n, false, kNaN, kNaN, "solve failed: " + s.error));
    return rows;
  }
  const SolveReport& r = *s.report;
  rows.push_back(row("energy_identity", r.converged && r.energy_residual <= 1e-6, r.energy_residual, 1e-6,
                     fmt::format("n {}, residual {}", r.n, num(r.residual))));

  int ascents = 0;
  for (const auto& trace : r.newton_traces) {
    for (std::size_t k = 1; k < trace.size(); ++k) {
      if (trace[k] > trace[k - 1]) ++ascents;
    }
  }
  rows.push_back(row("monotone_core_descent", ascents == 0, ascents, 0, "accepted Newton steps"));
  double low = std::numeric_limits<double>::infinity();
  for (double c : r.coercivity_trace) low = std::min(low, c);
  if (r.coercivity_trace.empty()) low = 0.0;
  rows.push_back(row("coercivity_surrogate", low >= 0.0, low, 0.0, "<A U,U> + int Phi(U) U per iterate"));

  const double top = r.U.max_abs();
  if (top == 0.0) {
    rows.push_back(skip("stampacchia_profile", "U = 0"));
  } else {
    const auto levels = profile_levels(cfg, r.U);
    ExponentReport er;
    er.gamma_abar = kNaN;
    if (harmonic_mean(cfg.problem.p) < cfg.problem.N) er = analyze(cfg.problem);
    const ProfileReport pr = stampacchia_profile(r.U, levels, er, cfg.problem.m);
    bool tail_ok = std::isfinite(pr.linf_estimate);
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (levels[k] > pr.linf_estimate && pr.mu[k] != 0.0) tail_ok = false;
    }
    rows.push_back(row("stampacchia_profile", tail_ok, pr.linf_estimate, pr.first_zero_level,
                       fmt::format("fitted {} predicted {}", num(pr.fitted_gamma), num(pr.predicted_gamma))));
  }
  {
    auto levels = profile_levels(cfg, r.U);
    if (top == 0.0) levels = {0.25, 0.5, 0.75};
    int mismatches = 0;
    for (double l : levels) {
      const double brute = r.U.grid().cell_volume() * static_cast<double>(oracle::brute_force_level_count(r.U, l));
      if (level_measure(r.U, l) != brute) ++mismatches;
    }
    rows.push_back(row("level_measure_enumeration", mismatches == 0, mismatches, 0,
                       fmt::format("{} levels", levels.size())));
  }
  if (cfg.problem.case_id == CaseId::Case2) {
    rows.push_back(row("case2_nonnegativity", r.min_value >= -1e-8, r.min_value, -1e-8, "min U"));
  } else {
    rows.push_back(skip("case2_nonnegativity", "Case 1"));
  }
  return rows;
}

std::string csv_text(const std::string& s) {
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::vector<VerifyRow> verify_suite(const ExperimentConfig& cfg, int jobs) {
  auto solve_future = std::async(std::launch::async, [&cfg] {
    SolveOutcome out;
    try {
      out.report = solve_regularized(cfg.problem, cfg.operator_b, cfg.run.n, cfg.grid, cfg.solver);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    return out;
  });

  using Check = std::function<VerifyRow(const ExperimentConfig&)>;
  const std::vector<std::pair<std::string, Check>> checks{
      {"exponent_oracle", check_exponent_oracle}, {"side_inequalities", check_side_inequalities},
      {"h_regularization", check_h_limit},        {"gar_inequality", check_gar},
      {"sobolev_ratio", check_sobolev},           {"case2_B_positivity", check_case2_B},
      {"growth_bound_P1", check_growth},
  };
  std::vector<VerifyRow> rows(checks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < checks.size(); i = next++) {
      try {
        rows[i] = checks[i].second(cfg);
      } catch (const std::exception& e) {
        rows[i] = row(checks[i].first, false, kNaN, kNaN, e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  const SolveOutcome solved = solve_future.get();
  try {
    for (auto& r : solve_checks(cfg, solved)) rows.push_back(std::move(r));
  } catch (const std::exception& e) {
    rows.push_back(row("solve_checks", false, kNaN, kNaN, e.what()));
  }
  return rows;
}

void write_verify_csv(std::ostream& out, const std::vector<VerifyRow>& rows) {
  out << "check,status,value,threshold,detail\n";
  for (const auto& r : rows) {
    out << r.check << "," << r.status << "," << num(r.value) << "," << num(r.threshold) << "," << csv_text(r.detail)
        << "\n";
  }
}

int cmd_check(const ExperimentConfig& cfg, std::ostream& console) {
  validate(cfg.problem, ValidationOptions{.require_subcritical = true});
  const fs::path dir = prepare_out(cfg);
  const ExponentReport rep = analyze(cfg.problem);
  console << to_key_value(rep);
  std::ofstream out(dir / "exponents.csv");
  out << exponent_csv_header() << "\n" << exponent_csv_row(rep) << "\n";
  return kExitPass;
}

int cmd_solve(const ExperimentConfig& cfg, std::ostream& console) {
  const fs::path dir = prepare_out(cfg);
  const SolveReport rep = solve_regularized(cfg.problem, cfg.operator_b, cfg.run.n, cfg.grid, cfg.solver);
  {
    std::ofstream out(dir / "solve.csv");
    out << solve_csv_header(cfg.problem.N) << "\n" << solve_csv_row(rep) << "\n";
  }
  write_snapshot(dir, rep);
  console << fmt::format("n = {}\nconverged = {}\nresidual = {}\nenergy_residual = {}\nmin_value = {}\n"
                         "picard_iterations = {}\nnewton_iterations = {}\ncondition_m = {}\n",
                         rep.n, rep.converged, num(rep.residual), num(rep.energy_residual), num(rep.min_value),
                         rep.picard_iterations, rep.newton_iterations, rep.condition_verdict);
  if (cfg.run.exact == "sines") {
    const GridFunction err = rep.U - sine_profile(cfg.grid);
    const double l2 = norm_Ls(err, 2.0);
    double hmax = 0.0;
    for (int d = 0; d < cfg.grid.dim(); ++d) hmax = std::max(hmax, cfg.grid.spacing(d));
    console << fmt::format("l2_error = {}\nlinf_error = {}\n", num(l2), num(err.max_abs()));
    std::ofstream out(dir / "error.csv");
    out << "h,l2_error,linf_error\n" << num(hmax) << "," << num(l2) << "," << num(err.max_abs()) << "\n";
  }
  return rep.converged ? kExitPass : kExitSolver;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& console) {
  const fs::path dir = prepare_out(cfg);
  const SequenceReport seq =
      run_sequence(cfg.problem, cfg.operator_b, cfg.grid, cfg.solver, cfg.run.n_list, cfg.run.warm_start);
  {
    std::ofstream out(dir / "sweep.csv");
    write_sequence_csv(out, seq, cfg.problem.N);
  }
  int ok = 0;
  for (const auto& e : seq.entries) {
    if (e.report) {
      ++ok;
      console << fmt::format("n = {}: converged, W-norm {}\n", e.n, num(e.report->norms.norm_W));
    } else {
      console << fmt::format("n = {}: {}\n", e.n, e.error);
    }
  }
  if (!seq.entries.empty() && seq.entries.back().report) write_snapshot(dir, *seq.entries.back().report);
  const double last_change = seq.max_relative_change.empty() ? kNaN : seq.max_relative_change.back();
  console << fmt::format("last_relative_change = {}\nmax_growth_factor = {}\nthreshold = {} (harness convention)\n",
                         num(last_change), num(seq.max_growth_factor), num(seq.threshold));
  if (seq.uniform_bound_plausible) console << "flag: uniform-bound plausible\n";
  if (seq.no_uniform_bound) console << "flag: no uniform bound\n";
  if (cfg.run.svg) {
    std::ofstream out(dir / "sweep.svg");
    write_sweep_svg(out, seq, cfg.problem.N);
  }
  return ok > 0 ? kExitPass : kExitSolver;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& console, int jobs) {
  const fs::path dir = prepare_out(cfg);
  const auto rows = verify_suite(cfg, jobs);
  {
    std::ofstream out(dir / "verify.csv");
    write_verify_csv(out, rows);
  }
  bool all_ok = true;
  for (const auto& r : rows) {
    console << fmt::format("{:<28} {:<5} {}\n", r.check, r.status, r.detail);
    all_ok = all_ok && r.status != "fail";
  }
  return all_ok ? kExitPass : kExitVerify;
}

int run_command(const std::string& command, const fs::path& config, const ConfigOverrides& overrides, int jobs,
                std::ostream& out, std::ostream& err) {
  try {
    const ExperimentConfig cfg = load_config(config, overrides);
    if (command == "check") return cmd_check(cfg, out);
    if (command == "solve") return cmd_solve(cfg, out);
    if (command == "sweep") return cmd_sweep(cfg, out);
    if (command == "verify") return cmd_verify(cfg, out, jobs);
    err << "unknown command '" << command << "'\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: io: " << e.what() << "\n";
    return kExitValidation;
  }
}

void write_sweep_svg(std::ostream& out, const SequenceReport& seq, int N) {
  constexpr double W = 640, H = 400, M = 50;
  const auto names = MonitoredNorms::names(N);
  std::vector<double> xs;
  std::vector<std::vector<double>> series(names.size());
  for (const auto& e : seq.entries) {
    if (!e.report) continue;
    xs.push_back(std::log2(static_cast<double>(e.n)));
    const auto v = e.report->norms.flat();
    for (std::size_t q = 0; q < v.size(); ++q) series[q].push_back(v[q]);
  }
  double ymax = 1.0;
  for (auto& s : series) {
    const double first = s.empty() ? 0.0 : s.front();
    for (double& y : s) {
      y = first > 0.0 ? y / first : 1.0;
      if (std::isfinite(y)) ymax = std::max(ymax, y);
    }
  }
  const double xmax = xs.empty() ? 1.0 : std::max(1.0, xs.back());
  out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n", W, H);
  out << fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, H);
  out << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">log2 n</text>\n", W / 2, H - 10);
  out << fmt::format("<text x=\"5\" y=\"20\" font-size=\"12\">value / value(n_1), max {:.3g}</text>\n", ymax);
  const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  for (std::size_t q = 0; q < series.size(); ++q) {
    std::string pts;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double px = M + (W - 2 * M) * xs[k] / xmax;
      const double py = H - M - (H - 2 * M) * (std::isfinite(series[q][k]) ? series[q][k] : 0.0) / ymax;
      pts += fmt::format("{:.2f},{:.2f} ", px, py);
    }
    out << fmt::format("<polyline fill=\"none\" stroke=\"{}\" points=\"{}\"><title>{}</title></polyline>\n",
                       colors[q % 8], pts, names[q]);
  }
  out << "</svg>\n";
}

}  // namespace aniso
