#include "aniso/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numeric>
#include <ostream>

#include "aniso/error.hpp"
#include "aniso/nonlinearity.hpp"
#include "aniso/text.hpp"

namespace aniso {

void validate(const SolverOptions& o) {
  auto fail = [](const char* field, const char* why) {
    throw Error(ErrorKind::Validation, fmt::format("solver.{}: {}", field, why));
  };
  if (!(o.eps0 > 0.0)) fail("eps0", "must be > 0");
  if (!(o.eps_min > 0.0)) fail("eps_min", "must be > 0");
  if (o.picard_max < 1) fail("picard_max", "must be >= 1");
  if (o.newton_max < 1) fail("newton_max", "must be >= 1");
  if (!(o.tol_residual > 0.0)) fail("tol", "must be > 0");
  if (!(o.relax > 0.0 && o.relax <= 1.0)) fail("relax", "must lie in (0, 1]");
  if (o.divergence_window < 1) fail("divergence_window", "must be >= 1");
}

std::vector<double> MonitoredNorms::flat() const {
  std::vector<double> out{norm_Lm, norm_W, int_phi_u, int_psi_u};
  out.insert(out.end(), J_m_p.begin(), J_m_p.end());
  out.insert(out.end(), J_theta_q.begin(), J_theta_q.end());
  return out;
}

std::vector<std::string> MonitoredNorms::names(int N) {
  std::vector<std::string> out{"norm_Lm", "norm_W", "int_phi_u", "int_psi_u"};
  for (int j = 1; j <= N; ++j) out.push_back(fmt::format("J_m_p{}", j));
  for (int j = 1; j <= N; ++j) out.push_back(fmt::format("J_theta_q{}", j));
  return out;
}

namespace {

/// Node/edge connectivity of the forward-difference scheme.
class Stencil {
 public:
  explicit Stencil(const Grid& grid) : grid_(grid) {
    const int N = grid.dim();
    edges_.resize(N);
    low_.resize(N);
    step_.resize(N);
    for (int j = 0; j < N; ++j) {
      step_[j] = edge_stride(grid, j, j);
      edges_[j].assign(grid.edge_count(j), {-1, -1});
      low_[j].resize(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t lo = low_edge(grid, i, j);
        low_[j][i] = lo;
        edges_[j][lo][1] = static_cast<int>(i);
        edges_[j][lo + step_[j]][0] = static_cast<int>(i);
      }
    }
  }

  const Grid& grid() const { return grid_; }
  /// (a, b): node on the low and high side, -1 on the boundary.
  const std::vector<std::array<int, 2>>& edges(int j) const { return edges_[j]; }
  std::size_t low(int j, std::size_t i) const { return low_[j][i]; }
  std::size_t high(int j, std::size_t i) const { return low_[j][i] + step_[j]; }

  std::vector<double> differences(std::span<const double> v, int j) const {
    const double inv_h = 1.0 / grid_.spacing(j);
    std::vector<double> d(edges_[j].size());
    for (std::size_t e = 0; e < d.size(); ++e) {
      const auto [a, b] = edges_[j][e];
      d[e] = ((b >= 0 ? v[b] : 0.0) - (a >= 0 ? v[a] : 0.0)) * inv_h;
    }
    return d;
  }

  /// Central differences at nodes, one vector per axis.
  std::vector<std::vector<double>> node_gradients(std::span<const double> v) const {
    std::vector<std::vector<double>> g(grid_.dim(), std::vector<double>(grid_.size()));
    for (int j = 0; j < grid_.dim(); ++j) {
      const auto d = differences(v, j);
      for (std::size_t i = 0; i < grid_.size(); ++i) g[j][i] = 0.5 * (d[low(j, i)] + d[high(j, i)]);
    }
    return g;
  }

 private:
  const Grid& grid_;
  std::vector<std::vector<std::array<int, 2>>> edges_;
  std::vector<std::vector<std::size_t>> low_;
  std::vector<std::size_t> step_;
};

/// (t^2 + eps^2)^{(e-2)/2} t and its derivative.
double smoothed_power(double t, double e, double eps) {
  if (e == 2.0) return t;
  return std::pow(t * t + eps * eps, 0.5 * (e - 2.0)) * t;
}

double smoothed_power_derivative(double t, double e, double eps) {
  if (e == 2.0) return 1.0;
  const double s = t * t + eps * eps;
  return std::pow(s, 0.5 * (e - 4.0)) * ((e - 1.0) * t * t + eps * eps);
}

/// Pointwise data at one state of U.
struct NodeData {
  std::vector<double> phi;       // Phi(U)
  std::vector<double> coeff;     // sum_j a_j |d_j U|^{p_j} + 1
  std::vector<double> psi_n;     // Psi_n(U), zero when disabled
  std::vector<double> b_node;    // F + psi(U) + f
  std::vector<double> div_load;  // weak-form load of G (already cell-volume weighted)
  double scale = 1.0;            // load scale for relative residuals
};

NodeData evaluate_nodes(const Stencil& st, std::span<const double> U, const ProblemSpec& spec,
                        const OperatorBSpec& bspec, const RegularizationParams& params) {
  const Grid& g = st.grid();
  const std::size_t M = g.size();
  const auto grads = st.node_gradients(U);
  NodeData d;
  d.phi.resize(M);
  d.coeff.resize(M);
  d.psi_n.assign(M, 0.0);
  d.b_node.resize(M);
  d.div_load = divergence_load(g, bspec.G);
  std::vector<double> grad(g.dim());
  double scale = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    for (int j = 0; j < g.dim(); ++j) grad[j] = grads[j][i];
    const PointState state{U[i], grad};
    double c = 1.0;
    for (int j = 0; j < g.dim(); ++j) {
      if (spec.a[j] != 0.0) c += spec.a[j] * std::pow(std::abs(grad[j]), spec.p[j]);
    }
    d.coeff[i] = c;
    d.phi[i] = c * signed_power(U[i], spec.m);
    if (spec.psi_enabled) d.psi_n[i] = eval_psi_n(state, params, spec);
    double b = bspec.F[i] + bspec.psi(U[i]);
    if (bspec.f_datum) b += (*bspec.f_datum)[i];
    d.b_node[i] = b;
    if (!std::isfinite(d.psi_n[i]) || !std::isfinite(b) || !std::isfinite(d.phi[i])) {
      const auto idx = g.multi_index(i);
      std::vector<std::string> parts;
      for (int k : idx) parts.push_back(std::to_string(k));
      throw Error(ErrorKind::NotANumber,
                  fmt::format("non-finite nonlinearity at node {} (index {})", i, join(parts, ",")));
    }
    scale = std::max(scale, std::abs(b) + std::abs(d.psi_n[i]) + std::abs(d.div_load[i]) / g.cell_volume());
  }
  d.scale = scale > 0.0 ? scale : 1.0;
  return d;
}

std::vector<double> exact_residual(const Stencil& st, const GridFunction& U, const ProblemSpec& spec,
                                   const NodeData& d) {
  std::vector<double> R = apply_A(U, spec.p);
  const double cv = st.grid().cell_volume();
  for (std::size_t i = 0; i < R.size(); ++i) {
    R[i] += cv * (d.phi[i] - d.psi_n[i] - d.b_node[i]) - d.div_load[i];
  }
  return R;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Monotone core with frozen coefficients, in strong-form scaling (weak form / cell volume):
///   r(V)_i = sum_j (flux_j[low] - flux_j[high]) / h_j + c_i |V_i|^{m-2} V_i - load_i.
class FrozenCore {
 public:
  FrozenCore(const Stencil& st, const ProblemSpec& spec, std::vector<double> coeff, std::vector<double> load,
             double eps)
      : st_(st), spec_(spec), coeff_(std::move(coeff)), load_(std::move(load)), eps_(eps) {}

  std::vector<double> residual(std::span<const double> V) const {
    const Grid& g = st_.grid();
    std::vector<double> r(g.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff_[i] * smoothed_power(V[i], spec_.m, eps_) - load_[i];
    for (int j = 0; j < g.dim(); ++j) {
      const auto d = st_.differences(V, j);
      const double inv_h = 1.0 / g.spacing(j);
      const auto& edges = st_.edges(j);
      for (std::size_t e = 0; e < d.size(); ++e) {
        const double flux = smoothed_power(d[e], spec_.p[j], eps_) * inv_h;
        const auto [a, b] = edges[e];
        if (b >= 0) r[b] += flux;
        if (a >= 0) r[a] -= flux;
      }
    }
    return r;
  }

  Eigen::SparseMatrix<double> jacobian(std::span<const double> V) const {
    const Grid& g = st_.grid();
    const auto M = static_cast<Eigen::Index>(g.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(g.size() * (1 + 4 * g.dim()));
    for (Eigen::Index i = 0; i < M; ++i) {
      trip.emplace_back(i, i, coeff_[i] * smoothed_power_derivative(V[i], spec_.m, eps_));
    }
    for (int j = 0; j < g.dim(); ++j) {
      const auto d = st_.differences(V, j);
      const double inv_h2 = 1.0 / (g.spacing(j) * g.spacing(j));
      const auto& edges = st_.edges(j);
      for (std::size_t e = 0; e < d.size(); ++e) {
        const double w = smoothed_power_derivative(d[e], spec_.p[j], eps_) * inv_h2;
        const auto [a, b] = edges[e];
        if (a >= 0) trip.emplace_back(a, a, w);
        if (b >= 0) trip.emplace_back(b, b, w);
        if (a >= 0 && b >= 0) {
          trip.emplace_back(a, b, -w);
          trip.emplace_back(b, a, -w);
        }
      }
    }
    Eigen::SparseMatrix<double> J(M, M);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
  }

 private:
  const Stencil& st_;
  const ProblemSpec& spec_;
  std::vector<double> coeff_;
  std::vector<double> load_;
  double eps_;
};

struct NewtonResult {
  std::vector<double> V;
  std::vector<double> trace;
  int iterations = 0;
};

NewtonResult damped_newton(const FrozenCore& core, std::vector<double> V, double target, int max_iter) {
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 40;
  NewtonResult out;
  std::vector<double> r = core.residual(V);
  double merit = norm2(r);
  out.trace.push_back(merit);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  for (int it = 0; it < max_iter; ++it) {
    if (max_abs(r) <= target) break;
    ldlt.compute(core.jacobian(V));
    if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::NewtonStall, "Jacobian factorization failed");
    const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
    const Eigen::VectorXd step = ldlt.solve(-rv);

    double alpha = 1.0;
    bool accepted = false;
    std::vector<double> trial(V.size());
    std::vector<double> r_trial;
    for (int k = 0; k < kMaxHalvings; ++k, alpha *= 0.5) {
      for (std::size_t i = 0; i < V.size(); ++i) trial[i] = V[i] + alpha * step[static_cast<Eigen::Index>(i)];
      r_trial = core.residual(trial);
      const double m_trial = norm2(r_trial);
      if (std::isfinite(m_trial) && m_trial <= (1.0 - kArmijo * alpha) * merit) {
        accepted = true;
        merit = m_trial;
        break;
      }
    }
    if (!accepted) {
      // Round-off floor: close enough to the target to hand back to the outer loop.
      if (max_abs(r) <= 1e3 * target) break;
      throw Error(ErrorKind::NewtonStall,
                  fmt::format("line search failed at inner iteration {} (residual {})", it, num(max_abs(r))));
    }
    V.swap(trial);
    r.swap(r_trial);
    out.trace.push_back(merit);
    ++out.iterations;
  }
  out.V = std::move(V);
  return out;
}

double cell_sum(const Grid& g, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return g.cell_volume() * s;
}

std::string condition_verdict(const ProblemSpec& spec) {
  try {
    return analyze(spec).condition.holds ? "true" : "false";
  } catch (const Error& e) {
    return fmt::format("n/a: {}", to_string(e.kind()));
  }
}

}  // namespace

MonitoredNorms monitored_norms(const GridFunction& U, const ProblemSpec& spec) {
  const Grid& g = U.grid();
  const Stencil st(g);
  const auto grads = st.node_gradients(U.values());
  MonitoredNorms out;
  out.norm_Lm = norm_Ls(U, spec.m);
  out.norm_W = anisotropic_norm(U, spec.p);
  out.J_m_p.assign(g.dim(), 0.0);
  out.J_theta_q.assign(g.dim(), 0.0);
  std::vector<double> grad(g.dim());
  double phi_u = 0.0;
  double psi_u = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.dim(); ++j) grad[j] = grads[j][i];
    const PointState state{U[i], grad};
    phi_u += eval_phi(state, spec) * U[i];
    psi_u += eval_psi(state, spec) * U[i];
    const double au = std::abs(U[i]);
    for (int j = 0; j < g.dim(); ++j) {
      const double ag = std::abs(grad[j]);
      out.J_m_p[j] += std::pow(au, spec.m) * std::pow(ag, spec.p[j]);
      out.J_theta_q[j] += std::pow(au, spec.theta[j]) * std::pow(ag, spec.q[j]);
    }
  }
  const double cv = g.cell_volume();
  out.int_phi_u = cv * phi_u;
  out.int_psi_u = cv * psi_u;
  for (int j = 0; j < g.dim(); ++j) {
    out.J_m_p[j] *= cv;
    out.J_theta_q[j] *= cv;
  }
  return out;
}

std::vector<double> weak_residual(const GridFunction& U, const ProblemSpec& spec, const OperatorBSpec& bspec,
                                  std::int64_t n) {
  const Stencil st(U.grid());
  const NodeData d = evaluate_nodes(st, U.values(), spec, bspec, make_regularization(spec, n));
  return exact_residual(st, U, spec, d);
}

double relative_residual(const GridFunction& U, const ProblemSpec& spec, const OperatorBSpec& bspec,
                         std::int64_t n) {
  const Stencil st(U.grid());
  const NodeData d = evaluate_nodes(st, U.values(), spec, bspec, make_regularization(spec, n));
  return max_abs(exact_residual(st, U, spec, d)) / (U.grid().cell_volume() * d.scale);
}

SolveReport solve_regularized(const ProblemSpec& spec, const OperatorBSpec& bspec, std::int64_t n,
                              const Grid& grid, const SolverOptions& opts, const GridFunction* initial) {
  validate(opts);
  if (n < 1) throw Error(ErrorKind::Validation, "run.n: regularization index must be >= 1");
  if (!(bspec.F.grid() == grid)) throw Error(ErrorKind::GridMismatch, "operator data and solve grid differ");
  if (initial && !(initial->grid() == grid)) throw Error(ErrorKind::GridMismatch, "initial guess grid differs");

  const Stencil st(grid);
  const RegularizationParams params = make_regularization(spec, n);
  const double cv = grid.cell_volume();

  SolveReport rep;
  rep.n = n;
  rep.h_exp = params.h_exp;
  rep.condition_verdict = condition_verdict(spec);
  GridFunction U = initial ? *initial : GridFunction(grid);

  double previous = std::numeric_limits<double>::infinity();
  int increases = 0;
  for (int k = 0;; ++k) {
    const NodeData d = evaluate_nodes(st, U.values(), spec, bspec, params);
    const double rel = max_abs(exact_residual(st, U, spec, d)) / (cv * d.scale);
    rep.residual = rel;
    rep.coercivity_trace.push_back(pairing_A(U, U, spec.p) + cell_sum(grid, d.phi, U.values()));
    if (rel <= opts.tol_residual) {
      rep.converged = true;
      break;
    }
    if (k >= opts.picard_max) break;
    increases = rel > previous ? increases + 1 : 0;
    if (increases >= opts.divergence_window) {
      throw Error(ErrorKind::Diverged,
                  fmt::format("residual grew over {} consecutive Picard steps (now {})", increases, num(rel)));
    }
    previous = rel;

    const double eps = std::max(opts.eps_min, opts.eps0 * std::ldexp(1.0, -k));
    std::vector<double> load(grid.size());
    for (std::size_t i = 0; i < load.size(); ++i) load[i] = d.psi_n[i] + d.b_node[i] + d.div_load[i] / cv;
    const FrozenCore core(st, spec, d.coeff, std::move(load), eps);
    const double target = 0.1 * opts.tol_residual * d.scale;
    std::vector<double> start(U.values().begin(), U.values().end());
    NewtonResult inner = damped_newton(core, std::move(start), target, opts.newton_max);
    rep.newton_traces.push_back(std::move(inner.trace));
    rep.newton_iterations += inner.iterations;
    ++rep.picard_iterations;

    for (std::size_t i = 0; i < U.size(); ++i) {
      U[i] += opts.relax * (inner.V[i] - U[i]);
      if (opts.project_nonneg) U[i] = std::max(U[i], 0.0);
      if (!std::isfinite(U[i])) {
        throw Error(ErrorKind::NotANumber, fmt::format("non-finite iterate at node {}", i));
      }
    }
  }

  rep.norms = monitored_norms(U, spec);
  rep.energy_residual = energy_identity_residual(U, spec, bspec, n);
  rep.min_value = U.min();
  rep.U = std::move(U);
  return rep;
}

double energy_identity_residual(const GridFunction& U, const ProblemSpec& spec, const OperatorBSpec& bspec,
                                std::optional<std::int64_t> n) {
  const Grid& g = U.grid();
  const Stencil st(g);
  const auto grads = st.node_gradients(U.values());
  const RegularizationParams params = make_regularization(spec, n.value_or(1));
  std::vector<double> grad(g.dim());
  double phi_u = 0.0;
  double psi_u = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.dim(); ++j) grad[j] = grads[j][i];
    const PointState state{U[i], grad};
    phi_u += eval_phi(state, spec) * U[i];
    if (!spec.psi_enabled) continue;
    psi_u += (n ? eval_psi_n(state, params, spec) : eval_psi(state, spec)) * U[i];
  }
  const double a_uu = pairing_A(U, U, spec.p);
  const double lhs = a_uu + g.cell_volume() * (phi_u - psi_u) - eval_B(U, U, bspec);
  return std::abs(lhs) / (1.0 + std::abs(a_uu));
}

SequenceReport run_sequence(const ProblemSpec& spec, const OperatorBSpec& bspec, const Grid& grid,
                            const SolverOptions& opts, const std::vector<std::int64_t>& n_list, bool warm_start) {
  if (n_list.empty()) throw Error(ErrorKind::Validation, "run.n_list: must be nonempty");
  for (std::size_t k = 1; k < n_list.size(); ++k) {
    if (n_list[k] <= n_list[k - 1]) throw Error(ErrorKind::Validation, "run.n_list: must be increasing");
  }
  SequenceReport seq;
  std::optional<GridFunction> previous;
  bool failed_hard = false;
  for (std::int64_t n : n_list) {
    SequenceEntry entry;
    entry.n = n;
    try {
      entry.report = solve_regularized(spec, bspec, n, grid, opts, warm_start && previous ? &*previous : nullptr);
    } catch (const Error& e) {
      entry.error = e.what();
      failed_hard = failed_hard || e.kind() == ErrorKind::Diverged || e.kind() == ErrorKind::NotANumber;
    }
    seq.entries.push_back(std::move(entry));
    if (seq.entries.back().report) previous = seq.entries.back().report->U;
  }

  std::vector<const SolveReport*> ok;
  for (const auto& e : seq.entries) {
    if (e.report) ok.push_back(&*e.report);
  }
  if (!ok.empty()) {
    const auto first = ok.front()->norms.flat();
    for (const SolveReport* r : ok) {
      const auto cur = r->norms.flat();
      for (std::size_t q = 0; q < cur.size(); ++q) {
        if (first[q] != 0.0) seq.max_growth_factor = std::max(seq.max_growth_factor, cur[q] / first[q]);
      }
    }
  }
  for (std::size_t k = 1; k < ok.size(); ++k) {
    seq.w_distance.push_back(anisotropic_norm(ok[k]->U - ok[k - 1]->U, spec.p));
    const auto a = ok[k - 1]->norms.flat();
    const auto b = ok[k]->norms.flat();
    std::vector<double> change(a.size());
    for (std::size_t q = 0; q < a.size(); ++q) {
      const double denom = std::max(std::abs(a[q]), std::abs(b[q]));
      change[q] = denom > 0.0 ? std::abs(b[q] - a[q]) / denom : 0.0;
    }
    seq.max_relative_change.push_back(*std::max_element(change.begin(), change.end()));
    seq.relative_change.push_back(std::move(change));
  }

  const auto& mrc = seq.max_relative_change;
  seq.uniform_bound_plausible =
      mrc.size() >= 2 && mrc[mrc.size() - 1] < seq.threshold && mrc[mrc.size() - 2] < seq.threshold;

  bool growing = ok.size() >= 2;
  for (std::size_t k = 1; k < ok.size(); ++k) {
    const auto& a = ok[k - 1]->norms.J_theta_q;
    const auto& b = ok[k]->norms.J_theta_q;
    if (!(std::accumulate(b.begin(), b.end(), 0.0) > std::accumulate(a.begin(), a.end(), 0.0))) growing = false;
  }
  seq.no_uniform_bound = failed_hard || (growing && !mrc.empty() && mrc.back() >= seq.threshold);
  return seq;
}

ProfileReport stampacchia_profile(const GridFunction& U, const std::vector<double>& levels,
                                  const ExponentReport& report, double m) {
  if (levels.empty()) throw Error(ErrorKind::InvalidLevel, "profile needs at least one level");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(levels[k] > 0.0)) throw Error(ErrorKind::InvalidLevel, "levels must be positive");
    if (k && !(levels[k] > levels[k - 1])) throw Error(ErrorKind::InvalidLevel, "levels must be increasing");
  }
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  ProfileReport out;
  out.levels = levels;
  for (double h : levels) out.mu.push_back(level_measure(U, h));
  if (out.mu.front() == 0.0) {
    throw Error(ErrorKind::DegenerateProfile, fmt::format("mu vanishes at the smallest level {}", num(levels.front())));
  }
  out.predicted_gamma = report.gamma_abar;
  out.linf_estimate = U.max_abs();
  out.first_zero_level = kNaN;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (out.mu[k] == 0.0) {
      out.first_zero_level = levels[k];
      break;
    }
  }

  // log mu(l) + m log(l - h) = log C + gamma log mu(h) over consecutive pairs.
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    const double mh = out.mu[k];
    const double ml = out.mu[k + 1];
    if (mh <= 0.0 || ml <= 0.0) break;
    const double x = std::log(mh);
    const double y = std::log(ml) + m * std::log(levels[k + 1] - levels[k]);
    xs.push_back(x);
    ys.push_back(y);
    out.pair_exponent.push_back(x != 0.0 ? y / x : kNaN);
  }
  out.fitted_gamma = kNaN;
  if (xs.size() >= 2) {
    const double xm = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double ym = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sxy += (xs[k] - xm) * (ys[k] - ym);
      sxx += (xs[k] - xm) * (xs[k] - xm);
    }
    if (sxx > 0.0) out.fitted_gamma = sxy / sxx;
  }
  return out;
}

std::string solve_csv_header(int N) {
  std::vector<std::string> cols{"n",        "converged",       "picard_iterations", "newton_iterations",
                                "residual", "energy_residual", "min_value",         "h_exp",
                                "condition_m"};
  for (auto& name : MonitoredNorms::names(N)) cols.push_back(name);
  return join(cols, ",");
}

std::string solve_csv_row(const SolveReport& r) {
  std::vector<std::string> cells{std::to_string(r.n),
                                 r.converged ? "true" : "false",
                                 std::to_string(r.picard_iterations),
                                 std::to_string(r.newton_iterations),
                                 num(r.residual),
                                 num(r.energy_residual),
                                 num(r.min_value),
                                 num(r.h_exp),
                                 "\"" + r.condition_verdict + "\""};
  for (double x : r.norms.flat()) cells.push_back(num(x));
  return join(cells, ",");
}

void write_sequence_csv(std::ostream& out, const SequenceReport& seq, int N) {
  out << solve_csv_header(N) << ",w_distance,max_relative_change,error\n";
  std::size_t ok_index = 0;
  for (const auto& e : seq.entries) {
    if (!e.report) {
      std::vector<std::string> cells{std::to_string(e.n), "false"};
      const std::size_t blanks = 7 + MonitoredNorms::names(N).size() + 2;
      for (std::size_t k = 0; k < blanks; ++k) cells.emplace_back();
      cells.push_back("\"" + e.error + "\"");
      out << join(cells, ",") << "\n";
      continue;
    }
    std::string w;
    std::string c;
    if (ok_index > 0) {
      w = num(seq.w_distance[ok_index - 1]);
      c = num(seq.max_relative_change[ok_index - 1]);
    }
    out << solve_csv_row(*e.report) << "," << w << "," << c << ",\n";
    ++ok_index;
  }
}

}  // namespace aniso
