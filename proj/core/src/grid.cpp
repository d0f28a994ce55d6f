#include "aniso/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "aniso/error.hpp"
#include "aniso/problem.hpp"
#include "aniso/text.hpp"

namespace aniso {

Grid::Grid(std::vector<double> extents, std::vector<int> nodes)
    : extents_(std::move(extents)), nodes_(std::move(nodes)) {
  if (extents_.size() != nodes_.size() || nodes_.empty()) {
    throw Error(ErrorKind::Validation, "grid.extents and grid.nodes must have the same nonzero length");
  }
  cell_volume_ = 1.0;
  measure_ = 1.0;
  size_ = 1;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i] < 1) throw Error(ErrorKind::Validation, fmt::format("grid.nodes[{}]: must be >= 1", i + 1));
    if (!(extents_[i] > 0.0)) {
      throw Error(ErrorKind::Validation, fmt::format("grid.extents[{}]: must be > 0", i + 1));
    }
    spacing_.push_back(extents_[i] / (nodes_[i] + 1));
    stride_.push_back(size_);
    size_ *= static_cast<std::size_t>(nodes_[i]);
    cell_volume_ *= spacing_.back();
    measure_ *= extents_[i];
  }
}

std::size_t Grid::edge_count(int axis) const { return size_ / nodes_[axis] * (nodes_[axis] + 1); }

std::vector<int> Grid::multi_index(std::size_t flat) const {
  std::vector<int> idx(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    idx[i] = static_cast<int>(flat % nodes_[i]);
    flat /= nodes_[i];
  }
  return idx;
}

std::size_t edge_stride(const Grid& grid, int axis, int along) {
  std::size_t stride = 1;
  for (int d = 0; d < along; ++d) stride *= grid.nodes()[d] + (d == axis ? 1 : 0);
  return stride;
}

std::size_t low_edge(const Grid& grid, std::size_t flat, int axis) {
  std::size_t edge = 0;
  std::size_t stride = 1;
  for (int d = 0; d < grid.dim(); ++d) {
    const int n = grid.nodes()[d];
    edge += (flat % n) * stride;
    flat /= n;
    stride *= n + (d == axis ? 1 : 0);
  }
  return edge;
}

GridFunction::GridFunction(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorKind::GridMismatch,
                fmt::format("{} values for a grid of {} nodes", values_.size(), grid_.size()));
  }
}

GridFunction GridFunction::sample(const Grid& grid, const std::function<double(std::span<const double>)>& f) {
  GridFunction u(grid);
  std::vector<double> x(grid.dim());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.multi_index(i);
    for (int d = 0; d < grid.dim(); ++d) x[d] = grid.coordinate(d, idx[d]);
    u[i] = f(x);
  }
  return u;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::min() const {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

namespace {

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid() == b.grid())) throw Error(ErrorKind::GridMismatch, "operands live on different grids");
}

}  // namespace

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  GridFunction out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

GridFunction operator*(double c, const GridFunction& u) {
  GridFunction out(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = c * u[i];
  return out;
}

EdgeField partial(const GridFunction& u, int axis) {
  const Grid& g = u.grid();
  if (axis < 0 || axis >= g.dim()) throw Error(ErrorKind::Validation, fmt::format("invalid axis {}", axis));
  EdgeField e{axis, std::vector<double>(g.edge_count(axis), 0.0)};
  const double inv_h = 1.0 / g.spacing(axis);
  const std::size_t step = edge_stride(g, axis, axis);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t lo = low_edge(g, i, axis);
    e.values[lo] += u[i] * inv_h;
    e.values[lo + step] -= u[i] * inv_h;
  }
  return e;
}

std::vector<double> node_partial(const GridFunction& u, int axis) {
  const Grid& g = u.grid();
  const EdgeField e = partial(u, axis);
  const std::size_t step = edge_stride(g, axis, axis);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t lo = low_edge(g, i, axis);
    out[i] = 0.5 * (e.values[lo] + e.values[lo + step]);
  }
  return out;
}

namespace {

double power_sum_norm(std::span<const double> values, double cell_volume, double s) {
  if (!(s >= 1.0)) throw Error(ErrorKind::InvalidExponent, fmt::format("norm exponent {} must be >= 1", s));
  double sum = 0.0;
  for (double v : values) sum += std::pow(std::abs(v), s);
  return std::pow(cell_volume * sum, 1.0 / s);
}

}  // namespace

double norm_Ls(const GridFunction& u, double s) {
  return power_sum_norm(u.values(), u.grid().cell_volume(), s);
}

double norm_Ls(const Grid& grid, const EdgeField& e, double s) {
  return power_sum_norm(e.values, grid.cell_volume(), s);
}

double anisotropic_norm(const GridFunction& u, std::span<const double> p) {
  double sum = 0.0;
  for (int j = 0; j < u.grid().dim(); ++j) sum += norm_Ls(u.grid(), partial(u, j), p[j]);
  return sum;
}

double pairing_A(const GridFunction& u, const GridFunction& v, std::span<const double> p) {
  require_same_grid(u, v);
  const Grid& g = u.grid();
  double sum = 0.0;
  for (int j = 0; j < g.dim(); ++j) {
    const EdgeField du = partial(u, j);
    const EdgeField dv = partial(v, j);
    for (std::size_t e = 0; e < du.values.size(); ++e) {
      const double t = du.values[e];
      if (t != 0.0) sum += std::pow(std::abs(t), p[j] - 2.0) * t * dv.values[e];
    }
  }
  return g.cell_volume() * sum;
}

std::vector<double> apply_A(const GridFunction& u, std::span<const double> p) {
  const Grid& g = u.grid();
  std::vector<double> out(g.size(), 0.0);
  for (int j = 0; j < g.dim(); ++j) {
    const EdgeField du = partial(u, j);
    std::vector<double> flux(du.values.size());
    for (std::size_t e = 0; e < flux.size(); ++e) {
      const double t = du.values[e];
      flux[e] = t == 0.0 ? 0.0 : std::pow(std::abs(t), p[j] - 2.0) * t;
    }
    const std::size_t step = edge_stride(g, j, j);
    const double w = g.cell_volume() / g.spacing(j);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::size_t lo = low_edge(g, i, j);
      out[i] += w * (flux[lo] - flux[lo + step]);
    }
  }
  return out;
}

double level_measure(const GridFunction& u, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidLevel, fmt::format("level {} must be > 0", h));
  std::size_t count = 0;
  for (double v : u.values()) count += std::abs(v) >= h ? 1 : 0;
  return u.grid().cell_volume() * static_cast<double>(count);
}

double sobolev_ratio(const GridFunction& u, std::span<const double> p) {
  const Grid& g = u.grid();
  const int N = g.dim();
  const double pm = harmonic_mean(p.first(N));
  if (!(pm < N)) throw Error(ErrorKind::Supercritical, "Sobolev exponent undefined for p >= N");
  if (u.max_abs() == 0.0) throw Error(ErrorKind::ZeroFunction, "Sobolev ratio of the zero function");
  const double p_star = N * pm / (N - pm);
  double log_prod = 0.0;
  for (int j = 0; j < N; ++j) log_prod += std::log(norm_Ls(g, partial(u, j), p[j])) / N;
  return norm_Ls(u, p_star) / std::exp(log_prod);
}

void write_csv(std::ostream& out, const GridFunction& u) {
  const Grid& g = u.grid();
  std::vector<std::string> head;
  for (int d = 0; d < g.dim(); ++d) head.push_back(fmt::format("i{}", d));
  for (int d = 0; d < g.dim(); ++d) head.push_back(fmt::format("x{}", d));
  head.push_back("value");
  out << join(head, ",") << "\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.multi_index(i);
    std::vector<std::string> row;
    for (int k : idx) row.push_back(std::to_string(k));
    for (int d = 0; d < g.dim(); ++d) row.push_back(num(g.coordinate(d, idx[d])));
    row.push_back(num(u[i]));
    out << join(row, ",") << "\n";
  }
}

GridFunction read_csv(std::istream& in, const Grid& grid) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Io, "grid function CSV is empty");
  GridFunction u(grid);
  std::vector<bool> seen(grid.size(), false);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != 2 * grid.dim() + 1) {
      throw Error(ErrorKind::Io, fmt::format("grid function CSV row {}: expected {} columns", rows + 1,
                                             2 * grid.dim() + 1));
    }
    std::size_t flat = 0;
    for (int d = 0; d < grid.dim(); ++d) {
      const int k = std::stoi(cells[d]);
      if (k < 0 || k >= grid.nodes()[d]) {
        throw Error(ErrorKind::GridMismatch, fmt::format("grid function CSV row {}: index out of range", rows + 1));
      }
      flat += static_cast<std::size_t>(k) * grid.stride(d);
    }
    u[flat] = std::stod(cells.back());
    seen[flat] = true;
    ++rows;
  }
  if (std::count(seen.begin(), seen.end(), true) != static_cast<std::ptrdiff_t>(grid.size())) {
    throw Error(ErrorKind::GridMismatch, "grid function CSV does not cover every node");
  }
  return u;
}

}  // namespace aniso
