#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace aniso {

/// Box (0, L_0) x ... x (0, L_{N-1}) with nodes_i interior nodes per axis and zero Dirichlet data.
class Grid {
 public:
  Grid() = default;
  Grid(std::vector<double> extents, std::vector<int> nodes);

  int dim() const { return static_cast<int>(nodes_.size()); }
  std::span<const int> nodes() const { return nodes_; }
  std::span<const double> extents() const { return extents_; }
  double spacing(int axis) const { return spacing_[axis]; }
  double cell_volume() const { return cell_volume_; }
  double measure() const { return measure_; }

  /// Number of interior nodes.
  std::size_t size() const { return size_; }
  /// Number of forward-difference edges along `axis` (one extra layer along that axis).
  std::size_t edge_count(int axis) const;

  std::size_t stride(int axis) const { return stride_[axis]; }
  std::vector<int> multi_index(std::size_t flat) const;
  double coordinate(int axis, int k) const { return (k + 1) * spacing_[axis]; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.extents_ == b.extents_ && a.nodes_ == b.nodes_;
  }

 private:
  std::vector<double> extents_;
  std::vector<int> nodes_;
  std::vector<double> spacing_;
  std::vector<std::size_t> stride_;
  double cell_volume_ = 0.0;
  double measure_ = 0.0;
  std::size_t size_ = 0;
};

/// Values on interior nodes, axis 0 fastest. The boundary is implicitly zero.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(Grid grid);
  GridFunction(Grid grid, std::vector<double> values);

  /// Samples f at interior node coordinates.
  static GridFunction sample(const Grid& grid, const std::function<double(std::span<const double>)>& f);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double max_abs() const;
  double min() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double c, const GridFunction& u);

/// Forward differences along one axis. Edge k (0..nodes_axis) joins interior nodes k-1 and k,
/// with out-of-range nodes read as zero. Edge layout matches the node layout with the axis
/// extent increased by one.
struct EdgeField {
  int axis = 0;
  std::vector<double> values;
};

EdgeField partial(const GridFunction& u, int axis);

/// Index of the edge on the low side of node `flat` along `axis`; the high-side edge is
/// this plus the edge stride along that axis.
std::size_t low_edge(const Grid& grid, std::size_t flat, int axis);
std::size_t edge_stride(const Grid& grid, int axis, int along);

/// Central difference at interior nodes (mean of the two adjacent edge differences).
std::vector<double> node_partial(const GridFunction& u, int axis);

/// (cell_volume * sum |value|^s)^{1/s}; Error{InvalidExponent} for s < 1.
double norm_Ls(const GridFunction& u, double s);
double norm_Ls(const Grid& grid, const EdgeField& e, double s);

/// sum_j ||d_j u||_{L^{p_j}}.
double anisotropic_norm(const GridFunction& u, std::span<const double> p);

/// <A u, v> = sum_j cell_volume sum_edges |d_j u|^{p_j-2} d_j u d_j v.
double pairing_A(const GridFunction& u, const GridFunction& v, std::span<const double> p);

/// Weak-form vector (<A u, e_i>)_i; pairing_A(u, v) = sum_i apply_A(u)_i v_i.
std::vector<double> apply_A(const GridFunction& u, std::span<const double> p);

/// cell_volume * #{nodes : |u| >= h}.
double level_measure(const GridFunction& u, double h);

/// ||u||_{L^{p*}} / prod_j ||d_j u||_{L^{p_j}}^{1/N}.
double sobolev_ratio(const GridFunction& u, std::span<const double> p);

/// One row per node: i_0..i_{N-1}, x_0..x_{N-1}, value.
void write_csv(std::ostream& out, const GridFunction& u);
GridFunction read_csv(std::istream& in, const Grid& grid);

}  // namespace aniso
