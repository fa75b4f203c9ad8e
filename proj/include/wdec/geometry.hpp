#pragma once

#include "wdec/complex.hpp"

namespace wdec {

/// Unweighted cell volumes plus a per-cell conformal log-factor u.
/// A metric e^{2u} g is represented by keeping the embedded volumes and
/// applying the u-factors multiplicatively where masses and volumes are
/// formed, so conformal round trips are exact.
struct Geometry {
  int n = 0;                          // manifold dimension
  std::vector<Eigen::VectorXd> vol;   // [p][cell]: unweighted p-volume
  std::vector<Eigen::VectorXd> u;     // [p][cell]: conformal log-factor

  /// Total volume of (M, e^{2u} g).
  double total_volume() const;
};

/// Volumes from embedded coordinates (simplicial) or factor lengths
/// (tensor grids); u initialized to zero.
Geometry make_geometry(const Complex& K);

/// Per-cell weight samples of the function phi. Built from vertex values
/// by barycentric averaging, or carried directly per cell.
struct WeightField {
  std::vector<Eigen::VectorXd> samples;  // [p][cell]
  Eigen::VectorXd vertex_values;         // empty if not vertex-based

  double max_abs() const;
};

WeightField weight_from_vertex_values(const Complex& K, const Eigen::VectorXd& phi);
WeightField zero_weight(const Complex& K);
WeightField constant_weight(const Complex& K, double c);

/// Per-cell samples of an auxiliary scalar (used for conformal factors),
/// averaged from vertex values like phi.
std::vector<Eigen::VectorXd> sample_vertex_field(const Complex& K, const Eigen::VectorXd& f);

} // namespace wdec
