#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <string>
#include <vector>

namespace wdec {

using SpMat = Eigen::SparseMatrix<double>;

/// A cell of a complex, identified by the vertices of its closure.
/// For simplicial complexes the list is the sorted vertex tuple of the
/// simplex; for tensor-product cells it is the set of corner vertices.
struct Cell {
  std::vector<int> vertices;
};

enum class ComplexKind { simplicial, tensor };

/// One 1-dimensional factor of a tensor-product grid.
struct FactorSpec {
  bool circle = true;  // false: interval
  int cells = 0;       // number of 1-cells
  double length = 1.0; // total length
};

/// Combinatorial cell complex with oriented boundary operators.
///
/// Two flavours share this representation: simplicial complexes built from
/// embedded top simplices, and tensor products of discretized circles and
/// intervals. Immutable after construction.
class Complex {
public:
  int dim() const { return static_cast<int>(cells_.size()) - 1; }
  int ncells(int p) const;
  int nvertices() const { return ncells(0); }

  ComplexKind kind() const { return kind_; }

  const std::vector<Cell>& cells(int p) const;

  /// Signed boundary operator C_p -> C_{p-1}, entries in {-1,0,+1}.
  const SpMat& boundary(int p) const;

  /// Coboundary C^p -> C^{p+1}; the transpose of boundary(p+1).
  SpMat coboundary(int p) const;

  /// Ids of top-dimensional cells whose closure contains the given cell.
  const std::vector<int>& tops_of(int p, int cell) const;

  /// Embedded vertex coordinates, one row per vertex. For tensor grids the
  /// columns are the factor arc-length coordinates.
  const Eigen::MatrixXd& vertex_coords() const { return coords_; }

  const std::vector<FactorSpec>& factors() const { return factors_; }

  /// For a tensor cell, the degree of its factor-cell components.
  const std::vector<std::vector<int>>& tensor_factor_degrees(int p) const;

  /// Distance between two points in coordinate space; wrap-aware on
  /// circle factors of tensor grids, Euclidean otherwise.
  double point_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  /// Euler characteristic from cell counts.
  long euler_characteristic() const;

  friend Complex build_simplicial(const Eigen::MatrixXd&,
                                  const std::vector<std::vector<int>>&);
  friend Complex product_grid(const std::vector<FactorSpec>&);

private:
  void build_top_incidence();

  ComplexKind kind_ = ComplexKind::simplicial;
  std::vector<std::vector<Cell>> cells_;   // per degree
  std::vector<SpMat> boundary_;            // boundary_[p] : C_p -> C_{p-1}, p>=1
  Eigen::MatrixXd coords_;
  std::vector<FactorSpec> factors_;
  std::vector<std::vector<std::vector<int>>> tops_of_; // [p][cell] -> top ids
  std::vector<std::vector<std::vector<int>>> tensor_degrees_; // [p][cell] -> per-factor degree
};

/// Builds a simplicial complex from embedded vertices and top simplices.
/// All faces are generated; incidence signs follow the convention that
/// omitting the k-th vertex of the sorted tuple contributes (-1)^k.
/// Throws std::invalid_argument on degenerate or duplicate top simplices.
Complex build_simplicial(const Eigen::MatrixXd& vertices,
                         const std::vector<std::vector<int>>& top_simplices);

/// Tensor product of 1-dimensional circle/interval factors. The coboundary
/// obeys the graded Leibniz rule d(a (x) b) = da (x) b + (-1)^deg(a) a (x) db.
Complex product_grid(const std::vector<FactorSpec>& factors);

/// A domain U given by a subset of top cells, closed under taking faces.
/// The interface consists of the cells lying in the closures of both U and
/// its complement.
struct DomainTag {
  std::vector<char> top_in_U;                    // per top cell
  std::vector<std::vector<char>> in_closure;     // [p][cell]: in closure(U)
  std::vector<std::vector<char>> on_interface;   // [p][cell]
  std::vector<std::vector<char>> in_complement;  // [p][cell]: complement closure only

  std::vector<int> closure_indices(int p) const;
  std::vector<int> interface_indices(int p) const;
  int n_interface(int p) const;
};

/// Tags the full subcomplex generated by the selected top cells.
/// Throws if the predicate selects an empty or full set of top cells.
DomainTag tag_domain(const Complex& K, const std::function<bool(int)>& top_predicate);

/// Complement domain: same complex, predicate negated.
DomainTag complement_domain(const Complex& K, const DomainTag& U);

} // namespace wdec
