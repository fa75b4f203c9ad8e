#pragma once

#include "wdec/geometry.hpp"

#include <optional>
#include <string>

namespace wdec {

enum class MassScheme { lumped, consistent };
enum class Gauge { weighted, twisted };

/// Largest |phi| (or |u|) tolerated before exponentials are refused.
inline constexpr double kExpGuard = 300.0;

/// Unweighted diagonal (barycentric-lumped Whitney) mass entries for
/// p-cochains: dual volume of the cell divided by its squared p-volume.
Eigen::VectorXd lumped_mass_base(const Complex& K, const Geometry& g, int p);

/// Barycentric dual volume per p-cell (no weights, no conformal factor).
Eigen::VectorXd dual_volume(const Complex& K, const Geometry& g, int p);

/// Weighted mass matrix for p-cochains with measure e^{-2 phi} and metric
/// e^{2u} g. The measure density e^{(n-2p)u - 2 phi} is averaged over the
/// incident top cells (volume-weighted, relative to the cell's own phi
/// sample), so entries on cells all of whose incident tops carry a common
/// u scale by exactly e^{(n-2p)u}, and singular conformal families limit
/// to the domain-restricted assembly. If `domain` is given, only top cells
/// inside it contribute.
SpMat assemble_mass(const Complex& K, const Geometry& g, const WeightField& phi,
                    int p, MassScheme scheme, const DomainTag* domain = nullptr);

/// Plain coboundary D_p = boundary(p+1)^T.
SpMat coboundary(const Complex& K, int p);

/// Twisted coboundary diag(e^{-phi_{p+1}}) D_p diag(e^{+phi_p}).
/// Throws if |phi| exceeds the exponential guard.
SpMat twisted_coboundary(const SpMat& D, const WeightField& phi, int p);

/// Up-stiffness A_p = D^T M_{p+1} D.
SpMat up_stiffness(const SpMat& D, const SpMat& M_up);

/// Operators for every degree of a complex (optionally restricted to a
/// domain): coboundaries, weighted masses and up-stiffness matrices.
struct OperatorBundle {
  int n = 0;
  Gauge gauge = Gauge::weighted;
  MassScheme scheme = MassScheme::lumped;
  std::vector<SpMat> D;  // D[p]: degree p -> p+1 (twisted in twisted gauge)
  std::vector<SpMat> M;  // M[p]: weighted mass
  std::vector<SpMat> A;  // A[p] = D[p]^T M[p+1] D[p]
  // Mapping from local (restricted) indices to cell ids of the parent
  // complex; empty vectors mean the identity.
  std::vector<std::vector<int>> index_map;

  int dim_at(int p) const { return static_cast<int>(M[p].rows()); }
  Eigen::VectorXd mass_diagonal(int p) const;
};

/// Assembles the full bundle. `drop_interface[p] != 0` removes the domain
/// interface cells of degree p from the cochain space (relative/Dirichlet
/// boundary conditions).
OperatorBundle make_bundle(const Complex& K, const Geometry& g, const WeightField& phi,
                           Gauge gauge = Gauge::weighted,
                           MassScheme scheme = MassScheme::lumped,
                           const DomainTag* domain = nullptr,
                           const std::vector<char>& drop_interface = {});

/// Conformal rescale within the weighted class: u-field is added to the
/// geometry and the weight becomes phi - alpha * u, per cell.
std::pair<Geometry, WeightField> conformal_rescale(const Geometry& g, const WeightField& phi,
                                                   const std::vector<Eigen::VectorXd>& u,
                                                   double alpha);

/// Weighted r-norm of a p-cochain: the L^r norm of the piecewise-constant
/// form reconstruction for the measure e^{-r phi} dv, under the conformally
/// rescaled metric. Invariant under conformal_rescale when r = n/(p-alpha).
double weighted_r_norm(const Complex& K, const Geometry& g, const WeightField& phi,
                       const Eigen::VectorXd& cochain, double r, int p);

/// Submatrix by explicit row and column index lists.
SpMat select_submatrix(const SpMat& A, const std::vector<int>& rows,
                       const std::vector<int>& cols);

void write_matrix_market(const SpMat& m, const std::string& path);

} // namespace wdec
