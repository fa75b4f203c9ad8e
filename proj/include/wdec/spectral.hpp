#pragma once

#include "wdec/operators.hpp"

namespace wdec {

enum class EigClass { harmonic, exact, coexact };

/// Eigenpairs of the full degree-p Laplacian pencil, sorted ascending and
/// classified by the Hodge split. Vectors are M-orthonormal columns.
struct SpectrumResult {
  int p = 0;
  int harmonic_dim = 0;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  std::vector<EigClass> kinds;
  Eigen::VectorXd residuals;
  double tol = 0;
  std::string method;

  std::vector<double> part(EigClass c) const;
  std::vector<double> coexact() const { return part(EigClass::coexact); }
  std::vector<double> exact_part() const { return part(EigClass::exact); }
};

struct SolveOptions {
  double tol = 1e-10;        // relative residual target
  int dense_threshold = 2000;
  unsigned long seed = 20240917ul;
  int max_iter = 500;
  int harmonic_hint = -1;    // known kernel dimension, -1 = detect by threshold
  double harmonic_tol = 1e-8;  // kernel threshold relative to spectral scale
};

/// Stiffness of the full degree-p Laplacian: up part D^T M_{p+1} D plus the
/// down part M_p D_{p-1} M_{p-1}^{-1} D_{p-1}^T M_p. Requires a diagonal
/// mass below degree p unless the system is dense-solvable.
SpMat hodge_stiffness(const OperatorBundle& b, int p);

/// k smallest eigenpairs of the full Laplacian pencil (stiffness, M_p),
/// classified into harmonic / exact / coexact parts.
SpectrumResult full_hodge_spectrum(const OperatorBundle& b, int p, int k,
                                   const SolveOptions& opts = {});

/// k smallest eigenvalues of the pencil (A_p, M_p) on the M-orthogonal
/// complement of ker D_p (the coexact part of the spectrum). Implemented by
/// peeling the classified full spectrum.
SpectrumResult coexact_spectrum(const OperatorBundle& b, int p, int k,
                                const SolveOptions& opts = {});

/// i-th coexact eigenvalue (1-based) computed by a dense variational
/// brute force: the quotient pencil of ||D x||^2 over the minimal mass-norm
/// of x modulo ker D. Requires cochain dimension <= 400. Independent of the
/// iterative solver path.
double minmax_bruteforce(const OperatorBundle& b, int p, int i);

/// Primitive of an exact (p+1)-cochain with minimal M_p-norm; the result is
/// M-orthogonal to ker D_p. Throws if omega is not in the range of D_p.
Eigen::VectorXd min_norm_primitive(const OperatorBundle& b, int p,
                                   const Eigen::VectorXd& omega, double tol = 1e-8);

/// Minimal M-norm representative of the class of a closed p-cochain z:
/// h = z - D theta with theta the weighted least-squares solution.
Eigen::VectorXd harmonic_representative(const OperatorBundle& b, int p,
                                        const Eigen::VectorXd& z, double tol = 1e-8);

enum class BoundaryCondition { absolute, relative, dirichlet };

/// Spectrum of the degree-p Laplacian on a domain. Absolute keeps all
/// cochains of the closed subcomplex; relative removes interface cells at
/// degree p; dirichlet removes them at every degree (only valid with phi=0).
SpectrumResult domain_spectrum(const Complex& K, const DomainTag& domain,
                               BoundaryCondition bc, const Geometry& g,
                               const WeightField& phi, int p, int k,
                               const SolveOptions& opts = {});

/// k smallest eigenpairs of a symmetric positive semidefinite sparse matrix
/// (identity mass). Used for nullity counting on large incidence systems.
std::pair<Eigen::VectorXd, Eigen::MatrixXd>
smallest_symmetric_eigenpairs(const SpMat& L, int k, const SolveOptions& opts = {});

/// Gap hypothesis for comparing two quadratic forms through their first N
/// eigenpairs: lambda_{N+1} - lambda_N >= eta and lambda_{N+1} <= bound.
struct GapConfig {
  int N = 1;
  double eta = 0;
  double bound = 0;
};

/// Distance between two spectra on the same cochain space: max of the
/// relative deviation of the first N eigenvalues and the sine of the largest
/// principal angle between the two N-dimensional eigenspaces in the M-inner
/// product. Verifies the gap hypothesis on the first argument.
double spectral_distance(const SpectrumResult& a, const SpectrumResult& rb,
                         const SpMat& M, const GapConfig& cfg);

} // namespace wdec
