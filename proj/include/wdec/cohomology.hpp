#pragma once

#include "wdec/complex.hpp"

namespace wdec {

/// Numerical rank of a real matrix: rank-revealing QR with pivot threshold
/// 1e-9 relative to the largest pivot for moderate sizes; for large sparse
/// incidence matrices the rank is obtained from the nullity of the normal
/// matrix (their nonzero spectrum is well separated from zero).
int numeric_rank(const SpMat& A);

/// Real Betti number b_p = dim ker D_p - rank D_{p-1}.
int betti(const Complex& K, int p);

/// Betti number of the full subcomplex spanned by the domain's closure.
int betti(const Complex& K, const DomainTag& U, int p);

/// Rank of the restriction map on degree-p cohomology classes of the whole
/// complex into the cohomology of the domain subcomplex.
int restriction_rank(const Complex& K, const DomainTag& U, int p);

/// d_p = b_p(U) - restriction rank: dimension of the closed p-cochains of U
/// modulo restrictions of closed cochains of the whole complex.
int quotient_dimension(const Complex& K, const DomainTag& U, int p);

struct CohomologySummary {
  // per degree p: { b_p(M), b_p(U), restriction rank, d_p }
  std::vector<std::array<int, 4>> rows;
  std::string to_json() const;
};

CohomologySummary cohomology_summary(const Complex& K, const DomainTag& U);

} // namespace wdec
