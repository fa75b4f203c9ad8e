#include "wdec/cohomology.hpp"

#include "wdec/operators.hpp"
#include "wdec/spectral.hpp"

#include <Eigen/Dense>
#include "json.hpp"

#include <stdexcept>

namespace wdec {

namespace {

constexpr int kDenseRankLimit = 1500;

int dense_rank(const Eigen::MatrixXd& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-9);
  return static_cast<int>(qr.rank());
}

// Nullity of A (columns) from the small eigenvalues of A^T A. Incidence
// matrices have an O(1) combinatorial spectral gap, so a fixed relative
// threshold separates the kernel cleanly.
int sparse_nullity(const SpMat& A) {
  const int n = static_cast<int>(A.cols());
  SpMat N = A.transpose() * A;
  double scale = Eigen::VectorXd(N.diagonal()).sum() / std::max(1, n);
  if (!(scale > 0)) return n;
  double cut = 1e-6 * scale;
  int k = 8;
  for (;;) {
    k = std::min(k, n);
    auto [vals, vecs] = smallest_symmetric_eigenpairs(N, k);
    int below = 0;
    for (int i = 0; i < vals.size(); ++i)
      if (vals[i] < cut) ++below;
    if (below < k || k == n) return below;
    k = 2 * k;
  }
}

// Coboundary of the subcomplex spanned by the closure of U.
SpMat domain_coboundary(const Complex& K, const DomainTag& U, int p) {
  return select_submatrix(K.coboundary(p), U.closure_indices(p + 1),
                          U.closure_indices(p));
}

int rank_of(const SpMat& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  if (std::max(A.rows(), A.cols()) <= kDenseRankLimit)
    return dense_rank(Eigen::MatrixXd(A));
  // work on the side with the smaller nullity: the iterative nullity count
  // scales with the kernel dimension, which for the short side is at most
  // the rank deficiency
  if (A.rows() < A.cols()) {
    SpMat At = A.transpose();
    return static_cast<int>(A.rows()) - sparse_nullity(At);
  }
  return static_cast<int>(A.cols()) - sparse_nullity(A);
}

int betti_from_coboundaries(const SpMat* Dp, const SpMat* Dprev, int ncells) {
  int kernel = Dp ? ncells - rank_of(*Dp) : ncells;
  int prev_rank = Dprev ? rank_of(*Dprev) : 0;
  return kernel - prev_rank;
}

// Representatives of the degree-p cohomology of the whole complex, as
// columns. Small systems use an exact cocycle basis (kernel of D_p); large
// ones the kernel of the combinatorial degree-p Laplacian, which spans the
// same classes.
Eigen::MatrixXd cohomology_basis(const Complex& K, int p, int bp) {
  const int n = K.dim();
  const int nc = K.ncells(p);
  if (nc <= kDenseRankLimit) {
    if (p == n) {
      // every cochain is closed; classes are represented modulo im D_{p-1}
      return Eigen::MatrixXd::Identity(nc, nc);
    }
    Eigen::MatrixXd Dp(K.coboundary(p));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Dp);
    lu.setThreshold(1e-9);
    return lu.kernel();
  }
  SpMat L(nc, nc);
  if (p < n) {
    const SpMat Dp = K.coboundary(p);
    L = SpMat(Dp.transpose() * Dp);
  }
  if (p > 0) {
    const SpMat Dm = K.coboundary(p - 1);
    L = L + SpMat(Dm * Dm.transpose());
  }
  auto [vals, vecs] = smallest_symmetric_eigenpairs(L, bp);
  return vecs;
}

} // namespace

int numeric_rank(const SpMat& A) { return rank_of(A); }

int betti(const Complex& K, int p) {
  if (p < 0 || p > K.dim()) throw std::out_of_range("degree out of range");
  SpMat Dp, Dprev;
  bool has_dp = p < K.dim(), has_prev = p > 0;
  if (has_dp) Dp = K.coboundary(p);
  if (has_prev) Dprev = K.coboundary(p - 1);
  return betti_from_coboundaries(has_dp ? &Dp : nullptr, has_prev ? &Dprev : nullptr,
                                 K.ncells(p));
}

int betti(const Complex& K, const DomainTag& U, int p) {
  if (p < 0 || p > K.dim()) throw std::out_of_range("degree out of range");
  SpMat Dp, Dprev;
  bool has_dp = p < K.dim(), has_prev = p > 0;
  if (has_dp) Dp = domain_coboundary(K, U, p);
  if (has_prev) Dprev = domain_coboundary(K, U, p - 1);
  return betti_from_coboundaries(has_dp ? &Dp : nullptr, has_prev ? &Dprev : nullptr,
                                 static_cast<int>(U.closure_indices(p).size()));
}

int restriction_rank(const Complex& K, const DomainTag& U, int p) {
  int bM = betti(K, p);
  if (bM == 0) return 0;

  std::vector<int> rows = U.closure_indices(p);
  Eigen::MatrixXd Z = cohomology_basis(K, p, bM);
  Eigen::MatrixXd RZ(rows.size(), Z.cols());
  for (size_t i = 0; i < rows.size(); ++i) RZ.row(static_cast<int>(i)) = Z.row(rows[i]);

  if (p == 0) return dense_rank(RZ);

  SpMat Dm = domain_coboundary(K, U, p - 1);
  if (std::max<long>(Dm.rows(), Dm.cols() + Z.cols()) <= kDenseRankLimit) {
    Eigen::MatrixXd B(Dm.rows(), Dm.cols() + RZ.cols());
    B.leftCols(Dm.cols()) = Eigen::MatrixXd(Dm);
    B.rightCols(RZ.cols()) = RZ;
    return dense_rank(B) - dense_rank(Eigen::MatrixXd(Dm));
  }

  // large path: residual of each restricted class modulo im D_{p-1}(U),
  // via regularized normal equations (the image is closed with an O(1) gap)
  SpMat A = Dm.transpose() * Dm;
  double reg = 1e-10 * Eigen::VectorXd(A.diagonal()).sum() / std::max<long>(1, A.rows());
  SpMat I(A.rows(), A.rows());
  I.setIdentity();
  Eigen::SimplicialLDLT<SpMat> solver(SpMat(A + reg * I));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("projection factorization failed");
  Eigen::MatrixXd resid = RZ;
  for (int j = 0; j < RZ.cols(); ++j) {
    Eigen::VectorXd theta = solver.solve(Dm.transpose() * RZ.col(j));
    resid.col(j) -= Dm * theta;
    double nrm = std::max(1.0, RZ.col(j).norm());
    if (resid.col(j).norm() < 1e-6 * nrm) resid.col(j).setZero();
  }
  return dense_rank(resid);
}

int quotient_dimension(const Complex& K, const DomainTag& U, int p) {
  return betti(K, U, p) - restriction_rank(K, U, p);
}

std::string CohomologySummary::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (size_t p = 0; p < rows.size(); ++p)
    j.push_back({{"degree", p},
                 {"b_M", rows[p][0]},
                 {"b_U", rows[p][1]},
                 {"restriction_rank", rows[p][2]},
                 {"d_p", rows[p][3]}});
  return j.dump(2);
}

CohomologySummary cohomology_summary(const Complex& K, const DomainTag& U) {
  CohomologySummary s;
  for (int p = 0; p <= K.dim(); ++p) {
    int bM = betti(K, p);
    int bU = betti(K, U, p);
    int r = restriction_rank(K, U, p);
    s.rows.push_back({bM, bU, r, bU - r});
  }
  return s;
}

} // namespace wdec
