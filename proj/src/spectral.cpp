#include "wdec/spectral.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace wdec {

std::vector<double> SpectrumResult::part(EigClass c) const {
  std::vector<double> out;
  for (size_t i = 0; i < kinds.size(); ++i)
    if (kinds[i] == c) out.push_back(values[static_cast<int>(i)]);
  return out;
}

namespace {

bool is_diagonal(const SpMat& M) { return M.nonZeros() <= M.rows(); }

double pencil_scale(const SpMat& L, const SpMat& M) {
  double a = Eigen::VectorXd(L.diagonal()).sum();
  double b = Eigen::VectorXd(M.diagonal()).sum();
  if (!(a > 0) || !(b > 0)) return 1.0;
  return a / b;
}

struct PencilEig {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // M-orthonormal
  Eigen::VectorXd residuals;
  std::string method;
};

Eigen::VectorXd pair_residuals(const SpMat& L, const SpMat& M, const Eigen::VectorXd& vals,
                               const Eigen::MatrixXd& vecs, double scale) {
  Eigen::VectorXd r(vals.size());
  for (int i = 0; i < vals.size(); ++i) {
    Eigen::VectorXd x = vecs.col(i);
    Eigen::VectorXd mx = M * x;
    double den = (std::abs(vals[i]) + scale) * mx.norm();
    r[i] = (L * x - vals[i] * mx).norm() / den;
  }
  return r;
}

PencilEig dense_eigenpairs(const SpMat& L, const SpMat& M, int k, double scale) {
  Eigen::MatrixXd Ld(L), Md(M);
  Ld = 0.5 * (Ld + Ld.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ld, Md);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("dense generalized eigensolver failed (mass not SPD?)");
  PencilEig out;
  out.values = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k);
  out.residuals = pair_residuals(L, M, out.values, out.vectors, scale);
  out.method = "dense";
  return out;
}

// M-orthonormalize columns in place (modified Gram-Schmidt, two passes).
void m_orthonormalize(Eigen::MatrixXd& X, const SpMat& M, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  for (int j = 0; j < X.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) {
        double c = X.col(i).dot(M * X.col(j));
        X.col(j) -= c * X.col(i);
      }
    double nrm = std::sqrt(X.col(j).dot(M * X.col(j)));
    if (nrm < 1e-14) {
      for (int r = 0; r < X.rows(); ++r) X(r, j) = nd(rng);
      --j;
      continue;
    }
    X.col(j) /= nrm;
  }
}

// Shift-inverted block subspace iteration with Rayleigh-Ritz extraction;
// deterministic for a fixed seed.
PencilEig sparse_eigenpairs(const SpMat& L, const SpMat& M, int k, double scale,
                            const SolveOptions& opts) {
  if (!is_diagonal(M))
    throw std::runtime_error("iterative path requires a diagonal mass; "
                             "raise dense_threshold for consistent masses");
  const int n = static_cast<int>(L.rows());
  const int m = std::min(n, k + std::max(8, k / 2 + 4));
  double sigma = std::max(1e-3 * scale, 1e-300);
  SpMat Ls = L + SpMat(sigma * Eigen::VectorXd(M.diagonal()).asDiagonal());
  Eigen::SimplicialLDLT<SpMat> solver(Ls);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("factorization of shifted stiffness failed");

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd X(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = nd(rng);

  Eigen::VectorXd vals;
  double best = 1e300;
  for (int it = 0; it < opts.max_iter; ++it) {
    Eigen::MatrixXd Y = solver.solve(M * X);
    m_orthonormalize(Y, M, rng);
    Eigen::MatrixXd H = Y.transpose() * (L * Y);
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    X = Y * es.eigenvectors();
    vals = es.eigenvalues();
    Eigen::VectorXd r = pair_residuals(L, M, vals.head(k), X.leftCols(k), scale);
    best = std::min(best, r.maxCoeff());
    if (r.maxCoeff() <= opts.tol) {
      PencilEig out;
      out.values = vals.head(k);
      out.vectors = X.leftCols(k);
      out.residuals = r;
      out.method = "subspace-shift-invert";
      return out;
    }
  }
  throw std::runtime_error("eigensolver did not converge; best residual " +
                           std::to_string(best));
}

PencilEig smallest_eigenpairs(const SpMat& L, const SpMat& M, int k, const SolveOptions& opts) {
  const int n = static_cast<int>(L.rows());
  if (k < 1 || k > n) throw std::invalid_argument("requested eigenpair count out of range");
  double scale = pencil_scale(L, M);
  if (n <= opts.dense_threshold || !is_diagonal(M))
    return dense_eigenpairs(L, M, k, scale);
  return sparse_eigenpairs(L, M, k, scale, opts);
}

Eigen::MatrixXd dense_inverse_apply(const SpMat& M, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd Md(M);
  return Md.ldlt().solve(B);
}

} // namespace

SpMat hodge_stiffness(const OperatorBundle& b, int p) {
  SpMat L = b.A[p];
  if (p > 0) {
    const SpMat& Dd = b.D[p - 1];
    const SpMat& Mlow = b.M[p - 1];
    if (is_diagonal(Mlow)) {
      Eigen::VectorXd inv = Eigen::VectorXd(Mlow.diagonal()).cwiseInverse();
      SpMat T = b.M[p] * Dd;
      L = L + SpMat(T * SpMat(inv.asDiagonal()) * T.transpose());
    } else {
      Eigen::MatrixXd T = Eigen::MatrixXd(SpMat(b.M[p] * Dd));
      Eigen::MatrixXd down = T * dense_inverse_apply(Mlow, T.transpose());
      L = L + Eigen::MatrixXd(0.5 * (down + down.transpose())).sparseView();
    }
  }
  return L;
}

SpectrumResult full_hodge_spectrum(const OperatorBundle& b, int p, int k,
                                   const SolveOptions& opts) {
  if (p < 0 || p > b.n) throw std::out_of_range("degree out of range");
  SpMat L = hodge_stiffness(b, p);
  const SpMat& M = b.M[p];
  k = std::min(k, static_cast<int>(M.rows()));
  PencilEig pe = smallest_eigenpairs(L, M, k, opts);

  SpectrumResult r;
  r.p = p;
  r.values = pe.values;
  r.vectors = pe.vectors;
  r.residuals = pe.residuals;
  r.tol = opts.tol;
  r.method = pe.method;
  r.kinds.resize(k);

  double scale = pencil_scale(L, M);
  double htol = opts.harmonic_tol * scale;

  // Degenerate eigenvalues may come back as arbitrary mixtures of exact and
  // coexact eigenvectors, so classify per cluster of numerically equal
  // eigenvalues: diagonalize the up-energy Gram matrix on the cluster and
  // rotate the basis so each vector is purely exact or purely coexact.
  int i = 0;
  while (i < k) {
    double ctol = 10.0 * opts.tol * (std::abs(pe.values[i]) + 1e-3 * scale);
    int j = i + 1;
    while (j < k && std::abs(pe.values[j] - pe.values[i]) <= ctol) ++j;

    int nh = (opts.harmonic_hint >= 0)
                 ? std::clamp(opts.harmonic_hint - i, 0, j - i)
                 : [&] {
                     int c = 0;
                     for (int t = i; t < j && pe.values[t] <= htol; ++t) ++c;
                     return c;
                   }();
    for (int t = 0; t < nh; ++t) r.kinds[i + t] = EigClass::harmonic;
    r.harmonic_dim += nh;

    int m = j - (i + nh);
    if (m == 1) {
      Eigen::VectorXd x = pe.vectors.col(i + nh);
      double up = x.dot(b.A[p] * x);
      r.kinds[i + nh] = (up >= pe.values[i + nh] - up) ? EigClass::coexact : EigClass::exact;
    } else if (m > 1) {
      Eigen::MatrixXd V = pe.vectors.middleCols(i + nh, m);
      Eigen::MatrixXd G = V.transpose() * (b.A[p] * V);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()));
      V = V * es.eigenvectors();  // ascending up-energy: exact first
      r.vectors.middleCols(i + nh, m) = V;
      double resid = r.residuals.segment(i + nh, m).maxCoeff() * std::sqrt(double(m));
      for (int t = 0; t < m; ++t) {
        int idx = i + nh + t;
        r.kinds[idx] =
            (es.eigenvalues()[t] >= 0.5 * pe.values[idx]) ? EigClass::coexact : EigClass::exact;
        r.residuals[idx] = resid;
      }
    }
    i = j;
  }
  return r;
}

SpectrumResult coexact_spectrum(const OperatorBundle& b, int p, int k,
                                const SolveOptions& opts) {
  const int n = static_cast<int>(b.M[p].rows());
  int ask = std::min(n, 2 * k + std::max(4, k));
  for (;;) {
    SpectrumResult full = full_hodge_spectrum(b, p, ask, opts);
    SpectrumResult out;
    out.p = p;
    out.harmonic_dim = full.harmonic_dim;
    out.tol = full.tol;
    out.method = full.method;
    std::vector<int> keep;
    for (int i = 0; i < static_cast<int>(full.kinds.size()); ++i)
      if (full.kinds[i] == EigClass::coexact) keep.push_back(i);
    if (static_cast<int>(keep.size()) >= k || ask == n) {
      int kk = std::min<int>(k, static_cast<int>(keep.size()));
      if (kk < k)
        throw std::invalid_argument("coexact subspace smaller than requested count");
      out.values.resize(kk);
      out.residuals.resize(kk);
      out.vectors.resize(full.vectors.rows(), kk);
      out.kinds.assign(kk, EigClass::coexact);
      for (int i = 0; i < kk; ++i) {
        out.values[i] = full.values[keep[i]];
        out.residuals[i] = full.residuals[keep[i]];
        out.vectors.col(i) = full.vectors.col(keep[i]);
      }
      return out;
    }
    ask = std::min(n, 2 * ask + 4);
  }
}

double minmax_bruteforce(const OperatorBundle& b, int p, int i) {
  if (p < 0 || p >= b.n) throw std::out_of_range("degree out of range");
  const SpMat& D = b.D[p];
  if (D.cols() > 400) throw std::invalid_argument("brute-force path limited to 400 unknowns");
  Eigen::MatrixXd Dd(D), Md(b.M[p]), Mup(b.M[p + 1]);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(Dd);
  lu.setThreshold(1e-10);
  Eigen::MatrixXd K = lu.kernel();
  Eigen::FullPivLU<Eigen::MatrixXd> lut(Dd.transpose());
  lut.setThreshold(1e-10);
  Eigen::MatrixXd V = lut.image(Dd.transpose());  // a complement of ker D
  if (i < 1 || i > V.cols())
    throw std::invalid_argument("index exceeds the exact-subspace dimension");

  Eigen::MatrixXd E = Dd * V;
  Eigen::MatrixXd num = E.transpose() * Mup * E;
  // minimal mass norm of v modulo the kernel: Schur complement of the
  // kernel block in the mass Gram matrix
  Eigen::MatrixXd MV = Md * V;
  Eigen::MatrixXd den = V.transpose() * MV;
  if (K.cols() > 0 && K.squaredNorm() > 0) {
    Eigen::MatrixXd MK = Md * K;
    Eigen::MatrixXd KMK = K.transpose() * MK;
    den -= (MV.transpose() * K) * KMK.ldlt().solve(K.transpose() * MV);
  }
  num = 0.5 * (num + num.transpose()).eval();
  den = 0.5 * (den + den.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(num, den);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("brute-force quotient pencil solve failed");
  return es.eigenvalues()[i - 1];
}

Eigen::VectorXd min_norm_primitive(const OperatorBundle& b, int p,
                                   const Eigen::VectorXd& omega, double tol) {
  const SpMat& D = b.D[p];
  if (omega.size() != D.rows()) throw std::invalid_argument("cochain size mismatch");
  Eigen::MatrixXd Dd(D), Md(b.M[p]);
  Eigen::LLT<Eigen::MatrixXd> llt(Md);
  if (llt.info() != Eigen::Success) throw std::runtime_error("mass not SPD");
  Eigen::MatrixXd Lfac = llt.matrixL();
  // theta = L^{-T} z with z the minimum-norm solution of (D L^{-T}) z = omega
  Eigen::MatrixXd G = Lfac.triangularView<Eigen::Lower>()
                          .transpose()
                          .solve<Eigen::OnTheRight>(Dd);
  Eigen::VectorXd z = G.completeOrthogonalDecomposition().solve(omega);
  Eigen::VectorXd theta = Lfac.triangularView<Eigen::Lower>().transpose().solve(z);
  double res = (Dd * theta - omega).norm();
  if (res > tol * std::max(1.0, omega.norm()))
    throw std::invalid_argument("cochain is not exact; distance to range " +
                                std::to_string(res));
  return theta;
}

Eigen::VectorXd harmonic_representative(const OperatorBundle& b, int p,
                                        const Eigen::VectorXd& z, double tol) {
  if (z.size() != b.M[p].rows()) throw std::invalid_argument("cochain size mismatch");
  if (p < b.n) {
    double closed = (b.D[p] * z).norm();
    if (closed > tol * std::max(1.0, z.norm()))
      throw std::invalid_argument("cochain is not closed; |D z| = " + std::to_string(closed));
  }
  if (p == 0) return z;
  Eigen::MatrixXd Dd(b.D[p - 1]), Md(b.M[p]);
  Eigen::LLT<Eigen::MatrixXd> llt(Md);
  if (llt.info() != Eigen::Success) throw std::runtime_error("mass not SPD");
  Eigen::MatrixXd Lfac = llt.matrixL();
  Eigen::MatrixXd G = Lfac.triangularView<Eigen::Lower>().transpose() * Dd;
  Eigen::VectorXd rhs = Lfac.triangularView<Eigen::Lower>().transpose() * z;
  Eigen::VectorXd theta = G.completeOrthogonalDecomposition().solve(rhs);
  return z - Dd * theta;
}

SpectrumResult domain_spectrum(const Complex& K, const DomainTag& domain,
                               BoundaryCondition bc, const Geometry& g,
                               const WeightField& phi, int p, int k,
                               const SolveOptions& opts) {
  std::vector<char> drop;
  if (bc == BoundaryCondition::relative) {
    drop.assign(K.dim() + 1, 0);
    drop[p] = 1;
  } else if (bc == BoundaryCondition::dirichlet) {
    if (phi.max_abs() > 0)
      throw std::invalid_argument("dirichlet condition is only supported with phi = 0");
    drop.assign(K.dim() + 1, 1);
  }
  OperatorBundle b = make_bundle(K, g, phi, Gauge::weighted, MassScheme::lumped,
                                 &domain, drop);
  return full_hodge_spectrum(b, p, k, opts);
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd>
smallest_symmetric_eigenpairs(const SpMat& L, int k, const SolveOptions& opts) {
  SpMat I(L.rows(), L.rows());
  I.setIdentity();
  PencilEig pe = smallest_eigenpairs(L, I, k, opts);
  return {pe.values, pe.vectors};
}

double spectral_distance(const SpectrumResult& a, const SpectrumResult& rb,
                         const SpMat& M, const GapConfig& cfg) {
  const int N = cfg.N;
  if (a.values.size() < N + 1 || rb.values.size() < N + 1)
    throw std::invalid_argument("need at least N+1 eigenvalues in both spectra");
  if (a.values[N] - a.values[N - 1] < cfg.eta)
    throw std::invalid_argument("gap hypothesis violated: lambda_{N+1} - lambda_N < eta");
  if (a.values[N] > cfg.bound)
    throw std::invalid_argument("gap hypothesis violated: lambda_{N+1} > bound");

  // eigenvalues that are pure kernel noise relative to the gap bound are
  // treated as equal; the eigenspace angle below still compares them
  const double floor = 1e-12 * std::abs(a.values[N]);
  double dev = 0;
  for (int i = 0; i < N; ++i) {
    double den = std::max(std::abs(a.values[i]), std::abs(rb.values[i]));
    if (den > floor) dev = std::max(dev, std::abs(a.values[i] - rb.values[i]) / den);
  }
  Eigen::MatrixXd C = a.vectors.leftCols(N).transpose() * (M * rb.vectors.leftCols(N));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
  double smin = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
  double angle = std::sqrt(std::max(0.0, 1.0 - smin * smin));
  return std::max(dev, angle);
}

} // namespace wdec
