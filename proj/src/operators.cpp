#include "wdec/operators.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

namespace wdec {

namespace {

void check_exp_guard(double x) {
  if (std::abs(x) > kExpGuard)
    throw std::domain_error("weight/conformal factor exceeds exponential guard (|value| > 300); "
                            "rescale the field");
}

SpMat diag_matrix(const Eigen::VectorXd& d) {
  SpMat m(d.size(), d.size());
  m.reserve(Eigen::VectorXi::Constant(static_cast<int>(d.size()), 1));
  for (int i = 0; i < d.size(); ++i) m.insert(i, i) = d[i];
  m.makeCompressed();
  return m;
}

} // namespace

SpMat select_submatrix(const SpMat& A, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  std::vector<int> rinv(A.rows(), -1), cinv(A.cols(), -1);
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) rinv[rows[i]] = i;
  for (int j = 0; j < static_cast<int>(cols.size()); ++j) cinv[cols[j]] = j;
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it)
      if (rinv[it.row()] >= 0 && cinv[it.col()] >= 0)
        trip.emplace_back(rinv[it.row()], cinv[it.col()], it.value());
  SpMat out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Eigen::VectorXd dual_volume(const Complex& K, const Geometry& g, int p) {
  const int n = K.dim();
  int nc = K.ncells(p);
  Eigen::VectorXd dual(nc);
  if (K.kind() == ComplexKind::simplicial) {
    double coef = static_cast<double>(p + 1) / static_cast<double>(n + 1);
    for (int c = 0; c < nc; ++c) {
      double s = 0;
      for (int t : K.tops_of(p, c)) s += g.vol[n][t];
      dual[c] = coef * s;
    }
  } else {
    const auto& degs = K.tensor_factor_degrees(p);
    const auto& fs = K.factors();
    for (int c = 0; c < nc; ++c) {
      // factor-wise: an edge contributes its length, a vertex its dual
      // length (h on circles and interior vertices, h/2 at interval ends).
      double v = 1.0;
      const auto& cell = K.cells(p)[c];
      for (size_t i = 0; i < fs.size(); ++i) {
        double h = fs[i].length / fs[i].cells;
        if (degs[c][i] == 1) {
          v *= h;
        } else if (fs[i].circle) {
          v *= h;
        } else {
          // recover the factor vertex index from the corner coordinates
          double x = K.vertex_coords()(cell.vertices[0], static_cast<int>(i));
          int vi = static_cast<int>(std::lround(x / h));
          bool endpoint = (vi == 0 || vi == fs[i].cells);
          v *= endpoint ? h / 2 : h;
        }
      }
      dual[c] = v;
    }
  }
  return dual;
}

Eigen::VectorXd lumped_mass_base(const Complex& K, const Geometry& g, int p) {
  Eigen::VectorXd dual = dual_volume(K, g, p);
  const Eigen::VectorXd& vol = g.vol[p];
  return dual.array() / vol.array().square();
}

namespace {

// Volume-weighted average over incident top cells (restricted to the
// domain when given) of the measure density relative to the cell sample:
// e^{(n-2p) u(T) - 2 (phi(T) - phi(sigma))}. Sampling the weight per top
// region makes singular conformal families converge to the same operator
// the domain-restricted assembly produces.
Eigen::VectorXd conformal_average(const Complex& K, const Geometry& g,
                                  const WeightField& phi, int p,
                                  const DomainTag* domain) {
  const int n = K.dim();
  int nc = K.ncells(p);
  double e = static_cast<double>(n - 2 * p);
  Eigen::VectorXd w(nc);
  for (int c = 0; c < nc; ++c) {
    double num = 0, den = 0;
    double pc = phi.samples[p][c];
    for (int t : K.tops_of(p, c)) {
      double v = g.vol[n][t];
      den += v;
      if (domain && !domain->top_in_U[t]) continue;
      check_exp_guard(g.u[n][t]);
      check_exp_guard(phi.samples[n][t]);
      num += v * std::exp(e * g.u[n][t] - 2.0 * (phi.samples[n][t] - pc));
    }
    w[c] = num / den;
  }
  return w;
}

// Gram matrix of barycentric gradients on one top simplex.
Eigen::MatrixXd barycentric_gradient_gram(const Complex& K, const std::vector<int>& verts) {
  const Eigen::MatrixXd& X = K.vertex_coords();
  int n = static_cast<int>(verts.size()) - 1;
  Eigen::MatrixXd E(X.cols(), n);
  for (int i = 1; i <= n; ++i)
    E.col(i - 1) = (X.row(verts[i]) - X.row(verts[0])).transpose();
  // rows of pinv(E) are the gradients of lambda_1..lambda_n
  Eigen::MatrixXd Gi = (E.transpose() * E).inverse();
  Eigen::MatrixXd grads(n + 1, X.cols());
  grads.bottomRows(n) = Gi * E.transpose();
  grads.row(0) = -grads.bottomRows(n).colwise().sum();
  return grads * grads.transpose();
}

// integral over T of <W_sigma, W_tau> for p-faces sigma, tau of T,
// written in local vertex positions within T.
double whitney_inner(const Eigen::MatrixXd& gram, double vol, int nloc,
                     const std::vector<int>& si, const std::vector<int>& ti) {
  int p = static_cast<int>(si.size()) - 1;
  double c0 = vol / (static_cast<double>(nloc) * (nloc + 1));
  double fact = 1;
  for (int i = 2; i <= p; ++i) fact *= i;
  double acc = 0;
  Eigen::MatrixXd minor(p, p);
  for (int k = 0; k <= p; ++k) {
    for (int l = 0; l <= p; ++l) {
      int r = 0;
      for (int a = 0; a <= p; ++a) {
        if (a == k) continue;
        int cidx = 0;
        for (int b = 0; b <= p; ++b) {
          if (b == l) continue;
          minor(r, cidx++) = gram(si[a], ti[b]);
        }
        ++r;
      }
      double det = (p == 0) ? 1.0 : minor.determinant();
      double clam = c0 * (si[k] == ti[l] ? 2.0 : 1.0);
      double sgn = ((k + l) % 2 == 0) ? 1.0 : -1.0;
      acc += sgn * clam * det;
    }
  }
  return fact * fact * acc;
}

SpMat consistent_mass(const Complex& K, const Geometry& g, const WeightField& phi,
                      int p, const DomainTag* domain) {
  if (K.kind() != ComplexKind::simplicial)
    throw std::invalid_argument("consistent mass scheme requires a simplicial complex");
  const int n = K.dim();
  // global index of each p-face by vertex tuple
  std::map<std::vector<int>, int> index;
  for (int c = 0; c < K.ncells(p); ++c) index.emplace(K.cells(p)[c].vertices, c);

  std::vector<Eigen::Triplet<double>> trip;
  for (int t = 0; t < K.ncells(n); ++t) {
    if (domain && !domain->top_in_U[t]) continue;
    const auto& verts = K.cells(n)[t].vertices;
    Eigen::MatrixXd gram = barycentric_gradient_gram(K, verts);
    double vol = g.vol[n][t];
    check_exp_guard(phi.samples[n][t]);
    check_exp_guard(g.u[n][t]);
    double w = std::exp(-2.0 * phi.samples[n][t] + (n - 2 * p) * g.u[n][t]);

    // all p-faces of T as local index tuples
    std::vector<std::vector<int>> faces;
    std::vector<int> comb(p + 1);
    std::function<void(int, int)> rec = [&](int start, int depth) {
      if (depth == p + 1) {
        faces.push_back(comb);
        return;
      }
      for (int i = start; i <= n; ++i) {
        comb[depth] = i;
        rec(i + 1, depth + 1);
      }
    };
    rec(0, 0);

    for (const auto& fa : faces) {
      std::vector<int> ga(p + 1);
      for (int i = 0; i <= p; ++i) ga[i] = verts[fa[i]];
      int ia = index.at(ga);
      for (const auto& fb : faces) {
        std::vector<int> gb(p + 1);
        for (int i = 0; i <= p; ++i) gb[i] = verts[fb[i]];
        int ib = index.at(gb);
        trip.emplace_back(ia, ib, w * whitney_inner(gram, vol, n, fa, fb));
      }
    }
  }
  SpMat M(K.ncells(p), K.ncells(p));
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

} // namespace

SpMat assemble_mass(const Complex& K, const Geometry& g, const WeightField& phi,
                    int p, MassScheme scheme, const DomainTag* domain) {
  if (p < 0 || p > K.dim()) throw std::out_of_range("mass degree out of range");
  if (scheme == MassScheme::consistent) return consistent_mass(K, g, phi, p, domain);

  Eigen::VectorXd m0 = lumped_mass_base(K, g, p);
  Eigen::VectorXd cavg = conformal_average(K, g, phi, p, domain);
  Eigen::VectorXd d(K.ncells(p));
  for (int c = 0; c < K.ncells(p); ++c) {
    check_exp_guard(phi.samples[p][c]);
    d[c] = m0[c] * cavg[c] * std::exp(-2.0 * phi.samples[p][c]);
    if (domain == nullptr && !(d[c] > 0))
      throw std::runtime_error("non-positive mass entry (corrupt geometry)");
    if (d[c] < 0) throw std::runtime_error("non-positive mass entry (corrupt geometry)");
  }
  return diag_matrix(d);
}

SpMat coboundary(const Complex& K, int p) { return K.coboundary(p); }

SpMat twisted_coboundary(const SpMat& D, const WeightField& phi, int p) {
  if (phi.samples[p].size() != D.cols() || phi.samples[p + 1].size() != D.rows())
    throw std::invalid_argument("weight samples do not match coboundary dimensions");
  Eigen::VectorXd lo(D.cols()), hi(D.rows());
  for (int i = 0; i < D.cols(); ++i) {
    check_exp_guard(phi.samples[p][i]);
    lo[i] = std::exp(phi.samples[p][i]);
  }
  for (int i = 0; i < D.rows(); ++i) {
    check_exp_guard(phi.samples[p + 1][i]);
    hi[i] = std::exp(-phi.samples[p + 1][i]);
  }
  return diag_matrix(hi) * D * diag_matrix(lo);
}

SpMat up_stiffness(const SpMat& D, const SpMat& M_up) {
  SpMat A = D.transpose() * M_up * D;
  return A;
}

Eigen::VectorXd OperatorBundle::mass_diagonal(int p) const {
  return Eigen::VectorXd(M[p].diagonal());
}

OperatorBundle make_bundle(const Complex& K, const Geometry& g, const WeightField& phi,
                           Gauge gauge, MassScheme scheme, const DomainTag* domain,
                           const std::vector<char>& drop_interface) {
  const int n = K.dim();
  OperatorBundle b;
  b.n = n;
  b.gauge = gauge;
  b.scheme = scheme;
  b.D.resize(n + 1);
  b.M.resize(n + 1);
  b.A.resize(n + 1);
  b.index_map.resize(n + 1);

  std::vector<std::vector<int>> sel(n + 1);
  if (domain) {
    for (int p = 0; p <= n; ++p) {
      bool drop = p < static_cast<int>(drop_interface.size()) && drop_interface[p];
      for (int c = 0; c < K.ncells(p); ++c) {
        if (!domain->in_closure[p][c]) continue;
        if (drop && domain->on_interface[p][c]) continue;
        sel[p].push_back(c);
      }
      b.index_map[p] = sel[p];
    }
  }

  for (int p = 0; p <= n; ++p) {
    SpMat M = assemble_mass(K, g, phi, p, scheme, domain);
    if (gauge == Gauge::twisted) {
      // conjugate masses E M E with E = diag(e^{phi}), so that the twisted
      // pencil is exactly the diagonal conjugate of the weighted one
      Eigen::VectorXd e(K.ncells(p));
      for (int c = 0; c < K.ncells(p); ++c) {
        check_exp_guard(phi.samples[p][c]);
        e[c] = std::exp(phi.samples[p][c]);
      }
      SpMat E = diag_matrix(e);
      M = SpMat(E * M * E);
    }
    if (domain) M = select_submatrix(M, sel[p], sel[p]);
    b.M[p] = M;
  }
  for (int p = 0; p < n; ++p) {
    SpMat D = K.coboundary(p);
    if (gauge == Gauge::twisted) D = twisted_coboundary(D, phi, p);
    if (domain) D = select_submatrix(D, sel[p + 1], sel[p]);
    b.D[p] = D;
    b.A[p] = up_stiffness(D, b.M[p + 1]);
  }
  b.D[n] = SpMat(0, b.M[n].rows());
  b.A[n] = SpMat(b.M[n].rows(), b.M[n].rows());
  return b;
}

std::pair<Geometry, WeightField> conformal_rescale(const Geometry& g, const WeightField& phi,
                                                   const std::vector<Eigen::VectorXd>& u,
                                                   double alpha) {
  if (static_cast<int>(u.size()) != g.n + 1)
    throw std::invalid_argument("conformal factor must be sampled at every degree");
  Geometry g2 = g;
  WeightField phi2 = phi;
  phi2.vertex_values.resize(0);
  for (int p = 0; p <= g.n; ++p) {
    if (u[p].size() != g.vol[p].size())
      throw std::invalid_argument("conformal factor size mismatch");
    g2.u[p] += u[p];
    phi2.samples[p] -= alpha * u[p];
  }
  return {g2, phi2};
}

double weighted_r_norm(const Complex& K, const Geometry& g, const WeightField& phi,
                       const Eigen::VectorXd& cochain, double r, int p) {
  if (r <= 1.0) throw std::invalid_argument("weighted r-norm requires r > 1");
  if (cochain.size() != K.ncells(p)) throw std::invalid_argument("cochain size mismatch");
  Eigen::VectorXd dual = dual_volume(K, g, p);
  double acc = 0;
  const int n = K.dim();
  for (int c = 0; c < K.ncells(p); ++c) {
    double uu = g.u[p][c];
    check_exp_guard(uu);
    check_exp_guard(phi.samples[p][c]);
    double a = std::abs(cochain[c]) / (g.vol[p][c] * std::exp(p * uu));
    acc += std::pow(a, r) * std::exp(-r * phi.samples[p][c]) * dual[c] * std::exp(n * uu);
  }
  return std::pow(acc, 1.0 / r);
}

void write_matrix_market(const SpMat& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "%%MatrixMarket matrix coordinate real general\n";
  f << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
  char buf[64];
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", static_cast<int>(it.row()) + 1,
                    static_cast<int>(it.col()) + 1, it.value());
      f << buf;
    }
}

} // namespace wdec
