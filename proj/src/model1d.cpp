#include "wdec/model1d.hpp"

#include "wdec/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace wdec {

namespace {

// 4th-order periodic first derivative
Eigen::MatrixXd periodic_d1(int n, double h) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    P(i, (i + 1) % n) += 8.0;
    P(i, (i + 2) % n) += -1.0;
    P(i, (i - 1 + n) % n) += -8.0;
    P(i, (i - 2 + n) % n) += 1.0;
  }
  return P / (12.0 * h);
}

// 4th-order periodic second derivative
Eigen::MatrixXd periodic_d2(int n, double h) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    D(i, i) = -30.0;
    D(i, (i + 1) % n) += 16.0;
    D(i, (i - 1 + n) % n) += 16.0;
    D(i, (i + 2) % n) += -1.0;
    D(i, (i - 2 + n) % n) += -1.0;
  }
  return D / (12.0 * h * h);
}

} // namespace

Grid1D make_circle_grid(int cells, double length,
                        const std::function<double(double)>& phi) {
  if (cells < 8) throw std::invalid_argument("need at least 8 cells on the circle");
  Grid1D g;
  g.circle = true;
  g.nodes = cells;
  g.length = length;
  g.origin = 0;
  double h = g.h();
  g.x.resize(cells);
  g.phi.resize(cells);
  for (int i = 0; i < cells; ++i) {
    g.x[i] = i * h;
    g.phi[i] = phi(g.x[i]);
  }
  Eigen::MatrixXd P = periodic_d1(cells, h);
  g.dphi = P * g.phi;
  g.ddphi = periodic_d2(cells, h) * g.phi;
  return g;
}

Grid1D make_interval_grid(int cells, double a, double b,
                          const std::function<double(double)>& phi) {
  if (cells < 4 || !(b > a)) throw std::invalid_argument("bad interval grid");
  Grid1D g;
  g.circle = false;
  g.nodes = cells + 1;
  g.length = b - a;
  g.origin = a;
  double h = g.h();
  g.x.resize(g.nodes);
  g.phi.resize(g.nodes);
  for (int i = 0; i < g.nodes; ++i) {
    g.x[i] = a + i * h;
    g.phi[i] = phi(g.x[i]);
  }
  const int n = g.nodes;
  const Eigen::VectorXd& f = g.phi;
  g.dphi.resize(n);
  g.ddphi.resize(n);
  for (int i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      g.dphi[i] = (-f[i + 2] + 8 * f[i + 1] - 8 * f[i - 1] + f[i - 2]) / (12 * h);
      g.ddphi[i] = (-f[i + 2] + 16 * f[i + 1] - 30 * f[i] + 16 * f[i - 1] - f[i - 2]) /
                   (12 * h * h);
    } else if (i + 3 < n && i < 2) {
      g.dphi[i] = (-3 * f[i] + 4 * f[i + 1] - f[i + 2]) / (2 * h);
      g.ddphi[i] = (2 * f[i] - 5 * f[i + 1] + 4 * f[i + 2] - f[i + 3]) / (h * h);
    } else {
      g.dphi[i] = (3 * f[i] - 4 * f[i - 1] + f[i - 2]) / (2 * h);
      g.ddphi[i] = (2 * f[i] - 5 * f[i - 1] + 4 * f[i - 2] - f[i - 3]) / (h * h);
    }
  }
  return g;
}

CircleSpectrum circle_witten_spectrum(const Grid1D& g, int k) {
  if (!g.circle) throw std::invalid_argument("expected a circle grid");
  if (k > g.nodes / 4) throw std::invalid_argument("too many eigenvalues for this grid");
  Eigen::MatrixXd D2 = periodic_d2(g.nodes, g.h());
  Eigen::VectorXd v0 = g.dphi.array().square() - g.ddphi.array();
  Eigen::VectorXd v1 = g.dphi.array().square() + g.ddphi.array();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e0(-D2 + Eigen::MatrixXd(v0.asDiagonal()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(-D2 + Eigen::MatrixXd(v1.asDiagonal()));
  CircleSpectrum out;
  out.functions = e0.eigenvalues().head(k);
  out.one_forms = e1.eigenvalues().head(k);
  return out;
}

Eigen::VectorXd richardson4(const Eigen::VectorXd& coarse, const Eigen::VectorXd& fine) {
  if (coarse.size() != fine.size()) throw std::invalid_argument("size mismatch");
  return (16.0 * fine - coarse) / 15.0;
}

Eigen::VectorXd interval_witten_spectrum(const Grid1D& g, IntervalBc bc, int k) {
  if (g.circle) throw std::invalid_argument("expected an interval grid");
  const int n = g.nodes;
  if (k > n / 4) throw std::invalid_argument("too many eigenvalues for this grid");
  const double h = g.h();

  int lo = (bc == IntervalBc::fixed) ? 1 : 0;
  int hi = (bc == IntervalBc::fixed) ? n - 1 : n;
  int m = hi - lo;

  std::vector<Eigen::Triplet<double>> at;
  auto add = [&](int i, int j, double v) {
    if (i >= lo && i < hi && j >= lo && j < hi) at.emplace_back(i - lo, j - lo, v);
  };
  for (int e = 0; e + 1 < n; ++e) {
    double pm = (g.phi[e + 1] - g.phi[e]) / h;
    double c0 = -1.0 / h + pm / 2, c1 = 1.0 / h + pm / 2;
    add(e, e, h * c0 * c0);
    add(e, e + 1, h * c0 * c1);
    add(e + 1, e, h * c1 * c0);
    add(e + 1, e + 1, h * c1 * c1);
  }
  SpMat A(m, m);
  A.setFromTriplets(at.begin(), at.end());

  Eigen::VectorXd mass = Eigen::VectorXd::Constant(n, h);
  mass[0] = mass[n - 1] = h / 2;
  Eigen::VectorXd w(m);
  for (int i = 0; i < m; ++i) w[i] = 1.0 / std::sqrt(mass[lo + i]);
  SpMat W(m, m);
  W.reserve(Eigen::VectorXi::Constant(m, 1));
  for (int i = 0; i < m; ++i) W.insert(i, i) = w[i];
  SpMat T = W * A * W;
  auto [vals, vecs] = smallest_symmetric_eigenpairs(T, k);
  return vals;
}

ThreeForms assemble_three_forms(const Grid1D& g, int p, double hess_coeff) {
  if (!g.circle) throw std::invalid_argument("expected a circle grid");
  if (p != 0 && p != 1) throw std::invalid_argument("degree must be 0 or 1");
  const int n = g.nodes;
  Eigen::MatrixXd P = periodic_d1(n, g.h());
  Eigen::MatrixXd F1 = g.dphi.asDiagonal();
  Eigen::MatrixXd F2 = g.ddphi.asDiagonal();
  Eigen::MatrixXd lap = -P * P;
  Eigen::MatrixXd sq = g.dphi.array().square().matrix().asDiagonal();

  ThreeForms out;
  if (p == 0) {
    out.direct = (-P + F1) * (P + F1);
    out.lie = lap + sq + F1 * P - P * F1;
    // the zero-order endomorphism vanishes on functions; div X = -phi''
    out.zeroth = lap + sq - F2;
  } else {
    out.direct = (P + F1) * (-P + F1);
    out.lie = lap + sq + F1 * P - P * F1 + 2.0 * F2;
    out.zeroth = lap + sq - F2 + hess_coeff * F2;
  }

  double da = 0, dc = 0;
  for (int m = 1; m <= 3; ++m) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i)
      u[i] = std::sin(2 * M_PI * m * (g.x[i] - g.origin) / g.length + 0.7 * m);
    da = std::max(da, ((out.direct - out.lie) * u).cwiseAbs().maxCoeff());
    dc = std::max(dc, ((out.direct - out.zeroth) * u).cwiseAbs().maxCoeff());
  }
  out.diff_lie = da;
  out.diff_zeroth = dc;
  return out;
}

TwistedSquare twisted_square(int cells, double length,
                             const std::function<double(double, double)>& Xx,
                             const std::function<double(double, double)>& Xy,
                             const std::function<double(double, double)>& f) {
  const int n = cells;
  if (n < 8) throw std::invalid_argument("need at least 8 cells per factor");
  const double h = length / n;
  Eigen::MatrixXd P = periodic_d1(n, h);

  Eigen::MatrixXd FX(n, n), FY(n, n), F(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double x = i * h, y = j * h;
      FX(i, j) = Xx(x, y);
      FY(i, j) = Xy(x, y);
      F(i, j) = f(x, y);
    }
  auto dx = [&](const Eigen::MatrixXd& M) { return Eigen::MatrixXd(P * M); };
  auto dy = [&](const Eigen::MatrixXd& M) { return Eigen::MatrixXd(M * P.transpose()); };

  Eigen::MatrixXd wx = dx(F) + F.cwiseProduct(FX);
  Eigen::MatrixXd wy = dy(F) + F.cwiseProduct(FY);
  TwistedSquare out;
  out.applied = dx(wy) - dy(wx) + FX.cwiseProduct(wy) - FY.cwiseProduct(wx);
  out.expected = F.cwiseProduct(dx(FY) - dy(FX));
  out.max_diff = (out.applied - out.expected).cwiseAbs().maxCoeff();
  return out;
}

} // namespace wdec
