#include "wdec/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace wdec {

double Geometry::total_volume() const {
  double v = 0;
  const Eigen::VectorXd& vn = vol[n];
  const Eigen::VectorXd& un = u[n];
  for (int t = 0; t < vn.size(); ++t) v += vn[t] * std::exp(n * un[t]);
  return v;
}

namespace {

double simplex_volume(const Eigen::MatrixXd& coords, const std::vector<int>& verts) {
  int p = static_cast<int>(verts.size()) - 1;
  if (p == 0) return 1.0;
  Eigen::MatrixXd E(coords.cols(), p);
  for (int i = 1; i <= p; ++i)
    E.col(i - 1) = (coords.row(verts[i]) - coords.row(verts[0])).transpose();
  Eigen::MatrixXd G = E.transpose() * E;
  double det = G.determinant();
  if (det <= 0) throw std::invalid_argument("degenerate simplex geometry");
  double fact = 1;
  for (int i = 2; i <= p; ++i) fact *= i;
  return std::sqrt(det) / fact;
}

} // namespace

Geometry make_geometry(const Complex& K) {
  Geometry g;
  g.n = K.dim();
  g.vol.resize(g.n + 1);
  g.u.resize(g.n + 1);
  for (int p = 0; p <= g.n; ++p) {
    int nc = K.ncells(p);
    g.vol[p].resize(nc);
    g.u[p] = Eigen::VectorXd::Zero(nc);
    if (K.kind() == ComplexKind::simplicial) {
      for (int c = 0; c < nc; ++c)
        g.vol[p][c] = simplex_volume(K.vertex_coords(), K.cells(p)[c].vertices);
    } else {
      const auto& degs = K.tensor_factor_degrees(p);
      const auto& fs = K.factors();
      for (int c = 0; c < nc; ++c) {
        double v = 1.0;
        for (size_t i = 0; i < fs.size(); ++i)
          if (degs[c][i] == 1) v *= fs[i].length / fs[i].cells;
        g.vol[p][c] = v;
      }
    }
  }
  return g;
}

double WeightField::max_abs() const {
  double m = 0;
  for (const auto& s : samples)
    if (s.size()) m = std::max(m, s.cwiseAbs().maxCoeff());
  return m;
}

std::vector<Eigen::VectorXd> sample_vertex_field(const Complex& K, const Eigen::VectorXd& f) {
  if (f.size() != K.nvertices())
    throw std::invalid_argument("vertex field size mismatch");
  std::vector<Eigen::VectorXd> s(K.dim() + 1);
  for (int p = 0; p <= K.dim(); ++p) {
    int nc = K.ncells(p);
    s[p].resize(nc);
    for (int c = 0; c < nc; ++c) {
      const auto& verts = K.cells(p)[c].vertices;
      double a = 0;
      for (int v : verts) a += f[v];
      s[p][c] = a / static_cast<double>(verts.size());
    }
  }
  return s;
}

WeightField weight_from_vertex_values(const Complex& K, const Eigen::VectorXd& phi) {
  WeightField w;
  w.vertex_values = phi;
  w.samples = sample_vertex_field(K, phi);
  return w;
}

WeightField zero_weight(const Complex& K) {
  return constant_weight(K, 0.0);
}

WeightField constant_weight(const Complex& K, double c) {
  return weight_from_vertex_values(K, Eigen::VectorXd::Constant(K.nvertices(), c));
}

} // namespace wdec
