#include "wdec/meshes.hpp"
#include "wdec/operators.hpp"

#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace wdec;

namespace {

std::vector<double> dense_pencil_spectrum(const SpMat& A, const SpMat& M) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(A),
                                                               Eigen::MatrixXd(M)};
  Eigen::VectorXd v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

} // namespace

TEST_CASE("circle vertex masses equal the segment length") {
  const int n = 7;
  const double L = 2.0;
  Complex C = product_grid({{true, n, L}});
  Geometry g = make_geometry(C);
  WeightField phi = zero_weight(C);
  SpMat M0 = assemble_mass(C, g, phi, 0, MassScheme::lumped);
  for (int i = 0; i < n; ++i) CHECK(M0.coeff(i, i) == doctest::Approx(L / n).epsilon(1e-14));
}

TEST_CASE("constant weight scales every mass entry by exp(-2c)") {
  Complex S = icosphere(1);
  Geometry g = make_geometry(S);
  WeightField w0 = zero_weight(S);
  WeightField wc = constant_weight(S, 0.7);
  for (int p = 0; p <= 2; ++p) {
    Eigen::VectorXd a = assemble_mass(S, g, w0, p, MassScheme::lumped).diagonal();
    Eigen::VectorXd b = assemble_mass(S, g, wc, p, MassScheme::lumped).diagonal();
    CHECK(((b - std::exp(-1.4) * a).cwiseAbs().maxCoeff()) <= 1e-14 * a.maxCoeff());
  }
}

TEST_CASE("constant conformal factor scales p-form masses by exp((n-2p)c)") {
  // oracle: rescale the embedded coordinates explicitly on a 2-triangle mesh
  Eigen::MatrixXd V(4, 2);
  V << 0, 0, 1.3, 0.1, 0.2, 1.1, 1.4, 1.2;
  Complex K = build_simplicial(V, {{0, 1, 2}, {1, 2, 3}});
  Geometry g = make_geometry(K);
  WeightField phi = zero_weight(K);

  const double c = 0.31;
  Geometry gc = g;
  for (auto& u : gc.u) u.array() += c;

  Complex K2 = build_simplicial(std::exp(c) * V, {{0, 1, 2}, {1, 2, 3}});
  Geometry g2 = make_geometry(K2);

  for (int p = 0; p <= 2; ++p) {
    Eigen::VectorXd a = assemble_mass(K, gc, phi, p, MassScheme::lumped).diagonal();
    Eigen::VectorXd b = assemble_mass(K2, g2, phi, p, MassScheme::lumped).diagonal();
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12 * b.cwiseAbs().maxCoeff());
    Eigen::VectorXd base = assemble_mass(K, g, phi, p, MassScheme::lumped).diagonal();
    CHECK((a - std::exp((2 - 2 * p) * c) * base).cwiseAbs().maxCoeff() <=
          1e-13 * a.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("coboundary is the transposed boundary and squares to zero") {
  Complex S = icosphere(1);
  SpMat D0 = coboundary(S, 0);
  SpMat D1 = coboundary(S, 1);
  CHECK(Eigen::MatrixXd(D1 * D0).cwiseAbs().maxCoeff() == 0.0);

  Complex T = product_grid({{true, 4, 1.0}, {true, 4, 1.0}});
  Eigen::FullPivLU<Eigen::MatrixXd> lu{Eigen::MatrixXd(coboundary(T, 0))};
  CHECK(lu.rank() == 15);
}

TEST_CASE("twisted edge difference unfolds the definition") {
  Eigen::MatrixXd V(2, 1);
  V << 0, 1;
  Complex K = build_simplicial(V, {{0, 1}});
  Eigen::VectorXd pv(2);
  pv << 0.2, -0.4;
  WeightField phi = weight_from_vertex_values(K, pv);
  SpMat Dt = twisted_coboundary(coboundary(K, 0), phi, 0);
  Eigen::VectorXd f(2);
  f << 1.5, 2.5;
  double expect = std::exp(-phi.samples[1][0]) *
                  (std::exp(pv[1]) * f[1] - std::exp(pv[0]) * f[0]);
  CHECK((Dt * f)(0) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("twisted and weighted gauges are diagonally conjugate") {
  for (unsigned long seed : {11ul, 12ul, 13ul}) {
    Complex K = random_complex(seed);
    Geometry g = make_geometry(K);
    WeightField phi = weight_from_vertex_values(K, random_vertex_field(K, seed, 0.9));
    OperatorBundle tw = make_bundle(K, g, phi, Gauge::twisted);
    OperatorBundle wt = make_bundle(K, g, phi, Gauge::weighted);
    for (int p = 0; p < K.dim(); ++p) {
      auto st = dense_pencil_spectrum(tw.A[p], tw.M[p]);
      auto sw = dense_pencil_spectrum(wt.A[p], wt.M[p]);
      double scale = std::max(std::abs(st.back()), 1.0);
      for (size_t i = 0; i < st.size(); ++i)
        CHECK(std::abs(st[i] - sw[i]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("zero weight twisted gauge reproduces the plain bundle exactly") {
  Complex S = icosphere(1);
  Geometry g = make_geometry(S);
  WeightField phi = zero_weight(S);
  OperatorBundle tw = make_bundle(S, g, phi, Gauge::twisted);
  OperatorBundle wt = make_bundle(S, g, phi, Gauge::weighted);
  for (int p = 0; p <= 2; ++p) {
    CHECK(Eigen::MatrixXd(tw.M[p] - wt.M[p]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(Eigen::MatrixXd(tw.A[p] - wt.A[p]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("up-stiffness is positive semidefinite and vanishes at top degree") {
  Complex T = product_grid({{true, 6, 1.0}, {true, 6, 1.0}});
  Geometry g = make_geometry(T);
  OperatorBundle b = make_bundle(T, g, zero_weight(T));
  CHECK(b.A[2].nonZeros() == 0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd x(b.M[1].rows());
    for (int i = 0; i < x.size(); ++i) x[i] = nd(rng);
    CHECK(x.dot(b.A[1] * x) >= -1e-12 * x.squaredNorm());
  }
}

TEST_CASE("three equal circle segments give the known pencil spectrum") {
  const double h = 0.7;
  Complex C = product_grid({{true, 3, 3 * h}});
  Geometry g = make_geometry(C);
  OperatorBundle b = make_bundle(C, g, zero_weight(C));
  auto s = dense_pencil_spectrum(b.A[0], b.M[0]);
  CHECK(s[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(s[1] == doctest::Approx(3.0 / (h * h)).epsilon(1e-12));
  CHECK(s[2] == doctest::Approx(3.0 / (h * h)).epsilon(1e-12));
}

TEST_CASE("conformal rescale roundtrips and shifts the weight") {
  Complex S = icosphere(1);
  Geometry g = make_geometry(S);
  WeightField phi = weight_from_vertex_values(S, random_vertex_field(S, 3, 0.5));
  auto u = sample_vertex_field(S, random_vertex_field(S, 9, 0.8));
  auto [g1, phi1] = conformal_rescale(g, phi, u, 1.5);
  for (auto& v : u) v = -v;
  auto [g2, phi2] = conformal_rescale(g1, phi1, u, 1.5);
  for (int p = 0; p <= 2; ++p) {
    Eigen::VectorXd a = assemble_mass(S, g, phi, p, MassScheme::lumped).diagonal();
    Eigen::VectorXd b = assemble_mass(S, g2, phi2, p, MassScheme::lumped).diagonal();
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-14 * a.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("weighted r-norm is conformally invariant at the critical exponent") {
  // n=2, p=1, alpha=0, r=2: the classical midedegree invariance
  Complex S = icosphere(1);
  Geometry g = make_geometry(S);
  WeightField phi = weight_from_vertex_values(S, random_vertex_field(S, 21, 0.4));
  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd;
  Eigen::VectorXd omega(S.ncells(1));
  for (int i = 0; i < omega.size(); ++i) omega[i] = nd(rng);

  std::vector<Eigen::VectorXd> u(S.dim() + 1);
  for (int p = 0; p <= S.dim(); ++p) {
    u[p].resize(S.ncells(p));
    for (int c = 0; c < S.ncells(p); ++c) u[p][c] = nd(rng);
  }

  double r2 = weighted_r_norm(S, g, phi, omega, 2.0, 1);
  auto [gu, phiu] = conformal_rescale(g, phi, u, 0.0);
  double r2u = weighted_r_norm(S, gu, phiu, omega, 2.0, 1);
  CHECK(std::abs(r2 - r2u) <= 1e-13 * r2);

  // r = 2 coincides with the mass-induced norm when phi = 0, u = 0
  WeightField z = zero_weight(S);
  SpMat M1 = assemble_mass(S, g, z, 1, MassScheme::lumped);
  double viaM = std::sqrt(omega.dot(M1 * omega));
  CHECK(weighted_r_norm(S, g, z, omega, 2.0, 1) == doctest::Approx(viaM).epsilon(1e-13));

  CHECK_THROWS_AS(weighted_r_norm(S, g, phi, omega, 0.9, 1), std::invalid_argument);
}

TEST_CASE("tensor masses factor over the product with split weights") {
  const int n = 6;
  Complex C1 = product_grid({{true, n, 2.0}});
  Complex C2 = product_grid({{true, n, 3.0}});
  Complex T = product_grid({{true, n, 2.0}, {true, n, 3.0}});

  Eigen::VectorXd p1 = random_vertex_field(C1, 41, 0.6);
  Eigen::VectorXd p2 = random_vertex_field(C2, 42, 0.6);
  Eigen::VectorXd pt(T.nvertices());
  const auto& X = T.vertex_coords();
  double h1 = 2.0 / n, h2 = 3.0 / n;
  for (int v = 0; v < T.nvertices(); ++v) {
    int i = static_cast<int>(std::lround(X(v, 0) / h1));
    int j = static_cast<int>(std::lround(X(v, 1) / h2));
    pt[v] = p1[i] + p2[j];
  }
  Geometry g1 = make_geometry(C1), g2 = make_geometry(C2), gt = make_geometry(T);
  WeightField w1 = weight_from_vertex_values(C1, p1);
  WeightField w2 = weight_from_vertex_values(C2, p2);
  WeightField wt = weight_from_vertex_values(T, pt);

  // degree-1 cells of the product list edge x vertex blocks before
  // vertex x edge blocks; check entrywise factorization on both
  Eigen::VectorXd m1v = assemble_mass(C1, g1, w1, 0, MassScheme::lumped).diagonal();
  Eigen::VectorXd m1e = assemble_mass(C1, g1, w1, 1, MassScheme::lumped).diagonal();
  Eigen::VectorXd m2v = assemble_mass(C2, g2, w2, 0, MassScheme::lumped).diagonal();
  Eigen::VectorXd m2e = assemble_mass(C2, g2, w2, 1, MassScheme::lumped).diagonal();
  Eigen::VectorXd mt = assemble_mass(T, gt, wt, 1, MassScheme::lumped).diagonal();

  const auto& degs = T.tensor_factor_degrees(1);
  // factor-cell index along one axis; a wrap edge {0, (n-1)h} is cell n-1
  auto axis_index = [n](std::vector<int> ks) {
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    if (ks.size() == 2 && ks.front() == 0 && ks.back() == n - 1) return n - 1;
    return ks.front();
  };
  for (int c = 0; c < T.ncells(1); ++c) {
    const auto& cell = T.cells(1)[c];
    const auto& X2 = T.vertex_coords();
    std::vector<int> kx, ky;
    for (int v : cell.vertices) {
      kx.push_back(static_cast<int>(std::lround(X2(v, 0) / h1)) % n);
      ky.push_back(static_cast<int>(std::lround(X2(v, 1) / h2)) % n);
    }
    int i = axis_index(kx);
    int j = axis_index(ky);
    double expect = (degs[c][0] == 1) ? m1e[i] * m2v[j] : m1v[i] * m2e[j];
    CHECK(std::abs(mt[c] - expect) <= 1e-14 * std::abs(expect));
  }
}

TEST_CASE("exponential guard rejects runaway weights") {
  Complex C = product_grid({{true, 5, 1.0}});
  Geometry g = make_geometry(C);
  WeightField phi = constant_weight(C, 400.0);
  CHECK_THROWS_AS(assemble_mass(C, g, phi, 0, MassScheme::lumped), std::domain_error);
}

TEST_CASE("consistent mass converges to the same spectrum as lumped") {
  // coarse sanity: both schemes approximate the circle eigenvalue 1
  auto first_nonzero = [](const SpMat& A, const SpMat& M) {
    auto s = dense_pencil_spectrum(A, M);
    return s[1];
  };
  Eigen::MatrixXd V(0, 0);
  for (int n : {24, 48}) {
    std::vector<std::vector<int>> tops;
    Eigen::MatrixXd P(n, 2);
    for (int i = 0; i < n; ++i) {
      double a = 2 * M_PI * i / n;
      P(i, 0) = std::cos(a);
      P(i, 1) = std::sin(a);
      tops.push_back({i, (i + 1) % n});
    }
    Complex K = build_simplicial(P, tops);
    Geometry g = make_geometry(K);
    WeightField z = zero_weight(K);
    SpMat D = coboundary(K, 0);
    SpMat Ml = assemble_mass(K, g, z, 1, MassScheme::lumped);
    SpMat Mc = assemble_mass(K, g, z, 1, MassScheme::consistent);
    SpMat M0l = assemble_mass(K, g, z, 0, MassScheme::lumped);
    SpMat M0c = assemble_mass(K, g, z, 0, MassScheme::consistent);
    double ll = first_nonzero(up_stiffness(D, Ml), M0l);
    double cc = first_nonzero(up_stiffness(D, Mc), M0c);
    // the circle chord length underestimates arc length; both schemes must
    // still agree with each other to O(h^2)
    CHECK(std::abs(ll - cc) <= 0.05);
    CHECK(ll == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("matrix market export writes a readable coordinate file") {
  Complex C = product_grid({{true, 4, 1.0}});
  Geometry g = make_geometry(C);
  OperatorBundle b = make_bundle(C, g, zero_weight(C));
  std::string path = (std::filesystem::temp_directory_path() / "mass0.mtx").string();
  write_matrix_market(b.M[0], path);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header == "%%MatrixMarket matrix coordinate real general");
}
