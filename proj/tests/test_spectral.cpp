#include "wdec/meshes.hpp"
#include "wdec/spectral.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace wdec;

namespace {

OperatorBundle torus_bundle(int n, unsigned long seed = 0, double amp = 0.0) {
  Complex T = product_grid({{true, n, 1.0}, {true, n, 1.0}});
  Geometry g = make_geometry(T);
  WeightField phi = amp > 0 ? weight_from_vertex_values(T, random_vertex_field(T, seed, amp))
                            : zero_weight(T);
  return make_bundle(T, g, phi);
}

} // namespace

TEST_CASE("flat torus function spectrum matches separation of variables") {
  const int n = 16;
  OperatorBundle b = torus_bundle(n);
  SpectrumResult r = full_hodge_spectrum(b, 0, 6);
  // discrete circle eigenvalues (2/h^2)(1 - cos(2 pi k / n)), doubled on T^2
  double h = 1.0 / n;
  double l1 = 2.0 / (h * h) * (1 - std::cos(2 * M_PI / n));
  CHECK(r.harmonic_dim == 1);
  CHECK(r.values[0] == doctest::Approx(0.0).epsilon(1e-10));
  for (int i = 1; i <= 4; ++i) CHECK(r.values[i] == doctest::Approx(l1).epsilon(1e-9));
  CHECK(r.values[5] == doctest::Approx(2 * l1).epsilon(1e-9));
}

TEST_CASE("harmonic dimensions of the torus are 1, 2, 1 for any weight") {
  for (unsigned long seed : {3ul, 4ul}) {
    OperatorBundle b = torus_bundle(10, seed, 0.8);
    CHECK(full_hodge_spectrum(b, 0, 3).harmonic_dim == 1);
    CHECK(full_hodge_spectrum(b, 1, 4).harmonic_dim == 2);
    CHECK(full_hodge_spectrum(b, 2, 3).harmonic_dim == 1);
  }
}

TEST_CASE("exact p+1 spectrum pairs with coexact p spectrum") {
  OperatorBundle b = torus_bundle(8, 7, 0.6);
  SpectrumResult low = full_hodge_spectrum(b, 0, 10);
  SpectrumResult high = full_hodge_spectrum(b, 1, 14);
  auto co = low.coexact();
  auto ex = high.exact_part();
  size_t m = std::min(co.size(), ex.size());
  REQUIRE(m >= 5);
  for (size_t i = 0; i < m; ++i)
    CHECK(std::abs(co[i] - ex[i]) <= 1e-8 * std::max(1.0, std::abs(co[i])));
}

TEST_CASE("variational brute force agrees with the iterative coexact solver") {
  for (unsigned long seed : {21ul, 22ul, 23ul}) {
    Complex K = random_complex(seed);
    Geometry g = make_geometry(K);
    WeightField phi = weight_from_vertex_values(K, random_vertex_field(K, seed + 100, 0.7));
    OperatorBundle b = make_bundle(K, g, phi);
    for (int p = 0; p < K.dim(); ++p) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu{Eigen::MatrixXd(b.D[p])};
      int rk = static_cast<int>(lu.rank());
      int kk = std::min(3, rk);
      if (kk == 0) continue;
      SpectrumResult r = coexact_spectrum(b, p, kk);
      for (int i = 1; i <= kk; ++i) {
        double oracle = minmax_bruteforce(b, p, i);
        CHECK(std::abs(r.values[i - 1] - oracle) <= 1e-9 * std::max(1.0, oracle));
      }
    }
  }
}

TEST_CASE("minimal norm primitive recovers exact cochains") {
  OperatorBundle b = torus_bundle(8, 5, 0.5);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  Eigen::VectorXd theta(b.dim_at(0));
  for (int i = 0; i < theta.size(); ++i) theta[i] = nd(rng);
  Eigen::VectorXd omega = b.D[0] * theta;
  Eigen::VectorXd back = min_norm_primitive(b, 0, omega);
  CHECK(((b.D[0] * back) - omega).cwiseAbs().maxCoeff() <= 1e-9 * omega.cwiseAbs().maxCoeff());

  // shifting theta by a constant (kernel of D_0) leaves the result unchanged
  Eigen::VectorXd back2 = min_norm_primitive(b, 0, b.D[0] * (theta.array() + 3.0).matrix());
  CHECK((back - back2).cwiseAbs().maxCoeff() <= 1e-9 * back.cwiseAbs().maxCoeff());

  // a harmonic 1-cochain is not exact
  SpectrumResult r1 = full_hodge_spectrum(b, 1, 3);
  Eigen::VectorXd h = r1.vectors.col(0);
  CHECK_THROWS_AS(min_norm_primitive(b, 0, h), std::invalid_argument);
}

TEST_CASE("harmonic representative preserves the class and kills exact parts") {
  OperatorBundle b = torus_bundle(8, 9, 0.5);
  // exact input projects to zero
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  Eigen::VectorXd theta(b.dim_at(0));
  for (int i = 0; i < theta.size(); ++i) theta[i] = nd(rng);
  Eigen::VectorXd hproj = harmonic_representative(b, 1, b.D[0] * theta);
  CHECK(hproj.cwiseAbs().maxCoeff() <= 1e-8 * theta.cwiseAbs().maxCoeff());

  // the uniform meridian cocycle on the torus is closed but not exact
  Complex T = product_grid({{true, 8, 1.0}, {true, 8, 1.0}});
  const auto& degs = T.tensor_factor_degrees(1);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(T.ncells(1));
  for (int c = 0; c < T.ncells(1); ++c)
    if (degs[c][0] == 1) z[c] = 1.0;
  CHECK((b.D[1] * z).cwiseAbs().maxCoeff() == 0.0);
  Eigen::VectorXd h = harmonic_representative(b, 1, z);
  CHECK(h.cwiseAbs().maxCoeff() > 1e-3);
  // the difference is exact, so both integrate equally against harmonics
  SpectrumResult r1 = full_hodge_spectrum(b, 1, 3);
  for (int i = 0; i < r1.harmonic_dim; ++i) {
    double a = r1.vectors.col(i).dot(b.M[1] * z);
    double bb = r1.vectors.col(i).dot(b.M[1] * h);
    CHECK(std::abs(a - bb) <= 1e-8 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("interval domain spectra match the continuum boundary problems") {
  // absolute/natural: Neumann eigenvalues (k pi / L)^2; relative at degree 0
  // drops the interface vertices and gives Dirichlet eigenvalues
  const int n = 400;
  const double L = 1.0;
  Complex C = product_grid({{true, 3 * n, 3 * L}});
  Geometry g = make_geometry(C);
  WeightField phi = zero_weight(C);
  const auto& X = C.vertex_coords();
  DomainTag U = tag_domain(C, [&](int t) {
    double a = X(C.cells(1)[t].vertices[0], 0), b2 = X(C.cells(1)[t].vertices[1], 0);
    double mid = (std::abs(a - b2) > 2 * L) ? 0.0 : 0.5 * (a + b2);
    return mid > L && mid < 2 * L;
  });
  SpectrumResult neu = domain_spectrum(C, U, BoundaryCondition::absolute, g, phi, 0, 4);
  SpectrumResult dir = domain_spectrum(C, U, BoundaryCondition::relative, g, phi, 0, 3);
  for (int k = 0; k < 4; ++k)
    CHECK(neu.values[k] ==
          doctest::Approx(std::pow(k * M_PI / L, 2)).epsilon(1e-3));
  for (int k = 0; k < 3; ++k)
    CHECK(dir.values[k] ==
          doctest::Approx(std::pow((k + 1) * M_PI / L, 2)).epsilon(1e-3));

  WeightField pnz = constant_weight(C, 0.3);
  CHECK_THROWS_AS(domain_spectrum(C, U, BoundaryCondition::dirichlet, g, pnz, 0, 2),
                  std::invalid_argument);
}

TEST_CASE("spectral distance is small for small perturbations and checks gaps") {
  OperatorBundle a = torus_bundle(8);
  Complex T = product_grid({{true, 8, 1.0}, {true, 8, 1.0}});
  Geometry g = make_geometry(T);
  Eigen::VectorXd tiny = 1e-4 * random_vertex_field(T, 13, 1.0);
  OperatorBundle bp = make_bundle(T, g, weight_from_vertex_values(T, tiny));

  SpectrumResult ra = full_hodge_spectrum(a, 0, 4);
  SpectrumResult rb = full_hodge_spectrum(bp, 0, 4);
  GapConfig cfg{1, 10.0, 100.0};
  double d = spectral_distance(ra, rb, a.M[0], cfg);
  CHECK(d <= 1e-2);
  CHECK(d >= 0.0);

  GapConfig bad{1, 1e6, 100.0};
  CHECK_THROWS_AS(spectral_distance(ra, rb, a.M[0], bad), std::invalid_argument);
}

TEST_CASE("sparse and dense solver paths agree across the threshold") {
  OperatorBundle b = torus_bundle(12, 31, 0.4);
  SolveOptions dense;
  dense.dense_threshold = 100000;
  SolveOptions sparse;
  sparse.dense_threshold = 1;
  SpectrumResult rd = full_hodge_spectrum(b, 1, 8, dense);
  SpectrumResult rs = full_hodge_spectrum(b, 1, 8, sparse);
  CHECK(rd.method != rs.method);
  for (int i = 0; i < 8; ++i)
    CHECK(std::abs(rd.values[i] - rs.values[i]) <=
          1e-8 * std::max(1.0, std::abs(rd.values[i])));
  for (int i = 0; i < 8; ++i) CHECK(rs.residuals[i] <= sparse.tol);
}

TEST_CASE("identity-mass helper finds the nullity of an incidence normal matrix") {
  Complex T = product_grid({{true, 6, 1.0}, {true, 6, 1.0}});
  SpMat D = coboundary(T, 0);
  SpMat L = SpMat(D.transpose()) * D;
  auto [vals, vecs] = smallest_symmetric_eigenpairs(L, 3);
  CHECK(vals[0] <= 1e-10);
  CHECK(vals[1] > 1e-3);
  CHECK(vecs.cols() == 3);
}
