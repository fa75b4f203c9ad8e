#include "wdec/cohomology.hpp"
#include "wdec/meshes.hpp"

#include "doctest.h"

using namespace wdec;

namespace {

Complex annulus(int rings = 24) {
  // triangulated annulus between radii 1 and 2
  Eigen::MatrixXd V(2 * rings, 2);
  std::vector<std::vector<int>> tops;
  for (int i = 0; i < rings; ++i) {
    double a = 2 * M_PI * i / rings;
    V(i, 0) = std::cos(a);
    V(i, 1) = std::sin(a);
    V(rings + i, 0) = 2 * std::cos(a);
    V(rings + i, 1) = 2 * std::sin(a);
  }
  for (int i = 0; i < rings; ++i) {
    int j = (i + 1) % rings;
    tops.push_back({i, j, rings + i});
    tops.push_back({j, rings + i, rings + j});
  }
  return build_simplicial(V, tops);
}

} // namespace

TEST_CASE("betti numbers of standard complexes") {
  Complex T = product_grid({{true, 8, 1.0}, {true, 8, 1.0}});
  CHECK(betti(T, 0) == 1);
  CHECK(betti(T, 1) == 2);
  CHECK(betti(T, 2) == 1);

  Complex S = icosphere(2);
  CHECK(betti(S, 0) == 1);
  CHECK(betti(S, 1) == 0);
  CHECK(betti(S, 2) == 1);

  Eigen::MatrixXd V(3, 2);
  V << 0, 0, 1, 0, 0, 1;
  Complex cyc = build_simplicial(V, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(betti(cyc, 0) == 1);
  CHECK(betti(cyc, 1) == 1);

  Complex A = annulus();
  CHECK(betti(A, 0) == 1);
  CHECK(betti(A, 1) == 1);
  CHECK(betti(A, 2) == 0);
}

TEST_CASE("euler characteristic equals the alternating betti sum") {
  for (unsigned long seed : {31ul, 32ul, 33ul, 34ul}) {
    Complex K = random_complex(seed);
    long chi = 0;
    for (int p = 0; p <= K.dim(); ++p) chi += (p % 2 ? -1 : 1) * betti(K, p);
    CHECK(chi == K.euler_characteristic());
  }
}

TEST_CASE("restriction to an annular band of the sphere kills degree 1") {
  Complex S = icosphere(2);
  DomainTag U = equatorial_band(S, 0.4);
  CHECK(betti(S, U, 0) == 1);
  CHECK(betti(S, U, 1) == 1);          // the band is an annulus
  CHECK(restriction_rank(S, U, 1) == 0);  // b_1(sphere) = 0
  CHECK(quotient_dimension(S, U, 1) == 1);
}

TEST_CASE("torus halves restrict with full rank in degree 1") {
  Complex T = product_grid({{true, 8, 1.0}, {true, 8, 1.0}});
  const auto& X = T.vertex_coords();
  DomainTag U = tag_domain(T, [&](int t) {
    for (int v : T.cells(2)[t].vertices)
      if (X(v, 0) > 0.5 + 1e-9) return false;
    return true;
  });
  // the left half is an annulus: one class survives, one is lost
  CHECK(betti(T, U, 1) == 1);
  CHECK(restriction_rank(T, U, 1) == 1);
  CHECK(quotient_dimension(T, U, 1) == 0);
}

TEST_CASE("disk inside an annulus-shaped domain has trivial quotient") {
  Complex A = annulus();
  // a contractible wedge of the annulus
  const auto& X = A.vertex_coords();
  DomainTag U = tag_domain(A, [&](int t) {
    for (int v : A.cells(2)[t].vertices)
      if (X(v, 0) < 0.3) return false;
    return true;
  });
  CHECK(betti(A, U, 1) == 0);
  CHECK(quotient_dimension(A, U, 1) == 0);
}

TEST_CASE("summary table is consistent across degrees") {
  Complex T = product_grid({{true, 8, 1.0}, {true, 8, 1.0}});
  const auto& X = T.vertex_coords();
  DomainTag U = tag_domain(T, [&](int t) {
    for (int v : T.cells(2)[t].vertices)
      if (X(v, 0) > 0.5 + 1e-9) return false;
    return true;
  });
  CohomologySummary s = cohomology_summary(T, U);
  REQUIRE(s.rows.size() == 3);
  for (const auto& row : s.rows) {
    CHECK(row[2] <= row[0]);  // rank bounded by b_p(M)
    CHECK(row[2] <= row[1]);  // and by b_p(U)
    CHECK(row[3] == row[1] - row[2]);
  }
  CHECK(s.to_json().find("\"d_p\"") != std::string::npos);
}

TEST_CASE("numeric rank agrees between dense and sparse paths") {
  Complex T = product_grid({{true, 6, 1.0}, {true, 6, 1.0}});
  SpMat D = T.coboundary(0);
  CHECK(numeric_rank(D) == 35);  // nvertices - b_0
}
