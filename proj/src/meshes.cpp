#include "wdec/meshes.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace wdec {

Complex icosphere(int subdivisions) {
  if (subdivisions < 0 || subdivisions > 7)
    throw std::invalid_argument("subdivision count out of range");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      Eigen::Vector3d m = (verts[a] + verts[b]).normalized();
      verts.push_back(m);
      int id = static_cast<int>(verts.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      int a = midpoint(f[0], f[1]);
      int b = midpoint(f[1], f[2]);
      int c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }

  Eigen::MatrixXd V(verts.size(), 3);
  for (size_t i = 0; i < verts.size(); ++i) V.row(static_cast<int>(i)) = verts[i];
  std::vector<std::vector<int>> tops;
  tops.reserve(faces.size());
  for (const auto& f : faces) tops.push_back({f[0], f[1], f[2]});
  return build_simplicial(V, tops);
}

DomainTag equatorial_band(const Complex& K, double zmax) {
  const int n = K.dim();
  const Eigen::MatrixXd& X = K.vertex_coords();
  return tag_domain(K, [&](int t) {
    const auto& vs = K.cells(n)[t].vertices;
    double z = 0;
    for (int v : vs) z += X(v, 2);
    return std::abs(z / vs.size()) <= zmax;
  });
}

Complex random_complex(unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0, 1);

  if (unif(rng) < 0.3) {
    // chord graph on a jittered circle
    int nv = 4 + static_cast<int>(unif(rng) * 9);
    Eigen::MatrixXd V(nv, 2);
    for (int i = 0; i < nv; ++i) {
      double a = 2 * M_PI * i / nv;
      double r = 1.0 + 0.2 * (unif(rng) - 0.5);
      V(i, 0) = r * std::cos(a);
      V(i, 1) = r * std::sin(a);
    }
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < nv; ++i) edges.push_back({i, (i + 1) % nv});
    int chords = static_cast<int>(unif(rng) * 3);
    for (int c = 0; c < chords; ++c) {
      int a = static_cast<int>(unif(rng) * nv);
      int b = (a + 2 + static_cast<int>(unif(rng) * (nv - 3))) % nv;
      std::vector<int> e{std::min(a, b), std::max(a, b)};
      bool dup = false;
      for (const auto& x : edges) {
        std::vector<int> s{std::min(x[0], x[1]), std::max(x[0], x[1])};
        if (s == e) dup = true;
      }
      if (!dup && e[0] != e[1]) edges.push_back(e);
    }
    return build_simplicial(V, edges);
  }

  // jittered triangulated patch with a random subset of triangles
  int gx = 2 + static_cast<int>(unif(rng) * 3);
  int gy = 2 + static_cast<int>(unif(rng) * 3);
  int nv = (gx + 1) * (gy + 1);
  Eigen::MatrixXd V(nv, 2);
  for (int j = 0; j <= gy; ++j)
    for (int i = 0; i <= gx; ++i) {
      int id = j * (gx + 1) + i;
      V(id, 0) = i + 0.3 * (unif(rng) - 0.5);
      V(id, 1) = j + 0.3 * (unif(rng) - 0.5);
    }
  std::vector<std::vector<int>> tris;
  for (int j = 0; j < gy; ++j)
    for (int i = 0; i < gx; ++i) {
      int a = j * (gx + 1) + i, b = a + 1, c = a + gx + 1, d = c + 1;
      if (unif(rng) < 0.85) tris.push_back({a, b, d});
      if (unif(rng) < 0.85) tris.push_back({a, d, c});
    }
  if (tris.empty()) tris.push_back({0, 1, gx + 1});

  // compact unused vertices
  std::vector<int> remap(nv, -1);
  int used = 0;
  for (auto& t : tris)
    for (int v : t)
      if (remap[v] < 0) remap[v] = used++;
  Eigen::MatrixXd Vc(used, 2);
  for (int v = 0; v < nv; ++v)
    if (remap[v] >= 0) Vc.row(remap[v]) = V.row(v);
  for (auto& t : tris)
    for (int& v : t) v = remap[v];
  return build_simplicial(Vc, tris);
}

Eigen::VectorXd random_vertex_field(const Complex& K, unsigned long seed, double amp) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-amp, amp);
  Eigen::VectorXd f(K.nvertices());
  for (int i = 0; i < f.size(); ++i) f[i] = unif(rng);
  return f;
}

} // namespace wdec
