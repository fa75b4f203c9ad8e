#include "wdec/complex.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace wdec {

int Complex::ncells(int p) const {
  if (p < 0 || p > dim()) return 0;
  return static_cast<int>(cells_[p].size());
}

const std::vector<Cell>& Complex::cells(int p) const {
  if (p < 0 || p > dim()) throw std::out_of_range("cell degree out of range");
  return cells_[p];
}

const SpMat& Complex::boundary(int p) const {
  if (p < 1 || p > dim()) throw std::out_of_range("boundary degree out of range");
  return boundary_[p];
}

SpMat Complex::coboundary(int p) const {
  if (p < 0 || p >= dim()) throw std::out_of_range("coboundary degree out of range");
  return SpMat(boundary_[p + 1].transpose());
}

const std::vector<int>& Complex::tops_of(int p, int cell) const {
  return tops_of_.at(p).at(cell);
}

const std::vector<std::vector<int>>& Complex::tensor_factor_degrees(int p) const {
  if (kind_ != ComplexKind::tensor) throw std::logic_error("not a tensor complex");
  return tensor_degrees_.at(p);
}

double Complex::point_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  if (kind_ == ComplexKind::simplicial) return (a - b).norm();
  double s = 0;
  for (size_t i = 0; i < factors_.size(); ++i) {
    double d = std::abs(a[static_cast<int>(i)] - b[static_cast<int>(i)]);
    if (factors_[i].circle) d = std::min(d, factors_[i].length - d);
    s += d * d;
  }
  return std::sqrt(s);
}

long Complex::euler_characteristic() const {
  long chi = 0;
  for (int p = 0; p <= dim(); ++p) chi += (p % 2 == 0 ? 1 : -1) * ncells(p);
  return chi;
}

void Complex::build_top_incidence() {
  int n = dim();
  tops_of_.assign(n + 1, {});
  for (int p = 0; p <= n; ++p) tops_of_[p].resize(cells_[p].size());
  int ntop = ncells(n);
  for (int t = 0; t < ntop; ++t) {
    // closure of top cell t, degree by degree
    std::vector<int> cur = {t};
    tops_of_[n][t].push_back(t);
    for (int p = n; p >= 1; --p) {
      std::set<int> faces;
      const SpMat& b = boundary_[p];
      for (int c : cur)
        for (SpMat::InnerIterator it(b, c); it; ++it) faces.insert(static_cast<int>(it.row()));
      cur.assign(faces.begin(), faces.end());
      for (int f : cur) tops_of_[p - 1][f].push_back(t);
    }
  }
}

Complex build_simplicial(const Eigen::MatrixXd& vertices,
                         const std::vector<std::vector<int>>& top_simplices) {
  if (top_simplices.empty()) throw std::invalid_argument("no top simplices");
  const int nv = static_cast<int>(vertices.rows());
  const int n = static_cast<int>(top_simplices.front().size()) - 1;
  if (n < 0) throw std::invalid_argument("empty simplex");

  std::set<std::vector<int>> seen_tops;
  std::vector<std::vector<int>> tops;
  for (auto s : top_simplices) {
    if (static_cast<int>(s.size()) != n + 1)
      throw std::invalid_argument("top simplices of mixed dimension");
    for (int v : s)
      if (v < 0 || v >= nv) throw std::invalid_argument("vertex index out of range");
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw std::invalid_argument("degenerate simplex (repeated vertex)");
    if (!seen_tops.insert(s).second)
      throw std::invalid_argument("duplicate top simplex");
    tops.push_back(s);
  }

  // Generate all faces, canonically ordered per degree.
  std::vector<std::set<std::vector<int>>> faces(n + 1);
  for (int v = 0; v < nv; ++v) faces[0].insert({v});
  for (const auto& s : tops) {
    // all sub-tuples of every size
    int m = n + 1;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      std::vector<int> f;
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) f.push_back(s[i]);
      faces[static_cast<int>(f.size()) - 1].insert(f);
    }
  }

  Complex K;
  K.kind_ = ComplexKind::simplicial;
  K.coords_ = vertices;
  K.cells_.resize(n + 1);
  std::vector<std::map<std::vector<int>, int>> index(n + 1);
  for (int p = 0; p <= n; ++p) {
    for (const auto& f : faces[p]) {
      index[p].emplace(f, static_cast<int>(K.cells_[p].size()));
      K.cells_[p].push_back(Cell{f});
    }
  }

  K.boundary_.resize(n + 1);
  for (int p = 1; p <= n; ++p) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int c = 0; c < static_cast<int>(K.cells_[p].size()); ++c) {
      const auto& verts = K.cells_[p][c].vertices;
      for (int k = 0; k <= p; ++k) {
        std::vector<int> f;
        for (int i = 0; i <= p; ++i)
          if (i != k) f.push_back(verts[i]);
        int r = index[p - 1].at(f);
        trip.emplace_back(r, c, (k % 2 == 0) ? 1.0 : -1.0);
      }
    }
    K.boundary_[p].resize(static_cast<int>(K.cells_[p - 1].size()),
                          static_cast<int>(K.cells_[p].size()));
    K.boundary_[p].setFromTriplets(trip.begin(), trip.end());
  }

  K.build_top_incidence();
  return K;
}

namespace {

// Cells of a single 1d factor: vertices first, then edges.
struct Factor1D {
  int nv = 0, ne = 0;
  bool circle = true;
  double h = 0;
  // coboundary of vertex j: list of (edge, sign)
  std::vector<std::vector<std::pair<int, double>>> dvert;
};

Factor1D make_factor(const FactorSpec& f) {
  if (f.length <= 0) throw std::invalid_argument("factor length must be positive");
  Factor1D r;
  r.circle = f.circle;
  if (f.circle) {
    if (f.cells < 3) throw std::invalid_argument("circle factor needs >= 3 cells");
    r.nv = f.cells;
    r.ne = f.cells;
  } else {
    if (f.cells < 1) throw std::invalid_argument("interval factor needs >= 1 cell");
    r.nv = f.cells + 1;
    r.ne = f.cells;
  }
  r.h = f.length / f.cells;
  r.dvert.resize(r.nv);
  // edge j runs from vertex j to vertex j+1 (mod nv on circles)
  for (int e = 0; e < r.ne; ++e) {
    int a = e;
    int b = (e + 1) % r.nv;
    r.dvert[a].emplace_back(e, -1.0);
    r.dvert[b].emplace_back(e, 1.0);
  }
  return r;
}

} // namespace

Complex product_grid(const std::vector<FactorSpec>& factors) {
  if (factors.empty()) throw std::invalid_argument("no factors");
  const int nf = static_cast<int>(factors.size());
  std::vector<Factor1D> fac;
  for (const auto& f : factors) fac.push_back(make_factor(f));

  Complex K;
  K.kind_ = ComplexKind::tensor;
  K.factors_ = factors;
  K.cells_.resize(nf + 1);
  K.tensor_degrees_.resize(nf + 1);

  // Enumerate factor-cell tuples in odometer order. Per factor, the local
  // cell id is 0..nv-1 for vertices then nv..nv+ne-1 for edges.
  std::vector<int> sizes(nf), radix(nf);
  for (int i = 0; i < nf; ++i) radix[i] = fac[i].nv + fac[i].ne;

  // map tuple -> (degree, index within degree)
  std::vector<long> strides(nf, 1);
  for (int i = nf - 2; i >= 0; --i) strides[i] = strides[i + 1] * radix[i + 1];
  long total = strides[0] * radix[0];
  std::vector<int> degree_of(total), index_of(total);

  std::vector<long> vstrides(nf, 1);
  for (int i = nf - 2; i >= 0; --i) vstrides[i] = vstrides[i + 1] * fac[i + 1].nv;

  std::vector<int> tup(nf, 0);
  for (long code = 0; code < total; ++code) {
    long c = code;
    int deg = 0;
    for (int i = 0; i < nf; ++i) {
      tup[i] = static_cast<int>(c / strides[i]);
      c %= strides[i];
      if (tup[i] >= fac[i].nv) deg++;
    }
    degree_of[code] = deg;
    index_of[code] = static_cast<int>(K.cells_[deg].size());
    // corner vertices of the product cell
    std::vector<std::vector<int>> fverts(nf);
    std::vector<int> fdeg(nf);
    for (int i = 0; i < nf; ++i) {
      if (tup[i] < fac[i].nv) {
        fverts[i] = {tup[i]};
        fdeg[i] = 0;
      } else {
        int e = tup[i] - fac[i].nv;
        fverts[i] = {e, (e + 1) % fac[i].nv};
        fdeg[i] = 1;
      }
    }
    std::vector<int> corners = {0};
    for (int i = 0; i < nf; ++i) {
      std::vector<int> next;
      for (int base : corners)
        for (int v : fverts[i]) next.push_back(base + static_cast<int>(v * vstrides[i]));
      corners = next;
    }
    std::sort(corners.begin(), corners.end());
    K.cells_[deg].push_back(Cell{corners});
    K.tensor_degrees_[deg].push_back(fdeg);
  }

  // vertex coordinates
  long nverts = vstrides[0] * fac[0].nv;
  K.coords_.resize(nverts, nf);
  for (long v = 0; v < nverts; ++v) {
    long c = v;
    for (int i = 0; i < nf; ++i) {
      int vi = static_cast<int>(c / vstrides[i]);
      c %= vstrides[i];
      K.coords_(v, i) = vi * fac[i].h;
    }
  }

  // Coboundary by the graded Leibniz rule, then boundary = transpose.
  std::vector<std::vector<Eigen::Triplet<double>>> cob(nf); // cob[p]: C^p -> C^{p+1}
  for (long code = 0; code < total; ++code) {
    int deg = degree_of[code];
    if (deg == nf) continue;
    int col = index_of[code];
    long c = code;
    int sign_deg = 0;
    for (int i = 0; i < nf; ++i) {
      int ti = static_cast<int>(c / strides[i]);
      c %= strides[i];
      if (ti >= fac[i].nv) {
        sign_deg++;
        continue;
      }
      double s = (sign_deg % 2 == 0) ? 1.0 : -1.0;
      for (auto [e, sgn] : fac[i].dvert[ti]) {
        long code2 = code + (fac[i].nv + e - ti) * strides[i];
        cob[deg].emplace_back(index_of[code2], col, s * sgn);
      }
    }
  }
  K.boundary_.resize(nf + 1);
  for (int p = 1; p <= nf; ++p) {
    SpMat d(static_cast<int>(K.cells_[p].size()), static_cast<int>(K.cells_[p - 1].size()));
    d.setFromTriplets(cob[p - 1].begin(), cob[p - 1].end());
    K.boundary_[p] = SpMat(d.transpose());
  }

  K.build_top_incidence();
  return K;
}

std::vector<int> DomainTag::closure_indices(int p) const {
  std::vector<int> idx;
  for (int c = 0; c < static_cast<int>(in_closure[p].size()); ++c)
    if (in_closure[p][c]) idx.push_back(c);
  return idx;
}

std::vector<int> DomainTag::interface_indices(int p) const {
  std::vector<int> idx;
  for (int c = 0; c < static_cast<int>(on_interface[p].size()); ++c)
    if (on_interface[p][c]) idx.push_back(c);
  return idx;
}

int DomainTag::n_interface(int p) const {
  int k = 0;
  for (char f : on_interface[p]) k += f;
  return k;
}

DomainTag tag_domain(const Complex& K, const std::function<bool(int)>& top_predicate) {
  int n = K.dim();
  int ntop = K.ncells(n);
  DomainTag tag;
  tag.top_in_U.resize(ntop);
  int count = 0;
  for (int t = 0; t < ntop; ++t) {
    tag.top_in_U[t] = top_predicate(t) ? 1 : 0;
    count += tag.top_in_U[t];
  }
  if (count == 0) throw std::invalid_argument("domain selects no top cells");
  if (count == ntop) throw std::invalid_argument("domain selects all top cells");

  tag.in_closure.resize(n + 1);
  tag.on_interface.resize(n + 1);
  tag.in_complement.resize(n + 1);
  for (int p = 0; p <= n; ++p) {
    int nc = K.ncells(p);
    tag.in_closure[p].assign(nc, 0);
    tag.on_interface[p].assign(nc, 0);
    tag.in_complement[p].assign(nc, 0);
    for (int c = 0; c < nc; ++c) {
      bool in_u = false, in_c = false;
      for (int t : K.tops_of(p, c)) (tag.top_in_U[t] ? in_u : in_c) = true;
      if (in_u) tag.in_closure[p][c] = 1;
      if (in_u && in_c) tag.on_interface[p][c] = 1;
      if (in_c && !in_u) tag.in_complement[p][c] = 1;
    }
  }
  return tag;
}

DomainTag complement_domain(const Complex& K, const DomainTag& U) {
  return tag_domain(K, [&U](int t) { return !U.top_in_U[t]; });
}

} // namespace wdec
