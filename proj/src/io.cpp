#include "wdec/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wdec {

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  f >> j;
  return j;
}

MeshInput parse_mesh(const nlohmann::json& j) {
  MeshInput m;
  if (j.contains("product")) {
    std::vector<FactorSpec> fs;
    for (const auto& f : j.at("product")) {
      FactorSpec spec;
      std::string kind = f.at("kind").get<std::string>();
      if (kind == "circle")
        spec.circle = true;
      else if (kind == "interval")
        spec.circle = false;
      else
        throw std::invalid_argument("factor kind must be circle or interval");
      spec.cells = f.at("cells").get<int>();
      spec.length = f.value("length", 1.0);
      fs.push_back(spec);
    }
    m.complex = product_grid(fs);
  } else {
    int n = j.at("dimension").get<int>();
    const auto& jv = j.at("vertices");
    Eigen::MatrixXd V(jv.size(), jv.empty() ? 0 : jv[0].size());
    for (size_t i = 0; i < jv.size(); ++i)
      for (size_t c = 0; c < jv[i].size(); ++c)
        V(static_cast<int>(i), static_cast<int>(c)) = jv[i][c].get<double>();
    std::vector<std::vector<int>> tops;
    for (const auto& cell : j.at("cells")) {
      std::vector<int> t = cell.get<std::vector<int>>();
      if (static_cast<int>(t.size()) != n + 1)
        throw std::invalid_argument("top cell arity does not match dimension");
      tops.push_back(std::move(t));
    }
    m.complex = build_simplicial(V, tops);
  }
  if (j.contains("phi")) {
    const auto& jp = j.at("phi");
    m.phi_vertex.resize(jp.size());
    for (size_t i = 0; i < jp.size(); ++i)
      m.phi_vertex[static_cast<int>(i)] = jp[i].get<double>();
  }
  if (j.contains("domain")) m.domain_tops = j.at("domain").get<std::vector<int>>();
  return m;
}

std::vector<SpectrumRow> spectrum_rows(const SpectrumResult& r) {
  std::vector<SpectrumRow> rows;
  int idx[3] = {0, 0, 0};
  for (int i = 0; i < r.values.size(); ++i) {
    SpectrumRow row;
    row.degree = r.p;
    int ki = static_cast<int>(r.kinds[i]);
    row.kind = r.kinds[i] == EigClass::harmonic ? "harmonic"
               : r.kinds[i] == EigClass::exact  ? "exact"
                                                : "coexact";
    row.index = ++idx[ki];
    row.eigenvalue = r.values[i];
    row.residual = r.residuals[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_spectrum_csv(const std::string& path, const std::vector<SpectrumRow>& rows) {
  std::ostringstream out;
  out << "# spectrum-csv v1\n";
  out << "degree,kind,index,eigenvalue,residual\n";
  for (const auto& r : rows)
    out << r.degree << ',' << r.kind << ',' << r.index << ','
        << format_double(r.eigenvalue) << ',' << format_double(r.residual) << '\n';
  write_text_file(path, out.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
}

} // namespace wdec
