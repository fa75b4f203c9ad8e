#pragma once

#include "wdec/spectral.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace wdec {

/// Mesh description parsed from JSON. Simplicial form:
///   { "dimension": n, "vertices": [[x,...],...], "cells": [[v0,...,vn],...],
///     "phi": [per-vertex], "domain": [top cell ids] }
/// Tensor form:
///   { "product": [ {"kind":"circle"|"interval", "cells":k, "length":L}, ... ] }
struct MeshInput {
  Complex complex;
  Eigen::VectorXd phi_vertex;    // empty when absent
  std::vector<int> domain_tops;  // empty when absent
};

nlohmann::json load_json_file(const std::string& path);
MeshInput parse_mesh(const nlohmann::json& j);

struct SpectrumRow {
  int degree = 0;
  std::string kind;
  int index = 0;
  double eigenvalue = 0;
  double residual = 0;
};

std::vector<SpectrumRow> spectrum_rows(const SpectrumResult& r);

/// Deterministic number formatting shared by all CSV output.
std::string format_double(double v);

/// Writes the versioned spectrum CSV (degree, kind, index, eigenvalue,
/// residual).
void write_spectrum_csv(const std::string& path, const std::vector<SpectrumRow>& rows);

void write_text_file(const std::string& path, const std::string& content);

} // namespace wdec
