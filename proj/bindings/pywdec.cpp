#include "wdec/cohomology.hpp"
#include "wdec/deform.hpp"
#include "wdec/meshes.hpp"
#include "wdec/model1d.hpp"
#include "wdec/spectral.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace wdec;

PYBIND11_MODULE(pywdec, m) {
  m.doc() = "weighted discrete exterior calculus: Laplacian spectra on cochains";

  py::class_<FactorSpec>(m, "FactorSpec")
      .def(py::init([](bool circle, int cells, double length) {
             return FactorSpec{circle, cells, length};
           }),
           py::arg("circle"), py::arg("cells"), py::arg("length") = 1.0)
      .def_readwrite("circle", &FactorSpec::circle)
      .def_readwrite("cells", &FactorSpec::cells)
      .def_readwrite("length", &FactorSpec::length);

  py::class_<Complex>(m, "Complex")
      .def("dim", &Complex::dim)
      .def("ncells", &Complex::ncells)
      .def("nvertices", &Complex::nvertices)
      .def("boundary", &Complex::boundary, py::return_value_policy::copy)
      .def("coboundary", &Complex::coboundary)
      .def("vertex_coords", &Complex::vertex_coords, py::return_value_policy::copy)
      .def("cell_vertices",
           [](const Complex& K, int p, int i) { return K.cells(p).at(i).vertices; },
           py::arg("p"), py::arg("i"))
      .def("euler_characteristic", &Complex::euler_characteristic);

  m.def("build_simplicial", &build_simplicial, py::arg("vertices"), py::arg("tops"));
  m.def("product_grid", &product_grid, py::arg("factors"));
  m.def("icosphere", &icosphere, py::arg("subdivisions"));
  m.def("random_complex", &random_complex, py::arg("seed"));

  py::class_<DomainTag>(m, "DomainTag")
      .def("closure_indices", &DomainTag::closure_indices)
      .def("interface_indices", &DomainTag::interface_indices)
      .def("n_interface", &DomainTag::n_interface);

  m.def("tag_domain",
        [](const Complex& K, const std::vector<int>& tops) {
          std::vector<char> sel(K.ncells(K.dim()), 0);
          for (int t : tops) sel.at(t) = 1;
          return tag_domain(K, [&](int t) { return sel[t] != 0; });
        },
        py::arg("complex"), py::arg("tops"));
  m.def("equatorial_band", &equatorial_band, py::arg("complex"), py::arg("zmax"));

  py::class_<Geometry>(m, "Geometry").def("total_volume", &Geometry::total_volume);
  m.def("make_geometry", &make_geometry);

  py::class_<WeightField>(m, "WeightField").def("max_abs", &WeightField::max_abs);
  m.def("weight_from_vertex_values", &weight_from_vertex_values);
  m.def("random_vertex_field", &random_vertex_field, py::arg("complex"), py::arg("seed"),
        py::arg("amp"));
  m.def("zero_weight", &zero_weight);
  m.def("constant_weight", &constant_weight);

  py::enum_<Gauge>(m, "Gauge")
      .value("weighted", Gauge::weighted)
      .value("twisted", Gauge::twisted);
  py::enum_<MassScheme>(m, "MassScheme")
      .value("lumped", MassScheme::lumped)
      .value("consistent", MassScheme::consistent);

  py::class_<OperatorBundle>(m, "OperatorBundle")
      .def("dim_at", &OperatorBundle::dim_at)
      .def("mass_diagonal", &OperatorBundle::mass_diagonal)
      .def("coboundary", [](const OperatorBundle& b, int p) { return b.D.at(p); })
      .def("mass", [](const OperatorBundle& b, int p) { return b.M.at(p); })
      .def("up_stiffness", [](const OperatorBundle& b, int p) { return b.A.at(p); });

  m.def("make_bundle",
        [](const Complex& K, const Geometry& g, const WeightField& phi, Gauge gauge,
           MassScheme scheme) { return make_bundle(K, g, phi, gauge, scheme); },
        py::arg("complex"), py::arg("geometry"), py::arg("phi"),
        py::arg("gauge") = Gauge::weighted, py::arg("scheme") = MassScheme::lumped);

  py::class_<SolveOptions>(m, "SolveOptions")
      .def(py::init<>())
      .def_readwrite("tol", &SolveOptions::tol)
      .def_readwrite("dense_threshold", &SolveOptions::dense_threshold)
      .def_readwrite("seed", &SolveOptions::seed)
      .def_readwrite("max_iter", &SolveOptions::max_iter)
      .def_readwrite("harmonic_hint", &SolveOptions::harmonic_hint)
      .def_readwrite("harmonic_tol", &SolveOptions::harmonic_tol);

  py::enum_<EigClass>(m, "EigClass")
      .value("harmonic", EigClass::harmonic)
      .value("exact", EigClass::exact)
      .value("coexact", EigClass::coexact);

  py::class_<SpectrumResult>(m, "SpectrumResult")
      .def_readonly("p", &SpectrumResult::p)
      .def_readonly("harmonic_dim", &SpectrumResult::harmonic_dim)
      .def_readonly("values", &SpectrumResult::values)
      .def_readonly("kinds", &SpectrumResult::kinds)
      .def_readonly("vectors", &SpectrumResult::vectors)
      .def_readonly("residuals", &SpectrumResult::residuals)
      .def_readonly("method", &SpectrumResult::method)
      .def("coexact", &SpectrumResult::coexact)
      .def("exact_part", &SpectrumResult::exact_part);

  m.def("full_hodge_spectrum", &full_hodge_spectrum, py::arg("bundle"), py::arg("p"),
        py::arg("k"), py::arg("options") = SolveOptions{});
  m.def("coexact_spectrum", &coexact_spectrum, py::arg("bundle"), py::arg("p"),
        py::arg("k"), py::arg("options") = SolveOptions{});
  m.def("minmax_bruteforce", &minmax_bruteforce, py::arg("bundle"), py::arg("p"),
        py::arg("i"));

  m.def("betti", py::overload_cast<const Complex&, int>(&betti));
  m.def("betti_domain", py::overload_cast<const Complex&, const DomainTag&, int>(&betti));
  m.def("restriction_rank", &restriction_rank);
  m.def("quotient_dimension", &quotient_dimension);

  m.def("collapse_family", &collapse_family, py::arg("complex"), py::arg("geometry"),
        py::arg("phi"), py::arg("domain"), py::arg("eps"), py::arg("alpha"));
  m.def("smoothing_sequence", &smoothing_sequence, py::arg("complex"), py::arg("geometry"),
        py::arg("phi"), py::arg("domain"), py::arg("eps"), py::arg("alpha"), py::arg("j"));
  m.def("conformal_rescale", &conformal_rescale);

  py::class_<Grid1D>(m, "Grid1D")
      .def_readonly("nodes", &Grid1D::nodes)
      .def_readonly("x", &Grid1D::x)
      .def_readonly("phi", &Grid1D::phi)
      .def("h", &Grid1D::h);
  m.def("make_circle_grid", &make_circle_grid);
  m.def("make_interval_grid", &make_interval_grid);

  py::class_<CircleSpectrum>(m, "CircleSpectrum")
      .def_readonly("functions", &CircleSpectrum::functions)
      .def_readonly("one_forms", &CircleSpectrum::one_forms);
  m.def("circle_witten_spectrum", &circle_witten_spectrum);
  py::enum_<IntervalBc>(m, "IntervalBc")
      .value("natural", IntervalBc::natural)
      .value("fixed", IntervalBc::fixed);
  m.def("interval_witten_spectrum", &interval_witten_spectrum);
  m.def("richardson4", &richardson4);
}
