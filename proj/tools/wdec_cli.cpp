// Experiment runner: loads a manifest, executes one named experiment and
// writes results.csv, summary.json and plot data under the output directory.

#include "wdec/cohomology.hpp"
#include "wdec/deform.hpp"
#include "wdec/expr.hpp"
#include "wdec/io.hpp"
#include "wdec/meshes.hpp"
#include "wdec/model1d.hpp"
#include "wdec/spectral.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wdec;

namespace {

struct RunContext {
  std::string manifest_path;
  std::string out_dir = "out";
  unsigned long seed = 20240917ul;
  double tol = 1e-10;
  int dense_threshold = 2000;

  json manifest;
  json summary;
  bool failed = false;

  SolveOptions solve_options() const {
    SolveOptions o;
    o.tol = tol;
    o.seed = seed;
    o.dense_threshold = dense_threshold;
    return o;
  }

  void load() {
    manifest = load_json_file(manifest_path);
    fs::create_directories(out_dir);
    fs::create_directories(out_dir + "/plotdata");
  }

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    json a;
    a["name"] = name;
    a["pass"] = ok;
    if (!detail.empty()) a["detail"] = detail;
    summary["assertions"].push_back(a);
    if (!ok) {
      failed = true;
      std::cerr << "FAILED: " << name << (detail.empty() ? "" : " (" + detail + ")")
                << "\n";
    }
  }

  int finish() {
    summary["seed"] = seed;
    summary["tol"] = tol;
    write_text_file(out_dir + "/summary.json", summary.dump(2) + "\n");
    return failed ? 1 : 0;
  }
};

MeshInput mesh_from_manifest(const RunContext& ctx) {
  const json& m = ctx.manifest.at("mesh");
  if (m.is_string()) {
    fs::path p = fs::path(ctx.manifest_path).parent_path() / m.get<std::string>();
    return parse_mesh(load_json_file(p.string()));
  }
  if (m.contains("builtin")) {
    std::string name = m.at("builtin").get<std::string>();
    if (name == "icosphere") {
      MeshInput mi;
      mi.complex = icosphere(m.value("subdivisions", 3));
      return mi;
    }
    throw std::invalid_argument("unknown builtin mesh " + name);
  }
  return parse_mesh(m);
}

Eigen::VectorXd field_from_manifest(const Complex& K, const json& j,
                                    const std::string& key) {
  if (!j.contains(key)) return Eigen::VectorXd::Zero(K.nvertices());
  const json& f = j.at(key);
  Eigen::VectorXd v(K.nvertices());
  if (f.is_string()) {
    Expr e(f.get<std::string>());
    for (int i = 0; i < K.nvertices(); ++i)
      v[i] = e.eval(K.vertex_coords().row(i).transpose());
  } else {
    if (static_cast<int>(f.size()) != K.nvertices())
      throw std::invalid_argument(key + " array size does not match vertex count");
    for (int i = 0; i < K.nvertices(); ++i) v[i] = f[i].get<double>();
  }
  return v;
}

std::string csv_of(const std::vector<SpectrumRow>& rows) {
  std::ostringstream out;
  out << "# spectrum-csv v1\n";
  out << "degree,kind,index,eigenvalue,residual\n";
  for (const auto& r : rows)
    out << r.degree << ',' << r.kind << ',' << r.index << ','
        << format_double(r.eigenvalue) << ',' << format_double(r.residual) << '\n';
  return out.str();
}

int run_spectrum(RunContext& ctx) {
  MeshInput mi = mesh_from_manifest(ctx);
  const Complex& K = mi.complex;
  Geometry g = make_geometry(K);
  WeightField phi = mi.phi_vertex.size()
                        ? weight_from_vertex_values(K, mi.phi_vertex)
                        : weight_from_vertex_values(
                              K, field_from_manifest(K, ctx.manifest, "phi"));
  OperatorBundle b = make_bundle(K, g, phi);
  int k = ctx.manifest.value("k", 6);

  std::vector<SpectrumRow> rows;
  json hdims = json::array();
  for (int p = 0; p <= K.dim(); ++p) {
    SpectrumResult r = full_hodge_spectrum(b, p, k, ctx.solve_options());
    hdims.push_back(r.harmonic_dim);
    ctx.check("residuals p=" + std::to_string(p),
              r.residuals.maxCoeff() <= ctx.tol * 10);
    auto pr = spectrum_rows(r);
    rows.insert(rows.end(), pr.begin(), pr.end());
  }
  ctx.summary["identity"] = "full spectrum with harmonic/exact/coexact split";
  ctx.summary["harmonic_dims"] = hdims;
  write_text_file(ctx.out_dir + "/results.csv", csv_of(rows));
  return ctx.finish();
}

int run_duality(RunContext& ctx) {
  ctx.summary["identity"] =
      "spectrum of the weight phi at degree p matches -phi at degree n-p-1";
  std::string phi_text = ctx.manifest.value("phi", "cos(x) + 0.5*sin(2*x)");
  Expr e(phi_text);
  auto phi_f = [&](double x) {
    Eigen::VectorXd c(1);
    c[0] = x;
    return e.eval(c);
  };
  auto phi_m = [&](double x) { return -phi_f(x); };

  std::vector<int> grids = ctx.manifest.value("grids", std::vector<int>{256, 512, 1024});
  int k = ctx.manifest.value("k", 6);
  double threshold = ctx.manifest.value("threshold", 1e-4);
  double length = ctx.manifest.value("length", 2 * M_PI);

  std::ostringstream csv;
  csv << "# duality-csv v1\ngrid,index,plus,minus,diff\n";
  std::vector<Eigen::VectorXd> diffs;
  for (int n : grids) {
    CircleSpectrum sp = circle_witten_spectrum(make_circle_grid(n, length, phi_f), k);
    CircleSpectrum sm = circle_witten_spectrum(make_circle_grid(n, length, phi_m), k);
    Eigen::VectorXd d = (sp.functions - sm.functions).cwiseAbs();
    diffs.push_back(d);
    for (int i = 0; i < k; ++i)
      csv << n << ',' << i << ',' << format_double(sp.functions[i]) << ','
          << format_double(sm.functions[i]) << ',' << format_double(d[i]) << '\n';
  }
  Eigen::VectorXd extrap =
      richardson4(diffs[diffs.size() - 2], diffs.back()).cwiseAbs();
  ctx.summary["extrapolated_diffs"] = std::vector<double>(
      extrap.data(), extrap.data() + extrap.size());
  ctx.check("circle self-duality after extrapolation",
            extrap.head(std::min<int>(k, 6)).maxCoeff() < threshold,
            "max " + format_double(extrap.maxCoeff()));
  write_text_file(ctx.out_dir + "/results.csv", csv.str());
  return ctx.finish();
}

int run_kunneth(RunContext& ctx) {
  ctx.summary["identity"] =
      "product spectrum equals sums of factor spectra on a metric product";
  int cells = ctx.manifest.value("cells", 64);
  double length = ctx.manifest.value("length", 2 * M_PI);
  int k = ctx.manifest.value("k", 10);
  std::string f1 = ctx.manifest.value("phi1", "0.4*cos(x)");
  std::string f2 = ctx.manifest.value("phi2", "0.3*sin(x)");

  auto factor = [&](const std::string& text) {
    Complex K = product_grid({FactorSpec{true, cells, length}});
    Expr e(text);
    Eigen::VectorXd pv(K.nvertices());
    for (int i = 0; i < K.nvertices(); ++i)
      pv[i] = e.eval(K.vertex_coords().row(i).transpose());
    Geometry g = make_geometry(K);
    OperatorBundle b = make_bundle(K, g, weight_from_vertex_values(K, pv));
    std::vector<Eigen::VectorXd> spec;
    SolveOptions o = ctx.solve_options();
    for (int p = 0; p <= 1; ++p)
      spec.push_back(full_hodge_spectrum(b, p, std::min(3 * k, cells), o).values);
    return spec;
  };
  auto s1 = factor(f1), s2 = factor(f2);

  Complex K = product_grid({FactorSpec{true, cells, length}, FactorSpec{true, cells, length}});
  Expr e1(f1), e2(f2);
  Eigen::VectorXd pv(K.nvertices());
  for (int i = 0; i < K.nvertices(); ++i) {
    Eigen::VectorXd c(1);
    c[0] = K.vertex_coords()(i, 0);
    double a = e1.eval(c);
    c[0] = K.vertex_coords()(i, 1);
    pv[i] = a + e2.eval(c);
  }
  Geometry g = make_geometry(K);
  OperatorBundle b = make_bundle(K, g, weight_from_vertex_values(K, pv));

  std::ostringstream csv;
  csv << "# kunneth-csv v1\ndegree,index,product,factor_sum,rel_error\n";
  SolveOptions o = ctx.solve_options();
  for (int q = 0; q <= 2; ++q) {
    SpectrumResult r = full_hodge_spectrum(b, q, k, o);
    std::vector<double> sums;
    for (int a = std::max(0, q - 1); a <= std::min(1, q); ++a)
      for (int i = 0; i < s1[a].size(); ++i)
        for (int j = 0; j < s2[q - a].size(); ++j)
          sums.push_back(s1[a][i] + s2[q - a][j]);
    std::sort(sums.begin(), sums.end());
    double worst = 0;
    for (int i = 0; i < k; ++i) {
      double denom = std::max(1.0, std::abs(sums[i]));
      double rel = std::abs(r.values[i] - sums[i]) / denom;
      worst = std::max(worst, rel);
      csv << q << ',' << i << ',' << format_double(r.values[i]) << ','
          << format_double(sums[i]) << ',' << format_double(rel) << '\n';
    }
    ctx.check("factor sums q=" + std::to_string(q), worst <= 1e-9,
              "worst " + format_double(worst));
  }
  write_text_file(ctx.out_dir + "/results.csv", csv.str());
  return ctx.finish();
}

DomainTag domain_from_manifest(const RunContext& ctx, const Complex& K,
                               const MeshInput& mi) {
  if (ctx.manifest.contains("band"))
    return equatorial_band(K, ctx.manifest.at("band").get<double>());
  if (!mi.domain_tops.empty()) {
    std::vector<char> sel(K.ncells(K.dim()), 0);
    for (int t : mi.domain_tops) sel.at(t) = 1;
    return tag_domain(K, [&](int t) { return sel[t] != 0; });
  }
  throw std::invalid_argument("manifest does not define a domain");
}

int run_collapse(RunContext& ctx) {
  ctx.summary["identity"] =
      "collapsing the complement drives d_p extra eigenvalues to zero and the "
      "rest to the domain spectrum";
  MeshInput mi = mesh_from_manifest(ctx);
  const Complex& K = mi.complex;
  Geometry g = make_geometry(K);
  WeightField phi = weight_from_vertex_values(K, field_from_manifest(K, ctx.manifest, "phi"));
  DomainTag U = domain_from_manifest(ctx, K, mi);
  double alpha = ctx.manifest.value("alpha", 2.0);
  int p = ctx.manifest.value("degree", 1);
  int k = ctx.manifest.value("k", 4);
  std::vector<double> epsilons =
      ctx.manifest.value("epsilons", std::vector<double>{1e-1, 1e-2, 1e-3});

  int dp = quotient_dimension(K, U, p);
  ctx.summary["d_p"] = dp;

  SolveOptions o = ctx.solve_options();
  // Low domain eigenvalues are dominated by exact modes; widen the request
  // until k coexact ones are in range.
  std::vector<double> target;
  for (int kd = k + dp + 2; static_cast<int>(target.size()) < k && kd <= 16 * (k + dp + 2);
       kd *= 2)
    target = domain_spectrum(K, U, BoundaryCondition::absolute, g, phi, p, kd, o)
                 .coexact();
  if (static_cast<int>(target.size()) < k) {
    ctx.check("domain spectrum yields k coexact values", false,
              "got " + std::to_string(target.size()));
    return ctx.finish();
  }

  // The rescaled metrics stay metrics on the closed complex, so the pencil
  // kernel dimension is the Betti number at every eps; pinning it keeps the
  // near-zero collapsing eigenvalues classified as coexact.
  SolveOptions oc = o;
  oc.harmonic_hint = betti(K, p);

  std::ostringstream plot;
  plot << "# collapse-plot v1\neps,index,eigenvalue\n";
  std::vector<std::vector<double>> sweeps;
  for (double eps : epsilons) {
    auto [ge, pe] = collapse_family(K, g, phi, U, eps, alpha);
    OperatorBundle b = make_bundle(K, ge, pe);
    SpectrumResult r = coexact_spectrum(b, p, dp + k, oc);
    std::vector<double> mus(r.values.data(), r.values.data() + r.values.size());
    if (static_cast<int>(mus.size()) < dp + k) {
      ctx.check("collapse sweep yields d_p + k coexact values", false,
                "eps " + format_double(eps) + " got " + std::to_string(mus.size()));
      return ctx.finish();
    }
    for (size_t i = 0; i < mus.size(); ++i)
      plot << format_double(eps) << ',' << i << ',' << format_double(mus[i]) << '\n';
    sweeps.push_back(std::move(mus));
  }
  for (int i = 0; i < dp; ++i)
    for (size_t s = 1; s < sweeps.size(); ++s)
      ctx.check("vanishing eigenvalue " + std::to_string(i) + " step " +
                    std::to_string(s),
                sweeps[s][i] <= sweeps[s - 1][i] / 5.0);
  double worst = 0;
  for (int i = 0; i < k; ++i)
    worst = std::max(worst,
                     std::abs(sweeps.back()[dp + i] - target[i]) / target[i]);
  ctx.check("survivors match domain spectrum", worst <= 0.05,
            "worst " + format_double(worst));
  write_text_file(ctx.out_dir + "/plotdata/trajectories.csv", plot.str());
  write_text_file(ctx.out_dir + "/results.csv", plot.str());
  return ctx.finish();
}

int run_puncture(RunContext& ctx) {
  ctx.summary["identity"] =
      "removing a shrinking ball leaves the low spectrum convergent to the "
      "closed one";
  MeshInput mi = mesh_from_manifest(ctx);
  const Complex& K = mi.complex;
  Geometry g = make_geometry(K);
  WeightField phi = weight_from_vertex_values(K, field_from_manifest(K, ctx.manifest, "phi"));
  int center = ctx.manifest.value("center", 0);
  int k = ctx.manifest.value("k", 5);
  std::vector<double> radii = ctx.manifest.value("radii", std::vector<double>{4, 2, 1});
  double cell = ctx.manifest.value("cell_size", 0.0);
  if (cell <= 0) {
    const auto& f = K.factors();
    if (f.empty()) throw std::invalid_argument("cell_size required for simplicial meshes");
    cell = f[0].length / f[0].cells;
  }

  SolveOptions o = ctx.solve_options();
  OperatorBundle closed = make_bundle(K, g, phi);
  std::vector<int> degrees = ctx.manifest.value("degrees", std::vector<int>{0, 1});

  std::ostringstream csv;
  csv << "# puncture-csv v1\nradius,degree,index,closed,punctured,rel_error\n";
  for (int p : degrees) {
    SpectrumResult base = coexact_spectrum(closed, p, k, o);
    double prev = 1e300;
    for (double rc : radii) {
      PunctureResult pr = puncture_family(K, g, phi, center, rc * cell);
      SpectrumResult dom = domain_spectrum(K, pr.domain, BoundaryCondition::absolute,
                                           g, pr.phi, p, k + 4, o);
      std::vector<double> mus = dom.coexact();
      double err = 0;
      for (int i = 0; i < k; ++i) {
        double rel = std::abs(mus[i] - base.values[i]) / base.values[i];
        err = std::max(err, rel);
        csv << format_double(rc) << ',' << p << ',' << i << ','
            << format_double(base.values[i]) << ',' << format_double(mus[i]) << ','
            << format_double(rel) << '\n';
      }
      ctx.check("error decreasing p=" + std::to_string(p) + " r=" + format_double(rc),
                err < prev, format_double(err));
      prev = err;
    }
    ctx.check("final error p=" + std::to_string(p), prev < 0.02,
              format_double(prev));
  }
  write_text_file(ctx.out_dir + "/results.csv", csv.str());
  return ctx.finish();
}

int run_conformal_sweep(RunContext& ctx) {
  ctx.summary["identity"] =
      "scale-normalized first eigenvalue over random conformal factors in the "
      "weighted class";
  MeshInput mi = mesh_from_manifest(ctx);
  const Complex& K = mi.complex;
  Geometry g0 = make_geometry(K);
  WeightField phi0 = weight_from_vertex_values(K, field_from_manifest(K, ctx.manifest, "phi"));
  double alpha = ctx.manifest.value("alpha", 0.0);
  int samples = ctx.manifest.value("samples", 20);
  double amp = ctx.manifest.value("amplitude", 1.0);
  int n = K.dim();
  std::vector<int> degrees = ctx.manifest.value("degrees", std::vector<int>{0});

  SolveOptions o = ctx.solve_options();
  std::ostringstream csv;
  csv << "# conformal-sweep-csv v1\nsample,degree,mu1,volume,normalized\n";
  json floors = json::object();
  for (int p : degrees) {
    double floor = 1e300;
    for (int s = 0; s < samples; ++s) {
      Eigen::VectorXd uv = random_vertex_field(K, ctx.seed + 977 * s + p, amp);
      auto u = sample_vertex_field(K, uv);
      auto [g, phi] = conformal_rescale(g0, phi0, u, alpha);
      OperatorBundle b = make_bundle(K, g, phi);
      double mu1 = coexact_spectrum(b, p, 1, o).values[0];
      double vol = g.total_volume();
      double norm = mu1 * std::pow(vol, 2.0 / n);
      floor = std::min(floor, norm);
      csv << s << ',' << p << ',' << format_double(mu1) << ','
          << format_double(vol) << ',' << format_double(norm) << '\n';
    }
    floors[std::to_string(p)] = floor;
    ctx.check("normalized eigenvalue floor positive p=" + std::to_string(p),
              floor > 0, format_double(floor));
  }
  ctx.summary["floors"] = floors;
  write_text_file(ctx.out_dir + "/results.csv", csv.str());
  return ctx.finish();
}

int run_three_forms(RunContext& ctx) {
  ctx.summary["identity"] =
      "the three operator expressions agree with coefficient 2 on the "
      "zero-order Hessian term, and the twisted differential does not square "
      "to zero for non-gradient fields";
  std::string phi_text = ctx.manifest.value("phi", "cos(x)");
  Expr e(phi_text);
  auto phi_f = [&](double x) {
    Eigen::VectorXd c(1);
    c[0] = x;
    return e.eval(c);
  };
  std::vector<int> grids = ctx.manifest.value("grids", std::vector<int>{64, 128, 256});
  double length = ctx.manifest.value("length", 2 * M_PI);

  std::ostringstream csv;
  csv << "# three-forms-csv v1\ngrid,degree,coeff,diff_lie,diff_zeroth\n";
  std::vector<double> d2, d1;
  for (int n : grids) {
    Grid1D grid = make_circle_grid(n, length, phi_f);
    for (int p : {0, 1}) {
      ThreeForms good = assemble_three_forms(grid, p, 2.0);
      ThreeForms bad = assemble_three_forms(grid, p, 1.0);
      csv << n << ',' << p << ",2," << format_double(good.diff_lie) << ','
          << format_double(good.diff_zeroth) << '\n';
      csv << n << ',' << p << ",1," << format_double(bad.diff_lie) << ','
          << format_double(bad.diff_zeroth) << '\n';
      if (p == 1) {
        d2.push_back(good.diff_zeroth);
        d1.push_back(bad.diff_zeroth);
      }
    }
  }
  double order = std::log2(d2[d2.size() - 2] / d2.back());
  ctx.check("agreement order with coefficient 2", order >= 2.0,
            "order " + format_double(order));
  ctx.check("stagnation with coefficient 1", d1.back() > 0.5 * d1.front(),
            format_double(d1.back()));

  auto ts = twisted_square(
      ctx.manifest.value("square_cells", 64), length,
      [](double, double y) { return std::sin(y); },
      [](double, double) { return 0.0; },
      [](double x, double) { return 1.0 + 0.3 * std::cos(x); });
  ctx.check("twisted square equals f * d(X flat)", ts.max_diff < 1e-6,
            format_double(ts.max_diff));
  ctx.check("twisted square nonzero",
            ts.applied.cwiseAbs().maxCoeff() > 0.5);
  write_text_file(ctx.out_dir + "/results.csv", csv.str());
  return ctx.finish();
}

int run_oracle(RunContext& ctx) {
  ctx.summary["identity"] =
      "variational brute force over exact subspaces matches the eigensolver";
  int count = ctx.manifest.value("count", 10);
  int k = ctx.manifest.value("k", 3);
  SolveOptions o = ctx.solve_options();

  std::ostringstream csv;
  csv << "# oracle-csv v1\ncomplex,degree,index,solver,bruteforce,rel_error\n";
  double worst = 0;
  for (int c = 0; c < count; ++c) {
    Complex K = random_complex(ctx.seed + 31 * c);
    Geometry g = make_geometry(K);
    WeightField phi =
        weight_from_vertex_values(K, random_vertex_field(K, ctx.seed + 7 * c, 0.8));
    OperatorBundle b = make_bundle(K, g, phi);
    for (int p = 0; p < K.dim(); ++p) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu{Eigen::MatrixXd(b.D[p])};
      lu.setThreshold(1e-10);
      int kk = std::min<int>(k, static_cast<int>(lu.rank()));
      if (kk == 0) continue;
      SpectrumResult r = coexact_spectrum(b, p, kk, o);
      for (int i = 1; i <= kk; ++i) {
        double bf = minmax_bruteforce(b, p, i);
        double rel = std::abs(bf - r.values[i - 1]) / std::max(1e-30, bf);
        worst = std::max(worst, rel);
        csv << c << ',' << p << ',' << i << ',' << format_double(r.values[i - 1])
            << ',' << format_double(bf) << ',' << format_double(rel) << '\n';
      }
    }
  }
  ctx.check("oracle equivalence", worst <= 1e-10, "worst " + format_double(worst));
  write_text_file(ctx.out_dir + "/results.csv", csv.str());
  return ctx.finish();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted discrete exterior calculus experiment runner"};
  app.require_subcommand(1);

  RunContext ctx;
  app.add_option("--manifest", ctx.manifest_path, "experiment manifest (JSON)");
  app.add_option("--out", ctx.out_dir, "output directory");
  app.add_option("--seed", ctx.seed, "random seed");
  app.add_option("--tol", ctx.tol, "solver tolerance");
  app.add_option("--dense-threshold", ctx.dense_threshold,
                 "dense eigensolver size limit");

  std::map<std::string, int (*)(RunContext&)> runners = {
      {"spectrum", run_spectrum},
      {"duality", run_duality},
      {"kunneth", run_kunneth},
      {"collapse", run_collapse},
      {"puncture", run_puncture},
      {"conformal-sweep", run_conformal_sweep},
      {"three-forms", run_three_forms},
      {"oracle", run_oracle}};
  for (auto& [name, fn] : runners)
    app.add_subcommand(name, "run the " + name + " experiment")->fallthrough();

  CLI11_PARSE(app, argc, argv);
  std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (!ctx.manifest_path.empty())
      ctx.load();
    else {
      ctx.manifest = json::object();
      fs::create_directories(ctx.out_dir);
      fs::create_directories(ctx.out_dir + "/plotdata");
    }
    ctx.summary["experiment"] = sub;
    return runners.at(sub)(ctx);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}
