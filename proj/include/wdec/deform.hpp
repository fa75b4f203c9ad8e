#pragma once

#include "wdec/operators.hpp"

namespace wdec {

/// Singular collapse of the complement of U: conformal log-factor ln(eps)
/// on every cell all of whose incident top cells lie outside U, zero on the
/// closure of U (including the interface), weight phi - alpha * u.
std::pair<Geometry, WeightField> collapse_family(const Complex& K, const Geometry& g,
                                                 const WeightField& phi, const DomainTag& U,
                                                 double eps, double alpha);

/// Smooth approximation of the collapse: f_j = eps + (1-eps) * ramp of
/// width 1/j in normalized top-cell graph distance from U; u = ln f_j,
/// weight phi - alpha ln f_j. Pointwise decreasing in j toward the
/// singular family away from the interface band.
std::pair<Geometry, WeightField> smoothing_sequence(const Complex& K, const Geometry& g,
                                                    const WeightField& phi, const DomainTag& U,
                                                    double eps, double alpha, int j);

/// Per-top values of the smoothing profile f_j (exposed for monotonicity
/// checks).
Eigen::VectorXd smoothing_profile(const Complex& K, const DomainTag& U, double eps, int j);

struct PunctureResult {
  DomainTag domain;   // complement of the ball, intended with the natural bc
  WeightField phi;    // flattened to phi(center) on the ball, ramp to 2*radius
};

/// Removes the metric ball around a center vertex (top cells with a vertex
/// closer than the radius) and flattens the weight on it.
PunctureResult puncture_family(const Complex& K, const Geometry& g, const WeightField& phi,
                               int center_vertex, double radius);

} // namespace wdec
