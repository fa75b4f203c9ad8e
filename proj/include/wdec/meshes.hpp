#pragma once

#include "wdec/complex.hpp"

namespace wdec {

/// Unit-sphere triangulation: icosahedron with `subdivisions` rounds of
/// midpoint subdivision, vertices projected to the sphere.
Complex icosphere(int subdivisions);

/// Band of top cells whose barycenter satisfies |z| <= zmax.
DomainTag equatorial_band(const Complex& K, double zmax);

/// Small random complex (jittered planar triangle patch or a random chord
/// graph) for randomized identity tests; deterministic per seed.
Complex random_complex(unsigned long seed);

/// Deterministic random per-vertex field with values in [-amp, amp].
Eigen::VectorXd random_vertex_field(const Complex& K, unsigned long seed, double amp);

} // namespace wdec
