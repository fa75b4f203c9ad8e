"""Smoke tests for the pywdec bindings.

These exercise the main entry points end to end on small meshes; the heavy
numerical coverage lives in the C++ test suite.
"""

import math

import numpy as np
import pytest

import pywdec as w


@pytest.fixture(scope="module")
def torus():
    K = w.product_grid([w.FactorSpec(True, 16, 1.0), w.FactorSpec(True, 16, 1.0)])
    g = w.make_geometry(K)
    phi = w.zero_weight(K)
    return K, g, phi


def test_mesh_counts(torus):
    K, _, _ = torus
    assert K.dim() == 2
    assert (K.ncells(0), K.ncells(1), K.ncells(2)) == (256, 512, 256)


def test_torus_harmonic_dims(torus):
    K, g, phi = torus
    b = w.make_bundle(K, g, phi)
    dims = [w.full_hodge_spectrum(b, p, 6).harmonic_dim for p in range(3)]
    assert dims == [1, 2, 1]


def test_exact_coexact_pairing(torus):
    K, g, phi = torus
    b = w.make_bundle(K, g, phi)
    r0 = w.full_hodge_spectrum(b, 0, 8)
    r1 = w.full_hodge_spectrum(b, 1, 10)
    co = np.asarray(r0.coexact())
    ex = np.asarray(r1.exact_part())
    m = min(len(co), len(ex))
    assert m >= 3
    assert np.allclose(co[:m], ex[:m], rtol=1e-8)


def test_gauge_conjugation_spectra_match():
    K = w.random_complex(3)
    g = w.make_geometry(K)
    phi = w.weight_from_vertex_values(K, w.random_vertex_field(K, 11, 0.5))
    tw = w.make_bundle(K, g, phi, w.Gauge.twisted)
    wt = w.make_bundle(K, g, phi, w.Gauge.weighted)
    a = np.asarray(w.full_hodge_spectrum(tw, 0, 5).values)
    b = np.asarray(w.full_hodge_spectrum(wt, 0, 5).values)
    assert np.allclose(a, b, rtol=0, atol=1e-10 * max(1.0, abs(a[-1])))


def test_minmax_matches_solver():
    K = w.random_complex(9)
    b = w.make_bundle(K, w.make_geometry(K), w.zero_weight(K))
    r = w.coexact_spectrum(b, 0, 3)
    for i in (1, 2, 3):
        assert w.minmax_bruteforce(b, 0, i) == pytest.approx(r.values[i - 1], rel=1e-9)


def test_sphere_band_collapse():
    S = w.icosphere(2)
    g = w.make_geometry(S)
    U = w.equatorial_band(S, 0.4)
    assert w.quotient_dimension(S, U, 1) == 1
    vals = []
    for eps in (1e-1, 1e-2):
        gc, pc = w.collapse_family(S, g, w.zero_weight(S), U, eps, 2.0)
        opts = w.SolveOptions()
        opts.harmonic_hint = 0
        vals.append(w.coexact_spectrum(w.make_bundle(S, gc, pc), 1, 1, opts).values[0])
    assert vals[1] < vals[0] / 5.0


def test_betti_numbers():
    S = w.icosphere(1)
    assert [w.betti(S, p) for p in range(3)] == [1, 0, 1]


def test_circle_spectrum_oracle():
    g = w.make_circle_grid(512, 2 * math.pi, lambda x: 0.0)
    s = w.circle_witten_spectrum(g, 5)
    assert np.allclose(s.functions[:5], [0, 1, 1, 4, 4], atol=1e-5)


def test_interval_oscillator():
    g = w.make_interval_grid(1000, -8.0, 8.0, lambda x: x * x / 2)
    ev = w.interval_witten_spectrum(g, w.IntervalBc.natural, 3)
    assert ev[0] == pytest.approx(0.0, abs=1e-4)
    assert ev[1] == pytest.approx(2.0, rel=1e-3)
    assert ev[2] == pytest.approx(4.0, rel=1e-3)


def test_richardson_cancels_leading_term():
    r = w.richardson4(np.array([1.16, 2.32]), np.array([1.01, 2.02]))
    assert np.allclose(r, [1.0, 2.0], atol=1e-12)


def test_smoothing_sequence_runs(torus):
    K, g, phi = torus
    X = np.asarray(K.vertex_coords())
    U = w.tag_domain(K, [t for t in range(K.ncells(2))
                         if all(X[v, 0] <= 0.5 + 1e-9 for v in K.cell_vertices(2, t))])
    gj, pj = w.smoothing_sequence(K, g, phi, U, 1e-2, 2.0, 3)
    r = w.coexact_spectrum(w.make_bundle(K, gj, pj), 0, 2)
    assert r.values[0] > 0
