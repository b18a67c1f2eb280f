"""Geodesics, distance, divergence, and the gauge q."""

import math

import numpy as np
import pytest
import scipy.linalg

from geoipm import geometry as G
from geoipm import jordan as J
from geoipm.errors import DomainError

from util import FAMILIES, assert_elem_close, fig1_point_oracle, random_element, random_interior

ORTH2 = J.ConeDescriptor((J.Orthant(2),))
PSD3 = J.ConeDescriptor((J.Psd(3),))


def test_geodesic_point_examples():
    rng = np.random.default_rng(0)
    for cone in FAMILIES.values():
        w = random_interior(cone, rng)
        d = random_element(cone, rng)
        assert_elem_close(G.geodesic_point(G.ray(w, d), 0.0), w, 1e-12, "t = 0")

    w = J.element(ORTH2, [1.0, math.e])
    d = J.element(ORTH2, [1.0, -1.0])
    p = G.geodesic_point(G.ray(w, d), 1.0)
    assert np.allclose(p.coords, [math.e, 1.0])

    rng = np.random.default_rng(1)
    D = rng.standard_normal((3, 3))
    D = 0.5 * (D + D.T)
    d = J.from_blocks(PSD3, [D])
    p = G.geodesic_point(G.ray(J.identity(PSD3), d), 1.0)
    assert np.allclose(J.to_blocks(p)[0], scipy.linalg.expm(D), atol=1e-12)


def test_geodesic_point_matches_specialized_forms():
    rng = np.random.default_rng(2)
    for cone in FAMILIES.values():
        for _ in range(5):
            w = random_interior(cone, rng)
            d = random_element(cone, rng)
            t = float(rng.uniform(-1.2, 1.2))
            got = G.geodesic_point(G.ray(w, d), t)
            want = fig1_point_oracle(w, d, t)
            assert_elem_close(got, want, 1e-10, "specialized geodesic forms")
            assert J.is_interior(got)


def test_geodesic_ray_requires_interior_base():
    w = J.element(ORTH2, [1.0, 0.0])
    with pytest.raises(DomainError):
        G.ray(w, J.identity(ORTH2))


def test_distance_examples():
    rng = np.random.default_rng(3)
    for cone in FAMILIES.values():
        z = random_interior(cone, rng)
        assert G.geodesic_distance(z, z) == pytest.approx(0.0, abs=1e-7)

    z0 = J.element(ORTH2, [1.0, 1.0])
    z1 = J.element(ORTH2, [math.e, math.e ** 2])
    assert G.geodesic_distance(z0, z1) == pytest.approx(math.sqrt(5.0), rel=1e-12)

    for cone in FAMILIES.values():
        z0 = random_interior(cone, rng)
        z1 = random_interior(cone, rng)
        d = G.geodesic_distance(z0, z1)
        assert abs(G.geodesic_distance(3.7 * z0, 3.7 * z1) - d) <= 1e-10 * max(1.0, d)
        assert G.geodesic_distance(z1, z0) == pytest.approx(d, rel=1e-9)


def test_distance_triangle_inequality():
    rng = np.random.default_rng(4)
    for cone in FAMILIES.values():
        for _ in range(10):
            a, b, c = (random_interior(cone, rng) for _ in range(3))
            assert G.geodesic_distance(a, c) <= (
                G.geodesic_distance(a, b) + G.geodesic_distance(b, c) + 1e-9
            )


def test_distance_automorphism_invariance():
    rng = np.random.default_rng(5)
    for cone in FAMILIES.values():
        T = J.random_automorphism(cone, rng)  # includes non-orthogonal scalings
        z0 = random_interior(cone, rng)
        z1 = random_interior(cone, rng)
        d = G.geodesic_distance(z0, z1)
        dt = G.geodesic_distance(J.apply_automorphism(T, z0), J.apply_automorphism(T, z1))
        assert dt == pytest.approx(d, rel=1e-9, abs=1e-10)


def test_inversion_consistency():
    rng = np.random.default_rng(6)
    for cone in FAMILIES.values():
        w = random_interior(cone, rng)
        d = random_element(cone, rng)
        t = 0.8
        direct = G.geodesic_point(G.ray(J.inverse(w), -1.0 * d), t)
        inverted = J.inverse(G.geodesic_point(G.ray(w, d), t))
        assert_elem_close(direct, inverted, 1e-10, "inverse geodesic")


def test_q_fn_and_q_inv():
    assert G.q_fn(0.0) == 0.0
    assert G.q_fn(1.0) == pytest.approx(1.0861612696, abs=1e-10)
    assert G.q_inv(0.5) == pytest.approx(math.log(2.0), rel=1e-14)
    assert G.q_inv(0.0) == 0.0
    for t in np.linspace(-10, 10, 10001):
        assert G.q_fn(t) >= t * t
    for t in (1e-8, 1e-3, 0.7, 4.0, 25.0):
        assert G.q_inv(G.q_fn(t)) == pytest.approx(t, rel=1e-10)
        assert G.q_fn(G.q_inv(t)) == pytest.approx(t, rel=1e-10)
    with pytest.raises(DomainError):
        G.q_inv(-1e-12)


def test_divergence_examples():
    rng = np.random.default_rng(7)
    for cone in FAMILIES.values():
        z = random_interior(cone, rng)
        assert G.divergence(z, z) == pytest.approx(0.0, abs=1e-10)

    orth1 = J.ConeDescriptor((J.Orthant(1),))
    z0 = J.element(orth1, [1.0])
    z1 = J.element(orth1, [math.e])
    assert G.divergence(z0, z1) == pytest.approx(G.q_fn(1.0), rel=1e-12)


def test_divergence_spectral_identity_and_symmetry():
    rng = np.random.default_rng(8)
    for cone in FAMILIES.values():
        for _ in range(5):
            z0 = random_interior(cone, rng)
            z1 = random_interior(cone, rng)
            h = G.divergence(z0, z1)
            z1_inv_half = J.spectral_map(z1, lambda lam: lam ** -0.5)
            lam = J.eigenvalues(J.quad_rep(z1_inv_half, z0))
            via_eigen = sum(G.q_fn(v) for v in np.log(lam))
            assert h == pytest.approx(via_eigen, rel=1e-10, abs=1e-10)
            assert G.divergence(z1, z0) == pytest.approx(h, rel=1e-9, abs=1e-10)


def test_divergence_rejects_boundary_points():
    z0 = J.element(ORTH2, [1.0, 0.0])
    z1 = J.identity(ORTH2)
    with pytest.raises(DomainError):
        G.divergence(z0, z1)
    with pytest.raises(DomainError):
        G.geodesic_distance(z0, z1)


def test_divergence_sandwich_quick():
    rng = np.random.default_rng(9)
    for cone in FAMILIES.values():
        for _ in range(10):
            z0 = random_interior(cone, rng)
            z1 = random_interior(cone, rng)
            delta = G.geodesic_distance(z0, z1)
            h = G.divergence(z0, z1)
            assert delta ** 2 <= h + 1e-9
            assert h <= G.q_fn(delta) + 1e-9


def test_divergence_profile():
    rng = np.random.default_rng(10)
    for cone in FAMILIES.values():
        w = random_interior(cone, rng)
        z_ref = random_interior(cone, rng)
        r0 = G.ray(w, J.zero(cone))
        h0 = G.divergence(w, z_ref)
        for t in (-1.0, 0.0, 2.5):
            assert G.divergence_profile(r0, t, z_ref) == pytest.approx(h0, rel=1e-12)
        d = random_element(cone, rng)
        r = G.ray(w, d)
        assert G.divergence_profile(r, 0.0, z_ref) == pytest.approx(h0, rel=1e-10)
        # strict convexity: central second difference is nonnegative
        step = 1e-3
        f0 = G.divergence_profile(r, 0.0, z_ref)
        fp = G.divergence_profile(r, step, z_ref)
        fm = G.divergence_profile(r, -step, z_ref)
        assert (fp - 2.0 * f0 + fm) / step ** 2 >= -1e-6
