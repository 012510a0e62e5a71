"""Spheres, Gauss and Kloosterman sums, and the closed-form sphere transform."""

import cmath
import math

import numpy as np
import pytest

from ffgeom.charsums import (
    GaussConstant,
    Sphere,
    delta,
    gauss_sum,
    gauss_sum_closed,
    inverse_table,
    kloosterman,
    legendre_table,
    norm_values,
    sphere_fourier_closed,
    sphere_fourier_grid,
    sphere_points,
    sphere_size_table,
)
from ffgeom.field import PrimeField
from ffgeom.fourier import PointD, SpectralGrid, forward

PRIMES_TO_31 = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31)


def test_sphere_q5_t1_hand_enumeration():
    F = PrimeField(5)
    pts = [p.as_ints() for p in sphere_points(F, 1, 2).points]
    assert pts == [(0, 1), (0, 4), (1, 0), (4, 0)]
    assert Sphere(F, 1, 2).count == 4


def test_sphere_q5_t0_includes_isotropic_lines():
    # -1 is a square mod 5, so the zero set is two lines through the origin
    F = PrimeField(5)
    assert Sphere(F, 0, 2).count == 9


def test_sphere_membership_and_indicator():
    F = PrimeField(13)
    s = Sphere(F, 3, 2)
    for p in s.points:
        assert p.norm().value == 3
        assert p in s
    ind = s.indicator()
    assert int(ind.values.real.sum()) == s.count


@pytest.mark.parametrize("q", PRIMES_TO_31)
def test_sphere_sizes_match_quadratic_character(q):
    F = PrimeField(q)
    sizes = sphere_size_table(F, 2)
    eta_m1 = F.legendre(q - 1)
    for t in range(1, q):
        assert sizes[t] == q - eta_m1
        assert sizes[t] in (q - 1, q + 1)
    assert sizes.sum() == q * q


def test_norm_values_agree_with_pointwise_norms():
    F = PrimeField(7)
    nv = norm_values(F, 2)
    for idx in range(49):
        assert nv[idx] == PointD.from_index(F, idx, 2).norm().value
    nv3 = norm_values(F, 3)
    assert nv3[PointD(F, (1, 2, 3)).encode()] == (1 + 4 + 9) % 7


def test_inverse_table_and_legendre_table():
    for q in (5, 13, 31):
        F = PrimeField(q)
        inv = inverse_table(F)
        leg = legendre_table(F)
        for a in range(1, q):
            assert inv[a] * a % q == 1
            assert leg[a] == F.legendre(a)
        assert leg[0] == 0


def test_gauss_sum_at_zero_is_q():
    F = PrimeField(11)
    assert gauss_sum(F, 0) == pytest.approx(11)


def test_gauss_sum_q5_hand_value():
    # 1 + 2 chi(1) + 2 chi(4) = sqrt 5
    F = PrimeField(5)
    val = gauss_sum(F, 1)
    assert cmath.isclose(val, math.sqrt(5), abs_tol=1e-12)


@pytest.mark.parametrize("q", (5, 7, 13, 29, 31))
def test_gauss_closed_form_and_constant(q):
    F = PrimeField(q)
    G = GaussConstant(F)
    assert G.Q == (1 if q % 4 == 1 else 1j)
    assert G.Q_squared_sign == F.legendre(q - 1)
    for j in range(1, q):
        direct = gauss_sum(F, j)
        closed = gauss_sum_closed(F, j)
        assert cmath.isclose(direct, closed, abs_tol=1e-9)
        assert abs(abs(direct) - math.sqrt(q)) < 1e-9


def test_kloosterman_hand_values():
    F = PrimeField(5)
    # inverses mod 5: 1<->1, 2<->3, 4<->4
    expected = (
        cmath.exp(2j * math.pi * 2 / 5)
        + cmath.exp(2j * math.pi * 0 / 5)
        + cmath.exp(2j * math.pi * 0 / 5)
        + cmath.exp(2j * math.pi * 3 / 5)
    )
    assert cmath.isclose(kloosterman(F, 1, "trivial"), expected, abs_tol=1e-12)
    assert kloosterman(F, 1, "trivial") == pytest.approx(2 + 2 * math.cos(6 * math.pi / 5))
    assert kloosterman(F, 0, "trivial") == pytest.approx(-1)


@pytest.mark.parametrize("q", (7, 13, 31))
def test_kloosterman_weil_bound(q):
    F = PrimeField(q)
    for psi in ("trivial", "quadratic"):
        for a in range(1, q):
            assert abs(kloosterman(F, a, psi)) <= 2 * math.sqrt(q) + 1e-9


def test_kloosterman_rejects_unknown_character():
    with pytest.raises(ValueError):
        kloosterman(PrimeField(5), 1, "cubic")


@pytest.mark.parametrize("q,d", [(5, 2), (7, 2), (5, 3)])
def test_sphere_fourier_closed_matches_dft(q, d):
    F = PrimeField(q)
    for t in range(1, q):
        direct = forward(Sphere(F, t, d).indicator()).values
        closed = sphere_fourier_grid(F, t, d).values
        assert np.max(np.abs(direct - closed)) < 1e-9
        l = PointD(F, (1,) + (0,) * (d - 1))
        assert abs(sphere_fourier_closed(F, t, l) - direct[l.encode()]) < 1e-9


def test_sphere_fourier_zero_mode_is_density():
    F = PrimeField(13)
    for t in (1, 5):
        s = Sphere(F, t, 2)
        val = sphere_fourier_closed(F, t, PointD(F, (0, 0)))
        assert abs(val - s.count / 169) < 1e-12


def test_sphere_fourier_t0_routes_to_direct_transform():
    F = PrimeField(5)
    grid = sphere_fourier_grid(F, 0, 2)
    direct = forward(Sphere(F, 0, 2).indicator()).values
    assert np.max(np.abs(grid.values - direct)) < 1e-12


@pytest.mark.parametrize("q,d", [(13, 2), (13, 3)])
def test_decay_bound_small(q, d):
    F = PrimeField(q)
    cap = 2 * q ** (-(d + 1) / 2)
    for b in range(1, q):
        vals = sphere_fourier_grid(F, b, d).values
        assert np.max(np.abs(vals[1:])) <= cap + 1e-12


def test_delta():
    F = PrimeField(7)
    assert delta(PointD(F, (0, 0))) == 1
    assert delta(PointD(F, (0, 1))) == 0
    assert sum(delta(PointD.from_index(F, i, 2)) for i in range(49)) == 1
