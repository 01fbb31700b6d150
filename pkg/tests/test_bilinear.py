"""Vertex operators, bilinear residues, and the operator dressing."""

import pytest

from melontau.bilinear import (
    basis_monomials,
    build_A,
    calibrate_conventions,
    charge_commutes_with_Y,
    closed_form_AY,
    conjugation_sandwich_residual,
    hirota_factor,
    hirota_residual,
    dressing_op_residuals,
    tensor_bilinear_residual,
    tensor_reduction_residual,
    tensor_vertex_factor,
)
from melontau.decomposition import build_Y
from melontau.series import Monomial, TruncSpec


# -- operator-level identities --------------------------------------------


@pytest.mark.parametrize("D", [2, 3, 4])
def test_dressing_operator_identities(D):
    res = dressing_op_residuals(D)
    for name, op in res.items():
        assert op.is_zero(), name


def test_charge_factor_commutes_with_Y():
    assert charge_commutes_with_Y(3, nsize=2).is_zero()
    assert charge_commutes_with_Y(2, nsize=1).is_zero()


def test_closed_form_scale_mismatch_detected():
    # negative control: the closed form at the wrong scale is not [A, Y]
    win = 10
    trunc = TruncSpec(3, 0, 4, (-win, win))
    A = build_A(1, trunc)
    Y = build_Y(2, trunc)
    assert not (A.commutator(Y) - closed_form_AY(2, 1, trunc, scale=2)).is_zero()


# -- conjugation sandwich on basis monomials ------------------------------


@pytest.mark.parametrize("D", [2, 3])
def test_sandwich_matches_dressed_form(D):
    for mono in basis_monomials(D, 2, 2):
        r = conjugation_sandwich_residual(mono, D, sign=+1)
        assert r.is_zero(), mono


@pytest.mark.parametrize("D", [2, 3])
def test_sandwich_minus_vertex(D):
    # the V_- branch, on the monomials where e^{Y} actually fires
    def k_max(mono):
        counts = {c: 0 for c in range(2, D + 1)}
        for (c, _p), e in mono.times:
            if c != 1:
                counts[c] += e
        return min(counts.values())

    mons = [m for m in basis_monomials(D, 2, 2) if k_max(m) >= 1]
    assert mons
    for mono in mons + [Monomial()]:
        assert conjugation_sandwich_residual(mono, D, sign=-1).is_zero(), mono


# -- equal-size bilinear, one-matrix side ---------------------------------


def test_hirota_degree_one():
    for n in (1, 2):
        assert hirota_residual(n, d_ext=1, p_ext=2).is_zero()


def test_hirota_degree_two():
    for n in (1, 2):
        assert hirota_residual(n, d_ext=2, p_ext=3).is_zero()


def test_factor_is_not_trivial():
    f = hirota_factor(+1, 1, 2, 1, 2)
    assert not f.is_zero()
    assert any(m.zexp < 0 for m in f.terms)
    assert any(m.time_degree() == 1 for m in f.terms)


def test_calibration_pins_the_a_scale():
    # at equal sizes the product is blind to which factor carries which
    # charge (z^{-N} z^{+N} = 1 either way), so both charge assignments
    # survive; the a-scale axis is decisive.
    survivors = calibrate_conventions()
    assert set(survivors) == {("N", True), ("N", False)}


def test_naive_a_scale_fails_sharply():
    r = hirota_residual(2, d_ext=1, p_ext=2, a_scale="1")
    got = {m: c for m, c in r.terms.items()}
    want = {
        Monomial(times=(((1, 1), 1),)): -1,
        Monomial(times=(((2, 1), 1),)): 1,
    }
    assert set(got) == set(want)
    for m, c in want.items():
        assert got[m] == c
    # the all-times-zero point sees nothing: why calibration needs degree 1
    assert r.constant_term().is_zero()
    # and size 1 is blind too
    assert hirota_residual(1, d_ext=1, p_ext=2, a_scale="1").is_zero()


def test_window_guard_rejects_shallow_ring():
    ring = TruncSpec(0, 3, 3, (-4, 4), max_time_weight=5)
    with pytest.raises(ValueError):
        hirota_factor(+1, 1, 1, 1, 2, ring=ring)


# -- deformed bilinear, tensor side ---------------------------------------


@pytest.mark.parametrize("D", [2, 3])
def test_undeformed_reduction(D):
    assert tensor_reduction_residual(D, 1).is_zero()


def test_deformed_bilinear_D2():
    assert tensor_bilinear_residual(2, 1, 1, p_ext=2).is_zero()


def test_middle_factor_is_load_bearing():
    r = tensor_bilinear_residual(2, 1, 1, p_ext=1, with_middle=False)
    assert not r.is_zero()
    assert tensor_bilinear_residual(2, 1, 1, p_ext=1).is_zero()


def test_colour_budget_filters_lose_nothing():
    # slow path: the unfiltered ring; agreement on the residue-relevant
    # window is what licenses the budget filters used everywhere else
    lo = -(1 + 1 * 1 + 2 + 1)
    fa = tensor_vertex_factor(+1, 2, 1, 1, p_ext=1, prefilter=True)
    fb = tensor_vertex_factor(+1, 2, 1, 1, p_ext=1, prefilter=False)
    fa = fa.filter(lambda m: m.zexp >= lo)
    fb = fb.filter(lambda m: m.zexp >= lo)
    assert not fa.is_zero()
    assert (fa - fb).is_zero()
