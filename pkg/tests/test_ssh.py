import cmath
import math
import warnings

import numpy as np
import pytest

from torus_qpt import (
    build_h0_hprime,
    corner_coupling,
    exact_midgap_gap,
    fidelity_at_minimum,
    fidelity_perturbative,
    midgap_perturbation,
    omega_factor,
    peierls_ring,
    zero_modes,
)

PHI = math.pi / 4


def test_corner_coupling_conventions():
    assert corner_coupling(0.5, 20, "cells") == 0.5**10
    assert corner_coupling(0.5, 20, "sites") == 0.5**20
    assert corner_coupling(-0.5, 4, "cells") == 0.25
    assert corner_coupling(-0.5, 6, "cells") == -(0.5**3)
    with pytest.raises(ValueError):
        corner_coupling(0.5, 20, "bonds")


def test_omega_factor_values():
    assert omega_factor(0.5, 20, "cells") == pytest.approx(1.3333320617675781, rel=1e-14)
    assert omega_factor(0.9, 40, "cells") == pytest.approx(5.18536377399245, rel=1e-13)
    # geometric-sum identity: Omega is the squared norm of the raw mode
    lam, N = 0.7, 12
    powers = sum(lam ** (2 * j) for j in range(N // 2))
    assert omega_factor(lam, N, "cells") == pytest.approx(powers, rel=1e-14)


def test_zero_modes_structure():
    zm = zero_modes(0.5, 4)
    norm = math.sqrt(1.25)
    assert zm.a_plus == pytest.approx(np.array([1.0, 0.0, 0.5, 0.0]) / norm)
    assert zm.a_minus == pytest.approx(np.array([0.0, 0.5, 0.0, 1.0]) / norm)
    assert zm.omega == pytest.approx(1.25, rel=1e-15)
    assert zm.corner == 0.25
    assert np.linalg.norm(zm.a_plus) == pytest.approx(1.0, rel=1e-15)
    assert np.linalg.norm(zm.a_minus) == pytest.approx(1.0, rel=1e-15)
    assert np.vdot(zm.a_plus, zm.a_minus) == 0.0  # disjoint sublattices


def test_zero_modes_read_only_and_validation():
    zm = zero_modes(0.3, 8)
    with pytest.raises(ValueError):
        zm.a_plus[0] = 2.0
    with pytest.raises(ValueError):
        zero_modes(1.0, 8)
    with pytest.raises(ValueError):
        zero_modes(0.5, 6 + 1)
    with pytest.raises(ValueError):
        zero_modes(0.5, 2)


@pytest.mark.parametrize("lam", [-0.9, -0.5, -0.2, 0.2, 0.5, 0.9])
@pytest.mark.parametrize("N", [4, 8, 12, 20, 40])
def test_cells_convention_annihilates_exactly(lam, N):
    zm = zero_modes(lam, N, "cells")
    h0, _ = build_h0_hprime(lam, N, 0.0, 0.0, "cells")
    assert np.linalg.norm(h0 @ zm.a_plus) <= 1e-13
    assert np.linalg.norm(h0 @ zm.a_minus) <= 1e-13


def test_sites_convention_leaves_known_residual():
    lam, N = 0.5, 8
    zm = zero_modes(lam, N, "sites")
    h0, _ = build_h0_hprime(lam, N, 0.0, 0.0, "sites")
    expected = abs(lam**N - lam ** (N // 2)) / math.sqrt(omega_factor(lam, N, "cells"))
    residual = np.linalg.norm(h0 @ zm.a_plus)
    assert residual == pytest.approx(expected, rel=1e-12)
    assert residual > 1e-13


def test_split_reassembles_the_ring_block():
    lam, N, eta, phi, t = 0.5, 8, 0.3, 1.1, 2.0
    h0, h1 = build_h0_hprime(lam, N, eta, phi)
    assert np.max(np.abs(-t * (h0 + h1) - peierls_ring(lam, N, eta, phi, t))) < 1e-14


def test_hprime_is_rank_two_corner_remainder():
    lam, N = 0.5, 8
    c = corner_coupling(lam, N)
    h0, h1 = build_h0_hprime(lam, N, 0.4, PHI)
    assert np.linalg.matrix_rank(h1) == 2
    assert h1[N - 1, 0] == pytest.approx(0.4 * cmath.exp(1j * PHI) - c)
    assert h1[0, N - 1] == pytest.approx(np.conj(h1[N - 1, 0]))
    assert np.count_nonzero(h1) == 2
    # h0 corners carry the compensation entry
    assert h0[0, N - 1] == c and h0[N - 1, 0] == c


def test_midgap_known_point():
    # lam = 0.5, N = 4: c = 1/4, Omega = 5/4, eta at the avoided crossing
    eta_star = 0.25 * math.cos(PHI)
    sol = midgap_perturbation(0.5, 4, eta_star, PHI, warn=False)
    assert sol.eps_plus == pytest.approx(0.1414213562373095, rel=1e-14)
    assert sol.eps_minus == -sol.eps_plus
    assert sol.gap_min == pytest.approx(0.282842712474619, rel=1e-14)
    assert sol.eta_star == pytest.approx(eta_star, rel=1e-14)
    assert sol.curvature_max == pytest.approx(-4.525483399593905, rel=1e-14)
    assert not sol.at_crossing


def test_midgap_vectors_are_rayleigh_optimal():
    lam, N, eta, phi, t = 0.5, 12, 0.01, PHI, 2.0
    sol = midgap_perturbation(lam, N, eta, phi, t=t, warn=False)
    h0, h1 = build_h0_hprime(lam, N, eta, phi)
    block = -t * (h0 + h1)
    # the doublet vectors diagonalize the block exactly within their span
    assert np.vdot(sol.v_plus, block @ sol.v_plus).real == pytest.approx(sol.eps_plus, rel=1e-12)
    assert np.vdot(sol.v_minus, block @ sol.v_minus).real == pytest.approx(sol.eps_minus, rel=1e-12)
    assert abs(np.vdot(sol.v_plus, block @ sol.v_minus)) < 1e-14
    assert np.linalg.norm(sol.v_plus) == pytest.approx(1.0, rel=1e-14)
    assert abs(np.vdot(sol.v_plus, sol.v_minus)) < 1e-14


def test_midgap_scales_linearly_in_t():
    a = midgap_perturbation(0.5, 8, 0.01, PHI, t=1.0, warn=False)
    b = midgap_perturbation(0.5, 8, 0.01, PHI, t=3.0, warn=False)
    assert b.eps_plus == pytest.approx(3 * a.eps_plus, rel=1e-14)
    assert b.gap_min == pytest.approx(3 * a.gap_min, rel=1e-14)
    assert b.eta_star == a.eta_star
    assert b.curvature_max == pytest.approx(3 * a.curvature_max, rel=1e-14)


def test_midgap_first_order_crossing():
    lam, N = 0.5, 8
    c = corner_coupling(lam, N)
    sol = midgap_perturbation(lam, N, c, 0.0, warn=False)
    assert sol.at_crossing
    assert sol.eps_plus == 0.0
    assert sol.gap_min == 0.0
    assert sol.curvature_max == -math.inf
    off = midgap_perturbation(lam, N, c / 2, 0.0, warn=False)
    assert not off.at_crossing
    assert off.curvature_max == -math.inf  # sin(phi) = 0 keeps the crossing exact


def test_soft_validity_warning():
    lam, N = 0.5, 8
    window = 0.2 * (1.0 - lam)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        midgap_perturbation(lam, N, 0.99 * window, PHI)
    with pytest.warns(UserWarning, match="soft perturbative window"):
        midgap_perturbation(lam, N, 1.01 * window, PHI)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        midgap_perturbation(lam, N, 1.01 * window, PHI, warn=False)


def test_perturbative_gap_tracks_exact_block():
    lam, N = 0.5, 20
    c = corner_coupling(lam, N)
    eta_star = c * math.cos(PHI)
    sol = midgap_perturbation(lam, N, eta_star, PHI, warn=False)
    exact = exact_midgap_gap(lam, N, eta_star, PHI)
    assert sol.gap_min == pytest.approx(exact, rel=1e-2)


def test_fidelity_perturbative_matches_closed_form():
    lam, N = 0.5, 20
    c = corner_coupling(lam, N)
    eta_star = c * math.cos(PHI)
    b = abs(c * math.sin(PHI))
    for delta in (b / 10, b, 5 * b):
        f = fidelity_perturbative(lam, N, eta_star, delta, PHI, warn=False)
        assert f == pytest.approx(fidelity_at_minimum(lam, N, delta, PHI), rel=1e-12)
    assert fidelity_perturbative(lam, N, eta_star, 0.0, PHI, warn=False) == pytest.approx(1.0)


def test_fidelity_at_minimum_anchor_points():
    lam, N = 0.5, 20
    b = abs(corner_coupling(lam, N) * math.sin(PHI))
    assert fidelity_at_minimum(lam, N, b, PHI) == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    assert fidelity_at_minimum(lam, N, 0.0, PHI) == 1.0
    # exact crossing at sin(phi) = 0: any separation is a dead drop
    assert fidelity_at_minimum(lam, N, 1e-9, 0.0) == 0.0


def test_fidelity_rejects_negative_delta():
    with pytest.raises(ValueError):
        fidelity_perturbative(0.5, 8, 0.0, -0.1, PHI, warn=False)
    with pytest.raises(ValueError):
        fidelity_at_minimum(0.5, 8, -0.1, PHI)


def test_fidelity_gauge_invariance_under_lambda_sign():
    # flipping the sign of lambda relabels sublattice amplitudes only
    f_pos = fidelity_perturbative(0.5, 12, 0.001, 0.0005, PHI, warn=False)
    f_neg = fidelity_perturbative(-0.5, 12, 0.001, 0.0005, PHI, warn=False)
    assert 0.0 <= f_pos <= 1.0
    assert 0.0 <= f_neg <= 1.0
