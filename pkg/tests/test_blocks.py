import math

import numpy as np
import pytest

from torus_qpt import (
    ModelSpec,
    blocks_to_csv,
    build_lattice,
    critical_modes,
    honeycomb_blocks,
    in_critical_set,
    lattice_blocks,
    peierls_ring,
    square_blocks,
    square_ring,
    union_eigenvalues,
)

# 2*cos(3*pi/7), the critical-window lambda of the M=7 block m=3
LAM_3_7 = 0.4450418679126289


def test_peierls_ring_entries():
    H = peierls_ring(0.5, 6, 0.3, math.pi / 4, t=2.0)
    assert H[0, 1] == 1.0  # +lam*t within cell
    assert H[1, 2] == -2.0  # -t between cells
    assert H[2, 3] == 1.0
    amp = -0.3 * 2.0 * complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
    assert H[5, 0] == pytest.approx(amp)
    assert H[0, 5] == pytest.approx(amp.conjugate())
    assert np.all(np.diag(H) == 0)


def test_peierls_ring_rejects_odd_or_short():
    with pytest.raises(ValueError):
        peierls_ring(0.5, 5, 0.0, 0.0)
    with pytest.raises(ValueError):
        peierls_ring(0.5, 2, 0.0, 0.0)


def test_square_ring_entries():
    H = square_ring(1.2, 4, 1.0, 0.0, t=1.0)
    assert np.all(np.diag(H) == -1.2)
    assert H[0, 1] == -1.0 and H[2, 3] == -1.0
    assert H[3, 0] == -1.0


def test_square_ring_n2_accumulation():
    H = square_ring(0.0, 2, 1.0, 0.0)
    assert H[0, 1] == -2.0


def test_honeycomb_block_lambdas():
    spec = ModelSpec("honeycomb", 7, 8)
    blocks = honeycomb_blocks(spec)
    assert [b.mode for b in blocks] == list(range(1, 8))
    lams = [2.0 * math.cos(math.pi * m / 7) for m in range(1, 8)]
    assert [b.lam for b in blocks] == pytest.approx(lams)
    assert blocks[2].lam == pytest.approx(LAM_3_7, abs=1e-15)
    assert blocks[-1].lam == pytest.approx(-2.0)
    assert all(b.k == pytest.approx(2 * math.pi * b.mode / 7) for b in blocks)


def test_square_block_lambdas():
    blocks = square_blocks(ModelSpec("square", 4, 4))
    lams = [2.0 * math.cos(2 * math.pi * m / 4) for m in range(1, 5)]
    assert [b.lam for b in blocks] == pytest.approx(lams)


def test_block_dispatch_checks_kind():
    with pytest.raises(ValueError):
        honeycomb_blocks(ModelSpec("square", 3, 4))
    with pytest.raises(ValueError):
        square_blocks(ModelSpec("honeycomb", 3, 8))


def test_block_matrix_read_only():
    block = lattice_blocks(ModelSpec("honeycomb", 3, 8))[0]
    with pytest.raises(ValueError):
        block.matrix[0, 0] = 1.0


@pytest.mark.parametrize("kind", ["honeycomb", "square"])
@pytest.mark.parametrize("M", [3, 5])
@pytest.mark.parametrize("eta,phi", [(0.0, 0.0), (0.5, math.pi / 4), (1.0, 2.0)])
def test_block_union_matches_full_lattice(kind, M, eta, phi):
    N = 8 if kind == "honeycomb" else 6
    spec = ModelSpec(kind, M, N, t=1.0, eta=eta, phi=phi)
    full = np.linalg.eigvalsh(build_lattice(spec).entries)
    union = union_eigenvalues(lattice_blocks(spec))
    assert np.max(np.abs(full - union)) <= 1e-10


def test_in_critical_set_strict():
    assert not in_critical_set(2 * math.pi / 3)
    assert not in_critical_set(4 * math.pi / 3)
    assert in_critical_set(math.pi)
    assert not in_critical_set(0.5)
    assert in_critical_set(2 * math.pi / 3 + 1e-9)


def test_critical_modes_m7():
    assert critical_modes(7) == [3, 4]


def test_critical_modes_exclude_edges_when_divisible_by_3():
    # 3m = M and 3m = 2M give |lambda| = 1 exactly; they must be dropped.
    assert critical_modes(6) == [3]
    assert critical_modes(9) == [4, 5]
    assert critical_modes(12) == [5, 6, 7]


def test_critical_modes_match_lambda_window():
    for M in range(3, 40):
        expected = [
            m for m in range(1, M + 1) if abs(round(2 * math.cos(math.pi * m / M), 12)) < 1.0
        ]
        assert critical_modes(M) == expected


def test_critical_modes_logs_edge_exclusion(caplog):
    with caplog.at_level("INFO", logger="torus_qpt.blocks"):
        critical_modes(6)
    assert any("excluded" in rec.message for rec in caplog.records)


def test_blocks_to_csv_shape():
    spec = ModelSpec("square", 2, 3, eta=1.0, phi=0.5)
    text = blocks_to_csv(lattice_blocks(spec))
    lines = text.strip().split("\n")
    assert len(lines) == 3  # header + 2 blocks
    assert lines[0].startswith("k,lambda,re_1_1,im_1_1")
    assert len(lines[0].split(",")) == 2 + 2 * 9


def test_blocks_to_csv_empty():
    assert blocks_to_csv([]) == "k,lambda\n"
