"""Momentum-space reduction of the torus models into independent rings.

Translational symmetry around the circumference (row index m) block-
diagonalizes the M*N lattice Hamiltonian into M independent N x N ring
blocks, one per momentum k = 2*pi*m/M with m = 1..M:

* honeycomb: an alternating ring whose within-cell bond strength is set
  by lambda_k = 2*cos(k/2) and whose boundary bond keeps the Peierls
  phase (the ring is a flux-threaded dimerized chain);
* square: a uniform ring with constant on-site shift -lambda_{2k}*t,
  lambda_{2k} = 2*cos(k).

The gauge factors absorbed by the Fourier transformation never appear
in the output; their correctness is validated by the block-union
property (concatenated block spectra = full lattice spectrum).

Sign convention for the honeycomb block: within-cell bonds carry
+lambda_k*t and between-cell bonds -t. Flipping the within-cell sign is
the sublattice gauge diag(+1,-1,-1,+1,...) and leaves every spectrum
unchanged; this choice is the one for which the reference split
h = h0 + h' of the analytics module reproduces the block entrywise.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .models import ModelSpec
from .output import fmt_float

logger = logging.getLogger(__name__)

_LOWER_EDGE = 2.0 * math.pi / 3.0
_UPPER_EDGE = 4.0 * math.pi / 3.0


@dataclass(frozen=True)
class BlochBlock:
    """One momentum sector of a torus model.

    Fields: momentum k = 2*pi*mode/n_modes, the ring coupling lam
    (lambda_k for honeycomb, lambda_{2k} for square), the N x N Hermitian
    block matrix, the lattice kind, and the integer mode bookkeeping.
    """

    k: float
    lam: float
    matrix: np.ndarray = field(repr=False)
    kind: str
    mode: int
    n_modes: int

    def __post_init__(self) -> None:
        matrix = np.asarray(self.matrix, dtype=np.complex128)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def n_sites(self) -> int:
        return self.matrix.shape[0]


def peierls_ring(lam: float, N: int, eta: float, phi: float, t: float = 1.0) -> np.ndarray:
    """Alternating (dimerized) N-site ring with a flux-carrying boundary bond.

    Entries: +lam*t on bonds (1,2), (3,4), ... (within-cell),
    -t on bonds (2,3), (4,5), ... (between-cell), and
    -eta*t*e^{i phi} at (N,1) with its conjugate at (1,N). Zero diagonal.
    """
    if N < 4 or N % 2 != 0:
        raise ValueError(f"ring length must be even and >= 4, got N={N}")
    H = np.zeros((N, N), dtype=np.complex128)
    for l in range(N - 1):
        amp = lam * t if l % 2 == 0 else -t
        H[l, l + 1] = amp
        H[l + 1, l] = amp
    boundary = -eta * t * cmath.exp(1j * phi)
    H[N - 1, 0] += boundary
    H[0, N - 1] += boundary.conjugate()
    return H


def square_ring(lam2k: float, N: int, eta: float, phi: float, t: float = 1.0) -> np.ndarray:
    """Uniform N-site ring: -t bonds, -lam2k*t diagonal, flux boundary bond."""
    if N < 2:
        raise ValueError(f"ring length must be >= 2, got N={N}")
    H = np.zeros((N, N), dtype=np.complex128)
    for l in range(N - 1):
        H[l, l + 1] += -t
        H[l + 1, l] += -t
    boundary = -eta * t * cmath.exp(1j * phi)
    H[N - 1, 0] += boundary
    H[0, N - 1] += boundary.conjugate()
    H[np.diag_indices(N)] = -lam2k * t
    return H


def honeycomb_blocks(spec: ModelSpec) -> list[BlochBlock]:
    """All M momentum blocks of the honeycomb torus, m = 1..M ascending."""
    if spec.kind != "honeycomb":
        raise ValueError(f"expected a honeycomb spec, got kind={spec.kind!r}")
    out = []
    for m in range(1, spec.M + 1):
        k = 2.0 * math.pi * m / spec.M
        lam = 2.0 * math.cos(math.pi * m / spec.M)
        matrix = peierls_ring(lam, spec.N, spec.eta, spec.phi, spec.t)
        out.append(BlochBlock(k, lam, matrix, "honeycomb", m, spec.M))
    return out


def square_blocks(spec: ModelSpec) -> list[BlochBlock]:
    """All M momentum blocks of the square torus, m = 1..M ascending."""
    if spec.kind != "square":
        raise ValueError(f"expected a square spec, got kind={spec.kind!r}")
    out = []
    for m in range(1, spec.M + 1):
        k = 2.0 * math.pi * m / spec.M
        lam2k = 2.0 * math.cos(k)
        matrix = square_ring(lam2k, spec.N, spec.eta, spec.phi, spec.t)
        out.append(BlochBlock(k, lam2k, matrix, "square", m, spec.M))
    return out


def lattice_blocks(spec: ModelSpec) -> list[BlochBlock]:
    """Dispatch to the block constructor matching spec.kind."""
    if spec.kind == "honeycomb":
        return honeycomb_blocks(spec)
    return square_blocks(spec)


def in_critical_set(k: float) -> bool:
    """True iff 2*pi/3 < k < 4*pi/3 (strict), i.e. |2*cos(k/2)| < 1.

    The edges (|lambda_k| exactly 1) are excluded.
    """
    return _LOWER_EDGE < k < _UPPER_EDGE


def critical_modes(M: int) -> list[int]:
    """Mode indices m in 1..M whose momentum lies in the critical window.

    Uses the exact integer form M < 3m < 2M of the strict inequalities,
    so edge modes (3m = M or 3m = 2M, possible only when 3 divides M)
    are excluded without floating-point ambiguity.
    """
    out = []
    for m in range(1, M + 1):
        if 3 * m == M or 3 * m == 2 * M:
            logger.info("mode m=%d of M=%d sits on the critical-window edge (|lambda|=1); excluded", m, M)
            continue
        if M < 3 * m < 2 * M:
            out.append(m)
    return out


def union_eigenvalues(blocks: list[BlochBlock]) -> np.ndarray:
    """Sorted concatenation of all block eigenvalues (full-lattice multiset)."""
    return np.sort(np.concatenate([np.linalg.eigvalsh(b.matrix) for b in blocks]))


def blocks_to_csv(blocks: list[BlochBlock]) -> str:
    """Debug CSV: one row per block with k, lambda, then Re/Im of all entries."""
    if not blocks:
        return "k,lambda\n"
    n = blocks[0].n_sites
    header = ["k", "lambda"]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            header += [f"re_{i}_{j}", f"im_{i}_{j}"]
    lines = [",".join(header)]
    for b in blocks:
        cells = [fmt_float(b.k), fmt_float(b.lam)]
        for i in range(n):
            for j in range(n):
                cells += [fmt_float(b.matrix[i, j].real), fmt_float(b.matrix[i, j].imag)]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
