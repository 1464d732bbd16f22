"""Dense tight-binding builders for flux-threaded torus lattices.

Two lattice kinds are supported, both closed into a torus. The row
direction (index m, length M) is fully periodic; the ring direction
(index n, length N) closes through a single boundary bond per row that
carries a Peierls phase:

* ``honeycomb``: brick-wall pattern. Every row is a chain of N sites;
  rows are stitched together on the staggered columns 4j-3 -> 4j-2 and
  4j -> 4j-1, which requires N divisible by 4.
* ``square``: uniform nearest-neighbour grid, rows stitched on every
  column.

The boundary bond (m, N) -> (m, 1) has amplitude -eta * t * e^{i phi}
in every row. eta = 0 cuts the rings open (a tube), eta = 1 restores
the uniform torus; phi is the flux phase threading the rings.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

KINDS = ("honeycomb", "square")

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ModelSpec:
    """Parameters of a flux-threaded torus model.

    Parameters
    ----------
    kind : {'honeycomb', 'square'}
        Lattice geometry.
    M : int
        Number of rows (periodic circumference). Honeycomb needs M >= 3,
        square M >= 2.
    N : int
        Ring length (number of columns). Honeycomb needs N >= 4 with
        N divisible by 4; square needs N >= 2.
    t : float, optional
        Hopping energy unit, strictly positive. Default 1.0.
    eta : float, optional
        Dimensionless boundary-bond coupling, >= 0. Default 0.0.
    phi : float, optional
        Flux phase in radians on the boundary bond. Default 0.0.
    """

    kind: str
    M: int
    N: int
    t: float = 1.0
    eta: float = 0.0
    phi: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown lattice kind {self.kind!r}; expected one of {KINDS}")
        if not isinstance(self.M, int) or not isinstance(self.N, int):
            raise ValueError("M and N must be integers")
        if self.kind == "honeycomb":
            if self.M < 3:
                raise ValueError(f"honeycomb lattice needs M >= 3, got M={self.M}")
            if self.N < 4 or self.N % 4 != 0:
                raise ValueError(f"honeycomb lattice needs N >= 4 with N % 4 == 0, got N={self.N}")
        else:
            if self.M < 2 or self.N < 2:
                raise ValueError(f"square lattice needs M >= 2 and N >= 2, got M={self.M}, N={self.N}")
        if not (isinstance(self.t, (int, float)) and math.isfinite(self.t) and self.t > 0):
            raise ValueError(f"t must be a positive finite real, got {self.t!r}")
        if not (isinstance(self.eta, (int, float)) and math.isfinite(self.eta) and self.eta >= 0):
            raise ValueError(f"eta must be a nonnegative finite real, got {self.eta!r}")
        if not (isinstance(self.phi, (int, float)) and math.isfinite(self.phi)):
            raise ValueError(f"phi must be a finite real, got {self.phi!r}")

    @property
    def dim(self) -> int:
        return self.M * self.N

    @property
    def phi_reduced(self) -> float:
        """Flux phase folded into [0, 2*pi) for reporting; physics is periodic."""
        return self.phi % TWO_PI

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "M": self.M,
            "N": self.N,
            "t": float(self.t),
            "eta": float(self.eta),
            "phi": float(self.phi),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ModelSpec":
        """Build a spec from a JSON config object.

        Accepts the flux either as radians under ``phi`` or as a fraction
        of pi under ``phi_over_pi``; exactly one of the two must be given.
        """
        allowed = {"kind", "M", "N", "t", "eta", "phi", "phi_over_pi"}
        unknown = set(data) - allowed
        if unknown:
            raise ValueError(f"unknown model keys: {sorted(unknown)}")
        for key in ("kind", "M", "N"):
            if key not in data:
                raise ValueError(f"model config missing required key {key!r}")
        has_phi = "phi" in data
        has_frac = "phi_over_pi" in data
        if has_phi == has_frac:
            raise ValueError("provide exactly one of 'phi' and 'phi_over_pi'")
        phi = float(data["phi"]) if has_phi else float(data["phi_over_pi"]) * math.pi
        return cls(
            kind=data["kind"],
            M=int(data["M"]),
            N=int(data["N"]),
            t=float(data.get("t", 1.0)),
            eta=float(data.get("eta", 0.0)),
            phi=phi,
        )


def site_basis(M: int, N: int) -> tuple[tuple[int, int], ...]:
    """Row-major site labels (m, n), 1-based, m outer and n inner."""
    return tuple((m, n) for m in range(1, M + 1) for n in range(1, N + 1))


@dataclass(frozen=True)
class HermitianOperator:
    """A dense Hermitian matrix with its site-basis ordering attached."""

    dim: int
    entries: np.ndarray
    basis: tuple[tuple[int, int], ...] = field(repr=False)

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries)
        if entries.shape != (self.dim, self.dim):
            raise ValueError(f"entries shape {entries.shape} does not match dim {self.dim}")
        if len(self.basis) != self.dim:
            raise ValueError("basis length does not match dim")
        scale = max(1.0, float(np.max(np.abs(entries))) if self.dim else 1.0)
        dev = float(np.max(np.abs(entries - entries.conj().T))) if self.dim else 0.0
        if dev > 1e-12 * scale:
            raise ValueError(f"matrix is not Hermitian: max |H - H^dag| = {dev:.3e}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))


def _boundary_amplitude(spec: ModelSpec) -> complex:
    return -spec.eta * spec.t * cmath.exp(1j * spec.phi)


def build_honeycomb_torus(spec: ModelSpec) -> HermitianOperator:
    """Assemble the brick-wall torus Hamiltonian.

    Bonds carry -t: intra-row (m,n)-(m,n+1) for n = 1..N-1 and the
    staggered inter-row pairs (m,4j)-(m+1,4j-1), (m,4j-3)-(m+1,4j-2)
    with the row index wrapping mod M. The boundary bond (m,N)->(m,1)
    carries -eta*t*e^{i phi} in the (row (m,N), column (m,1)) orientation.
    """
    if spec.kind != "honeycomb":
        raise ValueError(f"expected a honeycomb spec, got kind={spec.kind!r}")
    M, N, t = spec.M, spec.N, spec.t
    H = np.zeros((M * N, M * N), dtype=np.complex128)

    def idx(m: int, n: int) -> int:
        return (m - 1) * N + (n - 1)

    boundary = _boundary_amplitude(spec)
    for m in range(1, M + 1):
        for n in range(1, N):
            i, j = idx(m, n), idx(m, n + 1)
            H[i, j] += -t
            H[j, i] += -t
        i, j = idx(m, N), idx(m, 1)
        H[i, j] += boundary
        H[j, i] += boundary.conjugate()
        mp = m % M + 1
        for j4 in range(1, N // 4 + 1):
            for a, b in ((4 * j4, 4 * j4 - 1), (4 * j4 - 3, 4 * j4 - 2)):
                i, j = idx(m, a), idx(mp, b)
                H[i, j] += -t
                H[j, i] += -t
    return HermitianOperator(M * N, H, site_basis(M, N))


def build_square_torus(spec: ModelSpec) -> HermitianOperator:
    """Assemble the square torus Hamiltonian.

    Bonds carry -t: intra-row (m,n)-(m,n+1) for n = 1..N-1 and vertical
    (m,n)-(m+1,n) for every n with the row index wrapping mod M. The
    boundary bond (m,N)->(m,1) carries -eta*t*e^{i phi}. Wrap bonds
    accumulate, so M = 2 doubles the vertical amplitude as the periodic
    sum dictates.
    """
    if spec.kind != "square":
        raise ValueError(f"expected a square spec, got kind={spec.kind!r}")
    M, N, t = spec.M, spec.N, spec.t
    H = np.zeros((M * N, M * N), dtype=np.complex128)

    def idx(m: int, n: int) -> int:
        return (m - 1) * N + (n - 1)

    boundary = _boundary_amplitude(spec)
    for m in range(1, M + 1):
        mp = m % M + 1
        for n in range(1, N):
            i, j = idx(m, n), idx(m, n + 1)
            H[i, j] += -t
            H[j, i] += -t
        i, j = idx(m, N), idx(m, 1)
        H[i, j] += boundary
        H[j, i] += boundary.conjugate()
        for n in range(1, N + 1):
            i, j = idx(m, n), idx(mp, n)
            H[i, j] += -t
            H[j, i] += -t
    return HermitianOperator(M * N, H, site_basis(M, N))


def build_lattice(spec: ModelSpec) -> HermitianOperator:
    """Dispatch to the builder matching spec.kind."""
    if spec.kind == "honeycomb":
        return build_honeycomb_torus(spec)
    return build_square_torus(spec)
