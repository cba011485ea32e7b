"""Time-reversal symmetry data, verification, and the frame sewing matrix.

Complex conjugation is always entrywise conjugation in the fixed
computational basis; models must be expressed in a basis where that is the
intended conjugation.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._matrix import frob, unitarity_defect
from .errors import KramersObstructionError, SymmetryInconsistencyError
from .lattice import InvolutiveLattice
from .spectral import Frame, HamiltonianFamily, ProjectionFamily

__all__ = [
    "SymmetryData",
    "SewingField",
    "SymmetryReport",
    "verify_hamiltonian_symmetry",
    "verify_projection_symmetry",
    "sewing_matrix",
    "gb_equivariance_obstruction",
    "quaternionic_q",
]


@dataclass
class SymmetryData:
    """Unitary family J(x) together with the time-reversal parity.

    Parity +1 is even time reversal ("Real" structures), -1 is odd
    ("Quaternionic"; supported here only at the level of symmetry checks).
    """

    dimension: int
    parity: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    name: str = ""

    def __call__(self, coords) -> np.ndarray:
        j = self.evaluator(np.asarray(coords, dtype=float))
        return np.asarray(j, dtype=complex)

    def sample(self, lat: InvolutiveLattice) -> np.ndarray:
        out = np.empty((lat.n_sites, self.dimension, self.dimension), dtype=complex)
        for s in range(lat.n_sites):
            out[s] = self(lat.sites[s])
        return out

    @staticmethod
    def constant(j: np.ndarray, parity: int = +1, name: str = "") -> "SymmetryData":
        j = np.asarray(j, dtype=complex)
        return SymmetryData(j.shape[0], parity, lambda coords: j, name)

    @staticmethod
    def identity(dimension: int) -> "SymmetryData":
        return SymmetryData.constant(np.eye(dimension), +1, "identity")


@dataclass
class SewingField:
    """Per-site m x m matrix W(x) relating the frame at tau(x) to the
    conjugated frame at x through J."""

    w: np.ndarray  # (n_sites, m, m)
    lattice: InvolutiveLattice
    parity: int
    unitarity_residual: float


@dataclass
class SymmetryReport:
    hamiltonian_residual: float
    unitary_residual: float
    tolerance: float

    @property
    def symmetric(self) -> bool:
        return (
            self.hamiltonian_residual <= self.tolerance
            and self.unitary_residual <= self.tolerance
        )


def verify_hamiltonian_symmetry(
    h: HamiltonianFamily,
    j: SymmetryData,
    lat: InvolutiveLattice,
    tolerance: float = 1e-10,
) -> SymmetryReport:
    """Residuals of the time-reversal constraints on a Hamiltonian family.

    Reports max over sites of || J(x)^dag H(tau x) J(x) - conj(H(x)) || and
    of || J(tau x) conj(J(x)) - parity * 1 ||; both below tolerance declare
    the family symmetric.  Report-only: never raises.
    """
    tau = lat.involution
    res_h = 0.0
    res_j = 0.0
    eye = np.eye(j.dimension)
    for s in range(lat.n_sites):
        js = j(lat.sites[s])
        jt = j(lat.sites[tau[s]])
        hs = h(lat.sites[s])
        ht = h(lat.sites[tau[s]])
        res_h = max(res_h, frob(js.conj().T @ ht @ js - hs.conj()))
        res_j = max(res_j, frob(jt @ js.conj() - j.parity * eye))
    return SymmetryReport(res_h, res_j, tolerance)


def verify_projection_symmetry(
    p: ProjectionFamily,
    j: SymmetryData,
    lat: InvolutiveLattice,
    tolerance: float = 1e-8,
) -> float:
    """Max site residual of P(tau x) J(x) = J(x) conj(P(x))."""
    tau = lat.involution
    res = 0.0
    for s in range(lat.n_sites):
        js = j(lat.sites[s])
        res = max(res, frob(p.projectors[tau[s]] @ js - js @ p.projectors[s].conj()))
    return res


def sewing_matrix(
    f: Frame, j: SymmetryData, lat: InvolutiveLattice, tolerance: float = 1e-6
) -> SewingField:
    """W(x) = Psi(tau x)^dag J(x) conj(Psi(x)) per site.

    Requires the projection symmetry to hold; a unitarity residual above
    tolerance raises.  Odd parity with odd rank over a nonempty fixed set is
    rejected outright: no consistent sewing matrix exists there.
    """
    m = f.rank
    if j.parity == -1 and m % 2 == 1 and lat.fixed_sites.size > 0:
        raise KramersObstructionError(
            f"odd parity with rank {m} over {lat.fixed_sites.size} fixed sites"
        )
    tau = lat.involution
    w = np.empty((lat.n_sites, m, m), dtype=complex)
    worst = 0.0
    for s in range(lat.n_sites):
        js = j(lat.sites[s])
        w[s] = f.columns[tau[s]].conj().T @ js @ f.columns[s].conj()
        worst = max(worst, unitarity_defect(w[s]))
    if worst > tolerance:
        raise SymmetryInconsistencyError(
            f"sewing matrix unitarity residual {worst:.3e} exceeds {tolerance:g}"
        )
    return SewingField(w, lat, j.parity, worst)


def gb_equivariance_obstruction(
    p: ProjectionFamily, j: SymmetryData, lat: InvolutiveLattice
) -> float:
    """Obstruction to the projected flat connection being equivariant.

    Max over links x -> x + mu of || P(x) conj(J(x+mu)^dag - J(x)^dag) || per
    unit spacing (forward differences of J along links).  Zero certifies the
    connection built from frame overlaps equivariant; constant J gives 0
    exactly.
    """
    worst = 0.0
    for lk in range(lat.n_links):
        a, b = int(lat.link_tail[lk]), int(lat.link_head[lk])
        dj = j(lat.sites[b]).conj().T - j(lat.sites[a]).conj().T
        val = frob(p.projectors[a] @ dj.conj()) / float(lat.link_spacing[lk])
        worst = max(worst, val)
    return worst


def quaternionic_q(n: int) -> np.ndarray:
    """Block-diagonal symplectic matrix used by odd-parity symmetry checks."""
    if n % 2:
        raise ValueError("quaternionic structure needs even dimension")
    q = np.zeros((n, n))
    for k in range(0, n, 2):
        q[k, k + 1] = -1.0
        q[k + 1, k] = 1.0
    return q
