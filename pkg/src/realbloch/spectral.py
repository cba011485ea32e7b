"""Hamiltonian families on lattices: spectra, band projections, frames."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._matrix import frob, polar_unitary
from .errors import GapClosureError, ModelError, RankError
from .lattice import InvolutiveLattice

__all__ = [
    "HamiltonianFamily",
    "SpectralData",
    "ProjectionFamily",
    "Frame",
    "eigensolve_family",
    "select_projection",
    "gap_margin",
    "frame_from_projection",
]

HERMITICITY_RTOL = 1e-12
DEGENERACY_TOL = 1e-8


@dataclass
class HamiltonianFamily:
    """Site-coordinate evaluator of an N x N Hermitian matrix."""

    dimension: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    name: str = ""

    def __call__(self, coords) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(coords, dtype=float)))


@dataclass
class SpectralData:
    """Per-site ascending eigenvalues and matching eigenvector columns."""

    eigenvalues: np.ndarray  # (n_sites, N)
    eigenvectors: np.ndarray  # (n_sites, N, N)
    lattice: InvolutiveLattice

    @property
    def dimension(self) -> int:
        return self.eigenvalues.shape[1]


@dataclass
class ProjectionFamily:
    """Per-site rank-m spectral projector."""

    projectors: np.ndarray  # (n_sites, N, N)
    rank: int
    lattice: InvolutiveLattice
    band_indices: tuple = ()

    @property
    def dimension(self) -> int:
        return self.projectors.shape[1]


@dataclass
class Frame:
    """Per-site N x m orthonormal columns spanning the projector range."""

    columns: np.ndarray  # (n_sites, N, m)
    lattice: InvolutiveLattice
    gauge_tag: str = "projector-eigh"

    @property
    def rank(self) -> int:
        return self.columns.shape[2]

    @property
    def dimension(self) -> int:
        return self.columns.shape[1]


def eigensolve_family(
    h: HamiltonianFamily, lat: InvolutiveLattice, threads: int = 1
) -> SpectralData:
    """Diagonalize the family at every lattice site.

    Per-site solves are independent; `threads` > 1 fans them out over a
    thread pool (results are written by site index, so the output does not
    depend on scheduling).
    """
    n, dim = lat.n_sites, h.dimension
    values = np.empty((n, dim))
    vectors = np.empty((n, dim, dim), dtype=complex)

    def solve(s: int):
        mat = h(lat.sites[s])
        if mat.shape != (dim, dim):
            raise ModelError(
                f"{h.name or 'model'}: evaluator returned shape {mat.shape}, "
                f"expected {(dim, dim)}"
            )
        scale = max(frob(mat), 1.0)
        if frob(mat - mat.conj().T) > HERMITICITY_RTOL * scale:
            raise ModelError(
                f"{h.name or 'model'}: non-Hermitian output at site {s}"
            )
        values[s], vectors[s] = np.linalg.eigh(mat)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(solve, range(n)))
    else:
        for s in range(n):
            solve(s)
    return SpectralData(values, vectors, lat)


def gap_margin(s: SpectralData, band_indices) -> float:
    """Minimal spectral distance between the selected bands and the rest.

    Strictly positive return is the numerical gap condition; 0 signals a
    touching selection.  Selecting every band returns +inf.
    """
    sel = sorted(set(int(b) for b in band_indices))
    dim = s.dimension
    rest = [j for j in range(dim) if j not in sel]
    if not sel or not rest:
        return float("inf")
    lam_sel = s.eigenvalues[:, sel]
    lam_rest = s.eigenvalues[:, rest]
    d = np.abs(lam_sel[:, :, None] - lam_rest[:, None, :])
    return float(d.min())


def select_projection(s: SpectralData, band_indices) -> ProjectionFamily:
    """Spectral projector onto an isolated group of bands.

    Band indices refer to ascending-sorted eigenvalues, 0-based.  Raises
    GapClosureError naming the first offending site if the selection is not
    isolated (boundary gap below 1e-8); degeneracy inside the selection is
    allowed.
    """
    sel = sorted(set(int(b) for b in band_indices))
    dim = s.dimension
    if any(b < 0 or b >= dim for b in sel):
        raise ValueError(f"band indices {sel} outside 0..{dim - 1}")
    rest = [j for j in range(dim) if j not in sel]
    if sel and rest:
        d = np.abs(
            s.eigenvalues[:, sel][:, :, None] - s.eigenvalues[:, rest][:, None, :]
        ).min(axis=(1, 2))
        worst = int(np.argmin(d))
        if d[worst] < DEGENERACY_TOL:
            raise GapClosureError(worst, float(d[worst]))
    n = s.eigenvalues.shape[0]
    proj = np.zeros((n, dim, dim), dtype=complex)
    if sel:
        v = s.eigenvectors[:, :, sel]
        proj = v @ v.conj().swapaxes(1, 2)
    return ProjectionFamily(proj, len(sel), s.lattice, tuple(sel))


def smooth_frame_gauge(f: Frame, lat: InvolutiveLattice) -> Frame:
    """Rotate frames so overlaps along a spanning tree are positive.

    Breadth-first from site 0, each frame is right-multiplied by the adjoint
    of the polar unitary of its overlap with the already-fixed parent.  Off-
    tree links keep whatever holonomy the bundle forces on them (a twisted
    bundle admits no globally smooth gauge), but tree links become
    branch-safe for logarithm extraction.
    """
    cols = f.columns.copy()
    neighbors: dict[int, list[int]] = {}
    for a, b in zip(lat.link_tail, lat.link_head):
        neighbors.setdefault(int(a), []).append(int(b))
        neighbors.setdefault(int(b), []).append(int(a))
    seen = {0}
    queue = [0]
    while queue:
        parent = queue.pop(0)
        for child in neighbors.get(parent, ()):
            if child in seen:
                continue
            seen.add(child)
            overlap = cols[child].conj().T @ cols[parent]
            v, _ = polar_unitary(overlap)
            cols[child] = cols[child] @ v
            queue.append(child)
    return Frame(cols, lat, gauge_tag="tree-smoothed")


def frame_from_projection(
    p: ProjectionFamily, reference: Optional[np.ndarray] = None
) -> Frame:
    """Orthonormal spanning columns of the projector range at every site.

    Default gauge: eigenvectors of P with eigenvalue 1, ordered by the index
    of their largest-magnitude component, that component phase-fixed real
    positive.  The gauge is arbitrary but deterministic; downstream
    gauge-invariant quantities never depend on it.

    `reference` (n_sites, N, m) aligns the frame to a smooth section: each
    frame is right-multiplied by the polar unitary of frame^dag @ reference,
    the closest in-range match.  Needed when local connection components are
    compared pointwise against a closed form in a specific gauge.
    """
    n, dim, m = p.projectors.shape[0], p.dimension, p.rank
    cols = np.empty((n, dim, m), dtype=complex)
    for s in range(n):
        w, v = np.linalg.eigh(p.projectors[s])
        keep = np.flatnonzero(w > 0.5)
        if keep.size != m:
            raise RankError(
                f"projector rank {keep.size} != {m} at site {s}"
            )
        basis = v[:, keep]
        order = np.argsort([int(np.argmax(np.abs(basis[:, c]))) for c in range(m)])
        basis = basis[:, order]
        for c in range(m):
            lead = basis[np.argmax(np.abs(basis[:, c])), c]
            if abs(lead) > 0:
                basis[:, c] *= np.conj(lead) / abs(lead)
        cols[s] = basis
    frame = Frame(cols, p.lattice)
    if reference is not None:
        ref = np.asarray(reference, dtype=complex)
        if ref.ndim == 2:
            ref = ref[:, :, None]
        aligned = np.empty_like(cols)
        for s in range(n):
            u, _ = polar_unitary(cols[s].conj().T @ ref[s])
            aligned[s] = cols[s] @ u
        frame = Frame(aligned, p.lattice, gauge_tag="reference-aligned")
    return frame
