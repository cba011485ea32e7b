"""Wilson loops, continuum holonomies, and fixed-loop reality data.

Convention: the holonomy of a loop is the adjoint of the forward-ordered
link product, matching the path-ordered exponential of minus the connection
along the traversal.  Concatenation therefore composes as
hol(loop1 . loop2) = hol(loop2) @ hol(loop1), and reversal inverts.
Raw holonomies are only conjugation-well-defined; exported classifiers are
conjugation-invariant (traces, determinant signs).
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._matrix import expm, frob, symmetric_unitary_sqrt
from .berry import LinkField, ProductConnectionSpec
from .errors import IndeterminateHolonomyError
from .lattice import InvolutiveLattice, LoopPath, fixed_loops
from .symmetry import SewingField

__all__ = [
    "HolonomyResult",
    "FixedLoopHolonomy",
    "wilson_loop",
    "continuum_holonomy",
    "fixed_loop_holonomies",
    "holonomy_equivariance_check",
    "flat_moduli_holonomy",
]

SIGN_ROUND_MARGIN = 0.3


@dataclass
class HolonomyResult:
    """Loop holonomy with its base point and frame gauge tag."""

    hol: np.ndarray  # (m, m) unitary
    loop: Optional[LoopPath]
    base: int
    gauge_tag: str = "frame"

    @property
    def rank(self) -> int:
        return self.hol.shape[0]

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.hol))


@dataclass
class FixedLoopHolonomy:
    """Holonomy around a fixed-point loop, rotated into a real gauge."""

    holonomy: HolonomyResult
    reality_residual: float
    sign: int


def wilson_loop(u: LinkField, loop: LoopPath) -> HolonomyResult:
    """Holonomy of a lattice loop from the ordered link product."""
    lat = u.lattice
    m = u.rank
    prod = np.eye(m, dtype=complex)
    for link_id, sign in lat.loop_link_ids(loop):
        prod = prod @ u.on(link_id, sign)
    return HolonomyResult(prod.conj().T, loop, loop.base)


def continuum_holonomy(
    spec: ProductConnectionSpec,
    curve: Callable[[float], tuple],
    steps: int = 256,
) -> HolonomyResult:
    """Path-ordered exponential of minus the connection along a closed curve.

    `curve(t)` returns (coords, velocity) for t in [0, 1]; midpoint
    evaluation makes the product second-order accurate in 1/steps.
    """
    if steps < 16:
        raise ValueError("need at least 16 integration steps")
    m = spec.rank
    g = np.eye(m, dtype=complex)
    dt = 1.0 / steps
    for k in range(steps):
        t = (k + 0.5) * dt
        coords, velocity = curve(t)
        a = spec.connection_at(coords)
        pulled = sum(a[mu] * v for mu, v in enumerate(np.atleast_1d(velocity)))
        g = expm(-pulled * dt) @ g
    return HolonomyResult(g, None, -1, gauge_tag="continuum")


def _round_sign(value: float) -> int:
    if abs(value - 1.0) < SIGN_ROUND_MARGIN:
        return +1
    if abs(value + 1.0) < SIGN_ROUND_MARGIN:
        return -1
    raise IndeterminateHolonomyError(
        f"holonomy determinant {value:+.4f} too far from +/-1 to round; "
        "refine the lattice"
    )


def fixed_loop_holonomies(
    u: LinkField, lat: InvolutiveLattice, w: SewingField
) -> list:
    """Wilson loops around every fixed-point loop, in a real frame gauge.

    At a fixed base site the sewing matrix is symmetric unitary; its
    principal square root rotates the frame into a gauge fixed by the
    time-reversal lift, where the holonomy of an equivariant connection is
    real orthogonal.  Returns one record per loop with the norm of the
    imaginary part as reality residual and the rounded determinant sign
    (exactly the +/-1 rounded scalar for rank one).
    """
    out = []
    for loop in fixed_loops(lat):
        res = wilson_loop(u, loop)
        g = symmetric_unitary_sqrt(w.w[loop.base])
        rotated = g.conj().T @ res.hol @ g
        residual = frob(rotated.imag)
        sign = _round_sign(float(np.linalg.det(rotated).real))
        out.append(
            FixedLoopHolonomy(
                HolonomyResult(rotated, loop, loop.base, gauge_tag="real-frame"),
                residual,
                sign,
            )
        )
    return out


def holonomy_equivariance_check(
    u: LinkField, w: SewingField, loop: LoopPath, lat: InvolutiveLattice
) -> float:
    """Defect of the holonomy equivariance relation for one loop.

    || W(base)^dag hol(tau loop) W(base) - conj(hol(loop)) ||; a residual at
    discretization order certifies that holonomies of the image loop are the
    conjugates of the original ones.
    """
    from .lattice import map_loop

    hol = wilson_loop(u, loop).hol
    hol_img = wilson_loop(u, map_loop(lat, loop)).hol
    wb = w.w[loop.base]
    return frob(wb.conj().T @ hol_img @ wb - hol.conj())


def flat_moduli_holonomy(a: float) -> complex:
    """Holonomy of the flat product connection i*a*dtheta on the reflection
    circle.

    Two parameters are gauge equivalent exactly when they differ by an
    integer, which is exactly when their holonomies exp(-2*pi*i*a) agree;
    the moduli of such flat connections is the circle R/Z.
    """
    return complex(np.exp(-2.0j * np.pi * a))
