"""Assembly of free and torsion invariants into a classification verdict.

The classifying group per supported base is a hard-coded table; the free
part is read from the integrated first Chern density and the torsion part
from fixed-loop holonomy signs.  Along fixed loops the Real condition kills
the continuous tangential part of the connection, so the sign of the actual
(generally curved) equivariant Berry connection already is the flat
classification datum; no explicit flat representative is constructed.
"""

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .berry import (
    ProductConnectionSpec,
    equivariance_residual,
    link_field,
    link_field_from_connection,
)
from .curvature import chern_number, plaquette_curvature
from .errors import SymmetryViolationError, UnsupportedBaseError, UnsupportedParityError
from .holonomy import fixed_loop_holonomies
from .lattice import InvolutiveLattice
from .spectral import (
    HamiltonianFamily,
    eigensolve_family,
    frame_from_projection,
    gap_margin,
    select_projection,
)
from .symmetry import (
    SewingField,
    SymmetryData,
    sewing_matrix,
    verify_hamiltonian_symmetry,
    verify_projection_symmetry,
)

__all__ = ["ClassificationResult", "classify_real_bundle", "mixed_case_report"]

# classifying group of rank-m Real bundles per base; free/torsion readout plan
_BASE_TABLE = {
    "circle-trivial": ("Z2", False, True),
    "circle-reflection": ("0", False, False),
    "circle-antipodal": ("0", False, False),
    "sphere2-reflect": ("Z", True, False),
    "torus2-eta": ("Z2 + Z", True, True),
    "torus2-eta1": ("Z2 + Z", True, True),
    "torus2-xi": ("Z", True, False),
    "torus2-trivial": ("Z2 + Z2", False, True),
}

DEFAULT_TOLERANCES = {
    "hamiltonian_symmetry": 1e-10,
    "projection_symmetry": 1e-8,
    "sewing_unitarity": 1e-6,
}


@dataclass
class ClassificationResult:
    base_tag: str
    group: str
    free: list
    torsion: list
    verdict: str
    diagnostics: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "base": self.base_tag,
            "group": self.group,
            "free": list(self.free),
            "torsion": list(self.torsion),
            "verdict": self.verdict,
            "diagnostics": {k: _jsonable(v) for k, v in self.diagnostics.items()},
            "warnings": list(self.warnings),
        }


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def classify_real_bundle(
    model: Union[HamiltonianFamily, ProductConnectionSpec],
    j: Optional[SymmetryData] = None,
    lat: Optional[InvolutiveLattice] = None,
    bands=None,
    tolerances: Optional[dict] = None,
    threads: int = 1,
) -> ClassificationResult:
    """Classify the Real bundle of a symmetric family over a supported base.

    Hamiltonian families are classified through their isolated-band Berry
    connection (the bands argument selects the group, ascending 0-based);
    product-bundle models are classified through their closed-form
    connection.  Raises distinct errors for unsupported bases, odd parity,
    gap closure, and symmetry violations.
    """
    if lat is None:
        raise ValueError("a lattice is required")
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})

    if lat.base_tag not in _BASE_TABLE:
        raise UnsupportedBaseError(f"no classification table for {lat.base_tag}")
    group, want_free, want_torsion = _BASE_TABLE[lat.base_tag]

    diagnostics: dict = {}
    warnings: list = []

    if isinstance(model, ProductConnectionSpec):
        j = model.j if j is None else j
        if j.parity != +1:
            raise UnsupportedParityError(
                "only even time reversal is classified here"
            )
        jres = _j_consistency(j, lat)
        diagnostics["unitary_residual"] = jres
        if jres > tol["hamiltonian_symmetry"] * 1e2 and jres > 1e-8:
            raise SymmetryViolationError(
                f"J equivariance residual {jres:.3e} on {lat.base_tag}"
            )
        if j.dimension != model.rank:
            raise ValueError("product-bundle J must act on the full fiber")
        u = link_field_from_connection(model, lat)
        # standard-basis frames make the sewing matrix equal to J itself
        w = SewingField(j.sample(lat), lat, j.parity, 0.0)
        m = model.rank
    else:
        if j is None:
            raise ValueError("Hamiltonian classification needs symmetry data")
        if j.parity != +1:
            raise UnsupportedParityError("only even time reversal is classified here")
        spec_data = eigensolve_family(model, lat, threads=threads)
        report = verify_hamiltonian_symmetry(
            model, j, lat, tol["hamiltonian_symmetry"]
        )
        diagnostics["hamiltonian_residual"] = report.hamiltonian_residual
        diagnostics["unitary_residual"] = report.unitary_residual
        if not report.symmetric:
            raise SymmetryViolationError(
                f"Hamiltonian symmetry residual {report.hamiltonian_residual:.3e} "
                f"/ unitary residual {report.unitary_residual:.3e} above "
                f"{tol['hamiltonian_symmetry']:g}"
            )
        diagnostics["gap_margin"] = gap_margin(spec_data, bands)
        proj = select_projection(spec_data, bands)
        pres = verify_projection_symmetry(proj, j, lat, tol["projection_symmetry"])
        diagnostics["projection_residual"] = pres
        if pres > tol["projection_symmetry"]:
            raise SymmetryViolationError(
                f"projection symmetry residual {pres:.3e} above "
                f"{tol['projection_symmetry']:g}"
            )
        frame = frame_from_projection(proj)
        u = link_field(frame, lat)
        w = sewing_matrix(frame, j, lat, tol["sewing_unitarity"])
        diagnostics["sewing_unitarity"] = w.unitarity_residual
        m = proj.rank

    diagnostics["equivariance_residual"] = equivariance_residual(u, w, lat, +1)

    free: list = []
    torsion: list = []
    if want_free:
        value, rounded = chern_number(plaquette_curvature(u, lat), lat)
        diagnostics["chern_value"] = value
        diagnostics["quantization_residual"] = abs(value - rounded)
        free.append(rounded)
    torsion_records = []
    if want_torsion:
        torsion_records = fixed_loop_holonomies(u, lat, w)
        torsion = [rec.sign for rec in torsion_records]
        diagnostics["reality_residuals"] = [
            rec.reality_residual for rec in torsion_records
        ]
    if lat.base_tag in ("torus2-eta", "torus2-eta1"):
        warnings.append(
            "mixed free+torsion base: the splitting into the integer and the "
            "sign pair is not canonical; both are reported"
        )

    verdict = _verdict(lat.base_tag, free, torsion)
    return ClassificationResult(
        base_tag=lat.base_tag,
        group=group,
        free=free,
        torsion=torsion,
        verdict=verdict,
        diagnostics=diagnostics,
        warnings=warnings,
    )


def _j_consistency(j: SymmetryData, lat: InvolutiveLattice) -> float:
    tau = lat.involution
    eye = np.eye(j.dimension)
    res = 0.0
    for s in range(lat.n_sites):
        res = max(
            res,
            float(
                np.linalg.norm(
                    j(lat.sites[tau[s]]) @ j(lat.sites[s]).conj() - j.parity * eye
                )
            ),
        )
    return res


def _verdict(base_tag: str, free: list, torsion: list) -> str:
    if base_tag == "circle-trivial":
        return "Mobius class" if torsion and torsion[0] == -1 else "trivial"
    if base_tag in ("circle-reflection", "circle-antipodal"):
        return "trivial"
    if base_tag in ("sphere2-reflect", "torus2-xi"):
        return f"Chern {free[0]}"
    if base_tag in ("torus2-eta", "torus2-eta1"):
        return f"free {free[0]}, torsion ({torsion[0]:+d}, {torsion[1]:+d})"
    if base_tag == "torus2-trivial":
        signs = ", ".join(f"{s:+d}" for s in torsion)
        return f"torsion ({signs})"
    return "trivial"


def mixed_case_report(result: ClassificationResult) -> str:
    """Plain-text report of the invariant pair without a combined label.

    On bases with both free and torsion parts the two readouts are listed
    side by side with the explicit caveat that no canonical splitting into
    a single label exists; pure cases note which part is absent.
    """
    lines = [
        f"base: {result.base_tag}",
        f"classifying group: {result.group}",
    ]
    if result.free:
        lines.append(f"free invariant (Chern number): {result.free[0]}")
    else:
        lines.append("free invariant: none (pure torsion base)")
    if result.torsion:
        signs = ", ".join(f"{s:+d}" for s in result.torsion)
        lines.append(f"torsion invariants (fixed-loop signs): ({signs})")
    else:
        lines.append("torsion invariants: none (torsion-free base)")
    if result.free and result.torsion:
        lines.append(
            "note: the decomposition into free and torsion parts is not "
            "canonical; the pair is reported without a combined label"
        )
    return "\n".join(lines)
