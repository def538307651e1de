"""Suppression-law families: closed forms, numeric zero scans, and reports.

Covers the two-mode closed-form families (one and two photons in the minor
output port), the curated three-mode root table for the two tritter families,
generic suppression-function evaluation on parameter grids with zero-curve
extraction, and the real-amplitude zero counting / interlacing analysis on
the beamsplitter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .amplitudes import amp_recurrence, transition_amplitude
from .errors import ContractViolation
from .fock import Interferometer, OccupationVector, as_occupation
from .multiports import TritterFamily, beamsplitter, tritter, tritter_entries
from .symmetry import Classification

ROOT_SUPPRESSION_TOL = 1e-10
TRIVIAL_ROOT_MARGIN = 1e-9
CURVE_RESIDUAL_TOL = 1e-8


class InputFamily(Enum):
    I = "I"  # one busy port plus two singles: (n1, 1, 1)
    II = "II"  # uniform: (m, m, m)


class OutputFamily(Enum):
    N11 = "n11"  # (n1, 1, 1)
    N20 = "n20"  # (n1, 2, 0)
    N10 = "n10"  # (n1, 1, 0)
    N01 = "n01"  # (n1, 0, 1)


class OutputOrder(Enum):
    N1_FIRST = "n1-first"  # minor output photons in mode 2
    N2_FIRST = "n2-first"  # minor output photons in mode 1


class ThetaCase(Enum):
    ZERO = "zero"  # theta in {0, pi}
    HALF_PI = "half-pi"  # theta in {+pi/2, -pi/2}

    @property
    def angle(self) -> float:
        return 0.0 if self is ThetaCase.ZERO else math.pi / 2

    @property
    def angles(self) -> tuple[float, float]:
        return (0.0, math.pi) if self is ThetaCase.ZERO else (math.pi / 2, -math.pi / 2)


@dataclass(frozen=True)
class Provenance:
    kind: str  # "closed-form" | "numeric-root"
    detail: str = ""
    residual: float | None = None

    def label(self) -> str:
        if self.kind == "numeric-root" and self.residual is not None:
            return f"{self.kind}:{self.residual:.2e}"
        return f"{self.kind}:{self.detail}" if self.detail else self.kind


@dataclass(frozen=True)
class LawDevice:
    """Multiport family with its fixed parameters; the law's root supplies
    the remaining free parameter."""

    kind: str  # "bs" | "t1" | "t2"
    theta: float | None = None
    phi: float | None = None

    def unitary_at(self, root: float) -> Interferometer:
        if self.kind == "bs":
            return beamsplitter(root, self.phi or 0.0)
        if self.kind == "t1":
            return tritter(TritterFamily.T1, root, self.theta or 0.0)
        if self.kind == "t2":
            return tritter(TritterFamily.T2, root, self.theta or 0.0)
        raise ValueError(f"device {self.kind!r} has no free splitting parameter")

    def label(self) -> str:
        if self.kind == "bs":
            return f"bs(phi={self.phi or 0.0:g})"
        return f"{self.kind}(theta={self.theta or 0.0:g})"


@dataclass(frozen=True)
class SuppressionLaw:
    """A verified zero of the transition amplitude at specific parameters."""

    device: LawDevice
    input: OccupationVector
    output: OccupationVector
    roots: tuple[float, ...]
    provenance: Provenance
    classification: Classification = field(default_factory=Classification)
    trivial_roots: tuple[float, ...] = ()
    multiplicity: tuple[int, ...] = ()
    size_param: int | None = None
    residuals: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "input", as_occupation(self.input))
        object.__setattr__(self, "output", as_occupation(self.output))
        roots = tuple(float(r) for r in self.roots)
        object.__setattr__(self, "roots", roots)
        if not self.multiplicity:
            object.__setattr__(self, "multiplicity", (1,) * len(roots))
        residuals = []
        for r in roots:
            if not TRIVIAL_ROOT_MARGIN < r < 1.0 - TRIVIAL_ROOT_MARGIN:
                raise ContractViolation(
                    f"law root {r} lies at a trivial endpoint of (0, 1)"
                )
            value = abs(transition_amplitude(self.unitary_at(r), self.input, self.output))
            if value > ROOT_SUPPRESSION_TOL:
                raise ContractViolation(
                    f"root {r} is not suppressed: |amplitude| = {value:.3e}"
                )
            residuals.append(value)
        object.__setattr__(self, "residuals", tuple(residuals))

    def unitary_at(self, root: float) -> Interferometer:
        return self.device.unitary_at(root)

    def classified(self) -> "SuppressionLaw":
        from .symmetry import classify_law

        return replace(self, classification=classify_law(self))

    def records(self) -> list[dict]:
        """One flat record per root (CSV/JSON surface)."""
        out = []
        for r, mult, res in zip(self.roots, self.multiplicity, self.residuals):
            out.append(
                {
                    "family": self.device.label(),
                    "input": ",".join(str(c) for c in self.input),
                    "output": ",".join(str(c) for c in self.output),
                    "size_param": self.size_param,
                    "tau": r,
                    "theta": self.device.theta if self.device.theta is not None else "",
                    "residual": res,
                    "multiplicity": mult,
                    "provenance": self.provenance.label(),
                    "classification": self.classification.label(),
                }
            )
        return out


# ---------------------------------------------------------------------------
# Beamsplitter closed forms
# ---------------------------------------------------------------------------


def bs_suppression_poly(
    m1: int, m2: int, output_order: OutputOrder, minor_photons: int
) -> list[int]:
    """Integer coefficients (ascending powers of tau) of the suppression
    polynomial for one or two photons in the minor output port."""
    if m1 < 0 or m2 < 0:
        raise ContractViolation("occupations must be nonnegative")
    if minor_photons == 1:
        lead = m1 if output_order is OutputOrder.N1_FIRST else m2
        return [-lead, m1 + m2]
    if minor_photons == 2:
        a, b = (m1, m2) if output_order is OutputOrder.N1_FIRST else (m2, m1)
        S = m1 + m2
        return [a * (a - 1), -2 * a * (S - 1), S * (S - 1)]
    raise NotImplementedError(
        f"no closed form for {minor_photons} photons in the minor port; "
        "use the numeric scan instead"
    )


def _bs_output(m1: int, m2: int, order: OutputOrder, minor: int) -> OccupationVector:
    N = m1 + m2
    if N < minor:
        raise ContractViolation(f"{N} photons cannot fill a {minor}-photon minor port")
    if order is OutputOrder.N1_FIRST:
        return OccupationVector((N - minor, minor))
    return OccupationVector((minor, N - minor))


def bs_law_single(
    m1: int, m2: int, output_order: OutputOrder = OutputOrder.N1_FIRST
) -> SuppressionLaw:
    """Zero of the amplitude with one photon in the minor output port.

    The root sits at the occupation fraction of the matching input mode;
    endpoint roots (an empty input mode) are reported as trivial and carry
    no law.
    """
    if m1 < 0 or m2 < 0 or m1 + m2 < 1:
        raise ContractViolation("need at least one photon")
    lead = m1 if output_order is OutputOrder.N1_FIRST else m2
    root = lead / (m1 + m2)
    trivial = not (TRIVIAL_ROOT_MARGIN < root < 1 - TRIVIAL_ROOT_MARGIN)
    return SuppressionLaw(
        device=LawDevice("bs", phi=0.0),
        input=OccupationVector((m1, m2)),
        output=_bs_output(m1, m2, output_order, 1),
        roots=() if trivial else (root,),
        trivial_roots=(root,) if trivial else (),
        provenance=Provenance("closed-form", "bs-minor1-linear"),
        size_param=m1 + m2,
    )


def bs_law_double(
    m1: int, m2: int, output_order: OutputOrder = OutputOrder.N1_FIRST
) -> SuppressionLaw:
    """Zeros of the amplitude with two photons in the minor output port.

    Quadratic family; either, both, or neither root can fall inside (0, 1).
    A vanishing discriminant would merge them into one root of multiplicity
    two.
    """
    if m1 < 0 or m2 < 0 or m1 + m2 < 2:
        raise ContractViolation("need at least two photons")
    a, b = (m1, m2) if output_order is OutputOrder.N1_FIRST else (m2, m1)
    S = m1 + m2
    center = a / S
    if a == 0:
        pair = [0.0, 0.0]
    else:
        offset = center * math.sqrt((b / a) / (S - 1))
        pair = [center - offset, center + offset]
    roots, trivial = [], []
    for r in pair:
        if TRIVIAL_ROOT_MARGIN < r < 1 - TRIVIAL_ROOT_MARGIN:
            roots.append(r)
        else:
            trivial.append(r)
    multiplicity: tuple[int, ...] = ()
    if len(roots) == 2 and abs(roots[0] - roots[1]) < 1e-9:
        roots = [roots[0]]
        multiplicity = (2,)
    return SuppressionLaw(
        device=LawDevice("bs", phi=0.0),
        input=OccupationVector((m1, m2)),
        output=_bs_output(m1, m2, output_order, 2),
        roots=tuple(roots),
        trivial_roots=tuple(trivial),
        multiplicity=multiplicity,
        provenance=Provenance("closed-form", "bs-minor2-quadratic"),
        size_param=S,
    )


# ---------------------------------------------------------------------------
# Tritter suppression functions (general forms in the matrix entries)
# ---------------------------------------------------------------------------


def _f_minor_10(E, occ):
    m1, m2, m3 = occ
    return (
        m1 * E[0][1] * E[1][0] * E[2][0]
        + m2 * E[0][0] * E[1][1] * E[2][0]
        + m3 * E[0][0] * E[1][0] * E[2][1]
    )


def _f_minor_01(E, occ):
    m1, m2, m3 = occ
    return (
        m1 * E[0][2] * E[1][0] * E[2][0]
        + m2 * E[0][0] * E[1][2] * E[2][0]
        + m3 * E[0][0] * E[1][0] * E[2][2]
    )


def _f_minor_11(E, occ):
    m1, m2, m3 = occ
    paired = E[0][0] * E[1][0] * E[2][0] * (
        m1 * m2 * (E[0][1] * E[1][2] + E[1][1] * E[0][2]) * E[2][0]
        + m1 * m3 * (E[0][1] * E[2][2] + E[2][1] * E[0][2]) * E[1][0]
        + m2 * m3 * (E[1][1] * E[2][2] + E[2][1] * E[1][2]) * E[0][0]
    )
    doubled = (
        m1 * (m1 - 1) * E[0][1] * E[0][2] * E[1][0] ** 2 * E[2][0] ** 2
        + m2 * (m2 - 1) * E[1][1] * E[1][2] * E[0][0] ** 2 * E[2][0] ** 2
        + m3 * (m3 - 1) * E[2][1] * E[2][2] * E[0][0] ** 2 * E[1][0] ** 2
    )
    return paired + doubled


def _f_minor_20(E, occ):
    m1, m2, m3 = occ
    paired = 2 * E[0][0] * E[1][0] * E[2][0] * (
        m1 * m2 * E[0][1] * E[1][1] * E[2][0]
        + m1 * m3 * E[0][1] * E[2][1] * E[1][0]
        + m2 * m3 * E[1][1] * E[2][1] * E[0][0]
    )
    doubled = (
        m1 * (m1 - 1) * E[0][1] ** 2 * E[1][0] ** 2 * E[2][0] ** 2
        + m2 * (m2 - 1) * E[1][1] ** 2 * E[0][0] ** 2 * E[2][0] ** 2
        + m3 * (m3 - 1) * E[2][1] ** 2 * E[0][0] ** 2 * E[1][0] ** 2
    )
    return paired + doubled


_F_DISPATCH = {
    OutputFamily.N10: _f_minor_10,
    OutputFamily.N01: _f_minor_01,
    OutputFamily.N11: _f_minor_11,
    OutputFamily.N20: _f_minor_20,
}


def input_occupation(input_family: InputFamily, size_param: int) -> OccupationVector:
    if size_param < 1:
        raise ContractViolation("size parameter must be at least 1")
    if input_family is InputFamily.I:
        return OccupationVector((size_param, 1, 1))
    return OccupationVector((size_param,) * 3)


def output_occupation(
    output_family: OutputFamily, total_photons: int
) -> OccupationVector:
    minor = {
        OutputFamily.N10: (1, 0),
        OutputFamily.N01: (0, 1),
        OutputFamily.N11: (1, 1),
        OutputFamily.N20: (2, 0),
    }[output_family]
    n1 = total_photons - sum(minor)
    if n1 < 0:
        raise ContractViolation(
            f"{total_photons} photons cannot feed output family {output_family.value}"
        )
    return OccupationVector((n1,) + minor)


def tritter_suppression_value(
    family: TritterFamily,
    input_family: InputFamily,
    output_family: OutputFamily,
    tau,
    theta,
    size_param: int,
):
    """Suppression-function value for the given tritter configuration.

    Polynomial in the matrix entries; vanishes exactly where the transition
    amplitude vanishes (the structural prefactor carries no interior zeros).
    Broadcasts over numpy arrays in tau and theta.
    """
    if size_param < 1:
        raise ContractViolation("size parameter must be at least 1")
    tau_arr = np.asarray(tau, dtype=np.float64)
    if np.any(tau_arr < -1e-12) or np.any(tau_arr > 1 + 1e-12):
        raise ValueError("tau must lie in [0, 1]")
    occ = input_occupation(input_family, size_param).counts
    E = tritter_entries(family, tau, theta)
    value = _F_DISPATCH[output_family](E, occ)
    if np.ndim(value) == 0:
        return complex(value)
    return value


# ---------------------------------------------------------------------------
# Curated three-mode root table
# ---------------------------------------------------------------------------


class Table1Row(Enum):
    N10_II = "n10-uniform"
    N11_I = "n11-singles"
    N20_I = "n20-singles"
    N11_II = "n11-uniform"
    N20_II = "n20-uniform"

    @property
    def output_family(self) -> OutputFamily:
        return {
            Table1Row.N10_II: OutputFamily.N10,
            Table1Row.N11_I: OutputFamily.N11,
            Table1Row.N20_I: OutputFamily.N20,
            Table1Row.N11_II: OutputFamily.N11,
            Table1Row.N20_II: OutputFamily.N20,
        }[self]

    @property
    def input_family(self) -> InputFamily:
        return InputFamily.I if self in (Table1Row.N11_I, Table1Row.N20_I) else InputFamily.II


def uniform_quadratic_roots(m: int) -> list[float]:
    """Roots of 3(3m-1) tau^2 - 6(2m-1) tau + 4(m-1), the two-root family of
    the uniform input on the second tritter family."""
    disc = math.sqrt(12 * (4 * m - 1))
    lo = (2 * m - 1) / (3 * m - 1) - disc / (6 * (3 * m - 1))
    hi = (2 * m - 1) / (3 * m - 1) + disc / (6 * (3 * m - 1))
    return [lo, hi]


TABLE1_NOTES = {
    "uniform-quadratic": (
        "resolved reading: tau2 = (2m-1)/(3m-1) +/- sqrt(12(4m-1))/(6(3m-1)), "
        "i.e. the roots of 3(3m-1) tau^2 - 6(2m-1) tau + 4(m-1); matched against "
        "a numeric root scan of the general suppression function at theta=0"
    ),
    "singles-half-pi": (
        "verified root tau1 = 3 n1/(4(n1+1)); the alternative 3 n1/(4 n1+1) does "
        "not suppress the amplitude (checked by scan)"
    ),
    "singles-footnote": (
        "for n1=1 at theta=+/-pi/2 the first-family amplitude vanishes for every "
        "tau1 (verified on a grid); no isolated root is served"
    ),
}


class TableRestriction(ValueError):
    """The requested cell lies outside its tabulated validity range."""


def _restriction(msg: str):
    raise TableRestriction(f"outside the tabulated validity range: {msg}")


def _table1_cell(
    row: Table1Row, theta_case: ThetaCase, family: TritterFamily, size: int
) -> list[float] | None:
    """Closed-form roots of one table cell, None when no closed form is
    tabulated for that cell; raises for sizes outside the cell's validity."""
    n1 = m = size
    zero = theta_case is ThetaCase.ZERO
    if row is Table1Row.N10_II:
        return [0.5] if family is TritterFamily.T1 else [2.0 / 3.0]
    if row is Table1Row.N11_I:
        if family is TritterFamily.T1:
            if zero:
                return [3 * n1 * (n1 - 1) / (2 * (n1 + 1) * (n1 + 2))]
            if n1 == 1:
                _restriction(
                    "n1=1 has a suppression law for arbitrary tau1 at theta=+/-pi/2 "
                    "(see TABLE1_NOTES['singles-footnote'])"
                )
            return [3 * n1 / (4 * (n1 + 1))]
        if zero:
            return [2 * n1 * (n1 - 1) / ((n1 + 1) * (n1 + 2))]
        return [4 * n1 / ((n1 + 1) * (n1 + 2))]
    if row is Table1Row.N20_I:
        if not zero:
            return None  # no tabulated closed form; numeric scan covers it
        if n1 > 2:
            _restriction(f"the constant root holds only for n1 in {{1, 2}}, got {n1}")
        return [0.5] if family is TritterFamily.T1 else [2.0 / 3.0]
    if row is Table1Row.N11_II:
        if family is TritterFamily.T1:
            if zero:
                s = 1.0 / math.sqrt(m)
                return [(1 - s) / 2, (1 + s) / 2]
            return [0.5]
        if zero:
            return uniform_quadratic_roots(m)
        return [2.0 / 3.0, 2 * m / (3 * m - 1)]
    if row is Table1Row.N20_II:
        if family is TritterFamily.T1:
            if zero:
                return [0.5]
            return None  # no tabulated closed form at theta=+/-pi/2
        if zero:
            return [2.0 / 3.0, 2 * m / (3 * m - 1)]
        return uniform_quadratic_roots(m)
    raise ValueError(row)


def table1_roots(
    row: Table1Row,
    theta_case: ThetaCase,
    size_param: int,
    family: TritterFamily | None = None,
    verify: bool = True,
):
    """Closed-form roots of the curated table, re-verified against the
    amplitude engine before being served.

    With a family given, returns that cell's roots in (0, 1) (raising a
    domain error outside the cell's validity range, with the restriction
    named). Without one, returns a dict over the families whose cells carry
    closed forms for this size.
    """
    if size_param < 1:
        raise ValueError("size parameter must be at least 1")
    if family is None:
        out: dict[TritterFamily, list[float]] = {}
        for fam in TritterFamily:
            try:
                cell = table1_roots(row, theta_case, size_param, fam, verify=verify)
            except TableRestriction:
                continue
            out[fam] = cell
        return out
    cell = _table1_cell(row, theta_case, family, size_param)
    if cell is None:
        _restriction(
            f"{row.value} has no tabulated closed form for {family.value} at "
            f"{theta_case.value}; use the numeric scan"
        )
    roots = sorted(r for r in cell if TRIVIAL_ROOT_MARGIN < r < 1 - TRIVIAL_ROOT_MARGIN)
    if verify:
        m_in = input_occupation(row.input_family, size_param)
        n_out = output_occupation(row.output_family, m_in.total())
        for r in roots:
            U = tritter(family, r, theta_case.angle)
            value = abs(transition_amplitude(U, m_in, n_out))
            if value > ROOT_SUPPRESSION_TOL:
                raise ContractViolation(
                    f"tabulated root {r} failed verification: |amp| = {value:.3e}"
                )
    return roots


def table1_law(
    row: Table1Row, theta_case: ThetaCase, family: TritterFamily, size_param: int
) -> list[SuppressionLaw]:
    """One law per tabulated root (branches classify independently)."""
    roots = table1_roots(row, theta_case, size_param, family)
    m_in = input_occupation(row.input_family, size_param)
    n_out = output_occupation(row.output_family, m_in.total())
    laws = []
    for r in roots:
        laws.append(
            SuppressionLaw(
                device=LawDevice(family.value, theta=theta_case.angle),
                input=m_in,
                output=n_out,
                roots=(r,),
                provenance=Provenance(
                    "closed-form", f"{row.value}:{family.value}:{theta_case.value}"
                ),
                size_param=size_param,
            )
        )
    return laws


def resolve_uniform_quadratic(m: int, tau_steps: int = 1024) -> tuple[list[float], str]:
    """Match the ambiguous two-root table entry against a numeric root scan
    of the general suppression function; returns the verified roots and the
    note naming the resolved reading."""
    scan = scan_zero_slice(
        TritterFamily.T2, InputFamily.II, OutputFamily.N11, m, 0.0, tau_steps
    )
    closed = [
        r for r in uniform_quadratic_roots(m)
        if TRIVIAL_ROOT_MARGIN < r < 1 - TRIVIAL_ROOT_MARGIN
    ]
    if len(scan.roots) != len(closed) or any(
        abs(a - b) > 1e-6 for a, b in zip(sorted(scan.roots), sorted(closed))
    ):
        raise ContractViolation(
            f"scan roots {scan.roots} do not match the resolved reading {closed}"
        )
    return closed, TABLE1_NOTES["uniform-quadratic"]


# ---------------------------------------------------------------------------
# Numeric zero extraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SliceScan:
    roots: tuple[float, ...]
    residuals: tuple[float, ...]
    identically_zero: bool
    scale: float


def _is_trivial_root(t: float, f_abs, h: float) -> bool:
    """A root counts as trivial when it sits at an endpoint of (0, 1) or is
    the finite-precision image of a zero exactly at the endpoint."""
    if not TRIVIAL_ROOT_MARGIN < t < 1 - TRIVIAL_ROOT_MARGIN:
        return True
    for endpoint in (0.0, 1.0):
        if abs(t - endpoint) < 2 * h and f_abs(endpoint) < CURVE_RESIDUAL_TOL:
            return True
    return False


def scan_zero_slice(
    family: TritterFamily,
    input_family: InputFamily,
    output_family: OutputFamily,
    size_param: int,
    theta: float,
    tau_steps: int = 512,
) -> SliceScan:
    """Nontrivial zeros of the suppression function along a fixed-theta line."""
    if tau_steps < 64:
        raise ContractViolation("need at least 64 grid steps")
    taus = np.linspace(0.0, 1.0, tau_steps + 1)
    vals = np.abs(
        tritter_suppression_value(family, input_family, output_family, taus, theta, size_param)
    )
    scale = float(vals.max())
    if scale < 1e-12:
        return SliceScan((), (), True, scale)

    def f_abs(t: float) -> float:
        return abs(
            tritter_suppression_value(family, input_family, output_family, float(t), theta, size_param)
        )

    h = 1.0 / tau_steps
    candidates = []
    for i in range(len(taus)):
        left = vals[i - 1] if i > 0 else np.inf
        right = vals[i + 1] if i < len(taus) - 1 else np.inf
        if vals[i] <= left and vals[i] <= right and vals[i] < 0.05 * scale:
            candidates.append(taus[i])
    roots, residuals = [], []
    for t0 in candidates:
        lo, hi = max(0.0, t0 - h), min(1.0, t0 + h)
        res = minimize_scalar(
            lambda t: f_abs(t) ** 2, bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-14},
        )
        t_star = float(res.x)
        value = f_abs(t_star)
        if value > CURVE_RESIDUAL_TOL:
            continue
        if _is_trivial_root(t_star, f_abs, h):
            continue
        if roots and abs(t_star - roots[-1]) < 1e-7:
            continue
        roots.append(t_star)
        residuals.append(value)
    return SliceScan(tuple(roots), tuple(residuals), False, scale)


@dataclass(frozen=True)
class ZeroCurve:
    """Chained zeros of a suppression function over the (tau, theta) plane."""

    points: tuple[tuple[float, float, float], ...]  # (tau, theta, residual)
    family: TritterFamily
    input_family: InputFamily
    output_family: OutputFamily
    size_param: int

    def __post_init__(self):
        if any(res >= CURVE_RESIDUAL_TOL for _, _, res in self.points):
            raise ContractViolation("zero-curve point exceeds the residual bound")


def _newton_refine(f, x0, y0, scale, x_range, y_range, max_iter=50, damping=0.5):
    """Damped 2-D Newton on (Re f, Im f); falls back to coordinate-wise
    minimization of |f|^2 when the iteration stalls."""
    hx = 1e-7 * (x_range[1] - x_range[0])
    hy = 1e-7 * (y_range[1] - y_range[0])
    x, y = float(x0), float(y0)
    tol = min(CURVE_RESIDUAL_TOL, CURVE_RESIDUAL_TOL * max(1.0, scale) * 1e-2)
    for _ in range(max_iter):
        v = f(x, y)
        if abs(v) < tol:
            return x, y, abs(f(x, y))
        xl, xr = max(x - hx, x_range[0]), min(x + hx, x_range[1])
        dvx = (f(xr, y) - f(xl, y)) / (xr - xl)
        dvy = (f(x, y + hy) - f(x, y - hy)) / (2 * hy)
        J = np.array([[dvx.real, dvy.real], [dvx.imag, dvy.imag]])
        rhs = -np.array([v.real, v.imag])
        try:
            step = np.linalg.solve(J, rhs)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        x = min(max(x + damping * step[0], x_range[0]), x_range[1])
        y = y + damping * step[1]
    v = f(x, y)
    if abs(v) < CURVE_RESIDUAL_TOL * max(1.0, scale):
        return x, y, abs(v)
    # coordinate-wise fallback
    wx = 2 * (x_range[1] - x_range[0]) / 64
    wy = 2 * (y_range[1] - y_range[0]) / 64
    for _ in range(4):
        res = minimize_scalar(
            lambda t: abs(f(t, y)) ** 2,
            bounds=(max(x - wx, x_range[0]), min(x + wx, x_range[1])),
            method="bounded", options={"xatol": 1e-14},
        )
        x = float(res.x)
        res = minimize_scalar(
            lambda t: abs(f(x, t)) ** 2,
            bounds=(y - wy, y + wy),
            method="bounded", options={"xatol": 1e-14},
        )
        y = float(res.x)
    return x, y, abs(f(x, y))


def scan_zero_curves(
    family: TritterFamily,
    input_family: InputFamily,
    output_family: OutputFamily,
    size_param: int,
    tau_steps: int = 96,
    theta_steps: int = 96,
    theta_range: tuple[float, float] = (0.0, math.pi),
    threads: int | None = None,
) -> list[ZeroCurve]:
    """Zeros of the suppression function over a (tau, theta) grid.

    Candidate cells are those whose corners straddle zero in both the real
    and the imaginary part (or already sit near zero in magnitude); each is
    refined by damped Newton iteration and the refined points are chained
    into curves by nearest-neighbor linking. Roots at the trivial tau
    endpoints are dropped. An empty list is a valid outcome.
    """
    if tau_steps < 64 or theta_steps < 64:
        raise ContractViolation("need at least a 64 x 64 grid")
    taus = np.linspace(0.0, 1.0, tau_steps + 1)
    thetas = np.linspace(theta_range[0], theta_range[1], theta_steps + 1)
    TT, HH = np.meshgrid(taus, thetas, indexing="ij")
    F = tritter_suppression_value(
        family, input_family, output_family, TT, HH, size_param
    )
    scale = float(np.abs(F).max())
    if scale < 1e-30:
        raise ContractViolation(
            "suppression function vanishes identically on the grid"
        )
    R, I = F.real, F.imag
    absF = np.abs(F)

    def corners(arr):
        return np.stack([arr[:-1, :-1], arr[1:, :-1], arr[:-1, 1:], arr[1:, 1:]])

    cr, ci, ca = corners(R), corners(I), corners(absF)
    line_eps = 1e-9 * scale
    spans_re = (cr.min(axis=0) <= line_eps) & (cr.max(axis=0) >= -line_eps)
    spans_im = (ci.min(axis=0) <= line_eps) & (ci.max(axis=0) >= -line_eps)
    near = ca.min(axis=0) < 0.25 * scale
    tiny = ca.min(axis=0) < 1e-6 * scale
    cells = np.argwhere((spans_re & spans_im & near) | tiny)

    def f_scalar(t, h):
        return complex(
            tritter_suppression_value(
                family, input_family, output_family, float(t), float(h), size_param
            )
        )

    def refine(cell):
        i, j = int(cell[0]), int(cell[1])
        x0 = (taus[i] + taus[i + 1]) / 2
        y0 = (thetas[j] + thetas[j + 1]) / 2
        x, y, res = _newton_refine(f_scalar, x0, y0, scale, (0.0, 1.0), theta_range)
        if res < CURVE_RESIDUAL_TOL and not _is_trivial_root(
            x, lambda t: abs(f_scalar(t, y)), 1.0 / tau_steps
        ):
            return (x, y, res)
        return None

    if threads and threads > 1 and len(cells) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            refined = list(pool.map(refine, cells))
    else:
        refined = [refine(c) for c in cells]
    points = [p for p in refined if p is not None]
    # dedup within half a grid cell
    htau, hth = 1.0 / tau_steps, (theta_range[1] - theta_range[0]) / theta_steps
    unique: list[tuple[float, float, float]] = []
    for p in sorted(points):
        if any(
            abs(p[0] - q[0]) < 0.5 * htau and abs(p[1] - q[1]) < 0.5 * hth
            for q in unique
        ):
            continue
        unique.append(p)
    # nearest-neighbor chaining, step bound two grid cells
    remaining = list(unique)
    curves: list[ZeroCurve] = []
    while remaining:
        chain = [remaining.pop(0)]
        grew = True
        while grew and remaining:
            grew = False
            for end in (chain[-1], chain[0]):
                if not remaining:
                    break
                dists = [
                    max(abs(p[0] - end[0]) / htau, abs(p[1] - end[1]) / hth)
                    for p in remaining
                ]
                best = int(np.argmin(dists))
                if dists[best] <= 2.0:
                    p = remaining.pop(best)
                    if end is chain[-1]:
                        chain.append(p)
                    else:
                        chain.insert(0, p)
                    grew = True
        curves.append(
            ZeroCurve(tuple(chain), family, input_family, output_family, size_param)
        )
    return curves


# ---------------------------------------------------------------------------
# Beamsplitter zero counting and interlacing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroReport:
    """All interior zeros of a real two-mode amplitude as a function of tau."""

    zero_locations: tuple[float, ...]
    count: int
    endpoint_values: tuple[float, float]
    residuals: tuple[float, ...]

    def __post_init__(self):
        if self.count != len(self.zero_locations):
            raise ContractViolation("zero count must match the location list")


def _bs_real_amplitude(m: OccupationVector, n: OccupationVector, tau: float) -> float:
    value = amp_recurrence(beamsplitter(tau, 0.0), m, n).value
    if abs(value.imag) > 1e-10:
        raise ContractViolation("two-mode amplitude should be real at phi=0")
    return value.real


def bs_zero_report(
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
    grid_steps: int = 2000,
) -> ZeroReport:
    """Count and locate the zeros of the real amplitude over tau in (0, 1).

    The reflection phase is fixed at zero so the amplitude is real; sign
    changes on the grid are refined by bisection to 1e-12.
    """
    m, n = as_occupation(m), as_occupation(n)
    if m.modes != 2 or n.modes != 2:
        raise ContractViolation("zero report is a two-mode analysis")
    if grid_steps < 1000:
        raise ContractViolation("need at least 1000 grid steps")
    taus = np.linspace(0.0, 1.0, grid_steps + 1)
    vals = np.array([_bs_real_amplitude(m, n, t) for t in taus])
    zeros, residuals = [], []
    for i in range(1, grid_steps):
        if vals[i] == 0.0:
            if TRIVIAL_ROOT_MARGIN < taus[i] < 1 - TRIVIAL_ROOT_MARGIN:
                zeros.append(float(taus[i]))
                residuals.append(0.0)
            continue
        if vals[i - 1] * vals[i] < 0:
            lo, hi = taus[i - 1], taus[i]
            flo = vals[i - 1]
            while hi - lo > 1e-12:
                mid = (lo + hi) / 2
                fmid = _bs_real_amplitude(m, n, mid)
                if fmid == 0.0:
                    lo = hi = mid
                    break
                if flo * fmid < 0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
            root = (lo + hi) / 2
            if TRIVIAL_ROOT_MARGIN < root < 1 - TRIVIAL_ROOT_MARGIN:
                zeros.append(float(root))
                residuals.append(abs(_bs_real_amplitude(m, n, root)))
    return ZeroReport(
        tuple(zeros),
        len(zeros),
        (float(vals[0]), float(vals[-1])),
        tuple(residuals),
    )


@dataclass(frozen=True)
class InterlacingResult:
    interlaced: bool
    detail: str
    zeros: tuple[float, ...]
    zeros_shifted: tuple[float, ...]


def check_interlacing(
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
    n_shifted: OccupationVector | Sequence[int],
    grid_steps: int = 2000,
) -> InterlacingResult:
    """Do the zeros of two amplitudes related by moving one boson interlace?

    True when between every pair of consecutive zeros of either amplitude
    lies exactly one zero of the other; vacuously true when neither list has
    two zeros.
    """
    m, n, ns = as_occupation(m), as_occupation(n), as_occupation(n_shifted)
    if n.modes != 2 or ns.modes != 2 or n.total() != ns.total():
        raise ContractViolation("outputs must be two-mode with equal totals")
    if abs(n[0] - ns[0]) != 1:
        raise ContractViolation(
            f"outputs {n.counts} and {ns.counts} are not related by moving one boson"
        )
    za = bs_zero_report(m, n, grid_steps).zero_locations
    zb = bs_zero_report(m, ns, grid_steps).zero_locations
    for name, primary, other in (("first", za, zb), ("second", zb, za)):
        for lo, hi in zip(primary, primary[1:]):
            inside = sum(1 for z in other if lo < z < hi)
            if inside != 1:
                return InterlacingResult(
                    False,
                    f"gap ({lo:.6f}, {hi:.6f}) of the {name} list holds "
                    f"{inside} zeros of the other",
                    za,
                    zb,
                )
    return InterlacingResult(True, "zero lists interlace", za, zb)
