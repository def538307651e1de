"""Constructors for the beamsplitter and tritter families plus composition helpers."""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import MultiportSpecError
from .fock import Interferometer


class TritterFamily(Enum):
    T1 = "t1"
    T2 = "t2"


@dataclass(frozen=True)
class BeamsplitterParams:
    tau: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"transmissivity must lie in [0, 1], got {self.tau}")

    def build(self) -> Interferometer:
        return beamsplitter(self.tau, self.phi)


@dataclass(frozen=True)
class TritterParams:
    family: TritterFamily
    tau: float
    theta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"transmissivity must lie in [0, 1], got {self.tau}")

    def build(self) -> Interferometer:
        return tritter(self.family, self.tau, self.theta)


def beamsplitter_matrix(tau: complex, phi: float = 0.0) -> np.ndarray:
    """Raw 2x2 beamsplitter matrix; principal square roots, no unitarity check.

    Needed for the transposition composite, where the splitting parameter is
    complex and the result is not unitary.
    """
    rt = cmath.sqrt(tau)
    rr = cmath.sqrt(1 - tau)
    return np.array(
        [
            [rt, -rr * cmath.exp(-1j * phi)],
            [rr * cmath.exp(1j * phi), rt],
        ],
        dtype=np.complex128,
    )


def beamsplitter(tau: float, phi: float = 0.0) -> Interferometer:
    """Two-mode splitter with transmissivity tau and reflection phase phi."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {tau}")
    return Interferometer(beamsplitter_matrix(tau, phi))


def tritter_entries(
    family: TritterFamily, tau, theta
) -> list[list[np.ndarray]]:
    """Entries of the two-parameter tritter families, broadcasting over tau/theta.

    Accepts scalars or numpy arrays so parameter grids evaluate in one call.
    """
    tau = np.asarray(tau, dtype=np.float64)
    theta = np.asarray(theta, dtype=np.float64)
    s = np.exp(1j * theta)
    rho = 1.0 - tau
    if family is TritterFamily.T1:
        a = np.sqrt(tau)
        b = np.sqrt(rho)
        c = 1.0 / math.sqrt(6.0)
        one = np.ones(np.broadcast(tau, theta).shape or ())
        return [
            [2 * a * c * one, (-a * s - 1j * np.sqrt(3 * rho)) * c, (-a * s + 1j * np.sqrt(3 * rho)) * c],
            [2 * b * c * one, (-b * s + 1j * np.sqrt(3 * tau)) * c, (-b * s - 1j * np.sqrt(3 * tau)) * c],
            [math.sqrt(2) * c * one, math.sqrt(2) * s * c, math.sqrt(2) * s * c],
        ]
    if family is TritterFamily.T2:
        b = np.sqrt(rho)
        half = 0.5
        one = np.ones(np.broadcast(tau, theta).shape or ())
        return [
            [np.sqrt(2 * tau) * half * one, (-1j - b * s) * half, (1j - b * s) * half],
            [np.sqrt(2 * tau) * half * one, (1j - b * s) * half, (-1j - b * s) * half],
            [2 * b * half * one, np.sqrt(2 * tau) * s * half, np.sqrt(2 * tau) * s * half],
        ]
    raise ValueError(f"unknown tritter family {family!r}")


def tritter(family: TritterFamily, tau: float, theta: float = 0.0) -> Interferometer:
    """Three-mode interferometer from one of the two two-parameter families."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {tau}")
    e = tritter_entries(family, float(tau), float(theta))
    mat = np.array([[complex(e[k][l]) for l in range(3)] for k in range(3)])
    return Interferometer(mat)


_OMEGA = cmath.exp(2j * math.pi / 3)


def fourier_tritter() -> Interferometer:
    """The symmetric (Fourier) three-port, rows ordered to match the tritter
    families at their symmetric settings."""
    w = _OMEGA
    mat = np.array(
        [[1, w**2, w], [1, w, w**2], [1, 1, 1]], dtype=np.complex128
    ) / math.sqrt(3)
    return Interferometer(mat)


def real_symmetric_tritter() -> Interferometer:
    """The real orthogonal symmetric three-port."""
    r = math.sqrt(3)
    mat = np.array(
        [
            [1, -(1 + r) / 2, (-1 + r) / 2],
            [1, (-1 + r) / 2, -(1 + r) / 2],
            [1, 1, 1],
        ],
        dtype=np.complex128,
    ) / r
    return Interferometer(mat)


def symmetric_tritter(theta: float) -> Interferometer:
    """One-parameter interpolation built from two couplers and a phase plate.

    At theta=0 it equals the Fourier three-port and at theta=pi/2 the real
    symmetric three-port, in both cases up to diagonal phases on the output
    modes (fit numerically by `output_phase_fit`). The raw four-matrix
    product additionally carries a theta-independent diag(1,-i,-i) phase on
    the input modes; the constructor normalizes it away so only output
    phases remain free.
    """
    s2 = 1.0 / math.sqrt(2)
    m1 = np.array([[-s2, 1j * s2, 0], [1j * s2, -s2, 0], [0, 0, 1]])
    m2 = np.array(
        [
            [math.sqrt(2.0 / 3.0), 0, 1j / math.sqrt(3)],
            [0, 1, 0],
            [1j / math.sqrt(3), 0, math.sqrt(2.0 / 3.0)],
        ]
    )
    m3 = np.diag([1, 1, cmath.exp(1j * theta)])
    m4 = np.array([[1, 0, 0], [0, s2, -1j * s2], [0, 1j * s2, -s2]])
    input_norm = np.diag([1, 1j, 1j])
    return Interferometer(input_norm @ m1 @ m2 @ m3 @ m4)


def permutation_matrix(mapping: Sequence[int]) -> np.ndarray:
    """Matrix of the permutation i -> mapping[i] acting on mode vectors:
    (P x)_i = x at the preimage of i."""
    M = len(mapping)
    if sorted(mapping) != list(range(M)):
        raise ValueError(f"not a permutation of 0..{M - 1}: {mapping}")
    P = np.zeros((M, M), dtype=np.complex128)
    for j, i in enumerate(mapping):
        P[i, j] = 1.0
    return P


def direct_sum(*blocks: np.ndarray) -> np.ndarray:
    mats = [np.asarray(b, dtype=np.complex128) for b in blocks]
    size = sum(b.shape[0] for b in mats)
    out = np.zeros((size, size), dtype=np.complex128)
    at = 0
    for b in mats:
        k = b.shape[0]
        out[at : at + k, at : at + k] = b
        at += k
    return out


def compose(*parts: "Interferometer | np.ndarray") -> Interferometer:
    """Matrix product of the parts in the listed order; result must be unitary."""
    mats = [p.entries if isinstance(p, Interferometer) else np.asarray(p, np.complex128) for p in parts]
    if not mats:
        raise ValueError("compose needs at least one factor")
    out = mats[0]
    for nxt in mats[1:]:
        if out.shape[1] != nxt.shape[0]:
            raise ValueError(
                f"dimension mismatch in composition: {out.shape} @ {nxt.shape}"
            )
        out = out @ nxt
    return Interferometer(out)


def output_phase_fit(
    candidate: np.ndarray, target: np.ndarray
) -> tuple[np.ndarray, float]:
    """Diagonal output phases chi_l minimizing ||candidate - target @ diag(e^{i chi})||_F.

    Returns the fitted phases and the Frobenius residual after the fit.
    Output phases multiply columns (output modes) of the target.
    """
    A = np.asarray(candidate, dtype=np.complex128)
    B = np.asarray(target, dtype=np.complex128)
    if A.shape != B.shape:
        raise ValueError("phase fit needs equal shapes")
    phases = np.zeros(A.shape[1])
    fitted = np.empty_like(A)
    for l in range(A.shape[1]):
        overlap = np.vdot(B[:, l], A[:, l])
        chi = np.angle(overlap) if abs(overlap) > 0 else 0.0
        phases[l] = chi
        fitted[:, l] = B[:, l] * np.exp(1j * chi)
    residual = float(np.linalg.norm(A - fitted))
    return phases, residual


def transposition_composite(phi: float = 0.0) -> tuple[np.ndarray, float]:
    """Swap modes 1/3, couple modes 2/3 with the complex-parameter splitter,
    then apply the adjoint Fourier three-port.

    The splitting parameter is (sqrt(3)+i)/4, outside [0, 1], so the middle
    factor is not unitary; the product is evaluated with principal square
    roots and compared (after an output phase fit) against the real symmetric
    tritter. Returns (product, residual); the identity is reported, never
    asserted.
    """
    tau_s = (math.sqrt(3) + 1j) / 4
    p13 = permutation_matrix([2, 1, 0])
    mid = direct_sum(np.eye(1, dtype=np.complex128), beamsplitter_matrix(tau_s, phi))
    prod = p13 @ mid @ fourier_tritter().entries.conj().T
    _, residual = output_phase_fit(prod, real_symmetric_tritter().entries)
    return prod, residual


# ---------------------------------------------------------------------------
# Multiport specification strings (CLI surface)
# ---------------------------------------------------------------------------


def _parse_kv(body: str, required: Sequence[str], defaults: dict) -> dict:
    values = dict(defaults)
    if body:
        for item in body.split(","):
            if "=" not in item:
                raise MultiportSpecError(f"expected key=value, got {item!r}")
            key, _, raw = item.partition("=")
            key = key.strip()
            if key not in values:
                raise MultiportSpecError(f"unknown parameter {key!r}")
            try:
                values[key] = float(raw)
            except ValueError as exc:
                raise MultiportSpecError(f"bad value for {key!r}: {raw!r}") from exc
    missing = [k for k in required if values[k] is None]
    if missing:
        raise MultiportSpecError(f"missing parameters: {', '.join(missing)}")
    return values


def parse_multiport(spec: str) -> Interferometer:
    """Build an interferometer from a specification string.

    Formats: "bs:tau=0.5,phi=0", "t1:tau=0.75,theta=1.5708",
    "t2:tau=0.66,theta=0", "ts:theta=0", "matrix:/path/to/entries.csv".
    The CSV holds one row per line, complex entries like 0.5+0.3j.
    """
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "bs":
            v = _parse_kv(body, ["tau"], {"tau": None, "phi": 0.0})
            return beamsplitter(v["tau"], v["phi"])
        if kind in ("t1", "t2"):
            v = _parse_kv(body, ["tau"], {"tau": None, "theta": 0.0})
            fam = TritterFamily.T1 if kind == "t1" else TritterFamily.T2
            return tritter(fam, v["tau"], v["theta"])
        if kind == "ts":
            v = _parse_kv(body, [], {"theta": 0.0})
            return symmetric_tritter(v["theta"])
        if kind == "matrix":
            return Interferometer(_read_matrix_csv(body))
    except MultiportSpecError:
        raise
    except ValueError as exc:
        raise MultiportSpecError(f"invalid multiport spec {spec!r}: {exc}") from exc
    raise MultiportSpecError(f"unknown multiport kind {kind!r} in {spec!r}")


def _read_matrix_csv(path: str) -> np.ndarray:
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            rows.append([complex(cell.strip().replace(" ", "")) for cell in row])
    if not rows:
        raise MultiportSpecError(f"no matrix rows found in {path}")
    return np.array(rows, dtype=np.complex128)
