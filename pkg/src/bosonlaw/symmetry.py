"""Permutation-symmetry suppression predictor and law classification.

A multiport U may satisfy P_sigma U = Z U Lambda (input side) or
U P_sigma^+ = Lambda* U Z* (output side) with diagonal unitary Z (external
phases) and Lambda (eigenvalues of the permutation). When the input (output)
configuration is invariant under sigma, outputs (inputs) whose Lambda-power
product differs from one are suppressed. Only a fraction of the laws found
by root scanning satisfy any such factorization; the classifier tells the
two groups apart.
"""

from __future__ import annotations

import cmath
import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from .fock import Interferometer, OccupationVector, as_occupation

ANCHOR_TOL = 1e-8
CONSISTENCY_TOL = 1e-9
PREDICT_TOL = 1e-8


@dataclass(frozen=True)
class Permutation:
    """Bijection on mode indices 0..M-1; mapping[i] is the image of i.

    Acting on a vector, component i receives the component at the preimage
    of i.
    """

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(i) for i in self.mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ValueError(f"not a permutation: {mapping}")
        object.__setattr__(self, "mapping", mapping)

    @classmethod
    def identity(cls, modes: int) -> "Permutation":
        return cls(tuple(range(modes)))

    @classmethod
    def from_cycle(cls, cycle: Sequence[int], modes: int) -> "Permutation":
        """Permutation with one explicit cycle (0-based indices), rest fixed."""
        mapping = list(range(modes))
        for a, b in zip(cycle, cycle[1:] + type(cycle)([cycle[0]])):
            mapping[a] = b
        return cls(tuple(mapping))

    @property
    def modes(self) -> int:
        return len(self.mapping)

    def inverse(self) -> "Permutation":
        inv = [0] * self.modes
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Permutation(tuple(inv))

    def matrix(self) -> np.ndarray:
        P = np.zeros((self.modes, self.modes), dtype=np.complex128)
        for j, i in enumerate(self.mapping):
            P[i, j] = 1.0
        return P

    def apply(self, occupation: OccupationVector | Sequence[int]) -> OccupationVector:
        occ = as_occupation(occupation)
        inv = self.inverse().mapping
        return OccupationVector(tuple(occ[inv[i]] for i in range(self.modes)))

    def fixes(self, occupation: OccupationVector | Sequence[int]) -> bool:
        occ = as_occupation(occupation)
        return self.apply(occ).counts == occ.counts

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.modes
        out = []
        for start in range(self.modes):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.mapping[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.mapping[j]
            out.append(tuple(cyc))
        return out

    def eigenvalue_multiset(self) -> list[complex]:
        """Eigenvalues of the permutation matrix: L-th roots of unity per cycle."""
        eig: list[complex] = []
        for cyc in self.cycles():
            L = len(cyc)
            eig.extend(cmath.exp(2j * math.pi * k / L) for k in range(L))
        return eig

    def is_identity(self) -> bool:
        return self.mapping == tuple(range(self.modes))

    def cycle_notation(self) -> str:
        parts = [
            "(" + " ".join(str(i + 1) for i in cyc) + ")"
            for cyc in self.cycles()
            if len(cyc) > 1
        ]
        return "".join(parts) if parts else "id"


def all_permutations(modes: int) -> Iterator[Permutation]:
    for mapping in itertools.permutations(range(modes)):
        yield Permutation(mapping)


class Side(Enum):
    INPUT = "input"
    OUTPUT = "output"


@dataclass(frozen=True)
class PhasePair:
    """External phases Z and permutation eigenphases Lambda of a factorization.

    `components` holds the (row indices, column indices) of each connected
    component of the constraint graph; the relative phase between components
    is free, so predictions must not depend on it.
    """

    Z: tuple[complex, ...]
    Lambda: tuple[complex, ...]
    sigma: Permutation
    side: Side
    residual: float
    components: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()

    def __post_init__(self):
        if any(abs(abs(v) - 1.0) > 1e-10 for v in self.Z + self.Lambda):
            raise ValueError("phase factors must be unit modulus")
        if self.residual > CONSISTENCY_TOL:
            raise ValueError(
                f"reconstruction residual {self.residual:.3e} exceeds {CONSISTENCY_TOL}"
            )


def _factor_outer(
    R: np.ndarray, defined: np.ndarray
) -> tuple[np.ndarray, np.ndarray, list[tuple[tuple[int, ...], tuple[int, ...]]]] | None:
    """Factor R[k, l] = row[k] * col[l] over the defined entries, or None.

    BFS over the bipartite row/column graph; one free phase per connected
    component is fixed by seeding the lowest row with 1. Returns the row and
    column phases plus the (rows, cols) index sets of each component; the
    relative phase between components is genuinely free.
    """
    M = R.shape[0]
    row = np.full(M, np.nan + 0j)
    col = np.full(M, np.nan + 0j)
    components: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for seed in range(M):
        if not np.isnan(row[seed].real) or not defined[seed].any():
            continue
        row[seed] = 1.0
        comp_rows, comp_cols = [seed], []
        queue = deque([("r", seed)])
        while queue:
            kind, idx = queue.popleft()
            if kind == "r":
                for l in np.nonzero(defined[idx])[0]:
                    if np.isnan(col[l].real):
                        col[l] = R[idx, l] / row[idx]
                        comp_cols.append(int(l))
                        queue.append(("c", l))
            else:
                for k in np.nonzero(defined[:, idx])[0]:
                    if np.isnan(row[k].real):
                        row[k] = R[k, idx] / col[idx]
                        comp_rows.append(int(k))
                        queue.append(("r", k))
        components.append((tuple(sorted(comp_rows)), tuple(sorted(comp_cols))))
    # rows/columns with no usable entries cannot occur for unitary input,
    # but keep the factorization total
    row[np.isnan(row.real)] = 1.0
    col[np.isnan(col.real)] = 1.0
    mods_r, mods_c = np.abs(row), np.abs(col)
    if np.any(mods_r < 0.1) or np.any(mods_c < 0.1):
        return None
    row /= mods_r
    col /= mods_c
    err = np.abs(np.outer(row, col) - R)[defined]
    if err.size and err.max() > 1e-6:
        return None
    return row, col, components


def _multiset_match(values: Sequence[complex], target: Sequence[complex], tol: float) -> bool:
    pool = list(target)
    for v in values:
        for i, t in enumerate(pool):
            if abs(v - t) < tol:
                pool.pop(i)
                break
        else:
            return False
    return True


def _canonical_gauge(
    lam: np.ndarray,
    other: np.ndarray,
    sigma: Permutation,
    lam_components: list[tuple[tuple[int, ...], tuple[int, ...]]],
) -> tuple[np.ndarray, np.ndarray]:
    """Rescale per connected component so lam matches the eigenvalue multiset
    of the permutation, when such scalings exist.

    lam_components lists (other-side indices, lam-side indices) per component;
    scaling the lam entries of a component by t compensates its other-side
    entries by 1/t.
    """
    target = sigma.eigenvalue_multiset()

    def candidates(comp_lam_idx):
        l0 = comp_lam_idx[0]
        vals = sorted(
            {complex(round((mu / lam[l0]).real, 12), round((mu / lam[l0]).imag, 12)) for mu in target},
            key=lambda c: cmath.phase(c),
        )
        return vals

    comps = [c for c in lam_components if c[1]]
    options = [candidates(c[1]) for c in comps]
    for choice in itertools.product(*options):
        scaled = lam.copy()
        for (rows, cols), t in zip(comps, choice):
            for l in cols:
                scaled[l] = lam[l] * t
        if _multiset_match(scaled, target, 1e-8):
            out_other = other.copy()
            for (rows, cols), t in zip(comps, choice):
                for k in rows:
                    out_other[k] = other[k] / t
            return scaled, out_other
    return lam, other


def solve_phase_factorization(
    U: Interferometer, sigma: Permutation, side: Side
) -> PhasePair | None:
    """Try to factor the permuted multiport into external phases times
    permutation eigenphases; None when no consistent factorization exists.

    Entries below the anchor threshold on both sides impose no constraint.
    The gauge is canonicalized so Lambda carries the eigenvalue multiset of
    the permutation whenever a global rescaling achieves that.
    """
    A = U.entries
    M = U.dim
    inv = sigma.inverse().mapping
    if side is Side.INPUT:
        T = A[list(inv), :]
    else:
        T = A[:, list(inv)].conj()
        A = A.conj()
    bigA = np.abs(A) > ANCHOR_TOL
    bigT = np.abs(T) > ANCHOR_TOL
    if np.any(bigA != bigT):
        return None
    defined = bigA
    R = np.ones_like(A)
    R[defined] = T[defined] / A[defined]
    factored = _factor_outer(R, defined)
    if factored is None:
        return None
    rowphase, colphase, components = factored
    if side is Side.INPUT:
        # T = diag(rowphase) A diag(colphase): rows are external, columns eigen
        lam, z = _canonical_gauge(colphase, rowphase, sigma, components)
        recon = np.abs(sigma.matrix() @ U.entries - np.diag(z) @ U.entries @ np.diag(lam))
    else:
        # conj relation: rows are eigen, columns external
        lam, z = _canonical_gauge(
            rowphase, colphase, sigma, [(cols, rows) for rows, cols in components]
        )
        recon = np.abs(
            U.entries @ sigma.matrix().conj().T
            - np.diag(lam).conj() @ U.entries @ np.diag(z).conj()
        )
    residual = float(recon.max())
    if residual > CONSISTENCY_TOL:
        return None
    return PhasePair(tuple(z), tuple(lam), sigma, side, residual, tuple(components))


def predict_suppressed(pair: PhasePair, occupation: OccupationVector | Sequence[int]) -> bool:
    """Suppression prediction from the Lambda-power product alone."""
    occ = as_occupation(occupation)
    prod = 1.0 + 0.0j
    for lam, c in zip(pair.Lambda, occ):
        prod *= lam**c
    return abs(prod - 1.0) > PREDICT_TOL


def symmetry_invariant(
    pair: PhasePair,
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
) -> complex:
    """Product that must equal one for an allowed transition.

    On the input side it is prod_k Z_k^{m_k} prod_l Lambda_l^{n_l}; on the
    output side the roles of the two phase vectors swap. Rescaling
    (Z, Lambda) -> (cZ, Lambda/c) leaves it unchanged because the photon
    number is conserved; it is fully gauge-free when the constraint graph is
    connected.
    """
    m, n = as_occupation(m), as_occupation(n)
    prod = 1.0 + 0.0j
    if pair.side is Side.INPUT:
        for z, c in zip(pair.Z, m):
            prod *= z**c
        for lam, c in zip(pair.Lambda, n):
            prod *= lam**c
    else:
        for lam, c in zip(pair.Lambda, m):
            prod *= lam**c
        for z, c in zip(pair.Z, n):
            prod *= z**c
    return prod


def pair_predicts_suppression(
    pair: PhasePair,
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
) -> bool:
    """True when some valid member of the factorization family forbids the
    transition.

    The whole family is the stored pair with each component rescaled by a
    free unit phase; the product picks up that phase to the power of the
    component's photon imbalance. The transition is forbidden when the base
    product differs from one or any component imbalance is nonzero.

    The prediction only applies when the permutation fixes the occupation on
    the factorized side.
    """
    m, n = as_occupation(m), as_occupation(n)
    fixed = pair.sigma.fixes(m) if pair.side is Side.INPUT else pair.sigma.fixes(n)
    if not fixed:
        raise ValueError(
            f"permutation {pair.sigma.cycle_notation()} does not fix the "
            f"{pair.side.value}-side occupation; the prediction does not apply"
        )
    if abs(symmetry_invariant(pair, m, n) - 1.0) > PREDICT_TOL:
        return True
    for rows, cols in pair.components:
        if sum(n[l] for l in cols) != sum(m[k] for k in rows):
            return True
    return False


class CoverageKind(Enum):
    COVERED = "covered-by-symmetry"
    BEYOND = "beyond-symmetry"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class Classification:
    kind: CoverageKind = CoverageKind.UNCLASSIFIED
    sigma: Permutation | None = None
    side: Side | None = None

    @classmethod
    def covered(cls, sigma: Permutation, side: Side) -> "Classification":
        return cls(CoverageKind.COVERED, sigma, side)

    @classmethod
    def beyond(cls) -> "Classification":
        return cls(CoverageKind.BEYOND)

    def label(self) -> str:
        if self.kind is CoverageKind.COVERED:
            return f"{self.kind.value}:{self.sigma.cycle_notation()}:{self.side.value}"
        return self.kind.value


def classify_root(
    U: Interferometer,
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
) -> Classification:
    """Classify a single verified zero of the transition amplitude."""
    m, n = as_occupation(m), as_occupation(n)
    for sigma in all_permutations(U.dim):
        if sigma.is_identity():
            continue
        if sigma.fixes(m):
            pair = solve_phase_factorization(U, sigma, Side.INPUT)
            if pair is not None and pair_predicts_suppression(pair, m, n):
                return Classification.covered(sigma, Side.INPUT)
        if sigma.fixes(n):
            pair = solve_phase_factorization(U, sigma, Side.OUTPUT)
            if pair is not None and pair_predicts_suppression(pair, m, n):
                return Classification.covered(sigma, Side.OUTPUT)
    return Classification.beyond()


def classify_law(law) -> Classification:
    """Classify a suppression law: covered only if every root's device admits
    a permutation factorization that predicts the zero."""
    if not law.roots:
        return Classification()
    first: Classification | None = None
    for root in law.roots:
        result = classify_root(law.unitary_at(root), law.input, law.output)
        if result.kind is not CoverageKind.COVERED:
            return Classification.beyond()
        if first is None:
            first = result
    return first
