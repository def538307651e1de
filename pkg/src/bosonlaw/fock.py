"""Exact combinatorial and linear-algebra primitives for photon-number states.

Occupation vectors, the matrix permanent (Gray-code Ryser), submatrix
expansion by occupation, and contingency tables with fixed margins together
with their hypergeometric weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import ContractViolation

UNITARITY_TOL = 1e-12

# Exact integer factorials, precomputed for the desk-scale photon numbers.
_FACT = [math.factorial(k) for k in range(64)]


def _factorial(n: int) -> int:
    return _FACT[n] if n < len(_FACT) else math.factorial(n)


@dataclass(frozen=True)
class OccupationVector:
    """Photon counts per mode; the index of every transition amplitude."""

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise ContractViolation(f"negative occupation in {counts}")
        object.__setattr__(self, "counts", counts)

    @property
    def modes(self) -> int:
        return len(self.counts)

    def total(self) -> int:
        return sum(self.counts)

    def decrement(self, k: int) -> "OccupationVector":
        """Remove one photon from mode k (requires counts[k] >= 1)."""
        if self.counts[k] < 1:
            raise ContractViolation(f"mode {k} of {self.counts} is empty")
        return OccupationVector(
            self.counts[:k] + (self.counts[k] - 1,) + self.counts[k + 1 :]
        )

    def factorial_product(self) -> int:
        out = 1
        for c in self.counts:
            out *= _factorial(c)
        return out

    def __len__(self) -> int:
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def __getitem__(self, k: int) -> int:
        return self.counts[k]


def as_occupation(x: "OccupationVector | Sequence[int]") -> OccupationVector:
    if isinstance(x, OccupationVector):
        return x
    return OccupationVector(tuple(x))


def occupations_with_total(modes: int, total: int) -> Iterator[OccupationVector]:
    """All ways to place `total` photons into `modes` modes, lexicographic."""
    if modes == 1:
        yield OccupationVector((total,))
        return
    for first in range(total, -1, -1):
        for rest in occupations_with_total(modes - 1, total - first):
            yield OccupationVector((first,) + rest.counts)


@dataclass(frozen=True)
class Interferometer:
    """An M x M complex matrix validated to be unitary at construction."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"interferometer matrix must be square, got {a.shape}")
        dev = np.max(np.abs(a @ a.conj().T - np.eye(a.shape[0])))
        if dev > UNITARITY_TOL:
            raise ContractViolation(
                f"matrix is not unitary: max |U U^+ - I| = {dev:.3e}"
            )
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, idx) -> complex:
        return self.entries[idx]


@dataclass(frozen=True)
class ContingencyTable:
    """M x M nonnegative integer table partitioning photons by (input, output) port."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        if any(v < 0 for row in rows for v in row):
            raise ContractViolation("contingency table entries must be nonnegative")
        object.__setattr__(self, "entries", rows)

    def row_margins(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.entries)

    def col_margins(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.entries))

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)


class AmplitudeMethod(Enum):
    PERMANENT = "permanent"
    TABLES = "tables"
    RECURRENCE = "recurrence"


@dataclass(frozen=True)
class Amplitude:
    """A Fock transition amplitude together with the evaluator that produced it."""

    value: complex
    method: AmplitudeMethod

    def __post_init__(self):
        if abs(self.value) > 1.0 + 1e-9:
            raise ContractViolation(
                f"|amplitude| = {abs(self.value):.12f} exceeds 1 beyond tolerance"
            )

    @property
    def probability(self) -> float:
        return abs(self.value) ** 2


# ---------------------------------------------------------------------------
# Matrix permanent
# ---------------------------------------------------------------------------


def _permanent_gray_python(a: np.ndarray) -> complex:
    # Ryser over nonempty column subsets in Gray-code order; each step
    # updates the running row sums by a single column.
    n = a.shape[0]
    row = np.zeros(n, dtype=np.complex128)
    total = 0.0 + 0.0j
    gray = 0
    for k in range(1, 1 << n):
        new_gray = k ^ (k >> 1)
        j = (gray ^ new_gray).bit_length() - 1
        if (new_gray >> j) & 1:
            row += a[:, j]
        else:
            row -= a[:, j]
        gray = new_gray
        prod = 1.0 + 0.0j
        for i in range(n):
            prod *= row[i]
        if k & 1:
            total -= prod
        else:
            total += prod
    return total if n % 2 == 0 else -total


def _make_numba_kernel():
    try:
        from numba import njit
    except Exception:  # pragma: no cover - numba is a declared dependency
        return None
    try:
        kernel = njit(cache=True)(_permanent_gray_numba_src)
        kernel(np.eye(2, dtype=np.complex128))  # force compilation errors now
        return kernel
    except Exception:  # pragma: no cover
        return None


def _permanent_gray_numba_src(a):
    n = a.shape[0]
    row = np.zeros(n, dtype=np.complex128)
    total = 0.0 + 0.0j
    gray = 0
    for k in range(1, 1 << n):
        new_gray = k ^ (k >> 1)
        diff = gray ^ new_gray
        j = 0
        while not (diff >> j) & 1:
            j += 1
        if (new_gray >> j) & 1:
            for i in range(n):
                row[i] += a[i, j]
        else:
            for i in range(n):
                row[i] -= a[i, j]
        gray = new_gray
        prod = 1.0 + 0.0j
        for i in range(n):
            prod *= row[i]
        if k & 1:
            total -= prod
        else:
            total += prod
    if n % 2 == 1:
        total = -total
    return total


_NUMBA_KERNEL = None
_NUMBA_TRIED = False


def permanent(a: np.ndarray) -> complex:
    """Permanent of a square complex matrix, O(2^n * n) via Gray-code Ryser.

    The empty 0 x 0 matrix has permanent 1 by convention.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n == 1:
        return complex(a[0, 0])
    global _NUMBA_KERNEL, _NUMBA_TRIED
    if not _NUMBA_TRIED:
        _NUMBA_KERNEL = _make_numba_kernel()
        _NUMBA_TRIED = True
    if _NUMBA_KERNEL is not None and n >= 8:
        return complex(_NUMBA_KERNEL(np.ascontiguousarray(a)))
    return complex(_permanent_gray_python(a))


def expand_submatrix(
    U: Interferometer,
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
) -> np.ndarray:
    """N x N matrix with row k of U repeated m_k times and column l n_l times.

    Rows and columns appear in ascending mode order; the permanent is
    invariant under any other ordering.
    """
    m = as_occupation(m)
    n = as_occupation(n)
    if m.total() != n.total():
        raise ContractViolation(
            f"photon numbers differ: {m.counts} has {m.total()}, {n.counts} has {n.total()}"
        )
    rows = np.repeat(np.arange(U.dim), m.counts)
    cols = np.repeat(np.arange(U.dim), n.counts)
    return U.entries[np.ix_(rows, cols)]


# ---------------------------------------------------------------------------
# Contingency tables with fixed margins
# ---------------------------------------------------------------------------


def tables_with_margins(
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
) -> Iterator[ContingencyTable]:
    """Every nonnegative integer table with row margins m and column margins n.

    Row-major recursive descent; each row enumerates the compositions of its
    margin bounded by the remaining column capacities.
    """
    m = as_occupation(m)
    n = as_occupation(n)
    if m.total() != n.total():
        raise ContractViolation(
            f"margin sums differ: {m.total()} vs {n.total()}"
        )
    if m.modes != n.modes:
        raise ContractViolation("row and column margin vectors differ in length")
    M = m.modes

    def rows(k: int, remaining: tuple[int, ...], acc: list[tuple[int, ...]]):
        if k == M - 1:
            # last row is forced to absorb whatever capacity remains
            if sum(remaining) == m[k]:
                yield ContingencyTable(tuple(acc) + (remaining,))
            return
        for row in _bounded_compositions(m[k], remaining):
            new_remaining = tuple(r - v for r, v in zip(remaining, row))
            yield from rows(k + 1, new_remaining, acc + [row])

    yield from rows(0, n.counts, [])


def _bounded_compositions(
    total: int, bounds: tuple[int, ...]
) -> Iterator[tuple[int, ...]]:
    """Compositions of `total` into len(bounds) parts with part_i <= bounds[i]."""
    if total > sum(bounds):
        return
    if len(bounds) == 1:
        yield (total,)
        return
    tail_capacity = sum(bounds[1:])
    lo = max(0, total - tail_capacity)
    hi = min(bounds[0], total)
    for v in range(lo, hi + 1):
        for rest in _bounded_compositions(total - v, bounds[1:]):
            yield (v,) + rest


def fisher_yates(
    S: ContingencyTable,
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
) -> float:
    """Probability weight of a contingency table with the given margins.

    Exact rational arithmetic; the weights over all tables with fixed margins
    sum to one.
    """
    m = as_occupation(m)
    n = as_occupation(n)
    if S.row_margins() != m.counts or S.col_margins() != n.counts:
        raise ContractViolation(
            f"table margins {S.row_margins()}/{S.col_margins()} do not match "
            f"{m.counts}/{n.counts}"
        )
    N = m.total()
    num = m.factorial_product() * n.factorial_product()
    den = _factorial(N)
    for row in S.entries:
        for v in row:
            den *= _factorial(v)
    return float(Fraction(num, den))
