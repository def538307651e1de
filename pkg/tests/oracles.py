"""Independent reference implementations used only to cross-check the package."""

from itertools import permutations

import numpy as np


def permanent_naive(a: np.ndarray) -> complex:
    """Permutation-sum definition, O(n!). The slow oracle the fast permanent
    is checked against."""
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    total = 0.0 + 0.0j
    for sigma in permutations(range(n)):
        prod = 1.0 + 0.0j
        for i, j in enumerate(sigma):
            prod *= a[i, j]
        total += prod
    return total


def count_tables_recursive(rows: tuple[int, ...], cols: tuple[int, ...]) -> int:
    """Count nonnegative integer tables with the given margins, column by
    column (deliberately a different recursion than the enumerator's)."""
    if sum(rows) != sum(cols):
        return 0

    def compositions(total, bounds):
        if not bounds:
            yield ()
            return
        if len(bounds) == 1:
            if total <= bounds[0]:
                yield (total,)
            return
        for v in range(min(total, bounds[0]) + 1):
            for rest in compositions(total - v, bounds[1:]):
                yield (v,) + rest

    def recurse(remaining_rows, col_idx):
        if col_idx == len(cols):
            return 1 if all(r == 0 for r in remaining_rows) else 0
        total = 0
        for col in compositions(cols[col_idx], remaining_rows):
            total += recurse(
                tuple(r - v for r, v in zip(remaining_rows, col)), col_idx + 1
            )
        return total

    return recurse(tuple(rows), 0)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    # fix the gauge so the distribution is Haar rather than QR-convention biased
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_occupation(rng: np.random.Generator, modes: int, total: int) -> tuple[int, ...]:
    return tuple(int(v) for v in rng.multinomial(total, [1.0 / modes] * modes))
