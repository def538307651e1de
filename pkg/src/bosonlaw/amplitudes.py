"""Three independent evaluators of the Fock transition amplitude.

Permanent of the occupation-expanded submatrix, statistical average over
contingency tables, and output-mode elimination through the generating
function's derivative recurrence. All three agree to 1e-10 and cross-check
one another in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ContractViolation, NotFactorizableError
from .fock import (
    Amplitude,
    AmplitudeMethod,
    Interferometer,
    OccupationVector,
    as_occupation,
    expand_submatrix,
    fisher_yates,
    permanent,
    tables_with_margins,
    _factorial,
)

SUPPRESSION_TOL = 1e-10


def _norm(m: OccupationVector, n: OccupationVector) -> float:
    return math.sqrt(m.factorial_product() * n.factorial_product())


def _check_photon_numbers(U: Interferometer, m: OccupationVector, n: OccupationVector):
    if m.modes != U.dim or n.modes != U.dim:
        raise ContractViolation(
            f"occupations {m.counts}/{n.counts} do not match a {U.dim}-port device"
        )
    if m.total() != n.total():
        raise ContractViolation(
            f"photon numbers differ: {m.total()} in, {n.total()} out"
        )


def amp_permanent(
    U: Interferometer,
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
) -> Amplitude:
    """Transition amplitude as permanent of the expanded submatrix over sqrt(m! n!)."""
    m, n = as_occupation(m), as_occupation(n)
    _check_photon_numbers(U, m, n)
    value = permanent(expand_submatrix(U, m, n)) / _norm(m, n)
    return Amplitude(value, AmplitudeMethod.PERMANENT)


def amp_tables(
    U: Interferometer,
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
) -> Amplitude:
    """Transition amplitude as the weighted average over contingency tables."""
    m, n = as_occupation(m), as_occupation(n)
    _check_photon_numbers(U, m, n)
    total = 0.0 + 0.0j
    for S in tables_with_margins(m, n):
        weight = fisher_yates(S, m, n)
        term = 1.0 + 0.0j
        for k in range(U.dim):
            for l in range(U.dim):
                s = S.entries[k][l]
                if s:
                    term *= U.entries[k, l] ** s
        total += weight * term
    value = _factorial(m.total()) / _norm(m, n) * total
    return Amplitude(value, AmplitudeMethod.TABLES)


@dataclass
class RecurrenceState:
    """Coefficient map over reduced inputs while output modes are eliminated.

    The generating function itself is never materialized; only the weights of
    the reduced input configurations reachable by repeated differentiation
    are stored, which keeps memory polynomial for a fixed mode count.
    """

    coefficients: dict[tuple[int, ...], complex]
    pending_outputs: list[tuple[int, int]] = field(default_factory=list)

    def apply_derivative(self, U: Interferometer, mode: int) -> "RecurrenceState":
        new: dict[tuple[int, ...], complex] = {}
        col = U.entries[:, mode]
        for counts, coeff in self.coefficients.items():
            for k, ck in enumerate(counts):
                if ck:
                    key = counts[:k] + (ck - 1,) + counts[k + 1 :]
                    new[key] = new.get(key, 0.0) + coeff * math.sqrt(ck) * col[k]
        pending = [
            (l, r - 1 if l == mode else r) for l, r in self.pending_outputs if not (l == mode and r == 1)
        ]
        return RecurrenceState(new, pending)


def amp_recurrence(
    U: Interferometer,
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
    elimination_order: Sequence[int] | None = None,
) -> Amplitude:
    """Transition amplitude by eliminating output modes 2..M one photon at a time.

    Each elimination step maps the weight of a reduced input m' to weights of
    m' minus one photon; once only output mode 1 is pending, the remaining
    amplitudes have the closed single-output-port form. The order in which
    modes 2..M are eliminated does not affect the result.
    """
    m, n = as_occupation(m), as_occupation(n)
    _check_photon_numbers(U, m, n)
    M = U.dim
    if elimination_order is None:
        order = list(range(M - 1, 0, -1))
    else:
        order = list(elimination_order)
        if sorted(order) != list(range(1, M)):
            raise ContractViolation(
                f"elimination order must cover modes 1..{M - 1} once, got {order}"
            )
    state = RecurrenceState(
        {m.counts: 1.0 + 0.0j},
        [(l, n[l]) for l in order if n[l] > 0],
    )
    for l in order:
        for _ in range(n[l]):
            state = state.apply_derivative(U, l)
    n1 = n[0]
    col0 = U.entries[:, 0]
    total = 0.0 + 0.0j
    sqrt_n1_fact = math.sqrt(_factorial(n1))
    for counts, coeff in state.coefficients.items():
        if coeff == 0.0:
            continue
        term = sqrt_n1_fact / math.sqrt(OccupationVector(counts).factorial_product())
        for k, ck in enumerate(counts):
            if ck:
                term = term * col0[k] ** ck
        total += coeff * term
    for l in range(1, M):
        total /= math.sqrt(_factorial(n[l]))
    return Amplitude(total, AmplitudeMethod.RECURRENCE)


def transition_amplitude(
    U: Interferometer,
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
) -> complex:
    """Amplitude by the cheapest reliable route for the problem size.

    The permanent evaluator is used up to moderate photon numbers, the
    recurrence beyond that (both agree to 1e-10; see the cross-checks).
    """
    m, n = as_occupation(m), as_occupation(n)
    if m.total() <= 12:
        return amp_permanent(U, m, n).value
    return amp_recurrence(U, m, n).value


def is_suppressed(value: complex, scale: float = 1.0) -> bool:
    """Zero test for amplitudes: below 1e-10 relative to the context scale."""
    return abs(value) < SUPPRESSION_TOL * max(scale, 1.0)


def suppression_factorize(
    U: Interferometer,
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
) -> complex:
    """Suppression-function value: the amplitude divided by its structural prefactor.

    The prefactor is sqrt(n_1!/(n_S! m!)) times the product of first-column
    entries raised to m_k - |n_S|. Where an exponent is negative or a needed
    first-column entry vanishes the split is reported as not factorizable and
    callers fall back to the raw amplitude.
    """
    m, n = as_occupation(m), as_occupation(n)
    _check_photon_numbers(U, m, n)
    ns_total = n.total() - n[0]
    exponents = [mk - ns_total for mk in m.counts]
    col0 = U.entries[:, 0]
    if any(e < 0 for e in exponents):
        raise NotFactorizableError(
            f"negative prefactor exponent for input {m.counts} with |n_S| = {ns_total}"
        )
    if any(abs(c) < 1e-12 for c in col0):
        raise NotFactorizableError("first column of the multiport has a zero entry")
    ns_fact = 1
    for l in range(1, n.modes):
        ns_fact *= _factorial(n[l])
    pref = math.sqrt(_factorial(n[0]) / (ns_fact * m.factorial_product()))
    for c, e in zip(col0, exponents):
        if e:
            pref = pref * c**e
    if pref == 0:
        raise NotFactorizableError("prefactor underflowed to zero")
    return transition_amplitude(U, m, n) / pref
