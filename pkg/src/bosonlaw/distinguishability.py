"""Detection probabilities with one partially distinguishable photon.

One input photon carries an internal state tilted by a mixing angle; the
interferometer does not act on internal states, so the detection probability
splits into an interfering and a classical-like part. Whether a suppression
law survives any nonzero tilt reduces to evaluating one interior angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .amplitudes import transition_amplitude
from .errors import ContractViolation
from .fock import Interferometer, OccupationVector, as_occupation


@dataclass(frozen=True)
class PartialSource:
    """Input port carrying the partially distinguishable photon and its
    internal mixing angle (0 = indistinguishable, pi/2 = distinguishable)."""

    port: int
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= math.pi / 2 + 1e-12:
            raise ContractViolation(
                f"mixing angle must lie in [0, pi/2], got {self.alpha}"
            )


def partial_probability(
    U: Interferometer,
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
    src: PartialSource,
) -> float:
    """Probability of detecting n given m with one partially distinguishable
    photon at src.port.

    cos^2(alpha) weights the fully interfering amplitude; sin^2(alpha)
    weights the incoherent sum over the output port the odd photon lands in,
    with the remaining photons interfering among themselves. Output modes
    with no photon contribute nothing.
    """
    m, n = as_occupation(m), as_occupation(n)
    k = src.port
    if not 0 <= k < m.modes:
        raise ContractViolation(f"port {k} outside 0..{m.modes - 1}")
    if m[k] < 1:
        raise ContractViolation(f"input port {k} of {m.counts} holds no photon")
    if m.total() != n.total():
        raise ContractViolation("photon numbers differ")
    coherent = abs(transition_amplitude(U, m, n)) ** 2
    m_less = m.decrement(k)
    incoherent = 0.0
    for l in range(n.modes):
        if n[l] < 1:
            continue
        incoherent += (
            abs(U.entries[k, l]) ** 2
            * abs(transition_amplitude(U, m_less, n.decrement(l))) ** 2
        )
    c, s = math.cos(src.alpha), math.sin(src.alpha)
    p = float(c * c * coherent + s * s * incoherent)
    if not -1e-9 <= p <= 1.0 + 1e-9:
        raise ContractViolation(f"probability {p} escaped [0, 1]")
    return min(max(p, 0.0), 1.0)


@dataclass(frozen=True)
class LawBreakReport:
    survives: bool
    alpha: float
    probability: float


def law_survives(
    U_at_law: Interferometer,
    m: OccupationVector | Sequence[int],
    n: OccupationVector | Sequence[int],
    src_port: int,
) -> LawBreakReport:
    """Does a suppression law survive partial distinguishability?

    The probability is A cos^2(alpha) + B sin^2(alpha) with A, B >= 0, so
    positivity at one interior angle settles the whole open interval; the
    single probe sits at alpha = pi/4. The configuration must actually be
    suppressed at alpha = 0.
    """
    m, n = as_occupation(m), as_occupation(n)
    base = abs(transition_amplitude(U_at_law, m, n)) ** 2
    if base > 1e-20:
        raise ContractViolation(
            f"not a suppression law: |amplitude|^2 = {base:.3e} at alpha = 0"
        )
    probe = partial_probability(U_at_law, m, n, PartialSource(src_port, math.pi / 4))
    return LawBreakReport(survives=bool(probe < 1e-10), alpha=math.pi / 4, probability=probe)
