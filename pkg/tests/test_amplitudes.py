import math

import numpy as np
import pytest

from bosonlaw.amplitudes import (
    amp_permanent,
    amp_recurrence,
    amp_tables,
    suppression_factorize,
    transition_amplitude,
)
from bosonlaw.errors import ContractViolation, NotFactorizableError
from bosonlaw.fock import Amplitude, AmplitudeMethod, Interferometer, occupations_with_total
from bosonlaw.multiports import TritterFamily, beamsplitter, tritter

from oracles import random_occupation, random_unitary


def test_identity_multiport_is_diagonal():
    U = Interferometer(np.eye(3))
    assert amp_permanent(U, (2, 1, 0), (2, 1, 0)).value == pytest.approx(1.0)
    assert amp_permanent(U, (2, 1, 0), (1, 1, 1)).value == pytest.approx(0.0)
    assert amp_tables(U, (2, 1, 0), (2, 1, 0)).value == pytest.approx(1.0)
    assert amp_recurrence(U, (2, 1, 0), (2, 1, 0)).value == pytest.approx(1.0)


def test_hom_dip_all_methods():
    U = beamsplitter(0.5, 0.0)
    for f in (amp_permanent, amp_tables, amp_recurrence):
        assert abs(f(U, (1, 1), (1, 1)).value) < 1e-12


def test_balanced_bunching_magnitude():
    U = beamsplitter(0.5, 0.0)
    assert abs(amp_permanent(U, (1, 1), (2, 0)).value) == pytest.approx(
        1 / math.sqrt(2), abs=1e-12
    )


def test_three_methods_agree_randomized():
    rng = np.random.default_rng(21)
    for _ in range(40):
        M = int(rng.integers(2, 5))
        N = int(rng.integers(0, 9))
        U = Interferometer(random_unitary(rng, M))
        m = random_occupation(rng, M, N)
        n = random_occupation(rng, M, N)
        a = amp_permanent(U, m, n).value
        b = amp_tables(U, m, n).value
        c = amp_recurrence(U, m, n).value
        assert abs(a - b) < 1e-10
        assert abs(a - c) < 1e-10


def test_transition_probabilities_sum_to_one():
    rng = np.random.default_rng(22)
    for M, N in [(2, 6), (3, 4)]:
        U = Interferometer(random_unitary(rng, M))
        m = random_occupation(rng, M, N)
        total = sum(
            abs(amp_permanent(U, m, n).value) ** 2
            for n in occupations_with_total(M, N)
        )
        assert total == pytest.approx(1.0, abs=1e-9)


def test_column_phase_covariance():
    rng = np.random.default_rng(23)
    U = Interferometer(random_unitary(rng, 3))
    m, n = (2, 1, 1), (1, 2, 1)
    chi = 0.7321
    scaled = U.entries.copy()
    scaled[:, 1] *= np.exp(1j * chi)
    V = Interferometer(scaled)
    base = amp_permanent(U, m, n).value
    assert amp_permanent(V, m, n).value == pytest.approx(
        base * np.exp(1j * n[1] * chi), abs=1e-12
    )


def test_recurrence_single_output_port_closed_form():
    rng = np.random.default_rng(24)
    U = Interferometer(random_unitary(rng, 3))
    m = (2, 1, 0)
    value = amp_recurrence(U, m, (3, 0, 0)).value
    expected = (
        math.sqrt(math.factorial(3) / (2 * 1 * 1))
        * U.entries[0, 0] ** 2
        * U.entries[1, 0]
    )
    assert value == pytest.approx(expected, abs=1e-12)


def test_recurrence_matches_permanent_on_tritter():
    U = tritter(TritterFamily.T1, 0.75, 0.0)
    a = amp_permanent(U, (2, 1, 1), (2, 1, 1)).value
    b = amp_recurrence(U, (2, 1, 1), (2, 1, 1)).value
    assert abs(a - b) < 1e-10


def test_recurrence_matches_permanent_across_tau_grid():
    m, n = (9, 4), (4, 9)
    for tau in np.linspace(0.0, 1.0, 100):
        U = beamsplitter(float(tau), 0.0)
        a = amp_permanent(U, m, n).value
        b = amp_recurrence(U, m, n).value
        assert abs(a - b) < 1e-10


def test_recurrence_elimination_order_is_free():
    rng = np.random.default_rng(25)
    U = Interferometer(random_unitary(rng, 4))
    m = random_occupation(rng, 4, 6)
    n = random_occupation(rng, 4, 6)
    base = amp_recurrence(U, m, n).value
    for order in ([1, 2, 3], [3, 1, 2], [2, 3, 1], [1, 3, 2]):
        assert amp_recurrence(U, m, n, elimination_order=order).value == pytest.approx(
            base, abs=1e-12
        )
    with pytest.raises(ContractViolation):
        amp_recurrence(U, m, n, elimination_order=[1, 1, 2])


def test_methods_reject_photon_mismatch():
    U = Interferometer(np.eye(2))
    for f in (amp_permanent, amp_tables, amp_recurrence):
        with pytest.raises(ContractViolation):
            f(U, (1, 1), (1, 0))


def test_amplitude_magnitude_bound_enforced():
    with pytest.raises(ContractViolation):
        Amplitude(1.1 + 0.0j, AmplitudeMethod.PERMANENT)


# ---------------------------------------------------------------------------
# suppression-function factorization
# ---------------------------------------------------------------------------


def test_factorize_linear_form_on_beamsplitter():
    # one photon in the minor port: f proportional to (m1+m2) tau - m1
    m1, m2 = 2, 3
    ratios = []
    for tau in np.linspace(0.05, 0.95, 7):
        f = suppression_factorize(beamsplitter(float(tau), 0.0), (m1, m2), (4, 1))
        poly = (m1 + m2) * tau - m1
        if abs(poly) > 1e-9:
            ratios.append(f / poly)
    assert max(abs(r - ratios[0]) for r in ratios) < 1e-9


def test_factorize_quadratic_form_on_beamsplitter():
    # both input modes need at least the two minor-port photons to factorize
    m1, m2 = 2, 3
    S = m1 + m2
    ratios = []
    for tau in np.linspace(0.05, 0.95, 7):
        f = suppression_factorize(beamsplitter(float(tau), 0.0), (m1, m2), (3, 2))
        poly = S * (S - 1) * tau**2 - 2 * m1 * (S - 1) * tau + m1 * (m1 - 1)
        if abs(poly) > 1e-9:
            ratios.append(f / poly)
    assert max(abs(r - ratios[0]) for r in ratios) < 1e-9


def test_factorize_shares_zero_set_with_amplitude():
    U = beamsplitter(0.4, 0.0)  # root of (2+3) tau - 2
    assert abs(suppression_factorize(U, (2, 3), (4, 1))) < 1e-10
    assert abs(amp_permanent(U, (2, 3), (4, 1)).value) < 1e-10
    U = beamsplitter(0.37, 0.0)
    assert abs(suppression_factorize(U, (2, 3), (4, 1))) > 1e-3
    assert abs(amp_permanent(U, (2, 3), (4, 1)).value) > 1e-4


def test_factorize_single_output_port_is_constant():
    rng = np.random.default_rng(26)
    U = Interferometer(random_unitary(rng, 3))
    values = [suppression_factorize(U, (2, 1, 0), (3, 0, 0))]
    assert abs(values[0] - 1.0) < 1e-12  # empty elimination, unit function


def test_factorize_rejects_negative_exponent():
    U = tritter(TritterFamily.T1, 0.5, 0.0)
    with pytest.raises(NotFactorizableError):
        suppression_factorize(U, (1, 1, 1), (1, 2, 0))


def test_factorize_rejects_zero_column_entry():
    U = beamsplitter(0.0, 0.0)  # first column starts with a zero
    with pytest.raises(NotFactorizableError):
        suppression_factorize(U, (2, 1), (2, 1))


def test_transition_amplitude_selects_consistent_engines():
    rng = np.random.default_rng(27)
    U = Interferometer(random_unitary(rng, 2))
    small = transition_amplitude(U, (3, 3), (4, 2))
    assert small == pytest.approx(amp_permanent(U, (3, 3), (4, 2)).value, abs=1e-12)
    big = transition_amplitude(U, (9, 4), (6, 7))
    assert big == pytest.approx(amp_recurrence(U, (9, 4), (6, 7)).value, abs=1e-12)
