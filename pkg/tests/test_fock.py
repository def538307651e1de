import numpy as np
import pytest

from bosonlaw.errors import ContractViolation
from bosonlaw.fock import (
    ContingencyTable,
    Interferometer,
    OccupationVector,
    expand_submatrix,
    fisher_yates,
    occupations_with_total,
    permanent,
    tables_with_margins,
)
from bosonlaw.fock import _permanent_gray_python
from bosonlaw.multiports import beamsplitter

from oracles import count_tables_recursive, permanent_naive, random_unitary


# ---------------------------------------------------------------------------
# permanent
# ---------------------------------------------------------------------------


def test_permanent_all_ones_2x2():
    assert permanent(np.ones((2, 2))) == pytest.approx(2.0)


def test_permanent_identity():
    for n in range(1, 6):
        assert permanent(np.eye(n)) == pytest.approx(1.0)


def test_permanent_empty_matrix_is_one():
    assert permanent(np.zeros((0, 0))) == 1.0


def test_permanent_rejects_non_square():
    with pytest.raises(ValueError):
        permanent(np.ones((2, 3)))


def test_permanent_matches_naive_oracle():
    rng = np.random.default_rng(11)
    for n in range(1, 8):
        a = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
        assert permanent(a) == pytest.approx(permanent_naive(a), abs=1e-12)


def test_permanent_gray_python_matches_numba_path():
    rng = np.random.default_rng(12)
    for n in (6, 9):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        assert _permanent_gray_python(a) == pytest.approx(permanent(a), rel=1e-12)


# ---------------------------------------------------------------------------
# occupation vectors
# ---------------------------------------------------------------------------


def test_occupation_rejects_negative():
    with pytest.raises(ContractViolation):
        OccupationVector((1, -1))


def test_occupation_total_and_decrement():
    occ = OccupationVector((2, 0, 1))
    assert occ.total() == 3
    assert occ.decrement(0).counts == (1, 0, 1)
    with pytest.raises(ContractViolation):
        occ.decrement(1)


def test_occupations_with_total_enumeration():
    all_occ = list(occupations_with_total(3, 2))
    assert len(all_occ) == 6  # C(2+2, 2)
    assert all(o.total() == 2 for o in all_occ)
    assert len({o.counts for o in all_occ}) == 6


# ---------------------------------------------------------------------------
# interferometer validation
# ---------------------------------------------------------------------------


def test_interferometer_rejects_non_unitary():
    with pytest.raises(ContractViolation):
        Interferometer(np.array([[1.0, 0.0], [0.0, 2.0]]))


def test_interferometer_rejects_non_square():
    with pytest.raises(ValueError):
        Interferometer(np.ones((2, 3)))


# ---------------------------------------------------------------------------
# expand_submatrix
# ---------------------------------------------------------------------------


def test_expand_identity_single_photons():
    U = Interferometer(np.eye(2))
    sub = expand_submatrix(U, (1, 1), (1, 1))
    np.testing.assert_allclose(sub, np.eye(2))


def test_expand_balanced_bunching_columns():
    U = beamsplitter(0.5, 0.0)
    sub = expand_submatrix(U, (1, 1), (2, 0))
    expected = np.array([[np.sqrt(0.5), np.sqrt(0.5)], [np.sqrt(0.5), np.sqrt(0.5)]])
    np.testing.assert_allclose(sub, expected, atol=1e-15)


def test_expand_repeated_row():
    rng = np.random.default_rng(3)
    U = Interferometer(random_unitary(rng, 2))
    sub = expand_submatrix(U, (2, 0), (1, 1))
    np.testing.assert_allclose(sub[0], U.entries[0])
    np.testing.assert_allclose(sub[1], U.entries[0])


def test_expand_rejects_photon_mismatch():
    U = Interferometer(np.eye(2))
    with pytest.raises(ContractViolation):
        expand_submatrix(U, (1, 1), (1, 0))


def test_permanent_invariant_under_repetition_order():
    rng = np.random.default_rng(4)
    U = Interferometer(random_unitary(rng, 3))
    m, n = (2, 1, 0), (1, 1, 1)
    sub = expand_submatrix(U, m, n)
    base = permanent(sub)
    for _ in range(10):
        rows = rng.permutation(sub.shape[0])
        cols = rng.permutation(sub.shape[0])
        assert permanent(sub[np.ix_(rows, cols)]) == pytest.approx(base, abs=1e-12)


# ---------------------------------------------------------------------------
# contingency tables
# ---------------------------------------------------------------------------


def test_tables_single_photon_pair():
    tables = list(tables_with_margins((1, 1), (1, 1)))
    entries = {t.entries for t in tables}
    assert entries == {((1, 0), (0, 1)), ((0, 1), (1, 0))}


def test_tables_forced_single():
    tables = list(tables_with_margins((2, 0), (1, 1)))
    assert [t.entries for t in tables] == [((1, 1), (0, 0))]


def test_tables_count_matches_recursive_oracle():
    cases = [((2, 2, 2), (2, 2, 2)), ((3, 1, 2), (2, 2, 2)), ((4, 0), (1, 3))]
    for m, n in cases:
        got = sum(1 for _ in tables_with_margins(m, n))
        assert got == count_tables_recursive(m, n)
    assert sum(1 for _ in tables_with_margins((2, 2, 2), (2, 2, 2))) == 21


def test_tables_margins_and_uniqueness():
    seen = set()
    for t in tables_with_margins((2, 1, 1), (1, 2, 1)):
        assert t.row_margins() == (2, 1, 1)
        assert t.col_margins() == (1, 2, 1)
        assert t.entries not in seen
        seen.add(t.entries)


def test_tables_rejects_margin_mismatch():
    with pytest.raises(ContractViolation):
        list(tables_with_margins((2, 0), (1, 0)))


# ---------------------------------------------------------------------------
# table weights
# ---------------------------------------------------------------------------


def test_fisher_yates_hand_value():
    S = ContingencyTable(((1, 0), (0, 1)))
    assert fisher_yates(S, (1, 1), (1, 1)) == pytest.approx(0.5)


def test_fisher_yates_unique_table_has_weight_one():
    S = ContingencyTable(((1, 1), (0, 0)))
    assert fisher_yates(S, (2, 0), (1, 1)) == pytest.approx(1.0)


def test_fisher_yates_rejects_wrong_margins():
    S = ContingencyTable(((1, 0), (0, 1)))
    with pytest.raises(ContractViolation):
        fisher_yates(S, (2, 0), (1, 1))


def test_fisher_yates_sums_to_one():
    rng = np.random.default_rng(5)
    cases = [((1, 1), (1, 1)), ((2, 1), (1, 2)), ((3, 2, 1), (2, 2, 2)), ((4, 3, 3), (3, 3, 4))]
    for m, n in cases:
        total = sum(fisher_yates(S, m, n) for S in tables_with_margins(m, n))
        assert total == pytest.approx(1.0, abs=1e-12)
