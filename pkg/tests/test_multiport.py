import numpy as np
import pytest

from retrostate.errors import NotNormalized, NotOrthonormal, NotUnitary
from retrostate.multiport import (
    ColumnSpec,
    MultiportUnitary,
    beamsplitter,
    check_unitary,
    complete_unitary,
    dft_unitary,
    haar_unitary,
)

from conftest import G1


def test_dft2_entries():
    U = dft_unitary(2).entries
    expected = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    np.testing.assert_allclose(U, expected, atol=1e-15)


def test_dft3_entries():
    w = np.exp(2j * np.pi / 3)
    U = dft_unitary(3).entries
    for n in range(3):
        for m in range(3):
            assert abs(U[n, m] - w ** (n * m) / np.sqrt(3)) < 1e-15


@pytest.mark.parametrize("d", range(2, 17))
def test_dft_unitary_and_uniform(d):
    U = dft_unitary(d)
    ok, dev = check_unitary(U, 1e-10)
    assert ok and dev <= 1e-10
    np.testing.assert_allclose(np.abs(U.entries) ** 2, 1 / d, atol=1e-14)


def test_check_unitary_flags_scaled_row():
    M = dft_unitary(4).entries.copy()
    assert check_unitary(M, 1e-12)[0]
    M[1] *= 1.01
    ok, dev = check_unitary(M, 1e-10)
    assert not ok and dev > 1e-3


def test_check_unitary_haar(rng):
    ok, dev = check_unitary(haar_unitary(5, rng))
    assert ok


def test_construction_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        MultiportUnitary(np.array([[1, 0], [0, 2]]))


def test_complete_from_dft_column():
    col = dft_unitary(3).column(0)
    U = complete_unitary([col])
    assert check_unitary(U)[0]
    assert np.array_equal(U.entries[:, 0], col.entries)


def test_complete_from_two_columns():
    # first column of the optimized three-mode device, second from the single-input construction
    x = np.array([0.43591088, 0.28204456, 0.28204456])
    x = x / x.sum()
    col0 = np.sqrt(x).astype(complex)
    g = np.array([0, G1, np.conj(G1)])
    g[0] = -np.dot(x[1:], g[1:]) / x[0]
    beta = np.sqrt(np.dot(x, np.abs(g) ** 2))
    col1 = -np.conj(g) * col0 / beta
    U = complete_unitary([ColumnSpec(0, col0), ColumnSpec(1, col1)])
    assert check_unitary(U)[0]
    assert np.array_equal(U.entries[:, 1], ColumnSpec(1, col1).entries)


def test_complete_rejects_parallel_columns():
    v = dft_unitary(3).entries[:, 0]
    with pytest.raises(NotOrthonormal):
        complete_unitary([ColumnSpec(0, v), ColumnSpec(1, v * 1j)])


def test_complete_is_deterministic_and_idempotent(rng):
    for d in range(2, 7):
        H = haar_unitary(d, rng)
        fixed = [ColumnSpec(0, H[:, 0]), ColumnSpec(d - 1, H[:, d - 1])]
        A = complete_unitary(fixed)
        B = complete_unitary(fixed)
        assert np.array_equal(A.entries, B.entries)
        for c in fixed:
            assert np.array_equal(A.entries[:, c.index], c.entries)
        assert check_unitary(A)[0]


def test_column_spec_norm():
    with pytest.raises(NotNormalized):
        ColumnSpec(0, [1, 1])


def test_beamsplitter_conventions():
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(beamsplitter(s, s).entries, dft_unitary(2).entries, atol=1e-15)
    B = beamsplitter(np.sqrt(0.618), np.sqrt(0.382))
    assert abs(abs(B.entries[0, 0]) ** 2 - 0.618) < 1e-12
    I = beamsplitter(1, 0, phase=0.0)
    np.testing.assert_allclose(I.entries, np.eye(2))
    assert I.entries[1, 0] == 0


def test_beamsplitter_requires_normalization():
    with pytest.raises(NotNormalized):
        beamsplitter(1, 0.1)


def test_matrix_dict_round_trip(rng):
    U = MultiportUnitary(haar_unitary(4, rng))
    doc = U.to_dict()
    assert set(doc) == {"dim", "re", "im"}
    assert np.array_equal(MultiportUnitary.from_dict(doc).entries, U.entries)


def test_haar_first_column_distribution(rng):
    # |U_00|^2 of a Haar unitary in dimension d is Beta(1, d-1): mean 1/d
    d = 4
    vals = [abs(haar_unitary(d, rng)[0, 0]) ** 2 for _ in range(4000)]
    assert abs(np.mean(vals) - 1 / d) < 0.02
