import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from rabi_riccati import fock
from rabi_riccati.fock import FockDim, InteriorProjector


def test_annihilation_d3():
    a = fock.annihilation(3)
    expected = np.zeros((3, 3))
    expected[0, 1] = 1.0
    expected[1, 2] = math.sqrt(2)
    np.testing.assert_array_equal(a, expected)


def test_annihilation_small():
    a2 = fock.annihilation(2)
    assert a2[0, 1] == 1 and np.count_nonzero(a2) == 1
    np.testing.assert_array_equal(fock.annihilation(1), np.zeros((1, 1)))


def test_creation_d3_and_adjoint():
    c = fock.creation(3)
    assert c[1, 0] == 1.0 and c[2, 1] == math.sqrt(2)
    np.testing.assert_array_equal(fock.creation(1), np.zeros((1, 1)))
    for n in (1, 2, 5, 17):
        np.testing.assert_array_equal(fock.creation(n), fock.annihilation(n).conj().T)


def test_number():
    np.testing.assert_array_equal(fock.number(4), np.diag([0, 1, 2, 3]))
    np.testing.assert_array_equal(fock.number(1), [[0]])
    # sqrt(n)**2 rounds; identities exact in truncation are held to 1e-12 * dim
    np.testing.assert_allclose(fock.creation(5) @ fock.annihilation(5), fock.number(5), rtol=0, atol=5e-12)


def test_parity():
    np.testing.assert_array_equal(fock.parity(4), np.diag([1, -1, 1, -1]))
    np.testing.assert_array_equal(fock.parity(1), [[1]])


@pytest.mark.parametrize("n", [1, 2, 3, 8, 33])
def test_parity_identities_exact(n):
    par, a, ad, num = fock.parity(n), fock.annihilation(n), fock.creation(n), fock.number(n)
    np.testing.assert_array_equal(par @ par, np.eye(n))
    np.testing.assert_array_equal(par @ num, num @ par)
    np.testing.assert_array_equal(par @ a @ par, -a)
    np.testing.assert_array_equal(par @ ad @ par, -ad)


@pytest.mark.parametrize("n", [2, 3, 8, 64, 200])
def test_truncated_commutator(n):
    a, ad = fock.annihilation(n), fock.creation(n)
    corner = np.zeros((n, n))
    corner[-1, -1] = 1.0
    # each diagonal entry is fl(sqrt(k))**2 differences: at most 2 ulp of the largest k
    atol = 2 * np.spacing(float(n - 1))
    np.testing.assert_allclose(a @ ad - ad @ a, np.eye(n) - n * corner, rtol=0, atol=atol)
    off = (a @ ad - ad @ a) - np.diag(np.diag(a @ ad - ad @ a))
    assert np.count_nonzero(off) == 0


def test_displacement_zero_is_identity():
    np.testing.assert_array_equal(fock.displacement(0, 7), np.eye(7))


def test_displacement_coherent_state_overlap():
    x, n = 0.3, 64
    d = fock.displacement(x, FockDim(n, 16))
    proj = InteriorProjector(n, n - 16)
    defect = fock.interior_restrict(d.conj().T @ d - np.eye(n), proj)
    assert np.max(np.abs(defect)) <= 1e-10
    # <m|D(x)|0> = exp(-|x|^2/2) x^m / sqrt(m!)
    m = np.arange(n - 16)
    exact = np.exp(-abs(x) ** 2 / 2) * x ** m / np.sqrt([float(math.factorial(int(k))) for k in m])
    np.testing.assert_allclose(d[: n - 16, 0], exact, atol=1e-12)


def test_displacement_matches_expm_oracle():
    x, n = 0.25 - 0.4j, 40
    gen = x * fock.creation(n) - np.conj(x) * fock.annihilation(n)
    np.testing.assert_allclose(fock.displacement(x, n), scipy.linalg.expm(gen), atol=1e-12)


def test_displacement_adjoint_is_negative_shift():
    x = 0.2 + 0.1j
    np.testing.assert_allclose(fock.displacement(x, 32).conj().T, fock.displacement(-x, 32), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(
    re=st.floats(-0.7, 0.7),
    im=st.floats(-0.7, 0.7),
    n=st.integers(20, 64),
)
def test_displacement_inverse_on_interior(re, im, n):
    x = complex(re, im)
    buffer = min(n // 2, max(1, math.ceil(8 * abs(x) * math.sqrt(n))))
    proj = InteriorProjector(n, n - buffer)
    prod = fock.displacement(x, n) @ fock.displacement(-x, n)
    assert np.linalg.norm(fock.interior_restrict(prod - np.eye(n), proj), 2) <= 1e-8


def test_interior_restrict():
    p2 = InteriorProjector(4, 2)
    np.testing.assert_array_equal(fock.interior_restrict(np.eye(4), p2), np.eye(2))
    p3 = InteriorProjector(4, 3)
    np.testing.assert_array_equal(fock.interior_restrict(fock.number(4), p3), np.diag([0, 1, 2]))
    np.testing.assert_array_equal(fock.interior_restrict(fock.annihilation(4), p3), fock.annihilation(3))
    with pytest.raises(ValueError):
        fock.interior_restrict(np.eye(5), p3)


def test_fockdim_defaults_and_validation():
    d = FockDim(60)
    assert d.interior_buffer == 15 and d.keep == 45
    assert d.projector == InteriorProjector(60, 45)
    with pytest.raises(ValueError):
        FockDim(1)
    with pytest.raises(ValueError):
        FockDim(10, 6)
    with pytest.raises(ValueError):
        InteriorProjector(4, 0)
    np.testing.assert_array_equal(InteriorProjector(3, 2).matrix(), np.diag([1, 1, 0]))


def test_check_operator_rejects_bad_input():
    with pytest.raises(ValueError):
        fock.check_operator(np.ones((2, 3)))
    with pytest.raises(ValueError):
        fock.check_operator(np.array([[np.nan]]))
    with pytest.raises(ValueError):
        fock.check_operator(np.eye(3), dim=4)
