import math

import numpy as np
import pytest

from whittaker.cyclotomic import (CycloNum, NonRationalError, cyclotomic_poly,
                                  euler_phi, moebius, root_of_unity)


def test_root_arithmetic_exponent_addition():
    assert root_of_unity(9, 3) * root_of_unity(9, 7) == root_of_unity(9, 1)


def test_full_sum_of_roots_vanishes():
    s = CycloNum.zero(9)
    for j in range(9):
        s = s + root_of_unity(9, j)
    assert s.is_zero()


def test_conjugation_is_inverse_root():
    assert root_of_unity(4, 1).conj() == root_of_unity(4, 3)


def test_conj_is_ring_map_on_random_sums():
    rng = np.random.default_rng(7)
    for m in (4, 8, 9, 12):
        for _ in range(20):
            a = CycloNum(m, rng.integers(-4, 5, size=m).tolist())
            b = CycloNum(m, rng.integers(-4, 5, size=m).tolist())
            assert (a * b).conj() == a.conj() * b.conj()
            assert (a + b) * a == a * a + b * a


def test_rational_value_integer():
    assert CycloNum.integer(9, 5).rational_value() == 5


def test_rational_value_sum_of_nontrivial_ninth_roots():
    z = CycloNum.zero(9)
    for j in range(1, 9):
        z = z + root_of_unity(9, j)
    assert z.rational_value() == -1


def test_rational_value_rejects_primitive_root():
    with pytest.raises(NonRationalError):
        root_of_unity(9, 1).rational_value()


def test_mixed_order_operands_rejected():
    with pytest.raises(ValueError):
        root_of_unity(9, 1) * root_of_unity(4, 1)


def test_norm_squared_rational_when_real_subfield_is_rational():
    # |z|^2 lies in the maximal real subfield; for these m that subfield is Q,
    # so the value is always a nonnegative rational
    rng = np.random.default_rng(11)
    for m in (1, 2, 3, 4, 6):
        for _ in range(30):
            z = CycloNum.zero(m)
            for j in rng.integers(0, m, size=6):
                z = z + root_of_unity(m, int(j))
            val = z.norm_squared().rational_value()
            assert val >= 0


def test_galois_symmetrized_norm_rational_nonnegative():
    # for general m, |z|^2 need not be rational (m = 5, z = 1 + zeta_5);
    # the Galois-symmetrized norm sum always is, and it is nonnegative
    rng = np.random.default_rng(11)
    for m in (5, 8, 9, 16, 27):
        for _ in range(20):
            z = CycloNum.zero(m)
            for j in rng.integers(0, m, size=6):
                z = z + root_of_unity(m, int(j))
            total = CycloNum.zero(m)
            for s in range(m):
                if math.gcd(s, m) == 1:
                    sz = CycloNum(m, [z.coeffs[(j * pow(s, -1, m)) % m]
                                      for j in range(m)])
                    total = total + sz.norm_squared()
            assert total.rational_value() >= 0


def test_norm_squared_can_be_irrational():
    z = CycloNum.integer(5, 1) + root_of_unity(5, 1)
    with pytest.raises(NonRationalError):
        z.norm_squared().rational_value()


def test_rational_value_matches_float_on_galois_averaged_inputs():
    rng = np.random.default_rng(13)
    checked = 0
    for m in (8, 9, 12, 25, 27):
        for _ in range(200):
            coeffs = rng.integers(-5, 6, size=m)
            avg = CycloNum.zero(m)
            for s in range(m):
                if math.gcd(s, m) == 1:
                    # sigma_s: zeta^j -> zeta^(j s); averaging makes it rational
                    avg = avg + CycloNum(
                        m, [int(coeffs[(j * pow(s, -1, m)) % m]) for j in range(m)]
                    )
            val = avg.rational_value()
            assert abs(avg.complex_value() - float(val)) < 1e-6
            checked += 1
    assert checked == 1000


def test_cyclotomic_polynomial_degrees_and_values():
    for m in (1, 2, 4, 8, 9, 12, 36, 72):
        phi = cyclotomic_poly(m)
        assert len(phi) - 1 == euler_phi(m)
    assert cyclotomic_poly(9) == (1, 0, 0, 1, 0, 0, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


def test_moebius_small_values():
    assert [moebius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_prime_power_trace_identity():
    # Tr(zeta^j) over Q(zeta_{p^k}): phi(m) at j = 0, -p^(k-1) at order p, else 0
    m = 27
    assert CycloNum.integer(m, 1).trace() == euler_phi(m)
    z9 = root_of_unity(m, 9)  # order 3
    assert z9.trace() == -9
    assert root_of_unity(m, 1).trace() == 0


def test_counter_construction():
    counter = [0] * 9
    counter[3] = 2
    counter[0] = 1
    z = CycloNum.from_counter(9, counter)
    assert z == CycloNum.integer(9, 1) + 2 * root_of_unity(9, 3)
