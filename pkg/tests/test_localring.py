import itertools

import pytest

from whittaker.localring import (RingKind, elem, get_ring, is_unit, parse_ring,
                                 primitive_char, project, ring_make, units,
                                 valuation)

Z4 = ring_make("mixed", 2, 1, 2)
Z8 = ring_make("mixed", 2, 1, 3)
Z9 = ring_make("mixed", 3, 1, 2)
F3T2 = ring_make("equal", 3, 1, 2)
F4T2 = ring_make("equal", 2, 2, 2)
F2T3 = ring_make("equal", 2, 1, 3)


def test_ring_make_examples():
    assert Z9.q == 3 and Z9.size == 9
    assert F4T2.q == 4 and F4T2.size == 16
    with pytest.raises(ValueError):
        ring_make("mixed", 3, 2, 2)
    with pytest.raises(ValueError):
        ring_make("mixed", 4, 1, 2)


def test_ring_key_round_trip():
    for desc in (Z4, Z8, Z9, F3T2, F4T2, F2T3):
        assert parse_ring(desc.key()) == desc
    assert Z9.key() == "mixed:3^2"
    assert F4T2.key() == "equal:4^2"


def test_projection_examples():
    assert project(elem(Z9, 7), 1).code == 1
    assert project(elem(F3T2, 2 + 3), 1).code == 2  # 2 + t -> 2
    assert project(elem(Z8, 6), 2).code == 2
    with pytest.raises(ValueError):
        project(elem(Z9, 1), 3)


def test_projection_is_ring_homomorphism():
    for desc in (Z8, F3T2, F4T2):
        ring = get_ring(desc)
        for x, y in itertools.product(range(ring.size), repeat=2):
            for i in range(1, desc.ell + 1):
                sub = ring.subring(i)
                assert ring.project_code(ring.add(x, y), i) == sub.add(
                    ring.project_code(x, i), ring.project_code(y, i))
                assert ring.project_code(ring.mul(x, y), i) == sub.mul(
                    ring.project_code(x, i), ring.project_code(y, i))


def test_projection_composition_law():
    ring = get_ring(Z8)
    for x in range(ring.size):
        assert ring.project_code(x, 3) == x
        via_two = ring.subring(2).project_code(ring.project_code(x, 2), 1)
        assert via_two == ring.project_code(x, 1)


def test_units_and_valuation():
    assert [u.code for u in units(Z4)] == [1, 3]
    assert valuation(elem(Z9, 6)) == 1
    assert len(list(units(F2T3))) == 4
    for desc in (Z4, Z9, Z8, F3T2, F4T2, F2T3):
        q, ell = desc.q, desc.ell
        assert len(list(units(desc))) == q ** (ell - 1) * (q - 1)
        assert valuation(elem(desc, 0)) == ell


def test_unit_inverses_everywhere():
    for desc in (Z8, Z9, F3T2, F4T2):
        ring = get_ring(desc)
        for u in ring.unit_codes():
            assert ring.mul(u, ring.inv(u)) == 1
        with pytest.raises(ValueError):
            ring.inv(ring.varpi)


def test_elem_arithmetic_wrappers():
    x, y = elem(Z9, 4), elem(Z9, 7)
    assert (x * y).code == 1
    assert (x + y).code == 2
    assert (-x).code == 5
    assert x.inverse().code == 7
    assert is_unit(x) and not is_unit(elem(Z9, 3))
    assert elem(F3T2, 5).repr_value == (2, 1)
    assert elem(Z9, 5).repr_value == 5


def test_primitive_char_mixed_examples():
    phi = primitive_char(Z9, 1)
    assert phi.m == 9
    assert phi.exponent(3) == 3
    assert [phi.exponent(x) for x in (0, 3, 6)] == [0, 3, 6]
    assert phi.is_primitive()


def test_primitive_char_equal_examples():
    phi = primitive_char(F3T2, 1)
    assert phi.m == 3
    assert phi.exponent(3) == 1  # t
    assert phi.exponent(1) == 0
    assert phi.is_primitive()


def test_primitive_char_requires_unit():
    with pytest.raises(ValueError):
        primitive_char(Z9, 3)


def test_every_twist_is_primitive():
    for desc in (Z4, Z9, Z8, F3T2, F4T2, F2T3):
        for a in get_ring(desc).unit_codes():
            assert primitive_char(desc, a).is_primitive()


def _all_additive_characters(desc):
    """Brute-force dual of (o_l, +): every F_p-linear exponent functional."""
    ring = get_ring(desc)
    p, q, ell, f = desc.p, desc.q, desc.ell, desc.f
    dim = f * ell

    def coords(x):
        out = []
        for i in range(ell):
            c = (x // q**i) % q
            for j in range(f):
                out.append((c // p**j) % p)
        return out

    table = [coords(x) for x in range(ring.size)]
    for dual in itertools.product(range(p), repeat=dim):
        yield tuple(sum(d * c for d, c in zip(dual, cs)) % p for cs in table)


def test_primitive_characters_are_exactly_the_unit_twists():
    # every primitive character equals phi_a for exactly one unit a (q<=3, l<=3)
    for desc in (Z4, Z8, Z9, ring_make("mixed", 3, 1, 3), F3T2, F2T3,
                 ring_make("equal", 3, 1, 3)):
        ring = get_ring(desc)
        twists = {}
        for a in ring.unit_codes():
            tab = primitive_char(desc, a).table()
            assert tab not in twists.values(), "twists must be pairwise distinct"
            twists[a] = tab
        if desc.kind is RingKind.MIXED:
            # mixed characters have exponents mod p^l; compare on the mod-p socle map
            prim = set()
            size = desc.size
            for c in range(size):
                tab = tuple((c * x) % size for x in range(size))
                if any(tab[x] for x in range(0, size, size // desc.q)):
                    prim.add(tab)
        else:
            prim = set()
            top = desc.size // desc.q
            for tab in _all_additive_characters(desc):
                if any(tab[c * top] for c in range(1, desc.q)):
                    prim.add(tab)
        assert prim == set(twists.values()), desc.key()


def test_enumeration_order_is_fixed():
    ring = get_ring(F3T2)
    codes = list(ring.elements())
    assert codes == sorted(codes)
    # ascending code = lexicographic with the top t-coefficient most significant
    reprs = [elem(F3T2, c).repr_value for c in codes]
    assert reprs == sorted(reprs, key=lambda t: t[::-1])
