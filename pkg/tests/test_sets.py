"""Set-description algebra: membership, enumeration, densities, cardinality."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idealcore import sets as sd

EVENS = sd.evens()
ODDS = sd.odds()
SQUARES = sd.squares()
GB = sd.GeometricBlocks(2, 0, 2)
RB = sd.RootBlocks(1, 3)


def brute_prefix(s, horizon):
    return tuple(n for n in range(horizon) if s.contains(n))


# -- construction validation -------------------------------------------------


def test_constructor_validation():
    with pytest.raises(ValueError):
        sd.ArithmeticProgression(0, 0)
    with pytest.raises(ValueError):
        sd.ArithmeticProgression(-1, 2)
    with pytest.raises(ValueError):
        sd.Blocks(((5, 3),))
    with pytest.raises(ValueError):
        sd.Blocks(((0, 4), (2, 6)))
    with pytest.raises(ValueError):
        sd.GeometricBlocks(1, 0, 2)
    with pytest.raises(ValueError):
        sd.RootBlocks(3, 3)


def test_explicit_normalizes():
    s = sd.Explicit((5, 1, 5, 3))
    assert s.elements == (1, 3, 5)


# -- membership and enumeration ----------------------------------------------


@pytest.mark.parametrize(
    "s",
    [
        sd.explicit(0, 7, 19),
        EVENS,
        sd.ap(3, 5),
        SQUARES,
        sd.Blocks(((2, 5), (10, 12))),
        GB,
        sd.GeometricBlocks(3, 1, 2),
        RB,
        sd.Union(EVENS, SQUARES),
        sd.Intersection(sd.ap(0, 3), EVENS),
        sd.Difference(EVENS, SQUARES),
        sd.complement(SQUARES),
    ],
)
def test_enumerate_matches_membership(s):
    assert s.enumerate_prefix(2000) == brute_prefix(s, 2000)


def test_geometric_blocks_membership():
    # Blocks [1,2), [4,8), [16,32), ... for base 2, even exponents.
    members = {1, 4, 5, 6, 7, 16, 31}
    non_members = {0, 2, 3, 8, 15, 32, 63}
    assert all(GB.contains(n) for n in members)
    assert not any(GB.contains(n) for n in non_members)


def test_root_blocks_membership():
    # isqrt(n) % 3 == 1 means n in [1,4) or [16,25) or ...
    assert RB.enumerate_prefix(30) == (1, 2, 3, 16, 17, 18, 19, 20, 21, 22, 23, 24)


# -- exact densities -----------------------------------------------------------


def test_ap_density():
    d = EVENS.density_bounds()
    assert d.exact and d.value == Fraction(1, 2)


def test_squares_density_zero_against_counting_oracle():
    horizon = 10**6
    count = len(SQUARES.enumerate_prefix(horizon))
    assert count <= math.isqrt(horizon) + 1
    assert SQUARES.density_bounds().value == 0


def test_union_inclusion_exclusion():
    u = sd.Union(sd.ap(0, 4), sd.ap(1, 4))
    d = u.density_bounds()
    assert d.exact and d.value == Fraction(1, 2)
    # counting oracle
    count = len(u.enumerate_prefix(10**5))
    assert abs(count / 10**5 - 0.5) < 1e-3


def test_geometric_blocks_oscillation_exact():
    d = GB.density_bounds()
    assert d.exact and (d.lower, d.upper) == (Fraction(1, 3), Fraction(2, 3))
    # counting oracle at block boundaries: ratio at the end of an included
    # block approaches the upper density, at the start the lower density.
    for m in (8, 9, 10):
        end_of_block = 2 ** (2 * m + 1)
        count = len(GB.enumerate_prefix(end_of_block))
        assert abs(count / end_of_block - 2 / 3) < 1e-4
        start_of_block = 2 ** (2 * m)
        count = len(GB.enumerate_prefix(start_of_block))
        assert abs(count / start_of_block - 1 / 3) < 1e-4


def test_root_blocks_density_exact():
    d = RB.density_bounds()
    assert d.exact and d.value == Fraction(1, 3)
    count = len(RB.enumerate_prefix(10**6))
    assert abs(count / 10**6 - 1 / 3) < 1e-2


def test_complement_density():
    d = sd.complement(GB).density_bounds()
    assert d.exact and (d.lower, d.upper) == (Fraction(1, 3), Fraction(2, 3))


def test_null_absorption_keeps_exactness():
    d = sd.Union(EVENS, SQUARES).density_bounds()
    assert d.exact and d.value == Fraction(1, 2)
    d2 = sd.Intersection(EVENS, sd.complement(SQUARES)).density_bounds()
    assert d2.exact and d2.value == Fraction(1, 2)


def test_interval_bounds_are_sound():
    s = sd.Union(GB, sd.ap(0, 3))
    d = s.density_bounds()
    assert not d.exact
    assert 0 <= d.lower <= d.upper <= 1
    count = len(s.enumerate_prefix(10**5))
    assert d.lower - 0.02 <= count / 10**5 <= d.upper + 0.02


def test_predicate_blocks_density():
    p = sd.Predicate(lambda n: n % 7 == 0, name="sevens")
    assert p.density_bounds() is None
    assert sd.Union(p, EVENS).density_bounds() is None
    assert sd.contains_predicate(sd.Union(p, EVENS))
    assert not sd.contains_predicate(sd.Union(EVENS, SQUARES))


# -- cardinality ---------------------------------------------------------------


@pytest.mark.parametrize(
    "s,expected",
    [
        (sd.explicit(1, 2, 3), sd.Cardinality.FINITE),
        (sd.Blocks(((0, 10),)), sd.Cardinality.FINITE),
        (EVENS, sd.Cardinality.INFINITE),
        (SQUARES, sd.Cardinality.INFINITE),
        (GB, sd.Cardinality.INFINITE),
        (sd.Intersection(EVENS, ODDS), sd.Cardinality.FINITE),
        (sd.Intersection(sd.ap(0, 6), sd.ap(3, 6)), sd.Cardinality.FINITE),
        (sd.Intersection(sd.ap(0, 6), sd.ap(0, 4)), sd.Cardinality.INFINITE),
        (sd.Intersection(SQUARES, EVENS), sd.Cardinality.INFINITE),
        # squares are never 3 mod 4
        (sd.Intersection(SQUARES, sd.ap(3, 4)), sd.Cardinality.FINITE),
        (sd.Intersection(GB, EVENS), sd.Cardinality.INFINITE),
        (sd.Intersection(RB, sd.ap(1, 7)), sd.Cardinality.INFINITE),
        (sd.Intersection(GB, sd.GeometricBlocks(2, 1, 2)), sd.Cardinality.FINITE),
        (sd.Intersection(RB, sd.RootBlocks(0, 3)), sd.Cardinality.FINITE),
        (sd.complement(sd.explicit(1, 2)), sd.Cardinality.INFINITE),
        (sd.complement(SQUARES), sd.Cardinality.INFINITE),
        (sd.Difference(EVENS, sd.explicit(0, 2, 4)), sd.Cardinality.INFINITE),
        (sd.Difference(sd.explicit(0, 2, 4), EVENS), sd.Cardinality.FINITE),
        # nested chain: odds ∩ evens ∩ anything is finite
        (
            sd.Intersection(ODDS, sd.Intersection(EVENS, sd.complement(SQUARES))),
            sd.Cardinality.FINITE,
        ),
    ],
)
def test_cardinality_rules(s, expected):
    assert s.cardinality() is expected


def test_cardinality_squares_qr_rule_matches_enumeration():
    # 3 mod 4 is not a quadratic residue; 1 mod 8 is.
    assert sd.Intersection(SQUARES, sd.ap(3, 4)).enumerate_prefix(10**5) == ()
    hit = sd.Intersection(SQUARES, sd.ap(1, 8))
    assert hit.cardinality() is sd.Cardinality.INFINITE
    assert len(hit.enumerate_prefix(10**5)) > 10


# -- hypothesis: random expression trees ---------------------------------------

_atoms = st.sampled_from(
    [
        sd.explicit(0, 3, 9),
        EVENS,
        ODDS,
        sd.ap(2, 5),
        SQUARES,
        GB,
        RB,
        sd.Blocks(((3, 8),)),
    ]
)


def _trees(depth=2):
    if depth == 0:
        return _atoms
    sub = _trees(depth - 1)
    return st.one_of(
        _atoms,
        st.builds(sd.Union, sub, sub),
        st.builds(sd.Intersection, sub, sub),
        st.builds(sd.Difference, sub, sub),
        st.builds(sd.complement, sub),
    )


@settings(max_examples=60, deadline=None)
@given(_trees())
def test_tree_enumeration_matches_membership(s):
    assert s.enumerate_prefix(400) == brute_prefix(s, 400)


@settings(max_examples=60, deadline=None)
@given(_trees())
def test_tree_density_bounds_sound(s):
    d = s.density_bounds()
    assert d is not None
    assert 0 <= d.lower <= d.upper <= 1
    horizon = 4000
    ratio = len(s.enumerate_prefix(horizon)) / horizon
    assert d.lower - 0.2 <= ratio <= d.upper + 0.2


@settings(max_examples=60, deadline=None)
@given(_trees())
def test_tree_json_roundtrip(s):
    assert sd.set_from_dict(sd.set_to_dict(s)) == s


def test_predicate_not_serializable():
    with pytest.raises(ValueError):
        sd.set_to_dict(sd.Predicate(lambda n: True))


def test_operator_sugar():
    s = (EVENS | SQUARES) & ~sd.explicit(0)
    assert s.contains(4) and not s.contains(0)
    assert (EVENS - SQUARES).contains(2)
