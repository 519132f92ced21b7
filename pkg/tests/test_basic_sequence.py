import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcantor.basic_sequence import (
    BasicSequence,
    bases_equivalent,
    common_power,
    period_product,
    prime_factorization,
    q_at,
    rotate_period,
)
from qcantor.errors import NotPeriodicError, StreamExhaustedError

from .oracles import brute_equivalent

bases = st.integers(min_value=2, max_value=12)


def test_q_at_prefix_and_wraparound():
    Q = BasicSequence((5,), (2, 3))
    assert [q_at(Q, n) for n in (1, 2, 3, 4)] == [5, 2, 3, 2]
    assert q_at(BasicSequence.periodic(7), 10**9) == 7


def test_q_at_truncation_out_of_range():
    P = BasicSequence.truncated([4, 2, 2])
    assert q_at(P, 3) == 2
    with pytest.raises(StreamExhaustedError):
        q_at(P, 4)
    with pytest.raises(IndexError):
        q_at(P, 0)


def test_rejects_small_bases():
    with pytest.raises(ValueError):
        BasicSequence((1,), (2,))
    with pytest.raises(ValueError):
        BasicSequence((), ())


@pytest.mark.parametrize("period, b", [((2, 3), 6), ((10,), 10), ((2, 2, 2), 8)])
def test_period_product(period, b):
    assert period_product(BasicSequence.periodic(*period)) == b


def test_period_product_needs_period():
    with pytest.raises(NotPeriodicError):
        period_product(BasicSequence.truncated([2, 3]))


@pytest.mark.parametrize(
    "period, r, expected",
    [((2, 3), 1, (3, 2)), ((2, 3), 0, (2, 3)), ((2, 3, 4), 2, (4, 2, 3))],
)
def test_rotate_period(period, r, expected):
    assert rotate_period(BasicSequence.periodic(*period), r).period == expected


def test_rotate_period_errors():
    with pytest.raises(ValueError):
        rotate_period(BasicSequence.periodic(2, 3), 2)
    with pytest.raises(NotPeriodicError):
        rotate_period(BasicSequence((5,), (2, 3)), 0)


@pytest.mark.parametrize("r, s, expected", [(2, 8, True), (4, 8, True), (2, 6, False), (6, 12, False)])
def test_bases_equivalent_spot_values(r, s, expected):
    assert bases_equivalent(r, s) is expected
    assert brute_equivalent(r, s) is expected


def test_common_power():
    assert common_power(4, 8) == (3, 2)
    assert common_power(6, 6) == (1, 1)
    with pytest.raises(ValueError):
        common_power(2, 6)


@given(st.integers(min_value=1, max_value=10**6))
def test_factorization_multiplies_back(n):
    f = prime_factorization(n)
    prod = 1
    for p, e in f.items():
        prod *= p**e
    assert prod == n


@given(st.lists(bases, max_size=4), st.lists(bases, min_size=1, max_size=4), st.integers(1, 200))
def test_periodicity_past_prefix(prefix, period, n):
    Q = BasicSequence(tuple(prefix), tuple(period))
    n += len(prefix)
    assert q_at(Q, n + len(period)) == q_at(Q, n)


@given(st.lists(bases, max_size=3), st.lists(bases, min_size=1, max_size=3), st.integers(0, 20))
def test_shifted_and_bases_iterator_agree(prefix, period, shift):
    Q = BasicSequence(tuple(prefix), tuple(period))
    S = Q.shifted(shift)
    assert S.take(10) == Q.take(10, shift + 1)
    assert Q.take(10, shift + 1) == [q_at(Q, shift + i) for i in range(1, 11)]


@settings(max_examples=300)
@given(st.integers(2, 2**16), st.integers(2, 2**16), st.integers(2, 2**16))
def test_equivalence_is_an_equivalence_relation(r, s, t):
    assert bases_equivalent(r, r)
    assert bases_equivalent(r, s) == bases_equivalent(s, r)
    if bases_equivalent(r, s) and bases_equivalent(s, t):
        assert bases_equivalent(r, t)


@pytest.mark.parametrize("base", [2, 3, 6, 10])
def test_equivalence_transitivity_on_power_towers(base):
    powers = [base**e for e in range(1, 5)]
    assert all(bases_equivalent(a, b) for a in powers for b in powers)


def test_spec_roundtrip():
    Q = BasicSequence.from_spec("prefix=5;period=2,3")
    assert Q == BasicSequence((5,), (2, 3))
    assert BasicSequence.from_spec(Q.to_spec()) == Q
    assert BasicSequence.from_spec("period=2,3").is_purely_periodic
    T = BasicSequence.from_spec("prefix=4,2,2;period=")
    assert not T.is_periodic and T.length == 3
    with pytest.raises(ValueError):
        BasicSequence.from_spec("prefx=2")
    with pytest.raises(ValueError):
        BasicSequence.from_spec("period=2,x")
