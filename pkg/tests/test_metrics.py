import pytest
from hypothesis import given
from hypothesis import strategies as st

from oligopoly.errors import DomainError
from oligopoly.metrics import concentration_ratio, herfindahl, parse_shares

AIRLINE = [0.5, 0.4, 0.06, 0.04]


def test_two_firm_ratio_airline():
    assert concentration_ratio(AIRLINE, 2) == pytest.approx(0.90, abs=1e-15)


def test_two_firm_ratio_groceries():
    assert concentration_ratio([0.45, 0.35, 0.2], 2) == pytest.approx(0.80, abs=1e-15)


def test_k_beyond_firm_count():
    assert concentration_ratio([1.0], 5) == 1.0


@pytest.mark.parametrize("shares, expected", [([1.0], 1.0), ([0.5, 0.5], 0.5), (AIRLINE, 0.4152)])
def test_herfindahl(shares, expected):
    assert herfindahl(shares) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("shares", [[-0.1, 0.5], [0.7, 0.7], [1.2], []])
def test_invalid_shares(shares):
    with pytest.raises(DomainError):
        concentration_ratio(shares, 1)


def test_invalid_k():
    with pytest.raises(DomainError):
        concentration_ratio(AIRLINE, 0)


def test_parse_percentages():
    assert parse_shares("50%, 40%,6%,4%") == pytest.approx(AIRLINE)
    assert parse_shares("0.5,0.4") == [0.5, 0.4]
    with pytest.raises(DomainError):
        parse_shares("half")


share_vectors = st.lists(st.floats(0, 1), min_size=1, max_size=12).map(
    lambda xs: [x / max(1.0, sum(xs)) for x in xs]
)


@given(share_vectors)
def test_monotone_in_k_and_total_at_count(shares):
    ratios = [concentration_ratio(shares, k) for k in range(1, len(shares) + 1)]
    assert all(b >= a for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(sum(shares))


@given(share_vectors, st.randoms())
def test_permutation_invariance(shares, rnd):
    shuffled = shares[:]
    rnd.shuffle(shuffled)
    for k in range(1, len(shares) + 1):
        assert concentration_ratio(shuffled, k) == concentration_ratio(shares, k)
    assert herfindahl(shuffled) == pytest.approx(herfindahl(shares), rel=1e-15, abs=1e-300)


@given(share_vectors)
def test_herfindahl_bounds(shares):
    cr1 = concentration_ratio(shares, 1)
    hhi = herfindahl(shares)
    assert cr1**2 <= hhi + 1e-15
    assert hhi <= cr1 + 1e-15
