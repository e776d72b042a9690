from fractions import Fraction
from random import Random

import pytest

from splinkage import (
    EMPTY_INTERVAL,
    Interval,
    PathSpec,
    Status,
    intersect,
    nabla,
    path_range,
    polygon_status,
    series_compose,
)


def I(a, b):
    return Interval(Fraction(a), Fraction(b))


def random_interval(rng: Random) -> Interval:
    a = Fraction(rng.randint(0, 200), rng.randint(1, 8))
    b = a + Fraction(rng.randint(0, 200), rng.randint(1, 8))
    return Interval(a, b)


# ---------------------------------------------------------------------------
# series_compose / intersect
# ---------------------------------------------------------------------------


def test_series_compose_values():
    assert series_compose(I(3, 4), I(7, 13)) == I(3, 17)
    assert series_compose(I(1, 1), I(1, 1)) == I(0, 2)
    assert series_compose(I(3, 4), EMPTY_INTERVAL).is_empty
    assert series_compose(EMPTY_INTERVAL, I(3, 4)).is_empty


def test_intersect_values():
    assert intersect(I(3, 5), I(0, 4)) == I(3, 4)
    assert intersect(I(0, 1), I(2, 3)).is_empty
    x = I(2, 9)
    assert intersect(x, x) == x


def test_series_compose_commutative_associative():
    rng = Random(1)
    for _ in range(500):
        a, b, c = (random_interval(rng) for _ in range(3))
        assert series_compose(a, b) == series_compose(b, a)
        assert series_compose(series_compose(a, b), c) == series_compose(
            a, series_compose(b, c)
        )


def test_compose_full_iff_overlap():
    rng = Random(2)
    for _ in range(500):
        a, b = random_interval(rng), random_interval(rng)
        full = series_compose(a, b) == Interval(Fraction(0), a.hi + b.hi)
        overlap = not intersect(a, b).is_empty
        assert full == overlap


def test_series_compose_empty_iff_input_empty():
    rng = Random(3)
    for _ in range(200):
        a = random_interval(rng)
        assert not series_compose(a, a).is_empty
        assert series_compose(a, EMPTY_INTERVAL).is_empty


# ---------------------------------------------------------------------------
# path_range
# ---------------------------------------------------------------------------


def test_path_range_values():
    assert path_range(PathSpec((10, 3))) == I(7, 13)
    assert path_range(PathSpec((1, 1, 1))) == I(0, 3)
    assert path_range(PathSpec((5,))) == I(5, 5)


def test_path_range_two_bars_matches_direct_oracle():
    rng = Random(4)
    for _ in range(200):
        a = Fraction(rng.randint(1, 50), rng.randint(1, 5))
        b = Fraction(rng.randint(1, 50), rng.randint(1, 5))
        assert path_range(PathSpec((a, b))) == I(abs(a - b), a + b)


def test_path_range_permutation_invariant():
    rng = Random(5)
    for _ in range(200):
        ls = [Fraction(rng.randint(1, 60), 10) for _ in range(rng.randint(2, 6))]
        shuffled = ls[:]
        rng.shuffle(shuffled)
        assert path_range(PathSpec(tuple(ls))) == path_range(PathSpec(tuple(shuffled)))


# ---------------------------------------------------------------------------
# nabla
# ---------------------------------------------------------------------------


def polygon_connected_by_criterion(lengths) -> bool | None:
    """Independent oracle: closed-polygon connectivity from the sorted
    length criterion; None when the polygon is not realisable."""
    ls = sorted(lengths, reverse=True)
    total = sum(ls)
    if 2 * ls[0] > total:
        return None
    return 2 * (ls[1] + ls[2]) <= total


def nabla_by_sweep(lengths, x) -> bool:
    """Membership oracle: x is in the connected-fibre set iff the polygon
    (lengths..., x) has connected moduli."""
    return polygon_connected_by_criterion(list(lengths) + [x]) is True


def test_nabla_fixture_values():
    assert str(nabla(PathSpec((1, 1, 1)))) == "[1,3]"
    assert str(nabla(PathSpec((4, 1)))) == "{3,5}"
    assert str(nabla(PathSpec((2, 2)))) == "{0,4}"


def test_nabla_four_bar_example_against_sweep():
    # the closed-form set, frozen after sweeping the membership oracle over
    # a fine rational grid of the whole achievable range
    path = PathSpec((5, 4, 1, 1))
    result = nabla(path)
    assert str(result) == "[0,3] ∪ [7,11]"
    for numerator in range(0, 111):
        x = Fraction(numerator, 10)
        assert result.contains(x) == nabla_by_sweep(path.lengths, x), x


def test_nabla_matches_sweep_randomised():
    rng = Random(6)
    for _ in range(500):
        k = rng.choice([2, 3, 3, 4, 5, 6])
        ls = tuple(Fraction(rng.randint(1, 60), rng.randint(1, 4)) for _ in range(k))
        path = PathSpec(ls)
        window = nabla(path)
        rng_total = path_range(path)
        for _ in range(8):
            t = Fraction(rng.randint(0, 64), 64)
            x = rng_total.lo + (rng_total.hi - rng_total.lo) * t
            assert window.contains(x) == nabla_by_sweep(ls, x), (ls, x)


def test_nabla_subset_of_range_and_endpoints_in_nabla():
    # full extension is always a connected fibre, as is the fold whenever the
    # bars cannot close up (lo > 0); at lo == 0 the fibre is the moduli space
    # of the closed polygon itself, so membership follows its connectivity
    rng = Random(7)
    for _ in range(300):
        k = rng.choice([2, 3, 4, 5])
        ls = tuple(Fraction(rng.randint(1, 50), rng.randint(1, 4)) for _ in range(k))
        path = PathSpec(ls)
        window = nabla(path)
        rng_total = path_range(path)
        assert not window.is_empty
        assert window.min >= rng_total.lo and window.max <= rng_total.hi
        assert window.contains(rng_total.hi)
        if rng_total.lo > 0:
            assert window.contains(rng_total.lo)
        elif k >= 3:
            closed = polygon_connected_by_criterion(list(ls)) is True
            assert window.contains(0) == closed


def test_nabla_permutation_invariant():
    rng = Random(8)
    for _ in range(200):
        ls = [Fraction(rng.randint(1, 60), 10) for _ in range(rng.randint(2, 6))]
        shuffled = ls[:]
        rng.shuffle(shuffled)
        assert nabla(PathSpec(tuple(ls))) == nabla(PathSpec(tuple(shuffled)))


def test_nabla_rejects_single_bar():
    with pytest.raises(ValueError, match="k=1"):
        nabla(PathSpec((5,)))


# ---------------------------------------------------------------------------
# polygon_status
# ---------------------------------------------------------------------------


def test_polygon_status_cases():
    assert polygon_status([1, 1, 1, 1]) is Status.CONNECTED
    assert polygon_status([3, 1, 1]) is Status.EMPTY
    assert polygon_status(["5", "5", "1", "0.5"]) is Status.DISCONNECTED
    assert polygon_status([1, 1, 1]) is Status.DISCONNECTED  # mirror pair
    assert polygon_status([2, 1, 1]) is Status.CONNECTED  # collinear fold
    assert polygon_status([3, 3]) is Status.CONNECTED
    assert polygon_status([3, 4]) is Status.EMPTY
    with pytest.raises(ValueError):
        polygon_status([5])
