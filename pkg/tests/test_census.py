import itertools
import math
import random

import pytest

from ffheight.census import (
    BudgetExceeded,
    CountResult,
    InstanceSpec,
    count_points,
    dim_estimate,
    point_stream,
    sz_recursion_check,
)
from ffheight.rings import PrimeField, UniPoly
from ffheight.varieties import HeightPoint, on_variety, variety_from_strs


def brute_affine_count(X, b):
    """Enumerate every coordinate tuple with all degrees < b."""
    q = X.base_field.p
    n = X.ncoords
    count = 0
    for flat in itertools.product(range(q), repeat=n * b):
        coords = tuple(
            UniPoly(X.base_field, list(flat[i * b : (i + 1) * b])) for i in range(n)
        )
        if on_variety(X, HeightPoint(coords)):
            count += 1
    return count


def brute_projective_count(X, b):
    """Orbit count: primitive tuples up to scalars, all degrees < b."""
    q = X.base_field.p
    n = X.ncoords
    seen = set()
    for flat in itertools.product(range(q), repeat=n * b):
        coords = tuple(
            UniPoly(X.base_field, list(flat[i * b : (i + 1) * b])) for i in range(n)
        )
        if all(c.is_zero() for c in coords):
            continue
        pt = HeightPoint(coords, projective=True)
        if not on_variety(X, pt):
            continue
        pt = pt.primitive()
        # normalize the leading nonzero coordinate to be monic
        lead = next(c for c in pt.coords if not c.is_zero())
        inv = X.base_field.inv(lead.lc)
        seen.add(tuple(c.scale(inv) for c in pt.coords))
    return len(seen)


def test_affine_parabola_counts():
    for q in (3, 5):
        for b in (1, 2, 3):
            X = variety_from_strs("affine", ["x", "y"], ["y - x^2"], q)
            got = count_points(X, b).count
            # x free of degree < b, y forced: q^b points, but y needs deg < b too
            want = brute_affine_count(X, b)
            assert got == want, (q, b, got, want)


def test_monomial_curve_census_law():
    """y = x^d has exactly q^ceil(b/d) points of height below b."""
    for q in (3, 5):
        for d in (2, 3):
            X = variety_from_strs("affine", ["x", "y"], [f"y - x^{d}"], q)
            for b in (1, 2, 3, 4):
                got = count_points(X, b).count
                assert got == q ** math.ceil(b / d), (q, d, b, got)


def test_projective_conic_counts():
    for q in (3, 5):
        X = variety_from_strs("projective", ["x", "y", "z"], ["x^2 - y*z"], q)
        for b in (1, 2):
            got = count_points(X, b)
            want = brute_projective_count(X, b)
            assert got.count == want, (q, b, got.count, want)
            # primitive tuples: orbit count times (q - 1) scalars
            assert got.primitive == want * (q - 1)


def test_count_with_inequation():
    q = 3
    X = variety_from_strs(
        "affine", ["x", "y"], ["y - x^2"], q, inequation_strs=["x"]
    )
    assert count_points(X, 2).count == brute_affine_count(X, 2)


def test_point_stream_heights_below_b():
    X = variety_from_strs("affine", ["x", "y"], ["y - x^3"], 5)
    for b in (1, 2, 3):
        pts = point_stream(X, b)
        assert len(pts) == count_points(X, b).count
        for pt in pts:
            assert pt.height() < b
            assert on_variety(X, pt)


def test_point_stream_projective_primitive_reps():
    X = variety_from_strs("projective", ["x", "y", "z"], ["x^2 - y*z"], 3)
    pts = point_stream(X, 2)
    assert len(pts) == count_points(X, 2).count
    for pt in pts:
        assert pt.projective
        g = pt.primitive()
        assert [str(c) for c in g.coords] == [str(c) for c in pt.coords]


def test_budget_exceeded_carries_estimate():
    X = variety_from_strs("affine", ["x", "y", "z"], ["x*y - z^2"], 5)
    with pytest.raises(BudgetExceeded) as e:
        count_points(X, 6, budget=10)
    assert e.value.estimate is not None
    assert e.value.estimate > 10


def test_instance_spec_round_trip():
    inst = InstanceSpec(
        name="parabola",
        ambient="affine",
        names=("x", "y"),
        equations=("y - x^2",),
        dim=1,
        degree=2,
    )
    again = InstanceSpec.from_json(inst.to_json())
    assert again == inst
    assert inst.dim_bound(3) == 3
    X = inst.variety(7)
    assert X.base_field.p == 7


def test_dim_estimate_exact_curve():
    inst = InstanceSpec(
        name="cubic graph",
        ambient="affine",
        names=("x", "y"),
        equations=("y - x^3",),
        dim=1,
        degree=3,
    )
    rep = dim_estimate(inst, 3, (3, 5, 7))
    assert rep.counts == tuple(q ** math.ceil(3 / 3) for q in (3, 5, 7))
    assert rep.fit["dim"] == 1
    assert rep.fit["stable"]
    assert rep.fit["exact_exponent"] == 1
    assert rep.conforms is True
    assert rep.bound == 3


def test_dim_estimate_needs_three_primes():
    inst = InstanceSpec("x", "affine", ("x", "y"), ("y - x^2",), dim=1)
    with pytest.raises(ValueError):
        dim_estimate(inst, 2, (3, 5))


def test_dim_estimate_json_schema():
    inst = InstanceSpec("parabola", "affine", ("x", "y"), ("y - x^2",), dim=1)
    rep = dim_estimate(inst, 2, (3, 5, 7))
    js = rep.to_json()
    for key in ("instance", "b", "qs", "counts", "dim", "stable", "conforms", "runs"):
        assert key in js
    assert js["runs"][0]["q"] == 3


def test_sz_recursion_check_curve():
    inst = InstanceSpec("parabola", "affine", ("x", "y"), ("y - x^2",), dim=1)
    out = sz_recursion_check(inst, 2, (3, 5, 7))
    # fibers over x are single points, dimension 0
    assert out["fiber_dim"] == 0
    assert out["conforms"] is True


def test_count_result_json():
    X = variety_from_strs("affine", ["x", "y"], ["y - x^2"], 3)
    res = count_points(X, 2)
    js = res.to_json()
    assert js["q"] == 3 and js["b"] == 2
    assert js["count"] == res.count
    assert "visits" in js and "seconds" in js


def test_empty_variety():
    X = variety_from_strs("affine", ["x"], ["x^2 + 1"], 3)  # no roots mod 3
    assert count_points(X, 1).count == 0


def test_full_space():
    # no equations: all of A^2(b)
    X = variety_from_strs("affine", ["x", "y"], [], 3)
    assert count_points(X, 2).count == 3**4


def test_random_systems_match_brute_force():
    """The staged solver agrees with raw enumeration on small systems."""
    rng = random.Random(22)
    mono = ["x", "y", "x*y", "x^2", "y^2", "1", "t*x", "t*y"]
    checked = 0
    while checked < 25:
        q = rng.choice((3, 5))
        k = rng.randrange(1, 3)
        eqs = []
        for _ in range(k):
            terms = rng.sample(mono, rng.randrange(1, 4))
            coeffs = [rng.randrange(1, q) for _ in terms]
            eqs.append(" + ".join(f"{c}*{m}" for c, m in zip(coeffs, terms)))
        X = variety_from_strs("affine", ["x", "y"], eqs, q)
        b = rng.randrange(1, 3)
        got = count_points(X, b).count
        want = brute_affine_count(X, b)
        assert got == want, (q, b, eqs, got, want)
        checked += 1
