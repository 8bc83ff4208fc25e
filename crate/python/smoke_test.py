"""Smoke test for the `ctop` extension.

Build and install first:  pip install --no-build-isolation -e crates/py
Run with:                 python -m pytest python/  (or python python/smoke_test.py)
"""

from fractions import Fraction

import ctop


def cantor(a, b):
    return (a + b) * (a + b + 1) // 2 + b


def test_pairing_matches_formula():
    for a, b in [(0, 0), (1, 2), (2, 1), (10**40, 3)]:
        n = ctop.pair(a, b)
        assert n == cantor(a, b)
        assert ctop.unpair(n) == (a, b)


def test_membership_and_inclusion():
    s = ctop.Session("rationals")
    assert s.space == "rationals"
    assert s.member("basic:0;1", "1/2")
    assert not s.member("basic:0;1", "1", fuel=10_000)
    assert s.formal_inclusion("(0;1)", "(0;2)")
    assert not s.formal_inclusion("(0;2)", "(0;1)")


def test_theta_is_exact():
    s = ctop.Session("rationals")
    # x = 1/4 in B(0,1) and B(1/2,1): min(1 - 1/4, 1 - 1/4)
    assert s.theta("1/4", "(0;1)", "(1/2;1)") == "3/4"


def test_lacombe_cover_lies_inside():
    s = ctop.Session("rationals")
    balls = s.spreen_to_lacombe("interval:0,1", count=15)
    assert len(balls) == 15
    for c, r in balls:
        c, r = Fraction(c), Fraction(r)
        assert 0 < r <= c and c + r <= 1


def test_modulus_check():
    s = ctop.Session("rationals")
    good = s.modulus_check("double", "half-eps", samples=50, seed=3)
    assert good["violations"] == [] and good["ok"] > 40
    bad = s.modulus_check("square", "eps", samples=50, seed=3)
    assert bad["violations"]
    for x, y, eps in bad["violations"]:
        x, y, eps = Fraction(x), Fraction(y), Fraction(eps)
        assert abs(x - y) < eps <= abs(x * x - y * y)


def test_errors_surface_as_value_error():
    s = ctop.Session("rationals")
    try:
        s.point("1//2")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed literal accepted")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print("ok", name)
