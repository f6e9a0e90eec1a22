"""Rational points of the torus and fixed-point lattices of toral maps."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapExceeded, NotHyperbolicPower
from .sl2z import IntMatrix2, mat_pow

__all__ = ["TorusPointQ", "parse_point", "fixed_numerators", "fixed_point_lattice"]

#: refuse to materialise more points than this in one lattice
MAX_LATTICE_POINTS = 20_000_000


@dataclass(frozen=True, order=True)
class TorusPointQ:
    """A point of R^2/Z^2 with exact coordinates reduced into [0, 1)."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x) % 1)
        object.__setattr__(self, "y", Fraction(self.y) % 1)

    def __str__(self) -> str:
        return f"{self.x},{self.y}"

    def image(self, m: IntMatrix2) -> TorusPointQ:
        return TorusPointQ(*m.apply(self.x, self.y))


_POINT_RE = re.compile(r"^\s*([+-]?\d+(?:/\d+)?)\s*,\s*([+-]?\d+(?:/\d+)?)\s*$")


def parse_point(text: str) -> TorusPointQ:
    """Parse ``"p/q,r/s"``.

    >>> parse_point("1/3, 5/3")
    TorusPointQ(x=Fraction(1, 3), y=Fraction(2, 3))
    """
    m = _POINT_RE.match(text)
    if m is None:
        raise ValueError(f"cannot parse torus point {text!r}")
    return TorusPointQ(Fraction(m.group(1)), Fraction(m.group(2)))


def _ext_gcd(p: int, r: int) -> tuple[int, int, int]:
    # returns (g, u, v) with u*p + v*r = g >= 0
    u0, v0, u1, v1 = 1, 0, 0, 1
    while r:
        k = p // r
        p, r = r, p - k * r
        u0, u1 = u1, u0 - k * u1
        v0, v1 = v1, v0 - k * v1
    if p < 0:
        p, u0, v0 = -p, -u0, -v0
    return p, u0, v0


def _int_dtype(bound: int):
    return np.int64 if bound < 2**62 else object


def fixed_numerators(m: IntMatrix2, n: int = 1):
    """Fixed points of ``m^n`` as integer numerators over a common denominator.

    Returns ``(den, xs, ys)`` where the fixed points are ``(xs/den, ys/den)``.
    The solutions of ``(m^n - I) x in Z^2`` form the lattice
    ``den^-1 adj(m^n - I) Z^2``; its column Hermite form gives an explicit
    transversal of the quotient by ``Z^2``.
    """
    p = mat_pow(m, n)
    ba, bb, bc, bd = p.a - 1, p.b, p.c, p.d - 1
    den = abs(ba * bd - bb * bc)
    if den == 0:
        raise NotHyperbolicPower(f"{m}^{n} fixes a line")
    if den > MAX_LATTICE_POINTS:
        raise CapExceeded(f"{den} fixed points exceed the lattice cap")
    # columns of adj(B)
    c1 = (bd, -bc)
    c2 = (-bb, ba)
    g, u, v = _ext_gcd(c1[0], c2[0])
    h11 = g
    h21 = u * c1[1] + v * c2[1]
    h22 = abs((c1[0] * c2[1] - c2[0] * c1[1]) // g)
    assert h11 * h22 == den
    h21 %= den
    dtype = _int_dtype(4 * den * den)
    i = np.arange(h22, dtype=dtype)
    j = np.arange(h11, dtype=dtype)
    xs = np.repeat(i * h11, h11)
    ys = (np.repeat(i * h21 % den, h11) + np.tile(j * h22, h22)) % den
    return den, xs, ys


def fixed_point_lattice(m: IntMatrix2, n: int = 1) -> frozenset[TorusPointQ]:
    """All fixed points of ``m^n`` on the torus."""
    den, xs, ys = fixed_numerators(m, n)
    return frozenset(
        TorusPointQ(Fraction(int(x), den), Fraction(int(y), den)) for x, y in zip(xs, ys)
    )
